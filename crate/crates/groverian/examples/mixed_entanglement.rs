//! The Groverian measure for mixed states.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example mixed_entanglement
//! ```
//!
//! Sweeps the two-qubit Werner family rho(p) = p |Bell><Bell| + (1-p) I/4.
//! Werner states are separable exactly up to p = 1/3, which the partial
//! transpose confirms independently, so G must vanish on [0, 1/3] and grow
//! monotonically beyond. The optimizer is printed against the PPT verdict
//! point by point.

use groverian::mixed_measure::{groverian_mixed, ppt_check, werner_state, MixedConfig};

fn main() -> groverian::Result<()> {
    let config = MixedConfig::default();
    println!("  p      G            PPT   converged");
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let rho = werner_state(p)?;
        let r = groverian_mixed(&rho, &config)?;
        let ppt = ppt_check(&rho)?;
        println!(
            "  {p:<5.2}  {:<11.4e}  {:<5}  {}",
            r.g, ppt.is_ppt, r.converged
        );
    }
    Ok(())
}
