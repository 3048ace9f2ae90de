//! How entanglement evolves inside the search itself.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example entanglement_tracking
//! ```
//!
//! Starting from the (product) uniform superposition, the Grover iterate
//! builds up entanglement on the way to the marked state and sheds it again
//! as the state converges onto a basis state, which is itself a product
//! state. G is computed after every iteration up to twice the optimal count
//! so the revival on the way back out is visible too.

use groverian::circuits::track_groverian;
use groverian::grover::{optimal_iterations, uniform_state};

fn main() -> groverian::Result<()> {
    let n = 6;
    let marked = 23;
    let optimal = optimal_iterations(n, 1)?;
    let records = track_groverian(n, marked, &uniform_state(n)?, 2 * optimal)?;

    println!("n = {n}, marked = {marked}, optimal t = {optimal}");
    println!("t     success       G");
    for r in &records {
        let tag = if r.iteration == optimal { "  <- optimal" } else { "" };
        println!(
            "{:<4}  {:.9}   {:.9}{tag}",
            r.iteration, r.success_probability, r.groverian
        );
    }

    let peak = records
        .iter()
        .max_by(|a, b| a.groverian.total_cmp(&b.groverian))
        .expect("at least one record");
    println!();
    println!(
        "peak G = {:.6} at t = {} (success there = {:.6})",
        peak.groverian, peak.iteration, peak.success_probability
    );
    Ok(())
}
