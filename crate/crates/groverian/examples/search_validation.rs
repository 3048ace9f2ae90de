//! Operational meaning of the measure: search success equals 1 - G^2.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example search_validation
//! ```
//!
//! For pure states: the best local pre-processing turns |psi> into the
//! state closest to the uniform superposition, and a full Grover run from
//! there succeeds with probability P_max + O(1/N).
//!
//! For mixed states: the register is purified, the ancilla unitary is
//! chosen by Uhlmann alignment against the closest separable state, and
//! the doubled-register search succeeds with the maximal fidelity, again
//! up to O(1/N).

use groverian::circuits::{aligned_search_success, purified_search_optimal};
use groverian::grover::Oracle;
use groverian::mixed_measure::{werner_state, MixedConfig};
use groverian::pure_measure::{p_max_pure, PureConfig};
use groverian::qstate::random::{haar_state, rng_for};

fn main() -> groverian::Result<()> {
    println!("pure states (n = 6, N = 64):");
    println!("  P_max         simulated     |difference|");
    let mut rng = rng_for(11, 0);
    let oracle = Oracle::single(6, 0)?;
    for _ in 0..5 {
        let psi = haar_state(6, &mut rng);
        let r = p_max_pure(&psi, &PureConfig::default())?;
        let success = aligned_search_success(&psi, &r.best, &oracle)?;
        println!(
            "  {:.9}   {:.9}   {:.2e}",
            r.p_max,
            success,
            (success - r.p_max).abs()
        );
    }

    println!();
    println!("Werner states through the purified search (2n = 4 qubits):");
    println!("  p     1 - G^2       simulated     |difference|");
    let config = MixedConfig::default();
    for p in [0.0, 0.4, 0.8, 1.0] {
        let rho = werner_state(p)?;
        let outcome = purified_search_optimal(&rho, &config)?;
        println!(
            "  {p:<4}  {:.9}   {:.9}   {:.2e}",
            outcome.overlap_sq,
            outcome.success,
            (outcome.success - outcome.overlap_sq).abs()
        );
    }
    Ok(())
}
