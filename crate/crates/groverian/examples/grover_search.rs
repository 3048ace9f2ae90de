//! Grover search from the uniform superposition.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example grover_search
//! ```
//!
//! Simulates the search on 10 qubits for a single marked element, printing
//! the success probability after each of the first few iterations and at the
//! optimal stopping point, then repeats with four marked elements to show
//! the multi-target behavior.

use groverian::grover::{
    diffusion_apply, grover_run, optimal_iterations, oracle_apply, uniform_state, Oracle,
};

fn main() -> groverian::Result<()> {
    let n = 10;
    let marked = 0b0110_1001_11;
    let oracle = Oracle::single(n, marked)?;
    let optimal = optimal_iterations(n, 1)?;

    println!("single marked element, n = {n} (N = {}):", 1 << n);
    let mut state = uniform_state(n)?;
    for t in 0..=6 {
        println!("  t = {t}: success = {:.6}", oracle.success_probability(&state));
        state = diffusion_apply(&oracle_apply(&state, &oracle)?);
    }
    let run = grover_run(&uniform_state(n)?, &oracle, optimal)?;
    println!("  optimal t = {}: success = {:.9}", run.iterations, run.success);

    let marked = vec![3, 170, 512, 1021];
    let oracle = Oracle::new(n, marked.clone())?;
    let optimal = optimal_iterations(n, oracle.num_marked())?;
    let run = grover_run(&uniform_state(n)?, &oracle, optimal)?;
    println!();
    println!("marked {marked:?}:");
    println!("  optimal t = {}: success = {:.9}", run.iterations, run.success);
    Ok(())
}
