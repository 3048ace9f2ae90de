//! Purifications and the Uhlmann overlap.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example purification
//! ```
//!
//! Builds the canonical purification of a random two-qubit density matrix,
//! checks that tracing out the ancilla recovers it, then maximizes the
//! overlap between purifications of two different states and compares the
//! result with the Uhlmann fidelity computed directly from the matrices.

use groverian::purify::{canonical_purification, uhlmann_aligned_purification, uhlmann_max_overlap};
use groverian::qstate::random::{random_density, rng_for};
use groverian::qstate::{density_of, fidelity, overlap, partial_trace, QubitBlock};

fn main() -> groverian::Result<()> {
    let mut rng = rng_for(7, 0);
    let rho = random_density(2, &mut rng);
    let sigma = random_density(2, &mut rng);

    let p = canonical_purification(&rho)?;
    let back = partial_trace(&density_of(p.state()), QubitBlock::Trailing(2))?;
    let err = (back.matrix() - rho.matrix()).norm();
    println!("round trip |Tr_R |phi><phi| - rho| = {err:.3e}");

    let f = fidelity(&rho, &sigma)?;
    let max = uhlmann_max_overlap(&rho, &sigma)?;
    println!("fidelity(rho, sigma)        = {f:.12}");
    println!("max purification overlap    = {max:.12}");

    // The aligned purification of sigma attains the maximum against the
    // canonical purification of rho, with a real positive inner product.
    let aligned = uhlmann_aligned_purification(&rho, &sigma)?;
    let ov = overlap(p.state(), aligned.state())?;
    println!("attained |<phi|psi>|^2      = {:.12}", ov.norm_sqr());
    println!("phase of <phi|psi>          = {:+.3e} rad", ov.arg());
    Ok(())
}
