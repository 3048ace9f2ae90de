//! G never grows under local operations.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example locc_monotonicity
//! ```
//!
//! Applies random product Kraus channels (local noise on every qubit) to
//! random two-qubit density matrices and prints G before and after. A
//! proper entanglement measure cannot increase under such channels; the
//! printed differences stay nonnegative up to optimizer tolerance.

use groverian::mixed_measure::{apply_channel, groverian_mixed, random_kraus_set, MixedConfig};
use groverian::qstate::random::{random_density, rng_for};

fn main() -> groverian::Result<()> {
    let config = MixedConfig::default();
    println!("G(rho)        G(channel(rho))   drop");
    for trial in 0..6 {
        let mut rng = rng_for(31, trial);
        let rho = random_density(2, &mut rng);
        let kraus = random_kraus_set(2, 2, 1000 + trial)?;
        let after = apply_channel(&rho, &kraus)?;

        let before = groverian_mixed(&rho, &config)?;
        let post = groverian_mixed(&after, &config)?;
        println!(
            "{:.9}   {:.9}       {:+.3e}",
            before.g,
            post.g,
            before.g - post.g
        );
    }
    Ok(())
}
