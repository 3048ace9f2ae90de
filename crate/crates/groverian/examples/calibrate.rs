//! Measures the search-error constants that `groverian::calibration` freezes.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example calibrate
//! ```
//!
//! The frozen constants in the library are twice the worst value this
//! program observes, rounded up, so test bounds hold with margin across
//! platforms without becoming vacuous.

use groverian::calibration::{
    measure_inversion_error, measure_success_deviation, measure_success_deviation_aligned,
};

fn main() {
    let mut worst_inversion: f64 = 0.0;
    let mut worst_deviation: f64 = 0.0;
    println!("register  inversion  haar-deviation  aligned-deviation");
    for n in [6usize, 8, 10] {
        let inversion = measure_inversion_error(n).unwrap();
        let haar = measure_success_deviation(n, 1000, 2024).unwrap();
        let aligned = measure_success_deviation_aligned(n, 200, 2024).unwrap();
        println!("n={n:<2}       {inversion:<10.6} {haar:<15.6} {aligned:<15.6}");
        worst_inversion = worst_inversion.max(inversion);
        worst_deviation = worst_deviation.max(haar).max(aligned);
    }
    println!();
    println!(
        "INVERSION_ERROR   >= {:.6}  (freeze 2x: {:.3})",
        worst_inversion,
        2.0 * worst_inversion
    );
    println!(
        "SUCCESS_DEVIATION >= {:.6}  (freeze 2x: {:.3})",
        worst_deviation,
        2.0 * worst_deviation
    );
}
