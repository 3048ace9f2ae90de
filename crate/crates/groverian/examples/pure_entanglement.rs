//! The Groverian measure for benchmark pure states.
//!
//! Run with:
//!
//! ```text
//! cargo run --release -p groverian --example pure_entanglement
//! ```
//!
//! Computes G for product, GHZ and W states. Product states carry no
//! entanglement (G = 0); GHZ states of any width sit at G = 1/sqrt(2);
//! the three-qubit W state reaches P_max = 4/9 on the symmetric product
//! state with qubit amplitudes (sqrt(2/3), sqrt(1/3)).

use groverian::pure_measure::{p_max_pure, PureConfig};
use groverian::qstate::PureState;
use num_complex::Complex64;

fn ghz(n: usize) -> PureState {
    let dim = 1usize << n;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::ZERO; dim];
    amps[0] = Complex64::new(h, 0.0);
    amps[dim - 1] = Complex64::new(h, 0.0);
    PureState::new(n, amps).unwrap()
}

fn w3() -> PureState {
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; 8];
    amps[0b001] = a;
    amps[0b010] = a;
    amps[0b100] = a;
    PureState::new(3, amps).unwrap()
}

fn main() -> groverian::Result<()> {
    let config = PureConfig::default();

    let product = PureState::basis_state(3, 0b101)?;
    let r = p_max_pure(&product, &config)?;
    println!("|101>    : P_max = {:.9}  G = {:.3e}", r.p_max, r.g);

    for n in 2..=5 {
        let r = p_max_pure(&ghz(n), &config)?;
        println!(
            "GHZ_{n}    : P_max = {:.9}  G = {:.9}  (1/sqrt(2) = {:.9})",
            r.p_max,
            r.g,
            std::f64::consts::FRAC_1_SQRT_2
        );
    }

    let r = p_max_pure(&w3(), &config)?;
    println!("W_3      : P_max = {:.9}  (4/9 = {:.9})", r.p_max, 4.0 / 9.0);
    println!("closest product state per qubit (theta, phi):");
    for (k, q) in r.best.angles().iter().enumerate() {
        println!("  qubit {}: ({:+.6}, {:+.6})", k + 1, q.theta, q.phi);
    }
    Ok(())
}
