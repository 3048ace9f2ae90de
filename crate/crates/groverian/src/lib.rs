//! Groverian entanglement measure for pure and mixed multi-qubit states.
//!
//! The Groverian measure G quantifies entanglement operationally: it asks how
//! well a state serves as the input to Grover's search algorithm once it may
//! be pre-processed by local unitaries. For a pure state |psi> the measure is
//! G = sqrt(1 - P_max), where P_max is the largest squared overlap between
//! |psi> and any tensor product of single-qubit states. For a mixed state rho
//! the product-state overlap is replaced by the Uhlmann fidelity with the
//! closest separable state.
//!
//! The crate provides:
//!
//! - [`qstate`]: state containers, partial trace, matrix square root, trace
//!   norm and fidelity,
//! - [`grover`]: a dense Grover-search simulator,
//! - [`pure_measure`]: P_max and G for pure states via alternating
//!   closed-form coordinate ascent, plus an exhaustive grid reference,
//! - [`mixed_measure`]: G for mixed states, separable ensembles, product
//!   Kraus channels, Werner states and a two-qubit PPT check,
//! - [`purify`]: purifications, the Hadamard basis, and closed-form Uhlmann
//!   overlap maximization,
//! - [`circuits`]: end-to-end circuit runs that validate the measure against
//!   simulated search success probabilities,
//! - [`io`]: state files and CSV output,
//! - [`cli`]: the command-line front end.
//!
//! # Example
//!
//! ```
//! use groverian::pure_measure::{p_max_pure, PureConfig};
//! use groverian::qstate::PureState;
//! use num_complex::Complex64;
//!
//! // G(|Bell>) = sqrt(1 - 1/2) = 1/sqrt(2).
//! let h = std::f64::consts::FRAC_1_SQRT_2;
//! let bell = PureState::new(2, vec![
//!     Complex64::new(h, 0.0),
//!     Complex64::ZERO,
//!     Complex64::ZERO,
//!     Complex64::new(h, 0.0),
//! ]).unwrap();
//! let result = p_max_pure(&bell, &PureConfig::default()).unwrap();
//! assert!((result.p_max - 0.5).abs() < 1e-9);
//! assert!((result.g - h).abs() < 1e-9);
//! ```

pub mod calibration;
pub mod circuits;
pub mod cli;
pub mod error;
pub mod grover;
pub mod io;
pub mod mixed_measure;
pub mod pure_measure;
pub mod purify;
pub mod qstate;

pub use error::{Error, Result};
