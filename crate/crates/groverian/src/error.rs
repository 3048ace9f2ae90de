//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, linear algebra, optimization and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitRange { n: usize, min: usize, max: usize },

    #[error("vector length {len} is not 2^{n}")]
    BadStateLength { len: usize, n: usize },

    #[error("matrix is {rows}x{cols}, expected {dim}x{dim}")]
    BadMatrixShape { rows: usize, cols: usize, dim: usize },

    #[error("state norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("matrix is not Hermitian (asymmetry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace deviates from 1 by {deviation:.3e}")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid subsystem selector: {0}")]
    BadSubsystem(String),

    #[error("invalid oracle: {0}")]
    BadOracle(String),

    #[error("invalid ensemble: {0}")]
    BadEnsemble(String),

    #[error("invalid Kraus set: {0}")]
    BadKrausSet(String),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("optimizer did not converge: {0}")]
    NotConverged(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    BadStateFile { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
