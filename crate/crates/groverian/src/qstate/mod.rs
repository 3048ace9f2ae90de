//! Multi-qubit state containers and the dense linear algebra they need.
//!
//! Qubit 1 is the most significant bit of a basis index, so for an n-qubit
//! register the basis state |b1 b2 .. bn> lives at index b1*2^(n-1) + .. + bn.
//! Tensor products follow the same convention: the left factor occupies the
//! leading (high-order) qubits.

pub mod random;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Allowed deviation of a pure-state norm from 1.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed Hermiticity violation, in Frobenius norm.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Allowed Frobenius residual of U U^dag - I for unitary matrices.
pub const UNITARY_TOL: f64 = 1e-9;
/// Eigenvalues in [-SQRT_CLIP, 0) are treated as 0 by `psd_sqrt`; anything
/// more negative is rejected as genuinely non-positive.
pub const SQRT_CLIP: f64 = 1e-8;

/// Normalized pure state of `num_qubits` qubits, amplitudes in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes, checking length and normalization.
    pub fn new(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || amps.len() != 1usize << num_qubits {
            return Err(Error::BadStateLength {
                len: amps.len(),
                n: num_qubits,
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Internal constructor for amplitudes already known to be normalized.
    pub(crate) fn from_normalized(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << num_qubits);
        debug_assert!({
            let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            (n - 1.0).abs() < 1e-8
        });
        Self { num_qubits, amps }
    }

    /// Computational basis state |index>.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(num_qubits as u32)
            .filter(|_| num_qubits >= 1)
            .ok_or(Error::BadStateLength { len: 0, n: num_qubits })?;
        if index >= dim {
            return Err(Error::BadParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// <self|other>, conjugate-linear in `self`.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        overlap(self, other)
    }

    /// Tensor product with `other`; `self` takes the leading qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        tensor_product(self, other)
    }

    /// Applies a 2x2 unitary to one qubit (1-based, qubit 1 = most significant).
    pub fn apply_single_qubit(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<PureState> {
        if qubit == 0 || qubit > self.num_qubits {
            return Err(Error::BadParameter(format!(
                "qubit {qubit} out of range 1..={}",
                self.num_qubits
            )));
        }
        let bit = self.num_qubits - qubit;
        let stride = 1usize << bit;
        let mut amps = self.amps.clone();
        for base in 0..self.dim() {
            if base & stride == 0 {
                let a0 = amps[base];
                let a1 = amps[base | stride];
                amps[base] = u[0][0] * a0 + u[0][1] * a1;
                amps[base | stride] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(PureState::from_normalized(self.num_qubits, amps))
    }

    /// Applies a full-register unitary.
    pub fn apply_unitary(&self, u: &UnitaryMatrix) -> Result<PureState> {
        if u.dim() != self.dim() {
            return Err(Error::BadMatrixShape {
                rows: u.dim(),
                cols: u.dim(),
                dim: self.dim(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        let out = u.matrix() * v;
        Ok(PureState::from_normalized(
            self.num_qubits,
            out.as_slice().to_vec(),
        ))
    }

    /// True when the states agree up to a global phase, comparing amplitudes
    /// after aligning the phase of the largest component.
    pub fn approx_eq_phase(&self, other: &PureState, tol: f64) -> bool {
        if self.num_qubits != other.num_qubits {
            return false;
        }
        let k = (0..self.dim())
            .max_by(|&i, &j| {
                self.amps[i]
                    .norm_sqr()
                    .total_cmp(&self.amps[j].norm_sqr())
            })
            .unwrap();
        let (a, b) = (self.amps[k], other.amps[k]);
        if b.norm() < 1e-300 {
            return false;
        }
        let phase = (a / b) / (a / b).norm();
        self.amps
            .iter()
            .zip(other.amps.iter())
            .all(|(x, y)| (x - y * phase).norm() <= tol)
    }
}

/// Validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Builds a density matrix, checking shape, Hermiticity, positivity and trace.
    pub fn new(num_qubits: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if num_qubits == 0 || mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::BadMatrixShape {
                rows: mat.nrows(),
                cols: mat.ncols(),
                dim,
            });
        }
        let asym = (&mat - mat.adjoint()).norm();
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: asym });
        }
        let trace_dev = (mat.trace().re - 1.0).abs().max(mat.trace().im.abs());
        if trace_dev > TRACE_TOL {
            return Err(Error::TraceNotOne { deviation: trace_dev });
        }
        let (eigs, _) = eigh(&mat);
        let min_eigenvalue = eigs.first().copied().unwrap_or(0.0);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { num_qubits, mat })
    }

    /// The maximally mixed state I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let mat = DMatrix::from_diagonal_element(
            dim,
            dim,
            Complex64::new(1.0 / dim as f64, 0.0),
        );
        Self::new(num_qubits, mat)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Tr(rho^2), equal to 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.mat).0
    }
}

/// Unitary matrix over a power-of-two dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    mat: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Wraps a matrix after checking squareness, power-of-two dimension and
    /// `||U U^dag - I||_F <= 1e-9`.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        let dim = mat.nrows();
        if mat.ncols() != dim || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::BadMatrixShape {
                rows: mat.nrows(),
                cols: mat.ncols(),
                dim,
            });
        }
        let residual = (&mat * mat.adjoint() - DMatrix::<Complex64>::identity(dim, dim)).norm();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self {
            mat: self.mat.adjoint(),
        }
    }
}

/// Contiguous qubit block selector; `Leading(k)` means qubits 1..=k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitBlock {
    Leading(usize),
    Trailing(usize),
}

/// Tensor product of two pure states; `a` occupies the leading qubits.
pub fn tensor_product(a: &PureState, b: &PureState) -> PureState {
    let dim_b = b.dim();
    let mut amps = Vec::with_capacity(a.dim() * dim_b);
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    PureState::from_normalized(a.num_qubits + b.num_qubits, amps)
}

/// <a|b> with the conjugate on `a`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.num_qubits != b.num_qubits {
        return Err(Error::QubitMismatch {
            left: a.num_qubits,
            right: b.num_qubits,
        });
    }
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// The projector |psi><psi| as a density matrix.
pub fn density_of(psi: &PureState) -> DensityMatrix {
    let d = psi.dim();
    let mat = DMatrix::from_fn(d, d, |i, j| psi.amps[i] * psi.amps[j].conj());
    DensityMatrix {
        num_qubits: psi.num_qubits,
        mat,
    }
}

/// Traces out the complement of the selected qubit block.
pub fn partial_trace(rho: &DensityMatrix, keep: QubitBlock) -> Result<DensityMatrix> {
    let n = rho.num_qubits;
    let kept = match keep {
        QubitBlock::Leading(k) | QubitBlock::Trailing(k) => k,
    };
    if kept == 0 || kept > n {
        return Err(Error::BadSubsystem(format!(
            "cannot keep {kept} of {n} qubits"
        )));
    }
    let dim_keep = 1usize << kept;
    let dim_out = 1usize << (n - kept);
    let m = &rho.mat;
    let mat = match keep {
        QubitBlock::Leading(_) => DMatrix::from_fn(dim_keep, dim_keep, |r, rp| {
            (0..dim_out)
                .map(|q| m[(r * dim_out + q, rp * dim_out + q)])
                .sum()
        }),
        QubitBlock::Trailing(_) => DMatrix::from_fn(dim_keep, dim_keep, |q, qp| {
            (0..dim_out)
                .map(|r| m[(r * dim_keep + q, r * dim_keep + qp)])
                .sum()
        }),
    };
    Ok(DensityMatrix {
        num_qubits: kept,
        mat,
    })
}

/// Hermitian eigendecomposition with eigenvalues ascending.
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub(crate) fn eigh(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    // Symmetrize first; callers only pass matrices that are Hermitian up to
    // rounding, and SymmetricEigen assumes exact Hermiticity.
    let h = (m + m.adjoint()).scale(0.5);
    let se = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigs: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| se.eigenvectors[(r, order[c])]);
    (eigs, vecs)
}

/// Hermitian PSD square root of a raw matrix.
///
/// Eigenvalues in [-1e-8, 0) are clipped to 0; anything more negative is an
/// error. The result R is Hermitian PSD with R R = m up to rounding.
pub fn psd_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let asym = (m - m.adjoint()).norm();
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: asym });
    }
    let (eigs, vecs) = eigh(m);
    let mut roots = Vec::with_capacity(eigs.len());
    for &e in &eigs {
        if e < -SQRT_CLIP {
            return Err(Error::NotPositive { min_eigenvalue: e });
        }
        roots.push(Complex64::new(e.max(0.0).sqrt(), 0.0));
    }
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(roots));
    Ok(&vecs * d * vecs.adjoint())
}

/// Square root of a density matrix via diagonalization.
pub fn matrix_sqrt(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    psd_sqrt(&rho.mat)
}

/// Trace norm: the sum of singular values.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Uhlmann fidelity F(rho, sigma) = (Tr |sqrt(rho) sqrt(sigma)|)^2.
///
/// Squared-overlap convention: for pure states it reduces to |<psi|phi>|^2.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits != sigma.num_qubits {
        return Err(Error::QubitMismatch {
            left: rho.num_qubits,
            right: sigma.num_qubits,
        });
    }
    let product = matrix_sqrt(rho)? * matrix_sqrt(sigma)?;
    let f = trace_norm(&product).powi(2);
    debug_assert!(f <= 1.0 + 1e-9, "fidelity overshoot: {f}");
    Ok(f.clamp(0.0, 1.0))
}
