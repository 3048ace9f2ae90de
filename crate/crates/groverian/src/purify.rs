//! Purification of n-qubit density matrices into 2n-qubit pure states,
//! the Hadamard basis, the basis-change unitary that prepares a given
//! purification from the uniform state, and closed-form Uhlmann overlap
//! maximization.
//!
//! Layout convention throughout: the reference register R occupies the
//! leading n qubits and the system register Q the trailing n, so amplitude
//! index r*2^n + q addresses |r_R>|q_Q>. Tracing out R recovers the system
//! state.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mixed_measure::SeparableEnsemble;
use crate::qstate::{
    density_of, matrix_sqrt, partial_trace, trace_norm, DensityMatrix, PureState, QubitBlock,
    UnitaryMatrix,
};

/// A 2n-qubit pure state together with the n-qubit density matrix it
/// purifies. Tracing the state over the leading (reference) register
/// reproduces `source` within rounding.
#[derive(Debug, Clone)]
pub struct Purification {
    source: DensityMatrix,
    state: PureState,
}

impl Purification {
    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    /// Partial trace of the purifying state over the reference register.
    pub fn reduced_system(&self) -> DensityMatrix {
        let n = self.source.num_qubits();
        partial_trace(&density_of(&self.state), QubitBlock::Trailing(n))
            .expect("purification registers are well formed")
    }
}

/// Purifies `rho` as |phi> = (U_R (x) sqrt(rho) U_Q) sum_i |i_R>|i_Q>.
///
/// The result is automatically unit norm because
/// ||(I (x) A) sum_i |i>|i>||^2 = Tr(A^dag A) = Tr(rho) = 1.
pub fn purify(rho: &DensityMatrix, u_r: &UnitaryMatrix, u_q: &UnitaryMatrix) -> Result<Purification> {
    let dim = rho.dim();
    for u in [u_r, u_q] {
        if u.dim() != dim {
            return Err(Error::BadMatrixShape {
                rows: u.dim(),
                cols: u.dim(),
                dim,
            });
        }
    }
    let a = matrix_sqrt(rho)? * u_q.matrix();
    // amplitude[r*dim + q] = sum_i (U_R)_{ri} (sqrt(rho) U_Q)_{qi}
    let mut amps = vec![Complex64::ZERO; dim * dim];
    for r in 0..dim {
        for q in 0..dim {
            let mut v = Complex64::ZERO;
            for i in 0..dim {
                v += u_r.matrix()[(r, i)] * a[(q, i)];
            }
            amps[r * dim + q] = v;
        }
    }
    let norm = amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in &mut amps {
        *v /= norm;
    }
    let state = PureState::new(2 * rho.num_qubits(), amps)?;
    Ok(Purification {
        source: rho.clone(),
        state,
    })
}

/// The purification with both unitaries fixed to the identity:
/// amplitude[r*d + q] = sqrt(rho)_{qr}.
pub fn canonical_purification(rho: &DensityMatrix) -> Result<Purification> {
    let id = UnitaryMatrix::identity(rho.dim())?;
    purify(rho, &id, &id)
}

/// Purifies a separable ensemble as |phi> = sum_mu sqrt(P_mu) |mu_R> (x)
/// |psi^1_mu ... psi^n_mu>, indexing the terms by reference basis states.
///
/// Requires m <= 2^n so the reference register can index the terms. The
/// reference states are orthonormal, so the partial trace over R is exactly
/// the ensemble's density matrix even though the product terms overlap.
pub fn ensemble_purification(e: &SeparableEnsemble) -> Result<Purification> {
    let n = e.num_qubits();
    let dim = 1usize << n;
    if e.num_terms() > dim {
        return Err(Error::BadEnsemble(format!(
            "{} terms cannot be indexed by an {n}-qubit reference register",
            e.num_terms()
        )));
    }
    let mut amps = vec![Complex64::ZERO; dim * dim];
    for (mu, &w) in e.weights().iter().enumerate() {
        let term = e.term_state(mu);
        let root = w.sqrt();
        for q in 0..dim {
            amps[mu * dim + q] = root * term.amp(q);
        }
    }
    let state = PureState::new(2 * n, amps)?;
    Ok(Purification {
        source: crate::mixed_measure::ensemble_to_density(e),
        state,
    })
}

/// |eta_i> = H^(x)k |i> on `total_qubits` = k qubits: amplitudes
/// (-1)^popcount(i AND j) / sqrt(2^k).
pub fn hadamard_basis_state(i: usize, total_qubits: usize) -> Result<PureState> {
    if total_qubits == 0 || total_qubits > 30 {
        return Err(Error::QubitRange {
            n: total_qubits,
            min: 1,
            max: 30,
        });
    }
    let dim = 1usize << total_qubits;
    if i >= dim {
        return Err(Error::BadParameter(format!(
            "Hadamard basis index {i} out of range for {total_qubits} qubits"
        )));
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let amps = (0..dim)
        .map(|j| {
            let sign = if (i & j).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            Complex64::new(sign * scale, 0.0)
        })
        .collect();
    PureState::new(total_qubits, amps)
}

/// Completes `phi0` to a full orthonormal basis by Gram-Schmidt over the
/// computational basis, skipping candidates that are already spanned
/// (residual norm below 1e-8). The first element is `phi0` itself.
pub fn gram_schmidt_complete(phi0: &PureState) -> Vec<PureState> {
    let n = phi0.num_qubits();
    let dim = phi0.dim();
    let mut basis: Vec<Vec<Complex64>> = vec![phi0.amps().to_vec()];
    let mut candidate = 0usize;
    while basis.len() < dim {
        let mut v = vec![Complex64::ZERO; dim];
        v[candidate] = Complex64::ONE;
        candidate += 1;
        // Two projection passes: a single pass leaves O(eps * kappa)
        // cross-talk when the candidate is nearly spanned.
        for _ in 0..2 {
            for b in &basis {
                let ov: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= ov * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        basis.push(v);
    }
    basis
        .into_iter()
        .map(|amps| PureState::from_normalized(n, amps))
        .collect()
}

/// Builds U_phi with U_phi^dag = sum_i |phi_i><eta_i|, where {phi_i} is the
/// Gram-Schmidt completion of `phi` and {eta_i} the Hadamard basis. Then
/// U_phi^dag maps the uniform state |eta> = |eta_0> to |phi>.
pub fn build_u_phi(phi: &PureState) -> Result<UnitaryMatrix> {
    let dim = phi.dim();
    let completion = gram_schmidt_complete(phi);
    let phi_cols = DMatrix::<Complex64>::from_fn(dim, dim, |r, c| completion[c].amp(r));
    // The normalized Hadamard matrix is real symmetric and involutory, so
    // it equals its own adjoint and U_phi^dag = Phi H.
    let scale = 1.0 / (dim as f64).sqrt();
    let h = DMatrix::<Complex64>::from_fn(dim, dim, |r, c| {
        let sign = if (r & c).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        Complex64::new(sign * scale, 0.0)
    });
    let u_dag = phi_cols * h;
    UnitaryMatrix::new(u_dag.adjoint())
}

/// Cross-overlap matrix over the reference register:
/// C_{r0 r} = sum_q conj(phi[r0 d + q]) psi[r d + q].
fn reference_cross_overlap(phi: &PureState, psi: &PureState, dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r0, r| {
        (0..dim)
            .map(|q| phi.amp(r0 * dim + q).conj() * psi.amp(r * dim + q))
            .sum()
    })
}

/// Maximum squared overlap between purifications of `rho` and `sigma`.
///
/// Fixes the canonical purification psi of `rho`; over all purifications
/// phi of `sigma` the overlap <phi|psi> equals Tr(C W) for a unitary W on
/// the reference register, so its maximum modulus is the trace norm of the
/// cross-overlap matrix C. The squared maximum equals the Uhlmann fidelity
/// F(rho, sigma).
pub fn uhlmann_max_overlap(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::QubitMismatch {
            left: rho.num_qubits(),
            right: sigma.num_qubits(),
        });
    }
    let dim = rho.dim();
    let psi = canonical_purification(rho)?;
    let phi0 = canonical_purification(sigma)?;
    let c = reference_cross_overlap(phi0.state(), psi.state(), dim);
    let t = trace_norm(&c);
    Ok(t * t)
}

/// The purification of `sigma` whose overlap with the canonical
/// purification of `rho` attains the Uhlmann maximum.
///
/// With C = U S V^dag the singular value decomposition of the cross-overlap
/// matrix, the reference-side rotation W = V U^dag turns Tr(C W) into the
/// sum of singular values; the returned state applies the matching unitary
/// to the reference register of the canonical `sigma` purification, so
/// <phi*|psi> is real, nonnegative and equals sqrt(F(rho, sigma)).
pub fn uhlmann_aligned_purification(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<Purification> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::QubitMismatch {
            left: rho.num_qubits(),
            right: sigma.num_qubits(),
        });
    }
    let dim = rho.dim();
    let psi = canonical_purification(rho)?;
    let phi0 = canonical_purification(sigma)?;
    let c = reference_cross_overlap(phi0.state(), psi.state(), dim);
    let svd = c.clone().svd(true, true);
    let u = svd.u.expect("requested");
    let v_t = svd.v_t.expect("requested");
    // W = V U^dag maximizes Re Tr(C W); the amplitude map below applies
    // V_{r, r0} = conj(W_{r0, r}) to the reference index.
    let w = v_t.adjoint() * u.adjoint();
    let mut amps = vec![Complex64::ZERO; dim * dim];
    for r in 0..dim {
        for q in 0..dim {
            let mut acc = Complex64::ZERO;
            for r0 in 0..dim {
                acc += w[(r, r0)].conj() * phi0.state().amp(r0 * dim + q);
            }
            amps[r * dim + q] = acc;
        }
    }
    let state = PureState::new(2 * rho.num_qubits(), amps)?;
    Ok(Purification {
        source: sigma.clone(),
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::random::{haar_state, haar_unitary, random_density, rng_for};
    use crate::grover::uniform_state;
    use crate::qstate::{fidelity, overlap};

    fn frob_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
        (a.matrix() - b.matrix()).norm()
    }

    #[test]
    fn pure_state_purifies_to_itself_with_reference_zero() {
        let rho = density_of(&PureState::basis_state(1, 0).unwrap());
        let id = UnitaryMatrix::identity(2).unwrap();
        let p = purify(&rho, &id, &id).unwrap();
        let expected = PureState::basis_state(2, 0).unwrap();
        assert!(p.state().approx_eq_phase(&expected, 1e-12));
    }

    #[test]
    fn maximally_mixed_purifies_to_maximally_entangled() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        let id = UnitaryMatrix::identity(2).unwrap();
        let p = purify(&rho, &id, &id).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(
            2,
            vec![
                Complex64::new(h, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(h, 0.0),
            ],
        )
        .unwrap();
        assert!(p.state().approx_eq_phase(&bell, 1e-12));
    }

    #[test]
    fn partial_trace_round_trip_with_random_reference_unitary() {
        let mut rng = rng_for(11, 0);
        for _ in 0..20 {
            let rho = random_density(2, &mut rng);
            let u_r = haar_unitary(4, &mut rng);
            let id = UnitaryMatrix::identity(4).unwrap();
            let p = purify(&rho, &u_r, &id).unwrap();
            assert!(frob_distance(&p.reduced_system(), &rho) <= 1e-9);
        }
    }

    // Under this index convention the recovery identity
    // tr_R = sqrt(rho) U_Q U_Q^dag sqrt(rho) = rho holds for every U_Q,
    // not only U_Q = I.
    #[test]
    fn partial_trace_round_trip_with_random_system_unitary() {
        let mut rng = rng_for(12, 0);
        for _ in 0..20 {
            let rho = random_density(2, &mut rng);
            let u_r = haar_unitary(4, &mut rng);
            let u_q = haar_unitary(4, &mut rng);
            let p = purify(&rho, &u_r, &u_q).unwrap();
            assert!(frob_distance(&p.reduced_system(), &rho) <= 1e-9);
        }
    }

    #[test]
    fn purify_rejects_mismatched_unitary() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let small = UnitaryMatrix::identity(2).unwrap();
        let id = UnitaryMatrix::identity(4).unwrap();
        assert!(purify(&rho, &small, &id).is_err());
        assert!(purify(&rho, &id, &small).is_err());
    }

    #[test]
    fn single_term_ensemble_purifies_to_reference_product() {
        let mut rng = rng_for(13, 0);
        let e = SeparableEnsemble::random(2, 1, &mut rng);
        let p = ensemble_purification(&e).unwrap();
        let expected = PureState::basis_state(2, 0).unwrap().tensor(&e.term_state(0));
        assert!(p.state().approx_eq_phase(&expected, 1e-12));
    }

    #[test]
    fn two_term_single_qubit_ensemble_traces_to_maximally_mixed() {
        use crate::pure_measure::{ProductStateParams, QubitAngles};
        let zero = ProductStateParams::new(vec![QubitAngles::from_amplitudes([
            Complex64::ONE,
            Complex64::ZERO,
        ])])
        .unwrap();
        let one = ProductStateParams::new(vec![QubitAngles::from_amplitudes([
            Complex64::ZERO,
            Complex64::ONE,
        ])])
        .unwrap();
        let e = SeparableEnsemble::new(1, vec![0.5, 0.5], vec![zero, one]).unwrap();
        let p = ensemble_purification(&e).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(frob_distance(&p.reduced_system(), &mixed) <= 1e-12);
    }

    #[test]
    fn random_ensemble_round_trip() {
        let mut rng = rng_for(14, 0);
        for _ in 0..10 {
            let e = SeparableEnsemble::random(2, 3, &mut rng);
            let p = ensemble_purification(&e).unwrap();
            assert!(frob_distance(&p.reduced_system(), p.source()) <= 1e-9);
        }
    }

    #[test]
    fn ensemble_with_too_many_terms_is_rejected() {
        let mut rng = rng_for(15, 0);
        let e = SeparableEnsemble::random(2, 5, &mut rng);
        assert!(ensemble_purification(&e).is_err());
    }

    #[test]
    fn hadamard_basis_index_zero_is_uniform() {
        for k in [2usize, 4] {
            let eta0 = hadamard_basis_state(0, k).unwrap();
            assert!(eta0.approx_eq_phase(&uniform_state(k).unwrap(), 1e-12));
        }
    }

    #[test]
    fn hadamard_basis_single_qubit_sign_pattern() {
        let eta1 = hadamard_basis_state(1, 2).unwrap();
        let expected = [0.5, -0.5, 0.5, -0.5];
        for (a, e) in eta1.amps().iter().zip(expected) {
            assert!((a - Complex64::new(e, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn hadamard_basis_is_orthonormal() {
        let k = 4;
        let states: Vec<PureState> = (0..16)
            .map(|i| hadamard_basis_state(i, k).unwrap())
            .collect();
        for i in 0..16 {
            for j in 0..16 {
                let ov = overlap(&states[i], &states[j]).unwrap().norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ov - expected).abs() <= 1e-12, "pair {i},{j}: {ov}");
            }
        }
    }

    #[test]
    fn hadamard_basis_rejects_out_of_range_index() {
        assert!(hadamard_basis_state(4, 2).is_err());
    }

    #[test]
    fn gram_schmidt_keeps_seed_and_is_orthonormal() {
        let mut rng = rng_for(16, 0);
        for phi0 in [
            PureState::basis_state(4, 0).unwrap(),
            uniform_state(4).unwrap(),
            haar_state(4, &mut rng),
        ] {
            let basis = gram_schmidt_complete(&phi0);
            assert_eq!(basis.len(), 16);
            assert!((overlap(&basis[0], &phi0).unwrap().norm() - 1.0).abs() <= 1e-12);
            for i in 0..16 {
                for j in 0..16 {
                    let ov = overlap(&basis[i], &basis[j]).unwrap().norm();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ov - expected).abs() <= 1e-10, "pair {i},{j}: {ov}");
                }
            }
        }
    }

    #[test]
    fn u_phi_fixes_uniform_state_when_phi_is_uniform() {
        let eta = uniform_state(4).unwrap();
        let u = build_u_phi(&eta).unwrap();
        let out = eta.apply_unitary(&u.adjoint()).unwrap();
        assert!(out.approx_eq_phase(&eta, 1e-10));
    }

    #[test]
    fn u_phi_prepares_random_states_from_uniform() {
        let mut rng = rng_for(17, 0);
        for _ in 0..10 {
            let phi = haar_state(4, &mut rng);
            let u = build_u_phi(&phi).unwrap();
            let eta = uniform_state(4).unwrap();
            let out = eta.apply_unitary(&u.adjoint()).unwrap();
            let err: f64 = out
                .amps()
                .iter()
                .zip(phi.amps())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10, "preparation residual {err}");
        }
    }

    #[test]
    fn uhlmann_equals_one_for_identical_states() {
        let mut rng = rng_for(18, 0);
        let rho = random_density(2, &mut rng);
        let f = uhlmann_max_overlap(&rho, &rho).unwrap();
        assert!((f - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn uhlmann_vanishes_for_orthogonal_pure_states() {
        let rho = density_of(&PureState::basis_state(2, 0).unwrap());
        let sigma = density_of(&PureState::basis_state(2, 3).unwrap());
        let f = uhlmann_max_overlap(&rho, &sigma).unwrap();
        assert!(f.abs() <= 1e-12);
    }

    #[test]
    fn uhlmann_matches_fidelity_on_random_pairs() {
        let mut rng = rng_for(19, 0);
        for _ in 0..25 {
            let rho = random_density(2, &mut rng);
            let sigma = random_density(2, &mut rng);
            let f_direct = fidelity(&rho, &sigma).unwrap();
            let f_uhlmann = uhlmann_max_overlap(&rho, &sigma).unwrap();
            assert!(
                (f_direct - f_uhlmann).abs() <= 1e-8,
                "fidelity {f_direct} vs purification maximum {f_uhlmann}"
            );
        }
    }

    #[test]
    fn aligned_purification_attains_the_maximum() {
        let mut rng = rng_for(20, 0);
        for _ in 0..10 {
            let rho = random_density(2, &mut rng);
            let sigma = random_density(2, &mut rng);
            let psi = canonical_purification(&rho).unwrap();
            let aligned = uhlmann_aligned_purification(&rho, &sigma).unwrap();
            assert!(frob_distance(&aligned.reduced_system(), &sigma) <= 1e-9);
            let ov = overlap(aligned.state(), psi.state()).unwrap();
            let f = fidelity(&rho, &sigma).unwrap();
            // Real, nonnegative and equal to sqrt(F).
            assert!(ov.im.abs() <= 1e-9);
            assert!((ov.re - f.sqrt()).abs() <= 1e-8);
        }
    }

    // Reference-side rotations are pure purification freedom: overlaps and
    // system marginals are invariant.
    #[test]
    fn reference_rotations_preserve_overlaps_and_marginals() {
        let mut rng = rng_for(21, 0);
        let rho = random_density(2, &mut rng);
        let sigma = random_density(2, &mut rng);
        let id = UnitaryMatrix::identity(4).unwrap();
        let p1 = purify(&rho, &id, &id).unwrap();
        let p2 = purify(&sigma, &id, &id).unwrap();
        let base = overlap(p1.state(), p2.state()).unwrap().norm();
        for _ in 0..5 {
            let v = haar_unitary(4, &mut rng);
            let q1 = purify(&rho, &v, &id).unwrap();
            let q2 = purify(&sigma, &v, &id).unwrap();
            let rotated = overlap(q1.state(), q2.state()).unwrap().norm();
            assert!((rotated - base).abs() <= 1e-10);
            assert!(frob_distance(&q1.reduced_system(), &rho) <= 1e-10);
        }
    }
}
