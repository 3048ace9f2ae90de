//! Operational validation circuits.
//!
//! The measure has an operational reading: P_max is the best success
//! probability Grover's algorithm can reach on |psi> after local pre-
//! processing. This module builds that pre-processing (one unitary per
//! qubit rotating the optimal product factor onto |+>), runs the actual
//! search, and compares measured success against the optimizer's value.
//! It also tracks G along the Grover iteration itself, where highly
//! entangled intermediate states appear.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grover::{grover_run, optimal_iterations, Oracle};
use crate::mixed_measure::{
    ensemble_to_density, max_fidelity_separable, MixedConfig, SeparableEnsemble,
};
use crate::pure_measure::{p_max_pure, ProductStateParams, PureConfig};
use crate::purify::{
    build_u_phi, canonical_purification, ensemble_purification, uhlmann_aligned_purification,
};
use crate::qstate::{DensityMatrix, PureState};

/// One step of a tracked Grover run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackRecord {
    pub iteration: usize,
    pub success_probability: f64,
    /// G of the state after `iteration` Grover steps.
    pub groverian: f64,
}

/// Applies to each qubit the unitary sending |e_k(params)> to |+>.
///
/// U_k = |+><e_k| + |-><e_k_perp|, so the product state described by
/// `params` maps exactly to the uniform state and the magnitude of
/// <eta|U psi> equals |<product(params)|psi>|.
pub fn align_to_uniform(psi: &PureState, params: &ProductStateParams) -> Result<PureState> {
    if psi.num_qubits() != params.num_qubits() {
        return Err(Error::QubitMismatch {
            left: psi.num_qubits(),
            right: params.num_qubits(),
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = psi.clone();
    for (k0, a) in params.angles().iter().enumerate() {
        let e = a.amplitudes();
        let perp = [
            -Complex64::from_polar((0.5 * a.theta).sin(), -a.phi),
            Complex64::new((0.5 * a.theta).cos(), 0.0),
        ];
        let u = [
            [h * (e[0].conj() + perp[0].conj()), h * (e[1].conj() + perp[1].conj())],
            [h * (e[0].conj() - perp[0].conj()), h * (e[1].conj() - perp[1].conj())],
        ];
        out = out.apply_single_qubit(k0 + 1, &u)?;
    }
    Ok(out)
}

/// Success probability of the full pre-processed search: rotate `psi` so
/// the product state of `params` aligns with the uniform state, run Grover
/// at the optimal iteration count, and measure.
///
/// When `params` maximizes the product overlap, the result reproduces
/// P_max up to the O(1/N) deviation of the search itself.
pub fn aligned_search_success(
    psi: &PureState,
    params: &ProductStateParams,
    oracle: &Oracle,
) -> Result<f64> {
    if psi.num_qubits() != oracle.num_qubits() {
        return Err(Error::QubitMismatch {
            left: psi.num_qubits(),
            right: oracle.num_qubits(),
        });
    }
    let aligned = align_to_uniform(psi, params)?;
    let iterations = optimal_iterations(psi.num_qubits(), oracle.num_marked())?;
    let run = grover_run(&aligned, oracle, iterations)?;
    Ok(run.success)
}

/// Outcome of one purified search run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurifiedSearchOutcome {
    /// Measured success probability of the simulated search.
    pub success: f64,
    /// |<phi|psi>|^2 for the purification pair the run used; the search
    /// reproduces this up to the calibrated O(1/N) deviation.
    pub overlap_sq: f64,
}

/// Largest system register for purified search runs (2n simulated qubits).
pub const MAX_PURIFIED_QUBITS: usize = 4;

fn run_purified(phi: &PureState, psi: &PureState, marked: usize) -> Result<PurifiedSearchOutcome> {
    let k = psi.num_qubits();
    let overlap_sq = phi.overlap(psi)?.norm_sqr();
    let u = build_u_phi(phi)?;
    let input = psi.apply_unitary(&u)?;
    let oracle = Oracle::single(k, marked)?;
    let iterations = optimal_iterations(k, 1)?;
    let run = grover_run(&input, &oracle, iterations)?;
    Ok(PurifiedSearchOutcome {
        success: run.success,
        overlap_sq,
    })
}

/// Simulates the purified search once: `rho` is purified canonically into
/// psi, the ensemble into phi, and the basis-change unitary built from phi
/// is applied to psi before a standard search for `marked` over all 2n
/// qubits.
///
/// The success probability tracks |<phi|psi>|^2, not the fidelity: one run
/// uses one purification pair, and these need not be aligned. Maximizing
/// over the pair is `purified_search_optimal`'s job.
pub fn purified_search_run(
    rho: &DensityMatrix,
    e: &SeparableEnsemble,
    marked: usize,
) -> Result<PurifiedSearchOutcome> {
    let n = rho.num_qubits();
    if e.num_qubits() != n {
        return Err(Error::QubitMismatch {
            left: n,
            right: e.num_qubits(),
        });
    }
    if n > MAX_PURIFIED_QUBITS {
        return Err(Error::QubitRange {
            n,
            min: 1,
            max: MAX_PURIFIED_QUBITS,
        });
    }
    let psi = canonical_purification(rho)?;
    let phi = ensemble_purification(e)?;
    run_purified(phi.state(), psi.state(), marked)
}

/// The operational form of the mixed measure: finds the best separable
/// ensemble, aligns its purification with the canonical purification of
/// `rho` in closed form, and confirms the resulting maximal overlap by one
/// simulated search run.
///
/// `overlap_sq` of the result is the maximal success probability the
/// purified search can reach; sqrt(1 - overlap_sq) reproduces the mixed
/// Groverian measure, and `success` is the simulated confirmation.
pub fn purified_search_optimal(
    rho: &DensityMatrix,
    config: &MixedConfig,
) -> Result<PurifiedSearchOutcome> {
    let n = rho.num_qubits();
    if n > 3 {
        return Err(Error::QubitRange { n, min: 1, max: 3 });
    }
    let (_, ensemble) = max_fidelity_separable(rho, config)?;
    let sigma = ensemble_to_density(&ensemble);
    let psi = canonical_purification(rho)?;
    let aligned = uhlmann_aligned_purification(rho, &sigma)?;
    run_purified(aligned.state(), psi.state(), 0)
}

/// Largest register for entanglement tracking; the per-step pure measure
/// is the cost driver.
pub const MAX_TRACK_QUBITS: usize = 8;

/// Runs Grover from `initial` and records success probability and G after
/// every step from 0 through `max_iter`.
pub fn track_groverian(
    n: usize,
    marked: usize,
    initial: &PureState,
    max_iter: usize,
) -> Result<Vec<TrackRecord>> {
    if n == 0 || n > MAX_TRACK_QUBITS {
        return Err(Error::QubitRange {
            n,
            min: 1,
            max: MAX_TRACK_QUBITS,
        });
    }
    if initial.num_qubits() != n {
        return Err(Error::QubitMismatch {
            left: initial.num_qubits(),
            right: n,
        });
    }
    let oracle = Oracle::single(n, marked)?;
    let config = PureConfig::default();
    let mut records = Vec::with_capacity(max_iter + 1);
    let mut state = initial.clone();
    for t in 0..=max_iter {
        if t > 0 {
            state = grover_run(&state, &oracle, 1)?.final_state;
        }
        let success = oracle.success_probability(&state);
        let measure = p_max_pure(&state, &config)?;
        records.push(TrackRecord {
            iteration: t,
            success_probability: success,
            groverian: measure.g,
        });
    }
    Ok(records)
}
