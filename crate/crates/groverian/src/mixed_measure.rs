//! Groverian measure for mixed states.
//!
//! For a density matrix rho the measure is G = sqrt(1 - F_max) where F_max
//! maximizes the fidelity F(rho, sigma) over separable sigma. A separable
//! state is parametrized as an ensemble of product states (Caratheodory
//! bounds say 4^n terms always suffice), and the maximization runs as a
//! see-saw on an exact factorized form of the fidelity:
//!
//! With S = sqrt(rho), x_mu the product-state vectors, s_mu = sqrt(P_mu)
//! and B the matrix with rows conj(S x_mu), the trace norm
//! J = ||diag(s) B||_tr satisfies J^2 = F(rho, sigma) exactly (write
//! sigma = A A* with A = [x_mu] diag(s); the trace norm of S A is unitarily
//! invariant in the polar factor of A). One see-saw iteration computes the
//! maximizing partial isometry Y from an SVD, then in closed form the best
//! weights against Y, then improves each product state by alternating
//! single-qubit updates. Every step increases J, so each restart converges
//! monotonically; the result is always a certified lower bound on F_max
//! and therefore an upper bound on G.
//!
//! The module also provides the Werner family, the 2-qubit partial-transpose
//! separability oracle, and product-operator (one-way LOCC) channels used
//! by the monotonicity properties.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pure_measure::{
    contract_qubit, product_state, MeasureResult, ProductStateParams, QubitAngles,
};
use crate::qstate::random::{haar_unitary, rng_for, standard_complex};
use crate::qstate::{fidelity, psd_sqrt, DensityMatrix, PureState};

/// Largest register the separable-fidelity optimizer accepts.
pub const MAX_MIXED_QUBITS: usize = 4;

/// Ensemble cap: 4^n product terms can express any separable state.
pub fn max_terms(num_qubits: usize) -> usize {
    1usize << (2 * num_qubits)
}

fn default_terms(num_qubits: usize) -> usize {
    max_terms(num_qubits).min(32)
}

/// Mixture of product states: sigma = sum_mu P_mu |x_mu><x_mu| with each
/// |x_mu> a tensor product of single-qubit states.
#[derive(Debug, Clone)]
pub struct SeparableEnsemble {
    num_qubits: usize,
    weights: Vec<f64>,
    terms: Vec<ProductStateParams>,
}

impl SeparableEnsemble {
    pub fn new(
        num_qubits: usize,
        weights: Vec<f64>,
        terms: Vec<ProductStateParams>,
    ) -> Result<Self> {
        if terms.is_empty() || weights.len() != terms.len() {
            return Err(Error::BadEnsemble(format!(
                "{} weights for {} terms",
                weights.len(),
                terms.len()
            )));
        }
        if terms.len() > max_terms(num_qubits) {
            return Err(Error::BadEnsemble(format!(
                "{} terms exceed the {}-qubit cap {}",
                terms.len(),
                num_qubits,
                max_terms(num_qubits)
            )));
        }
        for t in &terms {
            if t.num_qubits() != num_qubits {
                return Err(Error::QubitMismatch {
                    left: t.num_qubits(),
                    right: num_qubits,
                });
            }
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::BadEnsemble("negative or NaN weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadEnsemble(format!("weights sum to {total}")));
        }
        Ok(Self {
            num_qubits,
            weights,
            terms,
        })
    }

    /// Random ensemble: squared-normal weights on the simplex, Haar states.
    pub fn random(num_qubits: usize, num_terms: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Self {
        let raw: Vec<f64> = (0..num_terms)
            .map(|_| {
                let g: f64 = rng.sample(StandardNormal);
                g * g
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        let terms = (0..num_terms)
            .map(|_| ProductStateParams::random(num_qubits, rng))
            .collect();
        Self {
            num_qubits,
            weights,
            terms,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn terms(&self) -> &[ProductStateParams] {
        &self.terms
    }

    /// The product state of term `mu`.
    pub fn term_state(&self, mu: usize) -> PureState {
        product_state(&self.terms[mu])
    }
}

/// sigma = sum_mu P_mu |x_mu><x_mu| as a DensityMatrix.
pub fn ensemble_to_density(e: &SeparableEnsemble) -> DensityMatrix {
    let dim = 1usize << e.num_qubits;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for (w, t) in e.weights.iter().zip(&e.terms) {
        let x = product_state(t);
        for r in 0..dim {
            for c in 0..dim {
                mat[(r, c)] += w * x.amp(r) * x.amp(c).conj();
            }
        }
    }
    DensityMatrix::new(e.num_qubits, mat).expect("ensemble density is valid by construction")
}

/// F(rho, ensemble_to_density(e)).
pub fn fidelity_objective(rho: &DensityMatrix, e: &SeparableEnsemble) -> Result<f64> {
    if rho.num_qubits() != e.num_qubits {
        return Err(Error::QubitMismatch {
            left: rho.num_qubits(),
            right: e.num_qubits,
        });
    }
    fidelity(rho, &ensemble_to_density(e))
}

/// Optimizer settings for [`max_fidelity_separable`].
#[derive(Debug, Clone)]
pub struct MixedConfig {
    /// Ensemble size; `None` picks min(4^n, 32).
    pub terms: Option<usize>,
    pub restarts: usize,
    /// Convergence threshold on the trace-norm gain per see-saw iteration.
    pub tol: f64,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for MixedConfig {
    fn default() -> Self {
        Self {
            terms: None,
            restarts: 30,
            tol: 1e-13,
            max_iterations: 600,
            seed: 0,
        }
    }
}

/// J = 1 - 5e-13 counts as converged: J^2 is then 1 within rounding.
const EARLY_STOP_GAP: f64 = 5e-13;

#[derive(Clone)]
struct SeesawState {
    /// sqrt weights, unit 2-norm.
    s: Vec<f64>,
    terms: Vec<ProductStateParams>,
    /// Product-state amplitude vectors, kept in sync with `terms`.
    xs: Vec<Vec<Complex64>>,
}

impl SeesawState {
    fn random(n: usize, m: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Self {
        let raw: Vec<f64> = (0..m)
            .map(|_| {
                let g: f64 = rng.sample(StandardNormal);
                g.abs()
            })
            .collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let s = raw.iter().map(|v| v / norm).collect();
        let terms: Vec<ProductStateParams> =
            (0..m).map(|_| ProductStateParams::random(n, rng)).collect();
        let xs = terms.iter().map(|t| product_state(t).amps().to_vec()).collect();
        Self { s, terms, xs }
    }

    /// B with rows conj(S x_mu).
    fn b_matrix(&self, sqrt_rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let m = self.xs.len();
        let dim = sqrt_rho.nrows();
        let mut b = DMatrix::<Complex64>::zeros(m, dim);
        for (mu, x) in self.xs.iter().enumerate() {
            let sx = sqrt_rho * DVector::from_column_slice(x);
            for i in 0..dim {
                b[(mu, i)] = sx[i].conj();
            }
        }
        b
    }
}

struct MixedRestartOutcome {
    objective: f64, // the trace norm J, not J^2
    ensemble: SeparableEnsemble,
    converged: bool,
}

impl SeesawState {
    fn objective(&self, sqrt_rho: &DMatrix<Complex64>) -> f64 {
        let mut x = self.b_matrix(sqrt_rho);
        for mu in 0..self.s.len() {
            for i in 0..x.ncols() {
                x[(mu, i)] *= self.s[mu];
            }
        }
        gram_trace_norm(&x)
    }

    fn into_ensemble(self, n: usize) -> SeparableEnsemble {
        let weights: Vec<f64> = self.s.iter().map(|v| v * v).collect();
        let total: f64 = weights.iter().sum();
        let weights = weights.iter().map(|w| w / total).collect();
        SeparableEnsemble::new(n, weights, self.terms)
            .expect("see-saw state is a valid ensemble")
    }

    fn from_ensemble(ensemble: &SeparableEnsemble) -> Self {
        let terms: Vec<ProductStateParams> = ensemble.terms().to_vec();
        let xs = terms.iter().map(|t| product_state(t).amps().to_vec()).collect();
        let s = ensemble.weights().iter().map(|w| w.sqrt()).collect();
        Self { s, terms, xs }
    }
}

/// Trace norm of x computed from the eigenvalues of the small Gram matrix
/// x^H x. The bidiagonal SVD misbehaves on exactly rank-deficient inputs
/// (on rank-one targets it returned singular-value sums above 1, silently
/// reporting separability for entangled states); the Hermitian route has no
/// such failure mode, and the Gram matrix is at most 8 x 8 here.
fn gram_trace_norm(x: &DMatrix<Complex64>) -> f64 {
    let (vals, _) = eigh(&(x.adjoint() * x));
    vals.iter().map(|&l| l.max(0.0).sqrt()).sum()
}

/// Trace norm plus the maximizing partial isometry x V S^+ V^H, on the same
/// Gram route as [`gram_trace_norm`]. Columns along numerically null
/// directions come out zero; the weight and term updates read that as no
/// pull, which any valid maximizer permits.
fn gram_polar(x: &DMatrix<Complex64>) -> (f64, DMatrix<Complex64>) {
    let (vals, vecs) = eigh(&(x.adjoint() * x));
    let sigma: Vec<f64> = vals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let j: f64 = sigma.iter().sum();
    let floor = sigma.last().copied().unwrap_or(0.0) * 1e-12;
    let mut scaled = vecs.clone();
    for (i, &sig) in sigma.iter().enumerate() {
        let inv = if sig > floor && sig > 0.0 { 1.0 / sig } else { 0.0 };
        for r in 0..scaled.nrows() {
            scaled[(r, i)] *= inv;
        }
    }
    let y = x * scaled * vecs.adjoint();
    (j, y)
}

/// One exact see-saw step at `state`: maximizing partial isometry from the
/// polar factorization, closed-form weights against it, then per-term
/// alternating product ascent. Returns the objective at the input state
/// alongside the updated state; every step is non-decreasing in the
/// objective.
fn seesaw_step(
    state: &SeesawState,
    sqrt_rho: &DMatrix<Complex64>,
) -> (f64, SeesawState) {
    let m = state.s.len();
    let b = state.b_matrix(sqrt_rho);
    let mut x = b.clone();
    for mu in 0..m {
        for i in 0..x.ncols() {
            x[(mu, i)] *= state.s[mu];
        }
    }
    let (j, y) = gram_polar(&x);

    // Closed-form weights: J = sum_mu s_mu g_mu, best unit s is the
    // normalized positive part of g.
    let mut next = SeesawState {
        s: state.s.clone(),
        terms: state.terms.clone(),
        xs: state.xs.clone(),
    };
    let mut g = vec![0.0f64; m];
    for mu in 0..m {
        let mut acc = Complex64::ZERO;
        for i in 0..y.ncols() {
            acc += b[(mu, i)] * y[(mu, i)].conj();
        }
        g[mu] = acc.re.max(0.0);
    }
    let g_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if g_norm > 1e-150 {
        for mu in 0..m {
            next.s[mu] = g[mu] / g_norm;
        }
    }

    // Per-term product improvement toward w_mu = S conj(y_mu). The phase
    // of each term is immaterial (row phases drop out of the trace norm),
    // so maximizing |<x_mu, w_mu>| suffices.
    for mu in 0..m {
        let y_conj = DVector::from_iterator(y.ncols(), (0..y.ncols()).map(|i| y[(mu, i)].conj()));
        let w = sqrt_rho * y_conj;
        let w_slice: Vec<Complex64> = w.iter().copied().collect();
        als_toward(&w_slice, &mut next.terms[mu]);
        next.xs[mu] = product_state(&next.terms[mu]).amps().to_vec();
    }
    (j, next)
}

/// state_std + alpha (state_std - state_cur), projected back to the
/// parametrization (weights clipped to the simplex sphere, qubit vectors
/// renormalized). Caller accepts the result only if the objective improves.
fn extrapolate(cur: &SeesawState, std: &SeesawState, alpha: f64) -> SeesawState {
    let m = std.s.len();
    let mut s: Vec<f64> = (0..m)
        .map(|mu| (std.s[mu] + alpha * (std.s[mu] - cur.s[mu])).max(0.0))
        .collect();
    let norm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 1e-150 {
        for v in &mut s {
            *v /= norm;
        }
    } else {
        s.copy_from_slice(&std.s);
    }

    let mut terms = Vec::with_capacity(m);
    for mu in 0..m {
        let qc = cur.terms[mu].qubit_amplitudes();
        let qs = std.terms[mu].qubit_amplitudes();
        let mut angles = Vec::with_capacity(qs.len());
        for (vc, vs) in qc.iter().zip(&qs) {
            let ext = [
                vs[0] + alpha * (vs[0] - vc[0]),
                vs[1] + alpha * (vs[1] - vc[1]),
            ];
            let norm = (ext[0].norm_sqr() + ext[1].norm_sqr()).sqrt();
            if norm > 1e-12 {
                angles.push(QubitAngles::from_amplitudes(ext));
            } else {
                angles.push(QubitAngles::from_amplitudes(*vs));
            }
        }
        terms.push(ProductStateParams::new(angles).expect("canonical angles"));
    }
    let xs = terms.iter().map(|t| product_state(t).amps().to_vec()).collect();
    SeesawState { s, terms, xs }
}

/// Monotone see-saw ascent from `state`: plain steps plus over-relaxed
/// candidates that are kept only when they score better, so J never drops.
/// Stops once the objective is stationary within `tol` (or the gap to 1 is
/// negligible), else at the iteration cap with `converged = false`.
/// Stationarity needs three consecutive sub-tol steps: over-relaxation
/// makes single-step gains noisy, and one failed extrapolation must not
/// read as convergence mid-crawl.
fn seesaw_ascend(
    mut state: SeesawState,
    sqrt_rho: &DMatrix<Complex64>,
    tol: f64,
    max_iterations: usize,
) -> (f64, SeesawState, bool) {
    let mut j_prev = -1.0;
    let mut j_final;
    let mut converged = false;
    let mut iterations = 0usize;
    let mut alpha = 1.0f64;
    let mut stalled = 0usize;

    loop {
        let (j, std) = seesaw_step(&state, sqrt_rho);
        j_final = j;
        debug_assert!(j >= j_prev - 1e-9, "see-saw lost ground: {j_prev} -> {j}");
        stalled = if (j - j_prev).abs() <= tol { stalled + 1 } else { 0 };
        if j >= 1.0 - EARLY_STOP_GAP || stalled >= 3 {
            converged = true;
            break;
        }
        if iterations >= max_iterations {
            break;
        }
        iterations += 1;
        j_prev = j;

        let j_std = std.objective(sqrt_rho);
        let ext = extrapolate(&state, &std, alpha);
        let j_ext = ext.objective(sqrt_rho);
        if j_ext > j_std {
            state = ext;
            alpha = (2.0 * alpha).min(1024.0);
        } else {
            state = std;
            alpha = 1.0;
        }
    }

    (j_final, state, converged)
}

fn run_mixed_restart(
    rho: &DensityMatrix,
    sqrt_rho: &DMatrix<Complex64>,
    m: usize,
    config: &MixedConfig,
    index: usize,
) -> MixedRestartOutcome {
    let n = rho.num_qubits();
    let mut rng = rng_for(config.seed, index as u64);
    let initial = SeesawState::random(n, m, &mut rng);
    let (objective, state, converged) =
        seesaw_ascend(initial, sqrt_rho, config.tol, config.max_iterations);
    MixedRestartOutcome {
        objective,
        ensemble: state.into_ensemble(n),
        converged,
    }
}

/// Alternating single-qubit ascent of |<x(params), w>| for an arbitrary
/// (unnormalized) target vector w, warm-started from `params`.
fn als_toward(w: &[Complex64], params: &mut ProductStateParams) {
    let n = params.num_qubits();
    let mut qubits = params.qubit_amplitudes();
    let mut last = 0.0f64;
    for _ in 0..60 {
        let mut current = last;
        for k0 in 0..n {
            let c = contract_qubit(w, &qubits, k0);
            let norm = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
            if norm < 1e-14 {
                continue;
            }
            let angles = QubitAngles::from_amplitudes(c);
            set_angle(params, k0, angles);
            qubits[k0] = angles.amplitudes();
            current = norm;
        }
        if (current - last).abs() <= 1e-13 * (1.0 + current) {
            break;
        }
        last = current;
    }
}

fn set_angle(params: &mut ProductStateParams, k0: usize, angles: QubitAngles) {
    let mut all: Vec<QubitAngles> = params.angles().to_vec();
    all[k0] = angles;
    *params = ProductStateParams::new(all).expect("canonical angles");
}

/// Maximal fidelity between `rho` and the separable set, with the argmax
/// ensemble. The value is a guaranteed lower bound on the true maximum
/// (each restart is monotone; the best restart wins, ties to the lowest
/// index).
pub fn max_fidelity_separable(
    rho: &DensityMatrix,
    config: &MixedConfig,
) -> Result<(f64, SeparableEnsemble)> {
    Ok(measure_internal(rho, config)?.into_pair())
}

/// G(rho) = sqrt(1 - max_fidelity_separable); `p_max` carries the fidelity.
pub fn groverian_mixed(
    rho: &DensityMatrix,
    config: &MixedConfig,
) -> Result<MeasureResult<SeparableEnsemble>> {
    measure_internal(rho, config)
}

trait IntoPair {
    fn into_pair(self) -> (f64, SeparableEnsemble);
}

impl IntoPair for MeasureResult<SeparableEnsemble> {
    fn into_pair(self) -> (f64, SeparableEnsemble) {
        (self.p_max, self.best)
    }
}

/// Reseeding is attempted while 1 - J stays above this and below
/// `RESEED_WINDOW`; gaps beyond the window mean genuine entanglement, not a
/// stuck decomposition.
const RESEED_GAP: f64 = 1e-10;
const RESEED_WINDOW: f64 = 1e-2;
const RESEED_ROUNDS: usize = 4;

/// Endgame on the winning restart. Parallel restarts earn their keep in the
/// basin search, not in the endgame, so the winner alone gets two kinds of
/// follow-up, both monotone in the objective:
///
/// - a warm continuation with a 10x iteration budget when the cap cut the
///   crawl short;
/// - residual reseeding when the gap looks like a stuck decomposition: the
///   weakest term is replaced by the best product state of rho - sigma,
///   which points exactly at what the mixture is missing, and the ascent is
///   re-run. A round that fails to improve ends the escape.
fn extend_best(
    rho: &DensityMatrix,
    sqrt_rho: &DMatrix<Complex64>,
    outcome: MixedRestartOutcome,
    config: &MixedConfig,
) -> MixedRestartOutcome {
    let n = rho.num_qubits();
    let mut best = outcome;
    if !best.converged {
        let warm = SeesawState::from_ensemble(&best.ensemble);
        let budget = config.max_iterations.saturating_mul(10);
        let (objective, state, converged) = seesaw_ascend(warm, sqrt_rho, config.tol, budget);
        if objective > best.objective {
            best = MixedRestartOutcome {
                objective,
                ensemble: state.into_ensemble(n),
                converged,
            };
        }
    }

    // Sub-stream out of the restart index range keeps the escape
    // deterministic without colliding with any restart's draws.
    let mut rng = rng_for(config.seed, u64::MAX);

    // Rank-deficient targets get one structural escape attempt before the
    // residual rounds. The optimum wastes no mass outside supp(rho), and
    // product states inside a strict subspace are scarce (a generic
    // subspace meets the product variety in finitely many points), so the
    // generic basin spreads weight over near-support products and
    // plateaus. Collecting the in-support products directly and letting
    // the closed-form weight updates snap onto them reaches what no amount
    // of crawling does.
    if 1.0 - best.objective >= RESEED_GAP {
        if let Some(candidate) = support_product_state(rho, &best.ensemble, &mut rng) {
            let budget = config.max_iterations.saturating_mul(10);
            let (objective, state, converged) =
                seesaw_ascend(candidate, sqrt_rho, config.tol, budget);
            if std::env::var_os("GROV_STAGE_DEBUG").is_some() {
                eprintln!("support escape: J={objective} converged={converged}");
            }
            if objective > best.objective {
                best = MixedRestartOutcome {
                    objective,
                    ensemble: state.into_ensemble(n),
                    converged,
                };
            }
        }
    }

    for _ in 0..RESEED_ROUNDS {
        let gap = 1.0 - best.objective;
        if !(RESEED_GAP..RESEED_WINDOW).contains(&gap) {
            break;
        }
        let delta = rho.matrix() - ensemble_to_density(&best.ensemble).matrix();
        let (peak, params) = best_residual_product(&delta, n, &mut rng);
        if peak <= 0.0 {
            break;
        }

        // The injection weight the dynamics tolerate is not predictable:
        // too small and the next sweep crushes the term, too large and the
        // ascent starts from a worse point than it can recover. Scan a few
        // scales around the natural one (the residual peak itself) and keep
        // the best re-ascended result.
        let mut round_best: Option<MixedRestartOutcome> = None;
        for scale in [0.3, 1.0, 3.0, 10.0] {
            let weight = (peak * scale).min(0.5);
            let mut state = SeesawState::from_ensemble(&best.ensemble);
            let weakest = state
                .s
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).expect("weights are finite"))
                .map(|(i, _)| i)
                .expect("ensemble is non-empty");
            state.terms[weakest] = params.clone();
            state.xs[weakest] = product_state(&params).amps().to_vec();
            state.s[weakest] = weight.sqrt();
            let norm = state.s.iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in &mut state.s {
                *v /= norm;
            }
            let (objective, state, converged) =
                seesaw_ascend(state, sqrt_rho, config.tol, config.max_iterations);
            let better = match &round_best {
                None => objective > best.objective,
                Some(b) => objective > b.objective,
            };
            if better {
                round_best = Some(MixedRestartOutcome {
                    objective,
                    ensemble: state.into_ensemble(n),
                    converged,
                });
            }
        }
        match round_best {
            Some(outcome) => best = outcome,
            None => break,
        }
    }

    // A few separable states sit in a genuinely slow valley (low-rank
    // targets whose in-support products form a continuum rather than
    // isolated points). The crawl still converges, it just needs two
    // orders of magnitude more steps. Paying that only when every escape
    // above has failed keeps the common case fast.
    let gap = 1.0 - best.objective;
    if !best.converged && (RESEED_GAP..RESEED_WINDOW).contains(&gap) {
        let warm = SeesawState::from_ensemble(&best.ensemble);
        let budget = config.max_iterations.saturating_mul(100);
        let (objective, state, converged) =
            seesaw_ascend(warm, sqrt_rho, config.tol / 100.0, budget);
        if objective > best.objective {
            best = MixedRestartOutcome {
                objective,
                ensemble: state.into_ensemble(n),
                converged,
            };
        }
    }
    best
}

/// See-saw state whose terms include the product states lying inside
/// supp(rho), found by ascending <x|P|x> for the support projector P from
/// random starts. Returns None when rho has full rank (P = I makes the
/// search vacuous) or no in-support product shows up. Remaining slots are
/// filled from the current ensemble's heaviest terms; weights start
/// uniform and re-equilibrate in the caller's ascent.
fn support_product_state(
    rho: &DensityMatrix,
    current: &SeparableEnsemble,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<SeesawState> {
    let n = rho.num_qubits();
    let dim = rho.matrix().nrows();
    let (evals, evecs) = crate::qstate::eigh(rho.matrix());
    let rank = evals.iter().filter(|&&l| l > 1e-10).count();
    if rank == dim {
        return None;
    }
    let mut projector = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, &l) in evals.iter().enumerate() {
        if l > 1e-10 {
            let col = evecs.column(i);
            for r in 0..dim {
                for c in 0..dim {
                    projector[(r, c)] += col[r] * col[c].conj();
                }
            }
        }
    }

    let mut found: Vec<ProductStateParams> = Vec::new();
    let mut best_seen = f64::NEG_INFINITY;
    for _ in 0..64 {
        let mut params = ProductStateParams::random(n, rng);
        let val = ascend_quadratic_form(&projector, &mut params, n);
        best_seen = best_seen.max(val);
        if val < 1.0 - 1e-9 {
            continue;
        }
        let amps = product_state(&params);
        let distinct = found.iter().all(|q| {
            let other = product_state(q);
            amps.overlap(&other).expect("same size").norm_sqr() < 1.0 - 1e-8
        });
        if distinct {
            found.push(params);
        }
    }
    if found.is_empty() {
        return None;
    }

    // With the right products in hand the weights are a linear-algebra
    // problem, not an optimization: nonnegative least-squares fit of rho
    // over the projectors. An exact decomposition comes out with zero
    // residual; anything worse still serves as a strong start. The fit may
    // use more atoms than the ensemble carries, so the active weights are
    // pruned to capacity and refit.
    let xs: Vec<Vec<Complex64>> = found
        .iter()
        .map(|t| product_state(t).amps().to_vec())
        .collect();
    let k = found.len();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    let mut target = DVector::<f64>::zeros(k);
    for mu in 0..k {
        let mut h = Complex64::ZERO;
        for r in 0..dim {
            for c in 0..dim {
                h += xs[mu][r].conj() * rho.matrix()[(r, c)] * xs[mu][c];
            }
        }
        target[mu] = h.re;
        for nu in mu..k {
            let mut ov = Complex64::ZERO;
            for i in 0..dim {
                ov += xs[mu][i].conj() * xs[nu][i];
            }
            let v = ov.norm_sqr();
            gram[(mu, nu)] = v;
            gram[(nu, mu)] = v;
        }
    }
    let mut weights = nnls(&gram, &target);
    let capacity = current.num_terms().max(1);
    let mut active: Vec<usize> = (0..k).filter(|&i| weights[i] > 1e-12).collect();
    if active.is_empty() {
        return None;
    }
    if active.len() > capacity {
        active.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).expect("finite weights"));
        active.truncate(capacity);
        let sub_gram = DMatrix::<f64>::from_fn(capacity, capacity, |r, c| {
            gram[(active[r], active[c])]
        });
        let sub_target = DVector::<f64>::from_fn(capacity, |r, _| target[active[r]]);
        let refit = nnls(&sub_gram, &sub_target);
        weights = vec![0.0; k];
        for (slot, &i) in active.iter().enumerate() {
            weights[i] = refit[slot];
        }
    }
    let total: f64 = weights.iter().sum();
    if total < 1e-12 {
        return None;
    }
    let mut terms = Vec::new();
    let mut kept_xs = Vec::new();
    let mut s = Vec::new();
    for i in 0..k {
        if weights[i] > 1e-12 {
            terms.push(found[i].clone());
            kept_xs.push(xs[i].clone());
            s.push((weights[i] / total).sqrt());
        }
    }
    Some(SeesawState {
        s,
        terms,
        xs: kept_xs,
    })
}

/// Nonnegative least squares in normal-equation form: minimizes
/// w^T G w / 2 - h^T w over w >= 0 by multiplicative updates
/// w_j <- w_j h_j / (G w)_j. Both G and h are entrywise nonnegative here
/// (overlap-squared Gram, diagonal expectations of a PSD matrix), which
/// makes the update monotone regardless of how ill-conditioned G is; the
/// curve-sampled atoms below can be nearly parallel, so that robustness
/// is the point.
fn nnls(gram: &DMatrix<f64>, target: &DVector<f64>) -> Vec<f64> {
    let k = gram.nrows();
    let mut w = DVector::<f64>::from_element(k, target.sum().max(1e-12) / k as f64);
    for _ in 0..2000 {
        let gw = gram * &w;
        let mut moved = 0.0f64;
        for j in 0..k {
            let next = w[j] * target[j] / gw[j].max(1e-300);
            moved = moved.max((next - w[j]).abs());
            w[j] = next;
        }
        if moved <= 1e-15 {
            break;
        }
    }
    w.iter().copied().collect()
}

/// Best product state of a Hermitian matrix's quadratic form, from a few
/// random starts of an alternating per-qubit ascent.
fn best_residual_product(
    delta: &DMatrix<Complex64>,
    n: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> (f64, ProductStateParams) {
    let mut best_val = f64::NEG_INFINITY;
    let mut best_params = None;
    for _ in 0..8 {
        let mut params = ProductStateParams::random(n, rng);
        let val = ascend_quadratic_form(delta, &mut params, n);
        if val > best_val {
            best_val = val;
            best_params = Some(params);
        }
    }
    (best_val, best_params.expect("at least one start"))
}

/// Alternating maximization of <x|M|x> over product states: each qubit in
/// turn is set to the leading eigenvector of its 2x2 effective matrix.
fn ascend_quadratic_form(
    mat: &DMatrix<Complex64>,
    params: &mut ProductStateParams,
    n: usize,
) -> f64 {
    let dim = 1usize << n;
    let mut value = f64::NEG_INFINITY;
    for _ in 0..50 {
        let before = value;
        for k0 in 0..n {
            let qubits = params.qubit_amplitudes();
            // v_b[i] = [bit k0 of i = b] * prod_{l != k0} x_l[i_l], so the
            // effective matrix is E[b][b'] = v_b^dag M v_b'.
            let mut v = [vec![Complex64::ZERO; dim], vec![Complex64::ZERO; dim]];
            for i in 0..dim {
                let mut prod = Complex64::ONE;
                for l in 0..n {
                    if l != k0 {
                        prod *= qubits[l][(i >> (n - 1 - l)) & 1];
                    }
                }
                v[(i >> (n - 1 - k0)) & 1][i] = prod;
            }
            let mut e = [[Complex64::ZERO; 2]; 2];
            for b in 0..2 {
                for bp in 0..2 {
                    let mut acc = Complex64::ZERO;
                    for i in 0..dim {
                        for j in 0..dim {
                            acc += v[b][i].conj() * mat[(i, j)] * v[bp][j];
                        }
                    }
                    e[b][bp] = acc;
                }
            }
            let (lambda, vec) = leading_eig_2x2(&e);
            value = lambda;
            set_angle(params, k0, QubitAngles::from_amplitudes(vec));
        }
        if (value - before).abs() <= 1e-13 * (1.0 + value.abs()) {
            break;
        }
    }
    value
}

/// Closed-form leading eigenpair of a Hermitian 2x2 matrix.
fn leading_eig_2x2(e: &[[Complex64; 2]; 2]) -> (f64, [Complex64; 2]) {
    let a = e[0][0].re;
    let d = e[1][1].re;
    let b = e[0][1];
    let gap = ((a - d) * (a - d) + 4.0 * b.norm_sqr()).sqrt();
    let lambda = 0.5 * (a + d + gap);
    // (b, lambda - a) and (lambda - d, conj(b)) are both eigenvectors; pick
    // the numerically larger construction.
    let v = if (lambda - a).abs() > (lambda - d).abs() {
        [b, Complex64::new(lambda - a, 0.0)]
    } else {
        [Complex64::new(lambda - d, 0.0), b.conj()]
    };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm < 1e-150 {
        (lambda, [Complex64::ONE, Complex64::ZERO])
    } else {
        (lambda, [v[0] / norm, v[1] / norm])
    }
}

fn measure_internal(
    rho: &DensityMatrix,
    config: &MixedConfig,
) -> Result<MeasureResult<SeparableEnsemble>> {
    let n = rho.num_qubits();
    if n > MAX_MIXED_QUBITS {
        return Err(Error::QubitRange {
            n,
            min: 1,
            max: MAX_MIXED_QUBITS,
        });
    }
    if config.restarts == 0 {
        return Err(Error::BadParameter("restarts must be positive".into()));
    }
    let m = config.terms.unwrap_or_else(|| default_terms(n));
    if m == 0 || m > max_terms(n) {
        return Err(Error::BadEnsemble(format!(
            "ensemble size {m} outside 1..={}",
            max_terms(n)
        )));
    }
    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let outcomes: Vec<MixedRestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|i| run_mixed_restart(rho, &sqrt_rho, m, config, i))
        .collect();
    let mut best: Option<(usize, MixedRestartOutcome)> = None;
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let better = match &best {
            None => true,
            Some((_, b)) => outcome.objective > b.objective,
        };
        if better {
            best = Some((i, outcome));
        }
    }
    let (best_restart, outcome) = best.expect("at least one restart");
    if std::env::var_os("GROV_STAGE_DEBUG").is_some() {
        eprintln!(
            "winner restart {best_restart}: J={} converged={}",
            outcome.objective, outcome.converged
        );
    }
    let outcome = extend_best(rho, &sqrt_rho, outcome, config);
    if std::env::var_os("GROV_STAGE_DEBUG").is_some() {
        eprintln!(
            "after extend: J={} converged={}",
            outcome.objective, outcome.converged
        );
    }
    let j = outcome.objective.clamp(0.0, 1.0);
    // (1-J)(1+J) keeps the gap accurate when J approaches 1.
    let gap = ((1.0 - j) * (1.0 + j)).max(0.0);
    Ok(MeasureResult {
        p_max: 1.0 - gap,
        g: gap.sqrt(),
        best: outcome.ensemble,
        restarts: config.restarts,
        best_restart,
        converged: outcome.converged,
    })
}

/// Werner family on 2 qubits: p |S><S| + (1-p) I/4 with the singlet
/// S = (|01> - |10>)/sqrt(2). Entangled exactly for p > 1/3.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameter(format!("werner p={p} outside [0,1]")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = [
        Complex64::ZERO,
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::ZERO,
    ];
    let mut mat = DMatrix::<Complex64>::zeros(4, 4);
    for r in 0..4 {
        mat[(r, r)] += Complex64::new((1.0 - p) / 4.0, 0.0);
        for c in 0..4 {
            mat[(r, c)] += p * singlet[r] * singlet[c].conj();
        }
    }
    DensityMatrix::new(2, mat)
}

/// Partial-transpose separability report for 2 qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptReport {
    /// Whether the partial transpose is positive semidefinite; for 2 qubits
    /// this is exactly separability.
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

/// Peres-Horodecki check: transposes the second qubit and inspects the
/// spectrum. Exact separability oracle at this dimension.
pub fn ppt_check(rho: &DensityMatrix) -> Result<PptReport> {
    if rho.num_qubits() != 2 {
        return Err(Error::QubitRange {
            n: rho.num_qubits(),
            min: 2,
            max: 2,
        });
    }
    let m = rho.matrix();
    let mut pt = DMatrix::<Complex64>::zeros(4, 4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    pt[(2 * i1 + j2, 2 * j1 + i2)] = m[(2 * i1 + i2, 2 * j1 + j2)];
                }
            }
        }
    }
    let (eigenvalues, _) = crate::qstate::eigh(&pt);
    let min_eigenvalue = eigenvalues[0];
    Ok(PptReport {
        is_ppt: min_eigenvalue >= -1e-10,
        min_eigenvalue,
    })
}

/// A complete set of product Kraus operators M_i = M_i(1) x ... x M_i(n),
/// the one-way LOCC channels of the monotonicity properties.
#[derive(Debug, Clone)]
pub struct KrausSet {
    num_qubits: usize,
    /// factors[i][k] is the 2x2 factor of term i on qubit k+1.
    factors: Vec<Vec<[[Complex64; 2]; 2]>>,
}

impl KrausSet {
    pub fn new(num_qubits: usize, factors: Vec<Vec<[[Complex64; 2]; 2]>>) -> Result<Self> {
        if num_qubits == 0 || factors.is_empty() {
            return Err(Error::BadKrausSet("empty operator set".into()));
        }
        for term in &factors {
            if term.len() != num_qubits {
                return Err(Error::BadKrausSet(format!(
                    "term has {} factors for {num_qubits} qubits",
                    term.len()
                )));
            }
        }
        let set = Self {
            num_qubits,
            factors,
        };
        let dim = 1usize << num_qubits;
        let mut total = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..set.num_terms() {
            let m = set.term_matrix(i);
            total += m.adjoint() * &m;
        }
        let residual = (total - DMatrix::identity(dim, dim)).norm();
        if residual > 1e-10 {
            return Err(Error::BadKrausSet(format!(
                "completeness residual {residual:.3e}"
            )));
        }
        Ok(set)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Vec<[[Complex64; 2]; 2]>] {
        &self.factors
    }

    /// The full 2^n x 2^n matrix of term `i`.
    pub fn term_matrix(&self, i: usize) -> DMatrix<Complex64> {
        let mut out = DMatrix::<Complex64>::identity(1, 1);
        for f in &self.factors[i] {
            let f = DMatrix::from_row_slice(2, 2, &[f[0][0], f[0][1], f[1][0], f[1][1]]);
            out = out.kronecker(&f);
        }
        out
    }
}

/// Random complete product-operator set: one randomly chosen qubit gets an
/// m-outcome measurement (random positive matrices normalized so the
/// effects sum to I, each taken to its operator square root and composed
/// with a random unitary); every other qubit gets an independent random
/// unitary per term. Completeness then holds exactly:
/// sum_i M_i* M_i = I x ... x (sum_i E_i) x ... x I = I.
pub fn random_kraus_set(num_qubits: usize, num_terms: usize, seed: u64) -> Result<KrausSet> {
    if num_qubits == 0 || num_terms == 0 {
        return Err(Error::BadKrausSet("need at least one qubit and term".into()));
    }
    let mut rng = rng_for(seed, 0);
    let measured = rng.gen_range(0..num_qubits);
    let effects = random_povm(num_terms, &mut rng)?;
    let mut factors = Vec::with_capacity(num_terms);
    for effect in effects {
        let mut term = Vec::with_capacity(num_qubits);
        for k in 0..num_qubits {
            if k == measured {
                let u = haar_2x2(&mut rng);
                term.push(mat2_mul(&u, &effect));
            } else {
                term.push(haar_2x2(&mut rng));
            }
        }
        factors.push(term);
    }
    KrausSet::new(num_qubits, factors)
}

/// m operator square roots of a random single-qubit POVM: sqrt(E_i) with
/// sum E_i = I.
fn random_povm(m: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Result<Vec<[[Complex64; 2]; 2]>> {
    if m == 1 {
        return Ok(vec![[
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ]]);
    }
    let positives: Vec<DMatrix<Complex64>> = (0..m)
        .map(|_| {
            let g = DMatrix::from_fn(2, 2, |_, _| standard_complex(rng));
            &g * g.adjoint()
        })
        .collect();
    let mut total = DMatrix::<Complex64>::zeros(2, 2);
    for p in &positives {
        total += p;
    }
    let inv_sqrt = psd_inv_sqrt(&total)?;
    positives
        .iter()
        .map(|p| {
            let effect = &inv_sqrt * p * &inv_sqrt;
            let root = psd_sqrt(&effect)?;
            Ok([
                [root[(0, 0)], root[(0, 1)]],
                [root[(1, 0)], root[(1, 1)]],
            ])
        })
        .collect()
}

fn psd_inv_sqrt(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (eigenvalues, vectors) = crate::qstate::eigh(m);
    if eigenvalues.iter().any(|&l| l < 1e-12) {
        return Err(Error::BadKrausSet("singular effect sum".into()));
    }
    let dim = m.nrows();
    let mut scaled = vectors.clone();
    for (j, l) in eigenvalues.iter().enumerate() {
        let f = Complex64::new(1.0 / l.sqrt(), 0.0);
        for i in 0..dim {
            scaled[(i, j)] *= f;
        }
    }
    Ok(scaled * vectors.adjoint())
}

fn haar_2x2(rng: &mut rand_chacha::ChaCha8Rng) -> [[Complex64; 2]; 2] {
    let u = haar_unitary(2, rng);
    let m = u.matrix();
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn mat2_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// sum_i M_i rho M_i* for a complete product-operator set.
pub fn apply_channel(rho: &DensityMatrix, k: &KrausSet) -> Result<DensityMatrix> {
    if rho.num_qubits() != k.num_qubits {
        return Err(Error::QubitMismatch {
            left: rho.num_qubits(),
            right: k.num_qubits,
        });
    }
    let dim = 1usize << rho.num_qubits();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..k.num_terms() {
        let m = k.term_matrix(i);
        out += &m * rho.matrix() * m.adjoint();
    }
    DensityMatrix::new(rho.num_qubits(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure_measure::{p_max_pure, PureConfig};
    use crate::qstate::density_of;
    use crate::qstate::random::random_density;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis_params(n: usize, index: usize) -> ProductStateParams {
        let angles = (0..n)
            .map(|k| QubitAngles {
                theta: if (index >> (n - 1 - k)) & 1 == 1 {
                    std::f64::consts::PI
                } else {
                    0.0
                },
                phi: 0.0,
            })
            .collect();
        ProductStateParams::new(angles).unwrap()
    }

    fn bell_density() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell =
            PureState::new(2, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        density_of(&bell)
    }

    #[test]
    fn ensemble_density_known_cases() {
        let e = SeparableEnsemble::new(2, vec![1.0], vec![basis_params(2, 0)]).unwrap();
        let rho = ensemble_to_density(&e);
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);

        let e = SeparableEnsemble::new(
            1,
            vec![0.5, 0.5],
            vec![basis_params(1, 0), basis_params(1, 1)],
        )
        .unwrap();
        let rho = ensemble_to_density(&e);
        for r in 0..2 {
            assert!((rho.matrix()[(r, r)].re - 0.5).abs() < 1e-15);
        }

        let n = 2;
        let e = SeparableEnsemble::new(
            n,
            vec![0.25; 4],
            (0..4).map(|i| basis_params(n, i)).collect(),
        )
        .unwrap();
        let rho = ensemble_to_density(&e);
        for r in 0..4 {
            for cc in 0..4 {
                let want = if r == cc { 0.25 } else { 0.0 };
                assert!((rho.matrix()[(r, cc)].re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ensemble_validation_rejects_bad_inputs() {
        assert!(SeparableEnsemble::new(2, vec![], vec![]).is_err());
        assert!(
            SeparableEnsemble::new(2, vec![0.7, 0.7], vec![basis_params(2, 0), basis_params(2, 1)])
                .is_err()
        );
        assert!(SeparableEnsemble::new(2, vec![1.0], vec![basis_params(3, 0)]).is_err());
        let many = (0..17).map(|_| basis_params(1, 0)).collect::<Vec<_>>();
        assert!(SeparableEnsemble::new(1, vec![1.0 / 17.0; 17], many).is_err());
    }

    #[test]
    fn fidelity_objective_known_cases() {
        let mut rng = rng_for(60, 0);
        let e = SeparableEnsemble::random(2, 4, &mut rng);
        let rho = ensemble_to_density(&e);
        let f = fidelity_objective(&rho, &e).unwrap();
        assert!((f - 1.0).abs() < 1e-10, "self fidelity {f}");

        let f = fidelity_objective(&bell_density(), &SeparableEnsemble::new(2, vec![1.0], vec![basis_params(2, 0)]).unwrap())
            .unwrap();
        assert!((f - 0.5).abs() < 1e-12, "bell vs |00> fidelity {f}");
    }

    #[test]
    fn maximally_mixed_is_separable() {
        for n in 1..=2 {
            let rho = DensityMatrix::maximally_mixed(n).unwrap();
            let (f, _) = max_fidelity_separable(&rho, &MixedConfig::default()).unwrap();
            assert!(f >= 1.0 - 1e-8, "n={n} fidelity {f}");
        }
    }

    #[test]
    fn bell_projector_fidelity_half() {
        let r = groverian_mixed(&bell_density(), &MixedConfig::default()).unwrap();
        assert!((r.p_max - 0.5).abs() < 1e-5, "bell mixed p_max {}", r.p_max);
        assert!((r.g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);
    }

    #[test]
    fn reported_objective_matches_direct_fidelity() {
        let mut rng = rng_for(61, 0);
        for _ in 0..3 {
            let rho = random_density(2, &mut rng);
            let r = groverian_mixed(&rho, &MixedConfig::default()).unwrap();
            let direct = fidelity_objective(&rho, &r.best).unwrap();
            assert!(
                (r.p_max - direct).abs() < 1e-9,
                "factorized {} vs direct {direct}",
                r.p_max
            );
        }
    }

    #[test]
    fn separable_inputs_measure_zero() {
        let mut rng = rng_for(62, 0);
        for i in 0..5 {
            let e = SeparableEnsemble::random(2, 3 + (i % 3), &mut rng);
            let rho = ensemble_to_density(&e);
            let r = groverian_mixed(&rho, &MixedConfig::default()).unwrap();
            assert!(r.g <= 1e-4, "separable G = {}", r.g);
        }
    }

    #[test]
    fn ghz_mixed_matches_pure_measure() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0] = c(h, 0.0);
        amps[7] = c(h, 0.0);
        let ghz = PureState::new(3, amps).unwrap();
        let pure = p_max_pure(&ghz, &PureConfig::default()).unwrap();
        let mixed = groverian_mixed(&density_of(&ghz), &MixedConfig::default()).unwrap();
        assert!(
            (mixed.g - pure.g).abs() < 1e-4,
            "mixed {} vs pure {}",
            mixed.g,
            pure.g
        );
    }

    #[test]
    fn werner_endpoints_and_range() {
        let w0 = werner_state(0.0).unwrap();
        for r in 0..4 {
            assert!((w0.matrix()[(r, r)].re - 0.25).abs() < 1e-15);
        }
        let w1 = werner_state(1.0).unwrap();
        assert!((w1.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!((w1.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);
        assert!((w1.matrix()[(0, 0)].re).abs() < 1e-15);
        assert!(werner_state(-0.1).is_err());
        assert!(werner_state(1.1).is_err());
    }

    #[test]
    fn werner_extremes_measure() {
        let r = groverian_mixed(&werner_state(1.0).unwrap(), &MixedConfig::default()).unwrap();
        assert!(
            (r.g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4,
            "werner(1) g {}",
            r.g
        );
        let r = groverian_mixed(&werner_state(0.2).unwrap(), &MixedConfig::default()).unwrap();
        assert!(r.p_max >= 1.0 - 1e-5, "werner(0.2) fidelity {}", r.p_max);
    }

    #[test]
    fn ppt_known_values_and_boundary() {
        let report = ppt_check(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert!(report.is_ppt);
        assert!((report.min_eigenvalue - 0.25).abs() < 1e-12);

        let report = ppt_check(&bell_density()).unwrap();
        assert!(!report.is_ppt);
        assert!((report.min_eigenvalue + 0.5).abs() < 1e-12);

        // Werner minimal PT eigenvalue is linear in p and crosses zero at 1/3.
        let report = ppt_check(&werner_state(1.0 / 3.0).unwrap()).unwrap();
        assert!(report.min_eigenvalue.abs() < 1e-12);
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let report = ppt_check(&werner_state(p).unwrap()).unwrap();
            assert_eq!(report.is_ppt, p <= 1.0 / 3.0 + 1e-9, "p={p}");
        }

        assert!(ppt_check(&DensityMatrix::maximally_mixed(1).unwrap()).is_err());
    }

    #[test]
    fn kraus_sets_are_complete_and_trace_preserving() {
        let mut rng = rng_for(63, 0);
        for m in 1..=5 {
            let k = random_kraus_set(2, m, 100 + m as u64).unwrap();
            assert_eq!(k.num_terms(), m);
            // Constructor already enforces completeness; exercise a channel.
            let rho = random_density(2, &mut rng);
            let out = apply_channel(&rho, &k).unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_term_kraus_factors_are_unitary() {
        let k = random_kraus_set(3, 1, 7).unwrap();
        for f in &k.factors()[0] {
            let m = DMatrix::from_row_slice(2, 2, &[f[0][0], f[0][1], f[1][0], f[1][1]]);
            let residual = (&m * m.adjoint() - DMatrix::identity(2, 2)).norm();
            assert!(residual < 1e-10);
        }
    }

    #[test]
    fn dephasing_channel_kills_coherences() {
        let p0 = [
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ZERO],
        ];
        let p1 = [
            [Complex64::ZERO, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ];
        let mut factors = Vec::new();
        for a in [p0, p1] {
            for b in [p0, p1] {
                factors.push(vec![a, b]);
            }
        }
        let k = KrausSet::new(2, factors).unwrap();
        let out = apply_channel(&bell_density(), &k).unwrap();
        for r in 0..4 {
            for cc in 0..4 {
                let want = if (r, cc) == (0, 0) || (r, cc) == (3, 3) {
                    0.5
                } else {
                    0.0
                };
                assert!((out.matrix()[(r, cc)].norm() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kraus_validation_rejects_incomplete_sets() {
        let half = [
            [c(0.5, 0.0), Complex64::ZERO],
            [Complex64::ZERO, c(0.5, 0.0)],
        ];
        assert!(KrausSet::new(1, vec![vec![half]]).is_err());
        assert!(KrausSet::new(2, vec![vec![half]]).is_err());
        assert!(KrausSet::new(1, vec![]).is_err());
    }

    #[test]
    fn fidelity_is_channel_monotone() {
        let mut rng = rng_for(64, 0);
        for i in 0..10 {
            let rho = random_density(2, &mut rng);
            let sigma = random_density(2, &mut rng);
            let k = random_kraus_set(2, 1 + (i % 4), 200 + i as u64).unwrap();
            let before = fidelity(&rho, &sigma).unwrap();
            let after = fidelity(
                &apply_channel(&rho, &k).unwrap(),
                &apply_channel(&sigma, &k).unwrap(),
            )
            .unwrap();
            assert!(after >= before - 1e-9, "fidelity fell {before} -> {after}");
        }
    }

    #[test]
    fn measure_is_locc_monotone_smoke() {
        let mut rng = rng_for(65, 0);
        let config = MixedConfig::default();
        for i in 0..3 {
            let rho = random_density(2, &mut rng);
            let k = random_kraus_set(2, 2 + i, 300 + i as u64).unwrap();
            let before = groverian_mixed(&rho, &config).unwrap();
            let after = groverian_mixed(&apply_channel(&rho, &k).unwrap(), &config).unwrap();
            assert!(
                after.g <= before.g + 3e-4,
                "G rose {} -> {}",
                before.g,
                after.g
            );
        }
    }

    #[test]
    fn fixed_seed_reproduces_bitwise() {
        let mut rng = rng_for(66, 0);
        let rho = random_density(2, &mut rng);
        let config = MixedConfig {
            seed: 5,
            ..MixedConfig::default()
        };
        let a = groverian_mixed(&rho, &config).unwrap();
        let b = groverian_mixed(&rho, &config).unwrap();
        assert_eq!(a.p_max.to_bits(), b.p_max.to_bits());
        assert_eq!(a.best_restart, b.best_restart);
    }

    #[test]
    fn config_validation() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let config = MixedConfig {
            terms: Some(0),
            ..MixedConfig::default()
        };
        assert!(groverian_mixed(&rho, &config).is_err());
        let config = MixedConfig {
            terms: Some(17),
            ..MixedConfig::default()
        };
        assert!(groverian_mixed(&rho, &config).is_err());
        let config = MixedConfig {
            restarts: 0,
            ..MixedConfig::default()
        };
        assert!(groverian_mixed(&rho, &config).is_err());
    }

    /// Two separable instances that once trapped the optimizer: one in a
    /// false-stationarity stall, one in a genuine local attractor of the
    /// see-saw map. The residual-reseeding endgame must crack both.
    #[test]
    fn formerly_stuck_separable_instances() {
        for (n, seed, index) in [(2usize, 62u64, 49usize), (2, 62, 89), (3, 77, 3)] {
            let mut rng = rng_for(seed, n as u64);
            let mut input = None;
            for i in 0..=index {
                let e = SeparableEnsemble::random(n, 2 + (i % 4), &mut rng);
                if i == index {
                    input = Some(e);
                }
            }
            let rho = ensemble_to_density(&input.unwrap());
            let r = groverian_mixed(&rho, &MixedConfig::default()).unwrap();
            assert!(
                r.g <= 1e-4,
                "n={n} instance {index}: G = {} (converged: {})",
                r.g,
                r.converged
            );
        }
    }
}
