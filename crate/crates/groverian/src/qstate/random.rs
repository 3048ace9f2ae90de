//! Seeded sampling of states, unitaries and density matrices.
//!
//! All randomness in the crate flows through [`ChaCha8Rng`] so that a fixed
//! seed reproduces results bit for bit on every platform and thread count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, PureState, UnitaryMatrix};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derives an independent stream seed, e.g. one per optimizer restart.
/// The derivation is a fixed bijective mix so results do not depend on the
/// order in which streams are consumed.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
}

/// RNG for stream `index` of a base seed.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(sub_seed(seed, index))
}

pub(crate) fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state on `num_qubits` qubits.
pub fn haar_state(num_qubits: usize, rng: &mut ChaCha8Rng) -> PureState {
    let dim = 1usize << num_qubits;
    let mut amps: Vec<Complex64> = (0..dim).map(|_| standard_complex(rng)).collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::from_normalized(num_qubits, amps)
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of the
/// R diagonal folded back into Q.
pub fn haar_unitary(dim: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| standard_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::new(q).expect("QR of a Ginibre matrix yields a unitary")
}

/// Random density matrix under the Hilbert-Schmidt measure: G G^dag / Tr,
/// G a square Ginibre matrix. Full rank with probability 1.
pub fn random_density(num_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let dim = 1usize << num_qubits;
    let g = DMatrix::from_fn(dim, dim, |_, _| standard_complex(rng));
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= Complex64::new(tr, 0.0);
    DensityMatrix::new(num_qubits, rho).expect("normalized Gram matrix is a density matrix")
}

/// Bloch angles (theta, phi) of a Haar-random single-qubit state:
/// theta = arccos(1 - 2u), phi = 2 pi v with u, v uniform on [0, 1).
pub fn haar_qubit_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    ((1.0 - 2.0 * u).acos(), std::f64::consts::TAU * v)
}
