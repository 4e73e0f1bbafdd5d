//! Seeded, splittable randomness and Haar sampling.
//!
//! All Monte Carlo paths in this crate draw from ChaCha streams keyed by an
//! explicit 64-bit seed. Independent chunks use [`substream`], so a result
//! is reproducible bit for bit from `(seed, chunk layout)` alone.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, cr, CMatrix, CVector, DensityMatrix, PureState};

/// Fresh generator for a seed (stream 0).
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the same seed.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}

/// Haar-uniform SU(2) element via a unit quaternion built from four
/// Gaussian deviates: exactly uniform on S³, no rejection step.
pub fn haar_su2_sample<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        if n < 1e-12 {
            continue; // astronomically unlikely; resample
        }
        let (w, x, y, z) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
        // u = w·I + i(x σx + y σy + z σz)
        return CMatrix::from_row_slice(
            2,
            2,
            &[c(w, z), c(y, x), c(-y, x), c(w, -z)],
        );
    }
}

/// Random pure state of the given dimension (Gaussian amplitudes,
/// normalized).
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v: CVector = DVector::from_fn(dim, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    PureState::new_normalized(v).expect("gaussian vector is nonzero")
}

/// Random rank-`rank` density matrix: normalized mixture of random pures.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let mut mat = CMatrix::zeros(dim, dim);
    let mut weights = Vec::with_capacity(rank);
    let mut total = 0.0;
    for _ in 0..rank.max(1) {
        let w: f64 = rng.gen::<f64>() + 1e-3;
        weights.push(w);
        total += w;
    }
    for w in &mut weights {
        *w /= total;
    }
    for &w in &weights {
        let psi = random_pure(dim, rng);
        mat += psi.to_density().into_matrix() * cr(w);
    }
    DensityMatrix::new(mat).expect("convex mixture of pure states is a state")
}
