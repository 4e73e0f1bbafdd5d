//! Spin-j operators and rotation irreps.
//!
//! Basis convention everywhere: |j, m⟩ with m descending from +j to −j.

use nalgebra::Vector3;

use crate::qmath::{c, cr, hermitian_eigen, CMatrix};
use crate::{Error, Result};

/// `(Jx, Jy, Jz)` for spin `j = two_j/2`, dimension `two_j + 1`.
pub fn spin_operators(two_j: u32) -> (CMatrix, CMatrix, CMatrix) {
    let d = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let mut jz = CMatrix::zeros(d, d);
    let mut jp = CMatrix::zeros(d, d);
    for idx in 0..d {
        let m = j - idx as f64;
        jz[(idx, idx)] = cr(m);
        if idx > 0 {
            jp[(idx - 1, idx)] = cr((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * cr(0.5);
    let jy = (&jp - &jm) * c(0.0, -0.5);
    (jx, jy, jz)
}

/// Total-spin-squared operator `J²` on `n` qubits,
/// with `J_a = ½ Σᵢ σ_a⁽ⁱ⁾`.
pub fn total_spin_squared(n: usize) -> Result<CMatrix> {
    let dim = 1usize
        .checked_shl(n as u32)
        .ok_or_else(|| Error::Size("qubit count too large".into()))?;
    let (sx, sy, sz) = spin_operators(1);
    let mut jx = CMatrix::zeros(dim, dim);
    let mut jy = CMatrix::zeros(dim, dim);
    let mut jz = CMatrix::zeros(dim, dim);
    for site in 0..n {
        let embed = |op: &CMatrix| -> Result<CMatrix> {
            let mut acc = crate::qmath::identity(1);
            for k in 0..n {
                let factor = if k == site { op.clone() } else { crate::qmath::identity(2) };
                acc = crate::qmath::tensor_product(&acc, &factor)?;
            }
            Ok(acc)
        };
        jx += embed(&sx)?;
        jy += embed(&sy)?;
        jz += embed(&sz)?;
    }
    Ok(&jx * &jx + &jy * &jy + &jz * &jz)
}

/// `exp(−i θ n̂·J⃗)` in the spin-j irrep, via the eigendecomposition of the
/// Hermitian generator.
pub fn rotation_irrep(two_j: u32, axis: Vector3<f64>, angle: f64) -> Result<CMatrix> {
    let norm = axis.norm();
    if !(norm > 0.0) || !angle.is_finite() {
        return Err(Error::Domain("rotation needs a nonzero axis and finite angle".into()));
    }
    let n = axis / norm;
    let (jx, jy, jz) = spin_operators(two_j);
    let gen = jx * cr(n.x) + jy * cr(n.y) + jz * cr(n.z);
    let (vals, vecs) = hermitian_eigen(&gen);
    let d = vals.len();
    let phases = CMatrix::from_fn(d, d, |r, cidx| {
        if r == cidx {
            c(0.0, -angle * vals[r]).exp()
        } else {
            cr(0.0)
        }
    });
    Ok(&vecs * phases * vecs.adjoint())
}

/// The spin-j image `D^j(u)` of a 2×2 SU(2) element, on the same branch
/// of the double cover as `u` itself (no sign canonicalization), so that
/// `u^{⊗n}` decomposes as `⊕ D^j(u) ⊗ I` including half-integer sectors.
pub fn irrep_of_su2(two_j: u32, u: &CMatrix) -> Result<CMatrix> {
    if u.nrows() != 2 || u.ncols() != 2 {
        return Err(Error::Shape("irrep_of_su2 expects a 2×2 matrix".into()));
    }
    let cos_half = 0.5 * (u[(0, 0)].re + u[(1, 1)].re);
    let sx = -0.5 * (u[(0, 1)].im + u[(1, 0)].im);
    let sy = 0.5 * (u[(1, 0)].re - u[(0, 1)].re);
    let sz = -0.5 * (u[(0, 0)].im - u[(1, 1)].im);
    let sin_half = (sx * sx + sy * sy + sz * sz).sqrt();
    let angle = 2.0 * sin_half.atan2(cos_half);
    let axis = if sin_half > 1e-14 {
        Vector3::new(sx, sy, sz) / sin_half
    } else {
        Vector3::z()
    };
    rotation_irrep(two_j, axis, angle)
}
