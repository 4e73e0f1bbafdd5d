//! Dense complex linear algebra and quantum-state plumbing.
//!
//! Everything here is desk scale: matrices are `nalgebra` dense matrices
//! over `Complex64`, dimensions are capped at [`DIM_CAP`], and all
//! tolerances are explicit constants.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub mod io;
pub mod rng;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default cap on any matrix dimension produced by tensor products.
pub const DIM_CAP: usize = 1 << 14;

/// Hermiticity / trace / norm tolerance for state invariants.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix may undershoot zero by this much.
pub const PSD_TOL: f64 = 1e-10;
/// Trace-preservation defect accepted by [`choi_check`] and [`apply_channel`].
pub const TP_TOL: f64 = 1e-10;
/// Choi eigenvalues may undershoot zero by this much.
pub const CHOI_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest absolute entry of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and
/// the matching unit eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert_eq!(m.nrows(), m.ncols(), "hermitian_eigen needs a square matrix");
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| se.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// √m for Hermitian PSD `m`; tiny negative eigenvalues are clipped to zero.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMatrix::from_fn(vals.len(), vals.len(), |r, cidx| {
        if r == cidx {
            cr(vals[r].max(0.0).sqrt())
        } else {
            cr(0.0)
        }
    });
    &vecs * d * vecs.adjoint()
}

/// Kronecker product with the default dimension cap.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    tensor_product_with_cap(a, b, DIM_CAP)
}

/// Kronecker product; errors if either resulting dimension exceeds `cap`.
pub fn tensor_product_with_cap(a: &CMatrix, b: &CMatrix, cap: usize) -> Result<CMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(cl)) if r <= cap && cl <= cap => Ok(a.kronecker(b)),
        _ => Err(Error::Size(format!(
            "tensor product {}x{} ⊗ {}x{} exceeds cap {}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            cap
        ))),
    }
}

/// n-fold Kronecker power.
pub fn tensor_power(a: &CMatrix, n: usize) -> Result<CMatrix> {
    let mut out = identity(1);
    for _ in 0..n {
        out = tensor_product(&out, a)?;
    }
    Ok(out)
}

/// Unitary permutation of qubit wires: basis state with bits `b_0..b_{n-1}`
/// (qubit 0 is the most significant bit) maps to the state whose bit at
/// `perm[i]` is `b_i`.
pub fn qubit_permutation_matrix(n_qubits: usize, perm: &[usize]) -> Result<CMatrix> {
    if perm.len() != n_qubits {
        return Err(Error::Shape(format!(
            "permutation length {} != qubit count {}",
            perm.len(),
            n_qubits
        )));
    }
    let mut seen = vec![false; n_qubits];
    for &p in perm {
        if p >= n_qubits || seen[p] {
            return Err(Error::Domain("not a permutation".into()));
        }
        seen[p] = true;
    }
    let dim = 1usize << n_qubits;
    let mut m = CMatrix::zeros(dim, dim);
    for src in 0..dim {
        let mut dst = 0usize;
        for (i, &target) in perm.iter().enumerate() {
            let bit = (src >> (n_qubits - 1 - i)) & 1;
            dst |= bit << (n_qubits - 1 - target);
        }
        m[(dst, src)] = cr(1.0);
    }
    Ok(m)
}

/// SWAP of qubits `i` and `k` on an `n_qubits` register.
pub fn swap_matrix(n_qubits: usize, i: usize, k: usize) -> Result<CMatrix> {
    let mut perm: Vec<usize> = (0..n_qubits).collect();
    if i >= n_qubits || k >= n_qubits {
        return Err(Error::Domain(format!("swap indices ({i},{k}) out of range")));
    }
    perm.swap(i, k);
    qubit_permutation_matrix(n_qubits, &perm)
}

/// A normalized state vector. The dimension is arbitrary (logical spaces
/// of codecs need not be qubit registers); [`PureState::n_qubits`] reports
/// the register size when the dimension is a power of two.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("empty state vector".into()));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain("non-finite amplitude".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::Domain(format!(
                "state norm {norm} differs from 1 by more than {STATE_TOL:e}"
            )));
        }
        Ok(PureState { amplitudes })
    }

    /// Normalizes before construction; errors only on the zero vector.
    pub fn new_normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize zero/non-finite vector".into()));
        }
        PureState::new(amplitudes / cr(norm))
    }

    /// Computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim);
        let mut v = CVector::zeros(dim);
        v[index] = cr(1.0);
        PureState { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Register size when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<u32> {
        let d = self.dim();
        if d.is_power_of_two() {
            Some(d.trailing_zeros())
        } else {
            None
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// |⟨self|other⟩|².
    pub fn fidelity_with(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |r, cidx| {
            self.amplitudes[r] * self.amplitudes[cidx].conj()
        });
        DensityMatrix { mat: m }
    }
}

/// A density operator: Hermitian, unit trace, PSD within tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Shape(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !all_finite(&mat) {
            return Err(Error::Domain("non-finite entry in density matrix".into()));
        }
        let herm = hermiticity_defect(&mat);
        if herm > STATE_TOL {
            return Err(Error::Domain(format!("hermiticity defect {herm:e}")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Domain(format!("trace {tr} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::Domain(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: identity(dim) * cr(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

/// Trace out all factors not in `keep`. `dims` are the tensor-factor
/// dimensions of `rho` in order; `keep` is a strictly increasing list of
/// factor indices to retain.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Shape(format!(
            "factor dims {:?} do not multiply to {}",
            dims,
            rho.dim()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Shape("keep indices must be strictly increasing and in range".into()));
    }
    let out = partial_trace_raw(rho.matrix(), keep, dims);
    DensityMatrix::new(out)
}

/// Partial trace on a raw square matrix (no density-matrix validation).
pub fn partial_trace_raw(mat: &CMatrix, keep: &[usize], dims: &[usize]) -> CMatrix {
    let n = dims.len();
    let strides: Vec<usize> = {
        let mut s = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Map a (kept multi-index, traced multi-index) pair back to a flat index.
    let flat = |kept_idx: usize, tr_idx: usize| -> usize {
        let mut rem_k = kept_idx;
        let mut rem_t = tr_idx;
        let mut out = 0usize;
        for (pos, &f) in keep.iter().enumerate() {
            let radix: usize = keep[pos + 1..].iter().map(|&g| dims[g]).product();
            let digit = rem_k / radix;
            rem_k %= radix;
            out += digit * strides[f];
        }
        for (pos, &f) in traced.iter().enumerate() {
            let radix: usize = traced[pos + 1..].iter().map(|&g| dims[g]).product();
            let digit = rem_t / radix;
            rem_t %= radix;
            out += digit * strides[f];
        }
        out
    };

    let mut out = CMatrix::zeros(keep_dim, keep_dim);
    for rk in 0..keep_dim {
        for ck in 0..keep_dim {
            let mut acc = cr(0.0);
            for t in 0..traced_dim {
                acc += mat[(flat(rk, t), flat(ck, t))];
            }
            out[(rk, ck)] = acc;
        }
    }
    out
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clipped into [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Shape(format!(
            "fidelity dims {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sr = sqrt_psd(rho.matrix());
    let inner = &sr * sigma.matrix() * &sr;
    let root = sqrt_psd(&inner);
    let f = root.trace().re.powi(2);
    Ok(f.clamp(0.0, 1.0))
}

/// Trace distance `½‖ρ − σ‖₁`, clipped into [0, 1].
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Shape(format!(
            "trace_distance dims {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(trace_norm(&(rho.matrix() - sigma.matrix())) / 2.0)
}

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|).
pub fn trace_norm(herm: &CMatrix) -> f64 {
    hermitian_eigenvalues(herm).iter().map(|l| l.abs()).sum()
}

/// A completely positive map in Kraus form. `weights`, when present, give
/// a convex mixture `ρ ↦ Σ wᵢ KᵢρKᵢ†` without scaling the operators.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    pub dim_in: usize,
    pub dim_out: usize,
    kraus: Vec<CMatrix>,
    weights: Option<Vec<f64>>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>, weights: Option<Vec<f64>>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Shape("channel needs at least one Kraus operator".into()))?;
        let (dim_out, dim_in) = (first.nrows(), first.ncols());
        if kraus.iter().any(|k| k.nrows() != dim_out || k.ncols() != dim_in) {
            return Err(Error::Shape("Kraus operators differ in shape".into()));
        }
        if let Some(w) = &weights {
            if w.len() != kraus.len() {
                return Err(Error::Shape("weights length != Kraus count".into()));
            }
            if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Domain("channel weights must be nonnegative".into()));
            }
        }
        Ok(QuantumChannel {
            dim_in,
            dim_out,
            kraus,
            weights,
        })
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        QuantumChannel::new(vec![u], None)
    }

    pub fn identity(dim: usize) -> Self {
        QuantumChannel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![identity(dim)],
            weights: None,
        }
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// `Σ wᵢ Kᵢ†Kᵢ` — equals the identity for a trace-preserving channel.
    pub fn kraus_sum(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.dim_in, self.dim_in);
        for (i, k) in self.kraus.iter().enumerate() {
            s += k.adjoint() * k * cr(self.weight(i));
        }
        s
    }

    /// Unnormalized Choi matrix `Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)` (trace = dim_in).
    pub fn choi(&self) -> CMatrix {
        let d = self.dim_in * self.dim_out;
        let mut choi = CMatrix::zeros(d, d);
        for (idx, k) in self.kraus.iter().enumerate() {
            let w = cr(self.weight(idx));
            // vec(K) with index (i, a) ↦ i * dim_out + a, entry K[a, i].
            let v = CVector::from_fn(d, |q, _| k[(q % self.dim_out, q / self.dim_out)]);
            for r in 0..d {
                for cidx in 0..d {
                    choi[(r, cidx)] += w * v[r] * v[cidx].conj();
                }
            }
        }
        choi
    }
}

/// The Choi matrix normalized to unit trace, as a state: the natural
/// object for comparing two channels by trace distance.
pub fn choi_state(ch: &QuantumChannel) -> Result<DensityMatrix> {
    let m = ch.choi() * cr(1.0 / ch.dim_in as f64);
    let sym = (&m + m.adjoint()) * cr(0.5);
    DensityMatrix::new(sym)
}

/// Diagnostics from [`choi_check`].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ChoiReport {
    /// Spectral norm of `Σ wᵢKᵢ†Kᵢ − I`.
    pub tp_defect: f64,
    /// Smallest eigenvalue of the Choi matrix.
    pub min_choi_eig: f64,
}

impl ChoiReport {
    pub fn passes(&self) -> bool {
        self.tp_defect <= TP_TOL && self.min_choi_eig >= -CHOI_TOL
    }
}

/// Complete-positivity / trace-preservation diagnostics for a channel.
pub fn choi_check(ch: &QuantumChannel) -> ChoiReport {
    let defect = ch.kraus_sum() - identity(ch.dim_in);
    let tp_defect = hermitian_eigenvalues(&defect)
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    let min_choi_eig = hermitian_eigenvalues(&ch.choi())
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    ChoiReport {
        tp_defect,
        min_choi_eig,
    }
}

/// Apply a channel to a state: `Σ wᵢ KᵢρKᵢ†`. The Kraus set must be trace
/// preserving within [`TP_TOL`].
pub fn apply_channel(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim_in != rho.dim() {
        return Err(Error::Shape(format!(
            "channel input dim {} vs state dim {}",
            ch.dim_in,
            rho.dim()
        )));
    }
    let defect = ch.kraus_sum() - identity(ch.dim_in);
    let tp_defect = hermitian_eigenvalues(&defect)
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    if tp_defect > TP_TOL {
        return Err(Error::Channel(format!(
            "Kraus set trace-preservation defect {tp_defect:e} exceeds {TP_TOL:e}"
        )));
    }
    DensityMatrix::new(apply_channel_raw(ch, rho.matrix()))
}

/// Channel action on a raw matrix, without validating the result.
pub fn apply_channel_raw(ch: &QuantumChannel, rho: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(ch.dim_out, ch.dim_out);
    for (i, k) in ch.kraus.iter().enumerate() {
        out += k * rho * k.adjoint() * cr(ch.weight(i));
    }
    out
}
