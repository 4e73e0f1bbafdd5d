//! The total-spin decomposition of `(ℂ²)^⊗N` and noiseless-subsystem codecs.
//!
//! Sequential Clebsch–Gordan coupling (left to right, one fixed
//! convention) produces the change of basis under which every collective
//! rotation `u^{⊗N}` is block diagonal, one block `D^j(u) ⊗ I_mult` per
//! total spin `j`. The multiplicity factor of each block is untouched by
//! collective noise, which is what the codecs exploit.

use nalgebra::DVector;

use crate::qmath::{cr, CMatrix, CVector};
use crate::{Error, Result};

pub mod cg;
mod codec;
pub mod spin;

pub use cg::clebsch_gordan;
pub use codec::{
    block_extract, decode, encode, exchange_logical_action, make_codec, singlet_measurement,
    BlockSplit, NoiselessCodec, SingletMeasurement,
};

/// Exact-method cap: basis construction beyond this is refused.
pub const MAX_BASIS_QUBITS: usize = 10;

/// A sequential coupling history: `two_js[k]` is twice the total spin
/// after coupling qubits `0..=k`, so `two_js[0] = 1` always.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CouplingPath {
    two_js: Vec<u32>,
}

impl CouplingPath {
    pub fn two_js(&self) -> &[u32] {
        &self.two_js
    }

    pub fn final_two_j(&self) -> u32 {
        *self.two_js.last().expect("paths are nonempty")
    }
}

fn binomial(n: u64, k: i64) -> u128 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn check_sector(n: usize, two_j: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if two_j as usize > n || !(n - two_j as usize).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "sector 2j = {two_j} incompatible with n = {n} (needs 0 ≤ 2j ≤ n, n − 2j even)"
        )));
    }
    Ok(())
}

/// Number of coupling paths ending at `two_j` (dim of the multiplicity
/// space H_{jS}). Computed as the path count and cross-checked against
/// the closed form C(n, (n−2j)/2) − C(n, (n−2j)/2 − 1).
pub fn multiplicity(n: usize, two_j: u32) -> Result<u64> {
    check_sector(n, two_j)?;
    // Path-count recursion on the coupling graph.
    let mut counts = vec![0u128; n + 2];
    counts[1] = 1;
    for _ in 1..n {
        let mut next = vec![0u128; n + 2];
        for j in 0..=n {
            if counts[j] == 0 {
                continue;
            }
            if j > 0 {
                next[j - 1] += counts[j];
            }
            next[j + 1] += counts[j];
        }
        counts = next;
    }
    let paths = counts[two_j as usize];
    let k = (n - two_j as usize) as i64 / 2;
    let closed = binomial(n as u64, k) - binomial(n as u64, k - 1);
    assert_eq!(paths, closed, "path count disagrees with the closed form");
    Ok(paths as u64)
}

/// All coupling paths on `n` qubits ending at `two_j`, in lexicographic
/// order of the intermediate-spin sequence.
pub fn coupling_paths(n: usize, two_j: u32) -> Result<Vec<CouplingPath>> {
    check_sector(n, two_j)?;
    let mut out = Vec::new();
    let mut prefix = vec![1u32];
    fn dfs(prefix: &mut Vec<u32>, n: usize, target: u32, out: &mut Vec<CouplingPath>) {
        let current = *prefix.last().unwrap();
        let remaining = (n - prefix.len()) as u32;
        if current.abs_diff(target) > remaining {
            return;
        }
        if prefix.len() == n {
            out.push(CouplingPath {
                two_js: prefix.clone(),
            });
            return;
        }
        if current > 0 {
            prefix.push(current - 1);
            dfs(prefix, n, target, out);
            prefix.pop();
        }
        prefix.push(current + 1);
        dfs(prefix, n, target, out);
        prefix.pop();
    }
    dfs(&mut prefix, n, two_j, &mut out);
    Ok(out)
}

/// Whole logical qubits encodable in the largest multiplicity space:
/// `⌊log₂ max_j mult(n, j)⌋`.
pub fn logical_qubit_count(n: usize) -> Result<u32> {
    if n < 2 {
        return Err(Error::Domain("encoding needs at least two qubits".into()));
    }
    let mut best = 1u64;
    let mut two_j = (n % 2) as u32;
    while two_j as usize <= n {
        best = best.max(multiplicity(n, two_j)?);
        two_j += 2;
    }
    Ok(best.ilog2())
}

#[derive(Debug, Clone)]
pub struct RowLabel {
    pub two_j: u32,
    pub two_m: i32,
    pub path_index: usize,
    pub path: CouplingPath,
}

/// Contiguous row range of one isotypic block. Rows inside a sector are
/// ordered with m (descending) outer and the path index inner, so a
/// conjugated collective rotation reads `D^j(u) ⊗ I_mult` literally.
#[derive(Debug, Clone, Copy)]
pub struct SectorSpan {
    pub two_j: u32,
    pub row_start: usize,
    pub dim_r: usize,
    pub multiplicity: usize,
}

impl SectorSpan {
    pub fn dim(&self) -> usize {
        self.dim_r * self.multiplicity
    }
}

/// The coupled basis on `n` qubits: a unitary mapping computational to
/// coupled coordinates (`rows` labels each row), with sectors sorted by
/// descending `two_j`.
#[derive(Debug, Clone)]
pub struct SchurBasis {
    n: usize,
    unitary: CMatrix,
    rows: Vec<RowLabel>,
    sectors: Vec<SectorSpan>,
}

impl SchurBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// Row r holds `⟨coupled r|` in computational coordinates: a state ψ
    /// has coupled coefficients `U ψ`.
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn rows(&self) -> &[RowLabel] {
        &self.rows
    }

    pub fn sectors(&self) -> &[SectorSpan] {
        &self.sectors
    }

    pub fn sector(&self, two_j: u32) -> Option<&SectorSpan> {
        self.sectors.iter().find(|s| s.two_j == two_j)
    }

    /// The coupled basis vector |j, m, path⟩ in computational coordinates.
    pub fn basis_vector(&self, row: usize) -> CVector {
        DVector::from_fn(self.dim(), |q, _| self.unitary[(row, q)].conj())
    }

    /// Conjugate an operator into coupled coordinates: `U M U†`.
    pub fn to_schur(&self, m: &CMatrix) -> CMatrix {
        &self.unitary * m * self.unitary.adjoint()
    }

    /// Inverse conjugation: `U† M U`.
    pub fn from_schur(&self, m: &CMatrix) -> CMatrix {
        self.unitary.adjoint() * m * &self.unitary
    }
}

struct Tower {
    path: Vec<u32>,
    two_j: u32,
    /// Vectors for m = +j, +j−1, …, −j in computational coordinates.
    vectors: Vec<CVector>,
}

/// Build the coupled basis by sequential coupling.
pub fn schur_basis(n: usize) -> Result<SchurBasis> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n > MAX_BASIS_QUBITS {
        return Err(Error::Size(format!(
            "coupled basis for n = {n} exceeds the exact-method cap {MAX_BASIS_QUBITS}"
        )));
    }
    let mut towers = vec![Tower {
        path: vec![1],
        two_j: 1,
        vectors: vec![
            DVector::from_fn(2, |q, _| if q == 0 { cr(1.0) } else { cr(0.0) }),
            DVector::from_fn(2, |q, _| if q == 1 { cr(1.0) } else { cr(0.0) }),
        ],
    }];

    for step in 1..n {
        let dim = 1usize << (step + 1);
        let mut next = Vec::with_capacity(towers.len() * 2);
        for tower in &towers {
            // Down-branch first keeps paths in lexicographic order.
            let mut branches = Vec::new();
            if tower.two_j > 0 {
                branches.push(tower.two_j - 1);
            }
            branches.push(tower.two_j + 1);
            for new_two_j in branches {
                let dim_r = (new_two_j + 1) as usize;
                let mut vectors = Vec::with_capacity(dim_r);
                for m_idx in 0..dim_r {
                    let two_m = new_two_j as i32 - 2 * m_idx as i32;
                    let mut v = DVector::from_element(dim, cr(0.0));
                    for (two_m2, bit) in [(1i32, 0usize), (-1, 1)] {
                        let two_m1 = two_m - two_m2;
                        if two_m1.unsigned_abs() > tower.two_j {
                            continue;
                        }
                        let coeff =
                            clebsch_gordan(tower.two_j, 1, new_two_j, two_m1, two_m2, two_m)?;
                        if coeff == 0.0 {
                            continue;
                        }
                        let old = &tower.vectors[((tower.two_j as i32 - two_m1) / 2) as usize];
                        for (i, amp) in old.iter().enumerate() {
                            v[2 * i + bit] += amp * cr(coeff);
                        }
                    }
                    vectors.push(v);
                }
                let mut path = tower.path.clone();
                path.push(new_two_j);
                next.push(Tower {
                    path,
                    two_j: new_two_j,
                    vectors,
                });
            }
        }
        towers = next;
    }

    // Group towers into sectors, largest spin first; towers are already in
    // path-lexicographic order within each spin.
    let mut two_js: Vec<u32> = towers.iter().map(|t| t.two_j).collect();
    two_js.sort_unstable();
    two_js.dedup();
    two_js.reverse();

    let dim = 1usize << n;
    let mut unitary = CMatrix::zeros(dim, dim);
    let mut rows = Vec::with_capacity(dim);
    let mut sectors = Vec::new();
    let mut row = 0usize;
    for &two_j in &two_js {
        let members: Vec<&Tower> = towers.iter().filter(|t| t.two_j == two_j).collect();
        let dim_r = (two_j + 1) as usize;
        sectors.push(SectorSpan {
            two_j,
            row_start: row,
            dim_r,
            multiplicity: members.len(),
        });
        for m_idx in 0..dim_r {
            let two_m = two_j as i32 - 2 * m_idx as i32;
            for (path_index, tower) in members.iter().enumerate() {
                let v = &tower.vectors[m_idx];
                for q in 0..dim {
                    unitary[(row, q)] = v[q].conj();
                }
                rows.push(RowLabel {
                    two_j,
                    two_m,
                    path_index,
                    path: CouplingPath {
                        two_js: tower.path.clone(),
                    },
                });
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, dim);
    Ok(SchurBasis {
        n,
        unitary,
        rows,
        sectors,
    })
}
