//! Noiseless-subsystem codecs, exchange gates, singlet measurements,
//! and the per-sector block split of a state.

use nalgebra::DVector;

use super::{multiplicity, schur_basis, SchurBasis};
use crate::qmath::{
    cr, partial_trace_raw, swap_matrix, tensor_product, trace_norm, CMatrix, CVector,
    DensityMatrix, PureState,
};
use crate::{Error, Result};

/// Decode rejects physical states with less support in the code than this.
pub const MIN_CODE_WEIGHT: f64 = 1e-6;
/// A sector with less weight than this is treated as empty.
pub const MIN_SECTOR_WEIGHT: f64 = 1e-12;

/// An isometry onto the multiplicity space of one spin sector, at a fixed
/// representation weight `fiducial_two_m` (the highest one; any fixed
/// choice works since collective noise never touches the path factor).
#[derive(Debug, Clone)]
pub struct NoiselessCodec {
    n: usize,
    two_j: u32,
    logical_dim: usize,
    fiducial_two_m: i32,
    isometry: CMatrix,
}

impl NoiselessCodec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    pub fn fiducial_two_m(&self) -> i32 {
        self.fiducial_two_m
    }

    /// The 2^n × logical_dim encoding isometry (V†V = I).
    pub fn isometry(&self) -> &CMatrix {
        &self.isometry
    }
}

/// Build the codec for sector `two_j` on `n` qubits with the requested
/// logical dimension (≤ the sector multiplicity).
pub fn make_codec(n: usize, two_j: u32, logical_dim: usize) -> Result<NoiselessCodec> {
    let mult = multiplicity(n, two_j)? as usize;
    if logical_dim == 0 || logical_dim > mult {
        return Err(Error::Capacity(format!(
            "logical dim {logical_dim} exceeds multiplicity {mult} of sector 2j = {two_j} on n = {n}"
        )));
    }
    let basis = schur_basis(n)?;
    let span = *basis.sector(two_j).expect("sector exists after multiplicity check");
    let fiducial_two_m = two_j as i32;
    // Rows for m = +j sit first inside the sector (m is the outer index).
    let dim = basis.dim();
    let mut isometry = CMatrix::zeros(dim, logical_dim);
    for l in 0..logical_dim {
        let row = span.row_start + l;
        debug_assert_eq!(basis.rows()[row].two_m, fiducial_two_m);
        debug_assert_eq!(basis.rows()[row].path_index, l);
        let v = basis.basis_vector(row);
        for q in 0..dim {
            isometry[(q, l)] = v[q];
        }
    }
    Ok(NoiselessCodec {
        n,
        two_j,
        logical_dim,
        fiducial_two_m,
        isometry,
    })
}

/// Map a logical state into the physical register.
pub fn encode(codec: &NoiselessCodec, logical: &PureState) -> Result<PureState> {
    if logical.dim() != codec.logical_dim {
        return Err(Error::Shape(format!(
            "logical dim {} != codec dim {}",
            logical.dim(),
            codec.logical_dim
        )));
    }
    PureState::new(&codec.isometry * logical.amplitudes())
}

/// Project a physical state back to the logical space. Returns the
/// renormalized logical state and the squared support in the code image.
pub fn decode(codec: &NoiselessCodec, physical: &PureState) -> Result<(PureState, f64)> {
    if physical.dim() != 1usize << codec.n {
        return Err(Error::Shape(format!(
            "physical dim {} != 2^{}",
            physical.dim(),
            codec.n
        )));
    }
    let projected = codec.isometry.adjoint() * physical.amplitudes();
    let weight = projected.norm_squared();
    if weight < MIN_CODE_WEIGHT {
        return Err(Error::OutOfCode(format!(
            "state has weight {weight:e} in the code image"
        )));
    }
    Ok((PureState::new_normalized(projected)?, weight))
}

/// The logical matrix induced by exchanging physical qubits `i` and `k`:
/// `V† SWAP V`. Unitary whenever the codec spans the full multiplicity
/// space (SWAP commutes with every collective rotation, so it preserves
/// each sector and acts on the path factor alone).
pub fn exchange_logical_action(codec: &NoiselessCodec, i: usize, k: usize) -> Result<CMatrix> {
    if i == k || i >= codec.n || k >= codec.n {
        return Err(Error::Domain(format!(
            "exchange needs two distinct qubits below {}, got ({i},{k})",
            codec.n
        )));
    }
    let swap = swap_matrix(codec.n, i, k)?;
    Ok(codec.isometry.adjoint() * swap * &codec.isometry)
}

#[derive(Debug, Clone)]
pub struct SingletMeasurement {
    pub prob_singlet: f64,
    /// Post-measurement state on the singlet outcome, when it has support.
    pub post_singlet: Option<PureState>,
    /// Post-measurement state on the complement outcome.
    pub post_complement: Option<PureState>,
}

/// Projective measurement of qubits `(i, k)` onto {singlet, rest}.
pub fn singlet_measurement(state: &PureState, i: usize, k: usize) -> Result<SingletMeasurement> {
    let n = state
        .n_qubits()
        .ok_or_else(|| Error::Shape("state is not a qubit register".into()))? as usize;
    if i == k || i >= n || k >= n {
        return Err(Error::Domain(format!(
            "measurement needs two distinct qubits below {n}, got ({i},{k})"
        )));
    }
    let dim = state.dim();
    let amps = state.amplitudes();
    let bit = |q: usize, site: usize| (q >> (n - 1 - site)) & 1;
    let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;

    let mut projected: CVector = DVector::from_element(dim, cr(0.0));
    for q in 0..dim {
        if bit(q, i) == 0 && bit(q, k) == 1 {
            let partner = q ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - k));
            let coeff = (amps[q] - amps[partner]) * cr(sqrt_half);
            projected[q] += coeff * cr(sqrt_half);
            projected[partner] -= coeff * cr(sqrt_half);
        }
    }
    let prob = projected.norm_squared().clamp(0.0, 1.0);
    let post_singlet = if prob > MIN_SECTOR_WEIGHT {
        Some(PureState::new_normalized(projected.clone())?)
    } else {
        None
    };
    let complement = amps - &projected;
    let post_complement = if 1.0 - prob > MIN_SECTOR_WEIGHT {
        Some(PureState::new_normalized(complement)?)
    } else {
        None
    };
    Ok(SingletMeasurement {
        prob_singlet: prob,
        post_singlet,
        post_complement,
    })
}

/// One isotypic block of a state, split into its representation and
/// multiplicity factors.
#[derive(Debug, Clone)]
pub struct BlockSplit {
    /// Trace weight of the sector.
    pub weight: f64,
    /// Reduced state on the representation factor H_{jR} (dim 2j+1).
    pub rho_r: DensityMatrix,
    /// Reduced state on the multiplicity factor H_{jS}.
    pub sigma_s: DensityMatrix,
    /// Set when the block is not the product of its reductions.
    pub correlated: bool,
}

/// Extract the `two_j` block of `rho` in the coupled basis and split it
/// as `ρ_R ⊗ σ_S` (flagging correlation when it is not a product).
pub fn block_extract(rho: &DensityMatrix, basis: &SchurBasis, two_j: u32) -> Result<BlockSplit> {
    if rho.dim() != basis.dim() {
        return Err(Error::Shape(format!(
            "state dim {} != basis dim {}",
            rho.dim(),
            basis.dim()
        )));
    }
    let span = *basis
        .sector(two_j)
        .ok_or_else(|| Error::Domain(format!("no 2j = {two_j} sector on n = {}", basis.n())))?;
    let full = basis.to_schur(rho.matrix());
    let d = span.dim();
    let block = full.view((span.row_start, span.row_start), (d, d)).into_owned();
    let weight = block.trace().re;
    if weight < MIN_SECTOR_WEIGHT {
        return Err(Error::Domain(format!(
            "sector 2j = {two_j} is empty (weight {weight:e})"
        )));
    }
    // Normalize and clean up rounding-level asymmetry before validating.
    let normalized = {
        let scaled = block / cr(weight);
        (&scaled + scaled.adjoint()) * cr(0.5)
    };
    let dims = [span.dim_r, span.multiplicity];
    let rho_r = DensityMatrix::new(partial_trace_raw(&normalized, &[0], &dims))?;
    let sigma_s = DensityMatrix::new(partial_trace_raw(&normalized, &[1], &dims))?;
    let product = tensor_product(rho_r.matrix(), sigma_s.matrix())?;
    let correlated = trace_norm(&(&normalized - product)) / 2.0 > 1e-10;
    Ok(BlockSplit {
        weight,
        rho_r,
        sigma_s,
        correlated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::rng::{haar_su2_sample, random_pure, seeded};
    use crate::qmath::{fidelity, identity, tensor_power};

    #[test]
    fn roundtrip_is_identity_on_the_code() {
        let codec = make_codec(4, 0, 2).unwrap();
        let gram = codec.isometry().adjoint() * codec.isometry();
        assert!((gram - identity(2)).norm() < 1e-12);
        let mut rng = seeded(61);
        for _ in 0..50 {
            let logical = random_pure(2, &mut rng);
            let physical = encode(&codec, &logical).unwrap();
            let (back, weight) = decode(&codec, &physical).unwrap();
            assert!((weight - 1.0).abs() < 1e-12);
            assert!(back.fidelity_with(&logical) >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn capacity_violation_rejected() {
        assert!(matches!(make_codec(4, 0, 3), Err(Error::Capacity(_))));
        assert!(matches!(make_codec(4, 0, 0), Err(Error::Capacity(_))));
    }

    #[test]
    fn two_qubit_codec_encodes_the_singlet() {
        let codec = make_codec(2, 0, 1).unwrap();
        let logical = PureState::new(DVector::from_element(1, cr(1.0))).unwrap();
        let physical = encode(&codec, &logical).unwrap();
        let amps = physical.amplitudes();
        let sh = std::f64::consts::FRAC_1_SQRT_2;
        assert!((amps[0b01].re - sh).abs() < 1e-14);
        assert!((amps[0b10].re + sh).abs() < 1e-14);
        assert!(amps[0b00].norm() < 1e-14 && amps[0b11].norm() < 1e-14);
    }

    #[test]
    fn collective_rotations_fix_encoded_states() {
        let codec = make_codec(4, 0, 2).unwrap();
        let mut rng = seeded(71);
        for _ in 0..20 {
            let logical = random_pure(2, &mut rng);
            let physical = encode(&codec, &logical).unwrap();
            let u = haar_su2_sample(&mut rng);
            let big = tensor_power(&u, 4).unwrap();
            let rotated = PureState::new_normalized(&big * physical.amplitudes()).unwrap();
            assert!(rotated.fidelity_with(&physical) >= 1.0 - 1e-12);
            let (back, _) = decode(&codec, &rotated).unwrap();
            assert!(back.fidelity_with(&logical) >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn decode_rejects_states_outside_the_code() {
        let codec = make_codec(4, 0, 2).unwrap();
        // |0000⟩ lives entirely in the j = 2 sector.
        let err = decode(&codec, &PureState::basis(4, 0)).unwrap_err();
        assert!(matches!(err, Error::OutOfCode(_)));
    }

    #[test]
    fn swap_on_two_qubit_singlet_gives_minus_one() {
        let codec = make_codec(2, 0, 1).unwrap();
        let m = exchange_logical_action(&codec, 0, 1).unwrap();
        assert!((m[(0, 0)] + cr(1.0)).norm() < 1e-12);
    }

    #[test]
    fn exchange_action_on_four_qubit_code_is_diagonal() {
        // SWAP(0,1): path [½,0,½,0] has qubits (0,1) in a singlet → −1;
        // path [½,1,½,0] has them in a triplet → +1. Checked both through
        // the codec compression and directly on the basis vectors.
        let codec = make_codec(4, 0, 2).unwrap();
        let m = exchange_logical_action(&codec, 0, 1).unwrap();
        assert!((m[(0, 0)] + cr(1.0)).norm() < 1e-12);
        assert!((m[(1, 1)] - cr(1.0)).norm() < 1e-12);
        assert!(m[(0, 1)].norm() < 1e-12 && m[(1, 0)].norm() < 1e-12);
        let unitarity = (m.adjoint() * &m - identity(2)).norm();
        assert!(unitarity < 1e-10);

        let swap = swap_matrix(4, 0, 1).unwrap();
        for (col, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let v: CVector = codec.isometry().column(col).into_owned();
            let diff = (&swap * &v - &v * cr(sign)).norm();
            assert!(diff < 1e-12, "basis vector {col} not a SWAP eigenvector");
        }
    }

    #[test]
    fn swaps_commute_with_collective_rotations() {
        let mut rng = seeded(77);
        let swap = swap_matrix(4, 1, 3).unwrap();
        for _ in 0..20 {
            let u = haar_su2_sample(&mut rng);
            let big = tensor_power(&u, 4).unwrap();
            let comm = (&swap * &big - &big * &swap).norm();
            assert!(comm < 1e-12);
        }
    }

    #[test]
    fn nearest_neighbor_exchanges_act_irreducibly() {
        // Commutant of {V†SWAP(i,i+1)V} on the (4, j=0) code is trivial:
        // the joint commutant equations have a one-dimensional solution
        // space (multiples of the identity).
        let codec = make_codec(4, 0, 2).unwrap();
        let gates: Vec<CMatrix> = (0..3)
            .map(|i| exchange_logical_action(&codec, i, i + 1).unwrap())
            .collect();
        // Stack the linear maps X ↦ GX − XG; the commutant is their joint
        // null space, computed from the Hermitian normal matrix.
        // (GX − XG)[r,s] has coefficient G[r,p]δ_{qs} − δ_{rp}G[q,s] on X[p,q].
        let d = 2usize;
        let mut normal = CMatrix::zeros(d * d, d * d);
        for g in &gates {
            let mut a = CMatrix::zeros(d * d, d * d);
            for r in 0..d {
                for s in 0..d {
                    for p in 0..d {
                        for q in 0..d {
                            let mut coeff = cr(0.0);
                            if s == q {
                                coeff += g[(r, p)];
                            }
                            if r == p {
                                coeff -= g[(q, s)];
                            }
                            a[(r * d + s, p * d + q)] = coeff;
                        }
                    }
                }
            }
            normal += a.adjoint() * a;
        }
        let (vals, _) = crate::qmath::hermitian_eigen(&normal);
        let near_zero = vals.iter().filter(|v| v.abs() < 1e-10).count();
        assert_eq!(near_zero, 1, "commutant dimension {near_zero} ≠ 1");
    }

    #[test]
    fn singlet_measurement_reference_values() {
        // Singlet on (0,1): probability 1.
        let codec = make_codec(2, 0, 1).unwrap();
        let singlet = encode(
            &codec,
            &PureState::new(DVector::from_element(1, cr(1.0))).unwrap(),
        )
        .unwrap();
        let m = singlet_measurement(&singlet, 0, 1).unwrap();
        assert!((m.prob_singlet - 1.0).abs() < 1e-12);
        assert!(m.post_complement.is_none());

        // |00⟩: symmetric, probability 0.
        let m = singlet_measurement(&PureState::basis(2, 0b00), 0, 1).unwrap();
        assert!(m.prob_singlet.abs() < 1e-14);
        assert!(m.post_singlet.is_none());

        // |01⟩: |⟨s|01⟩|² = 1/2.
        let m = singlet_measurement(&PureState::basis(2, 0b01), 0, 1).unwrap();
        assert!((m.prob_singlet - 0.5).abs() < 1e-12);
        let post = m.post_singlet.unwrap();
        assert!((post.amplitudes()[0b01] - post.amplitudes()[0b10] * cr(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn block_extract_on_encoded_and_basis_states() {
        let basis = schur_basis(4).unwrap();
        let codec = make_codec(4, 0, 2).unwrap();
        let mut rng = seeded(83);
        let logical = random_pure(2, &mut rng);
        let physical = encode(&codec, &logical).unwrap();
        let split = block_extract(&physical.to_density(), &basis, 0).unwrap();
        assert!((split.weight - 1.0).abs() < 1e-12);
        assert_eq!(split.rho_r.dim(), 1);
        assert!((split.rho_r.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(!split.correlated);
        let f = fidelity(&split.sigma_s, &logical.to_density()).unwrap();
        assert!(f >= 1.0 - 1e-10);

        // |0000⟩ sits entirely in j = 2: weight 1 there, empty elsewhere.
        let top = PureState::basis(4, 0).to_density();
        let split = block_extract(&top, &basis, 4).unwrap();
        assert!((split.weight - 1.0).abs() < 1e-12);
        assert!(matches!(block_extract(&top, &basis, 0), Err(Error::Domain(_))));
        assert!(matches!(block_extract(&top, &basis, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn sector_weights_sum_to_one_for_random_states() {
        let basis = schur_basis(4).unwrap();
        let mut rng = seeded(87);
        for _ in 0..5 {
            let rho = random_pure(16, &mut rng).to_density();
            let mut total = 0.0;
            for span in basis.sectors() {
                match block_extract(&rho, &basis, span.two_j) {
                    Ok(split) => total += split.weight,
                    Err(Error::Domain(_)) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn product_block_roundtrips_uncorrelated() {
        // n = 3, sector 2j = 1: dim_r = 2, multiplicity = 2. Assemble a
        // product block, pull it back, and extract it again.
        let basis = schur_basis(3).unwrap();
        let span = *basis.sector(1).unwrap();
        assert_eq!((span.dim_r, span.multiplicity), (2, 2));
        let mut rng = seeded(91);
        let rho_r = crate::qmath::rng::random_density(2, 2, &mut rng);
        let sigma_s = crate::qmath::rng::random_density(2, 2, &mut rng);
        let mut schur_side = CMatrix::zeros(8, 8);
        let prod = tensor_product(rho_r.matrix(), sigma_s.matrix()).unwrap();
        for r in 0..4 {
            for cidx in 0..4 {
                schur_side[(span.row_start + r, span.row_start + cidx)] = prod[(r, cidx)];
            }
        }
        let rho = DensityMatrix::new(basis.from_schur(&schur_side)).unwrap();
        let split = block_extract(&rho, &basis, 1).unwrap();
        assert!((split.weight - 1.0).abs() < 1e-12);
        assert!(!split.correlated);
        assert!((split.rho_r.matrix() - rho_r.matrix()).norm() < 1e-10);
        assert!((split.sigma_s.matrix() - sigma_s.matrix()).norm() < 1e-10);

        // An entangled block must be flagged.
        let mut bell = CMatrix::zeros(8, 8);
        let pairs = [(0usize, 0usize), (0, 3), (3, 0), (3, 3)];
        for (r, cidx) in pairs {
            bell[(span.row_start + r, span.row_start + cidx)] = cr(0.5);
        }
        let rho = DensityMatrix::new(basis.from_schur(&bell)).unwrap();
        let split = block_extract(&rho, &basis, 1).unwrap();
        assert!(split.correlated);
    }
}
