//! Reference-frame decoherence channels.
//!
//! Three families, matching the three ways a qubit decoheres between
//! inertial observers:
//!
//! 1. the boost channel — spin/momentum entanglement of a wavepacket under
//!    a known boost, built exactly by quadrature over Wigner rotations, or
//!    in the leading-order three-Kraus form with
//!    `Γ = (1 − √(1−v²))·Δ/v`;
//! 2. boost mixtures — a known boost axis with unknown speed, weighted by
//!    a discrete prior;
//! 3. twirls — a completely unknown frame orientation, averaged over the
//!    rotation group with a uniform prior, either exactly (projector onto
//!    the commutant by Schur-block replacement) or by Monte Carlo.
//!
//! Priors over the noncompact boost part are only ever user-supplied
//! discrete grids; nothing here integrates over unbounded rapidity.

use nalgebra::Vector3;

use crate::lorentz::{boost_from_velocity, wigner_rotation, FourVector};
use crate::qmath::{
    cr, identity, partial_trace_raw, pauli_x, pauli_y, rng::haar_su2_sample, rng::substream,
    tensor_power, CMatrix, DensityMatrix, QuantumChannel,
};
use crate::schur::SchurBasis;
use crate::wavepacket::GaussianPacket;
use crate::{Error, Result};

/// The approximate boost channel is a leading-order form; refuse Γ beyond.
pub const MAX_GAMMA: f64 = 0.5;
/// Exact collective twirls are refused above this register size.
pub const MAX_TWIRL_QUBITS: usize = 8;
/// Samples per Monte Carlo substream chunk.
const MC_CHUNK: u64 = 4096;

/// The decoherence strength of a z-boost on a spread-Δ packet.
#[derive(Debug, Clone, Copy)]
pub struct GammaParam {
    pub v: f64,
    pub delta: f64,
    pub gamma: f64,
}

/// `Γ = (1 − √(1−v²))·Δ/v`, evaluated in the algebraically equivalent
/// form `Δ·v/(1 + √(1−v²))` which stays accurate down to v → 0
/// (where Γ → vΔ/2).
pub fn gamma(v: f64, delta: f64) -> Result<GammaParam> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("boost speed v = {v} outside (0,1)")));
    }
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("spread delta = {delta} must be positive")));
    }
    let g = delta * v / (1.0 + (1.0 - v * v).sqrt());
    Ok(GammaParam {
        v,
        delta,
        gamma: g,
    })
}

/// Leading-order boost channel: Kraus mixture
/// `(1−Γ²/4)·ρ + (Γ²/8)(σx ρ σx + σy ρ σy)`.
pub fn boost_channel_approx(g: &GammaParam) -> Result<QuantumChannel> {
    if g.gamma >= MAX_GAMMA {
        return Err(Error::Regime(format!(
            "gamma = {} outside the leading-order regime (< {MAX_GAMMA})",
            g.gamma
        )));
    }
    let g2 = g.gamma * g.gamma;
    QuantumChannel::new(
        vec![identity(2), pauli_x(), pauli_y()],
        Some(vec![1.0 - g2 / 4.0, g2 / 8.0, g2 / 8.0]),
    )
}

/// Exact boost channel: trace the momentum out of a boosted wavepacket.
/// One Kraus operator per quadrature node, `D^{1/2}(Ω(Λ_v, p))` weighted
/// by the measure-weighted packet density (normalized on the grid, so the
/// channel is trace preserving to machine precision).
pub fn boost_channel_exact(v: f64, packet: &GaussianPacket) -> Result<QuantumChannel> {
    boost_channel_exact_with_nodes(v, packet, packet.nodes_per_axis())
}

pub fn boost_channel_exact_with_nodes(
    v: f64,
    packet: &GaussianPacket,
    nodes: usize,
) -> Result<QuantumChannel> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("boost speed v = {v} outside (0,1)")));
    }
    let lambda = boost_from_velocity(Vector3::new(0.0, 0.0, v))?;
    let grid = packet.measure_weights(nodes);
    let mut kraus = Vec::with_capacity(grid.len());
    let mut weights = Vec::with_capacity(grid.len());
    for (p, w) in grid {
        let momentum = FourVector::massive(p);
        let rot = wigner_rotation(&lambda, &momentum).map_err(|e| {
            Error::Accuracy(format!("Wigner rotation failed on a quadrature node: {e}"))
        })?;
        let d = CMatrix::from_fn(2, 2, |r, c| rot.su2()[(r, c)]);
        kraus.push(d);
        weights.push(w);
    }
    QuantumChannel::new(kraus, Some(weights))
}

/// Discrete prior over boost speeds.
#[derive(Debug, Clone)]
pub struct BoostPrior {
    grid: Vec<(f64, f64)>,
}

impl BoostPrior {
    /// Strict constructor: weights must already sum to 1 within 1e−12.
    pub fn new(grid: Vec<(f64, f64)>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::Domain("prior needs at least one grid point".into()));
        }
        for &(v, w) in &grid {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("prior speed {v} outside (0,1)")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Domain("prior weights must be nonnegative".into()));
            }
        }
        let total: f64 = grid.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("prior weights sum to {total}, not 1")));
        }
        Ok(BoostPrior { grid })
    }

    /// Rescale arbitrary nonnegative weights to a normalized prior.
    pub fn normalized(grid: Vec<(f64, f64)>) -> Result<Self> {
        let total: f64 = grid.iter().map(|p| p.1).sum();
        if !(total > 0.0) {
            return Err(Error::Domain("prior weights must have positive sum".into()));
        }
        BoostPrior::new(grid.into_iter().map(|(v, w)| (v, w / total)).collect())
    }

    pub fn point_mass(v: f64) -> Result<Self> {
        BoostPrior::new(vec![(v, 1.0)])
    }

    pub fn uniform(speeds: &[f64]) -> Result<Self> {
        let w = 1.0 / speeds.len() as f64;
        BoostPrior::new(speeds.iter().map(|&v| (v, w)).collect())
    }

    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }
}

/// Mixture of leading-order boost channels over a prior on v.
pub fn boost_mixture(prior: &BoostPrior, delta: f64) -> Result<QuantumChannel> {
    let mut kraus = Vec::new();
    let mut weights = Vec::new();
    for &(v, w) in prior.grid() {
        let g = gamma(v, delta)?;
        let component = boost_channel_approx(&g)?;
        let cw = component.weights().expect("approx channel is weighted");
        for (k, &kw) in component.kraus_ops().iter().zip(cw) {
            kraus.push(k.clone());
            weights.push(w * kw);
        }
    }
    QuantumChannel::new(kraus, Some(weights))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwirlMethod {
    /// Exact projector onto the commutant (Schur-block replacement).
    Exact,
    /// Haar Monte Carlo with chunked substreams of the given seed.
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct TwirlResult {
    pub output: DensityMatrix,
    pub method: TwirlMethod,
    /// `3/√samples` for Monte Carlo; absent for the exact projector.
    pub stat_tol: Option<f64>,
}

/// Average a single qubit over all frame orientations. The exact result
/// is the completely mixed state regardless of the input.
pub fn twirl_single(rho: &DensityMatrix, method: TwirlMethod) -> Result<TwirlResult> {
    if rho.dim() != 2 {
        return Err(Error::Shape("twirl_single expects a qubit state".into()));
    }
    match method {
        TwirlMethod::Exact => Ok(TwirlResult {
            output: DensityMatrix::maximally_mixed(2),
            method,
            stat_tol: None,
        }),
        TwirlMethod::MonteCarlo { samples, seed } => {
            let output = monte_carlo_twirl(rho.matrix(), 1, samples, seed)?;
            Ok(TwirlResult {
                output,
                method,
                stat_tol: Some(3.0 / (samples as f64).sqrt()),
            })
        }
    }
}

/// Average an N-qubit state over collective rotations `u^{⊗N}`.
///
/// Exact method: in the coupled basis, each isotypic block is replaced by
/// `I/(2j+1) ⊗ tr_R(block)` and cross-sector coherence is erased — the
/// literal projector onto the commutant of the collective action.
pub fn collective_twirl(
    rho: &DensityMatrix,
    schur: &SchurBasis,
    method: TwirlMethod,
) -> Result<TwirlResult> {
    if rho.dim() != schur.dim() {
        return Err(Error::Shape(format!(
            "state dim {} != basis dim {}",
            rho.dim(),
            schur.dim()
        )));
    }
    match method {
        TwirlMethod::Exact => {
            if schur.n() > MAX_TWIRL_QUBITS {
                return Err(Error::Size(format!(
                    "exact twirl capped at {MAX_TWIRL_QUBITS} qubits, got {}",
                    schur.n()
                )));
            }
            let full = schur.to_schur(rho.matrix());
            let mut out = CMatrix::zeros(rho.dim(), rho.dim());
            for span in schur.sectors() {
                let d = span.dim();
                let block = full
                    .view((span.row_start, span.row_start), (d, d))
                    .into_owned();
                let sigma = partial_trace_raw(&block, &[1], &[span.dim_r, span.multiplicity]);
                let fill = cr(1.0 / span.dim_r as f64);
                for m in 0..span.dim_r {
                    for p in 0..span.multiplicity {
                        for q in 0..span.multiplicity {
                            let r = span.row_start + m * span.multiplicity + p;
                            let c = span.row_start + m * span.multiplicity + q;
                            out[(r, c)] = sigma[(p, q)] * fill;
                        }
                    }
                }
            }
            let back = schur.from_schur(&out);
            let sym = (&back + back.adjoint()) * cr(0.5);
            Ok(TwirlResult {
                output: DensityMatrix::new(sym)?,
                method,
                stat_tol: None,
            })
        }
        TwirlMethod::MonteCarlo { samples, seed } => {
            let output = monte_carlo_twirl(rho.matrix(), schur.n(), samples, seed)?;
            Ok(TwirlResult {
                output,
                method,
                stat_tol: Some(3.0 / (samples as f64).sqrt()),
            })
        }
    }
}

/// Mean of `u^{⊗n} ρ u^{†⊗n}` over Haar samples, chunked into fixed-size
/// substreams so the result depends only on `(seed, samples)`.
fn monte_carlo_twirl(rho: &CMatrix, n: usize, samples: u64, seed: u64) -> Result<DensityMatrix> {
    if samples == 0 {
        return Err(Error::Domain("Monte Carlo twirl needs at least one sample".into()));
    }
    let dim = rho.nrows();
    let mut acc = CMatrix::zeros(dim, dim);
    let chunks = samples.div_ceil(MC_CHUNK);
    for chunk in 0..chunks {
        let mut rng = substream(seed, chunk);
        let in_chunk = MC_CHUNK.min(samples - chunk * MC_CHUNK);
        let mut chunk_acc = CMatrix::zeros(dim, dim);
        for _ in 0..in_chunk {
            let u = haar_su2_sample(&mut rng);
            let big = tensor_power(&u, n)?;
            chunk_acc += &big * rho * big.adjoint();
        }
        acc += chunk_acc;
    }
    acc /= cr(samples as f64);
    let sym = (&acc + acc.adjoint()) * cr(0.5);
    DensityMatrix::new(sym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::rng::{random_density, random_pure, seeded};
    use crate::qmath::{apply_channel, choi_check, choi_state, fidelity, trace_distance, PureState};
    use crate::schur::schur_basis;
    use crate::wavepacket::make_packet;
    use nalgebra::DVector;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn gamma_reference_values() {
        // (1 − √(1 − 0.36))·0.01/0.6 = 0.2·0.01/0.6 = 1/300.
        let g = gamma(0.6, 0.01).unwrap();
        assert!(close(g.gamma, 1.0 / 300.0, 1e-16));
        // (1 − 0.6)·0.05/0.8 = 0.025.
        let g = gamma(0.8, 0.05).unwrap();
        assert!(close(g.gamma, 0.025, 1e-16));
    }

    #[test]
    fn gamma_stable_form_matches_naive_form() {
        for &v in &[0.01f64, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let naive = (1.0 - (1.0 - v * v).sqrt()) * 0.07 / v;
            let g = gamma(v, 0.07).unwrap().gamma;
            assert!((g - naive).abs() <= 1e-14, "v = {v}: {g} vs {naive}");
        }
    }

    #[test]
    fn gamma_small_velocity_limit() {
        let v = 1e-9;
        let g = gamma(v, 0.05).unwrap().gamma;
        assert!((g / (0.05 * v / 2.0) - 1.0).abs() < 1e-12);
        assert!(matches!(gamma(0.0, 0.05), Err(Error::Domain(_))));
        assert!(matches!(gamma(1.0, 0.05), Err(Error::Domain(_))));
        assert!(matches!(gamma(0.5, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn approx_channel_reference_states() {
        let g = GammaParam {
            v: 0.5,
            delta: 0.1,
            gamma: 0.1,
        };
        let ch = boost_channel_approx(&g).unwrap();
        assert!(choi_check(&ch).passes());

        let out = apply_channel(&ch, &PureState::basis(1, 0).to_density()).unwrap();
        assert!(close(out.matrix()[(0, 0)].re, 0.9975, 1e-15));
        assert!(close(out.matrix()[(1, 1)].re, 0.0025, 1e-15));

        let plus = PureState::new_normalized(DVector::from_element(2, cr(1.0))).unwrap();
        let out = apply_channel(&ch, &plus.to_density()).unwrap();
        assert!(close(out.matrix()[(0, 1)].re, 0.49875, 1e-15));

        // Unital: I/2 is a fixed point.
        let mixed = DensityMatrix::maximally_mixed(2);
        let out = apply_channel(&ch, &mixed).unwrap();
        assert!(trace_distance(&out, &mixed).unwrap() < 1e-15);
    }

    #[test]
    fn approx_channel_regime_guard() {
        // (1 − √(1−0.81))·1.0/0.9 ≈ 0.627 ≥ 0.5.
        let g = gamma(0.9, 1.0).unwrap();
        assert!(g.gamma >= MAX_GAMMA);
        assert!(matches!(boost_channel_approx(&g), Err(Error::Regime(_))));
    }

    #[test]
    fn exact_channel_narrow_packet_is_identity() {
        // Momentum-eigenstate limit: at Δ → 0 only the mean momentum
        // survives, and the mean is at rest, so the channel is trivial.
        let packet = make_packet(1e-4).unwrap();
        let ch = boost_channel_exact_with_nodes(0.5, &packet, 16).unwrap();
        assert!(choi_check(&ch).passes());
        let d = trace_distance(
            &choi_state(&ch).unwrap(),
            &choi_state(&QuantumChannel::identity(2)).unwrap(),
        )
        .unwrap();
        assert!(d <= 1e-6, "Choi distance to identity {d:e}");
    }

    #[test]
    fn exact_channel_matches_leading_order_form() {
        let v = 0.5;
        let delta = 0.05;
        let packet = make_packet(delta).unwrap();
        let exact = boost_channel_exact_with_nodes(v, &packet, 24).unwrap();
        assert!(choi_check(&exact).passes());
        let approx = boost_channel_approx(&gamma(v, delta).unwrap()).unwrap();

        let zero = PureState::basis(1, 0).to_density();
        let d_state = trace_distance(
            &apply_channel(&exact, &zero).unwrap(),
            &apply_channel(&approx, &zero).unwrap(),
        )
        .unwrap();
        assert!(d_state <= 1e-4, "state mismatch {d_state:e}");

        // Halving Δ shrinks the Choi discrepancy by well over 8×.
        let discrepancy = |delta: f64| {
            let packet = make_packet(delta).unwrap();
            let exact = boost_channel_exact_with_nodes(v, &packet, 24).unwrap();
            let approx = boost_channel_approx(&gamma(v, delta).unwrap()).unwrap();
            trace_distance(&choi_state(&exact).unwrap(), &choi_state(&approx).unwrap()).unwrap()
        };
        let coarse = discrepancy(delta);
        let fine = discrepancy(delta / 2.0);
        assert!(coarse <= 1e-4, "Choi discrepancy {coarse:e}");
        assert!(coarse / fine >= 8.0, "scaling ratio {}", coarse / fine);
    }

    #[test]
    fn mixture_of_point_mass_equals_component() {
        let delta = 0.01;
        let prior = BoostPrior::point_mass(0.4).unwrap();
        let mix = boost_mixture(&prior, delta).unwrap();
        let single = boost_channel_approx(&gamma(0.4, delta).unwrap()).unwrap();
        let d = trace_distance(&choi_state(&mix).unwrap(), &choi_state(&single).unwrap()).unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn mixture_matches_direct_average_and_is_unital() {
        let delta = 0.01;
        let speeds: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let prior = BoostPrior::uniform(&speeds).unwrap();
        let mix = boost_mixture(&prior, delta).unwrap();
        assert!(choi_check(&mix).passes());

        // Direct average oracle on |0⟩⟨0|: population 1 − Γ²/4 + Γ²/8·0…
        // computed per speed from the closed form.
        let zero = PureState::basis(1, 0).to_density();
        let out = apply_channel(&mix, &zero).unwrap();
        let mut expect_top = 0.0;
        for &v in &speeds {
            let g = gamma(v, delta).unwrap().gamma;
            expect_top += (1.0 - g * g / 4.0 + g * g / 8.0 * 0.0) / speeds.len() as f64;
        }
        assert!(close(out.matrix()[(0, 0)].re, expect_top, 1e-14));

        let mixed = DensityMatrix::maximally_mixed(2);
        let out = apply_channel(&mix, &mixed).unwrap();
        assert!(trace_distance(&out, &mixed).unwrap() < 1e-15);
    }

    #[test]
    fn prior_validation() {
        assert!(matches!(
            BoostPrior::new(vec![(0.5, 0.7)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            BoostPrior::new(vec![(1.5, 1.0)]),
            Err(Error::Domain(_))
        ));
        let p = BoostPrior::normalized(vec![(0.2, 2.0), (0.4, 2.0)]).unwrap();
        assert!(close(p.grid()[0].1, 0.5, 1e-15));
    }

    #[test]
    fn single_qubit_twirl_exact_and_monte_carlo() {
        let mut rng = seeded(101);
        let mixed = DensityMatrix::maximally_mixed(2);
        for _ in 0..5 {
            let rho = random_density(2, 2, &mut rng);
            let exact = twirl_single(&rho, TwirlMethod::Exact).unwrap();
            assert!(trace_distance(&exact.output, &mixed).unwrap() <= 1e-15);
        }
        let rho = PureState::basis(1, 0).to_density();
        let mc = twirl_single(
            &rho,
            TwirlMethod::MonteCarlo {
                samples: 100_000,
                seed: 7,
            },
        )
        .unwrap();
        let tol = mc.stat_tol.unwrap();
        assert!(close(tol, 3.0 / (1e5f64).sqrt(), 1e-12));
        assert!(trace_distance(&mc.output, &mixed).unwrap() <= tol);
    }

    #[test]
    fn singlet_is_fixed_by_collective_twirl() {
        let basis = schur_basis(2).unwrap();
        let mut v = DVector::from_element(4, cr(0.0));
        v[0b01] = cr(std::f64::consts::FRAC_1_SQRT_2);
        v[0b10] = cr(-std::f64::consts::FRAC_1_SQRT_2);
        let singlet = PureState::new(v).unwrap().to_density();
        let out = collective_twirl(&singlet, &basis, TwirlMethod::Exact).unwrap();
        assert!(fidelity(&out.output, &singlet).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn twirl_of_product_zero_state_is_normalized_triplet_projector() {
        let basis = schur_basis(2).unwrap();
        let zero2 = PureState::basis(2, 0).to_density();
        let out = collective_twirl(&zero2, &basis, TwirlMethod::Exact)
            .unwrap()
            .output;
        // Triplet projector / 3 = (I − |s⟩⟨s|)/3.
        let mut s = DVector::from_element(4, cr(0.0));
        s[0b01] = cr(std::f64::consts::FRAC_1_SQRT_2);
        s[0b10] = cr(-std::f64::consts::FRAC_1_SQRT_2);
        let singlet = PureState::new(s).unwrap().to_density();
        let expect = (identity(4) - singlet.matrix()) * cr(1.0 / 3.0);
        let expect = DensityMatrix::new(expect).unwrap();
        assert!(trace_distance(&out, &expect).unwrap() < 1e-14);

        // Monte Carlo lands on the same state within its tolerance.
        let mc = collective_twirl(
            &zero2,
            &basis,
            TwirlMethod::MonteCarlo {
                samples: 20_000,
                seed: 11,
            },
        )
        .unwrap();
        assert!(trace_distance(&mc.output, &expect).unwrap() <= mc.stat_tol.unwrap());
    }

    #[test]
    fn exact_twirl_is_idempotent() {
        let basis = schur_basis(3).unwrap();
        let mut rng = seeded(107);
        for _ in 0..5 {
            let rho = random_density(8, 3, &mut rng);
            let once = collective_twirl(&rho, &basis, TwirlMethod::Exact).unwrap().output;
            let twice = collective_twirl(&once, &basis, TwirlMethod::Exact).unwrap().output;
            let diff = (once.matrix() - twice.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn twirl_is_collectively_covariant_and_permutation_symmetric() {
        let basis = schur_basis(3).unwrap();
        let mut rng = seeded(109);
        for _ in 0..5 {
            let rho = random_density(8, 2, &mut rng);
            let twirled = collective_twirl(&rho, &basis, TwirlMethod::Exact).unwrap().output;

            // Haar invariance: twirl(uρu†) = twirl(ρ) for collective u.
            let u = haar_su2_sample(&mut rng);
            let big = tensor_power(&u, 3).unwrap();
            let rotated = DensityMatrix::new({
                let m = &big * rho.matrix() * big.adjoint();
                (&m + m.adjoint()) * cr(0.5)
            })
            .unwrap();
            let out = collective_twirl(&rotated, &basis, TwirlMethod::Exact).unwrap().output;
            assert!(trace_distance(&out, &twirled).unwrap() < 1e-10);

            // Permutation commutation: twirl(PρP†) = P·twirl(ρ)·P†.
            let perm = crate::qmath::qubit_permutation_matrix(3, &[2, 0, 1]).unwrap();
            let permuted =
                DensityMatrix::new(&perm * rho.matrix() * perm.adjoint()).unwrap();
            let lhs = collective_twirl(&permuted, &basis, TwirlMethod::Exact).unwrap().output;
            let rhs = DensityMatrix::new(&perm * twirled.matrix() * perm.adjoint()).unwrap();
            assert!(trace_distance(&lhs, &rhs).unwrap() < 1e-10);
        }
    }

    #[test]
    fn monte_carlo_matches_exact_within_tolerance() {
        let basis = schur_basis(2).unwrap();
        let mut rng = seeded(113);
        for trial in 0..20 {
            let rho = if trial % 2 == 0 {
                random_density(4, 2, &mut rng)
            } else {
                random_pure(4, &mut rng).to_density()
            };
            let exact = collective_twirl(&rho, &basis, TwirlMethod::Exact).unwrap().output;
            let mc = collective_twirl(
                &rho,
                &basis,
                TwirlMethod::MonteCarlo {
                    samples: 2000,
                    seed: 1000 + trial,
                },
            )
            .unwrap();
            let d = trace_distance(&mc.output, &exact).unwrap();
            assert!(d <= mc.stat_tol.unwrap(), "trial {trial}: {d}");
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_for_fixed_seed() {
        let basis = schur_basis(2).unwrap();
        let rho = PureState::basis(2, 0b01).to_density();
        let method = TwirlMethod::MonteCarlo {
            samples: 5000,
            seed: 99,
        };
        let a = collective_twirl(&rho, &basis, method).unwrap().output;
        let b = collective_twirl(&rho, &basis, method).unwrap().output;
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn exact_twirl_size_cap() {
        let basis = schur_basis(9).unwrap();
        let rho = DensityMatrix::maximally_mixed(512);
        assert!(matches!(
            collective_twirl(&rho, &basis, TwirlMethod::Exact),
            Err(Error::Size(_))
        ));
    }
}
