//! Massless little group and the two-photon zero-helicity code.
//!
//! Helicity states pick up only a phase under Lorentz transformations:
//! `U(Λ)|p,±⟩ = e^{±iω(Λ,p)}|Λp,±⟩`, with ω the rotation angle in the
//! little-group factorization `W(Λ,p) = S(α,β)·R_z(ω)` at the fiducial
//! null momentum (1,0,0,1). S never touches the physical amplitudes; β is
//! kept as a diagnostic. Opposite-helicity pairs therefore cancel the
//! phase exactly, which is the whole encoding.
//!
//! Sign convention pinned by Λ = R_z(θ), p ∥ ẑ ⇒ ω = θ. With the
//! rotation convention of [`crate::lorentz`] the little-group element then
//! reads `w = [[e^{−iω/2}, ζ·e^{iω/2}], [0, e^{iω/2}]]`.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;

use crate::lorentz::{
    apply, boost_along, compose, inverse, rotation_about, FourVector, LorentzElement,
};
use crate::qmath::{c, cr, CVector, PureState};
use crate::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Lower-left magnitude above this fails the little-group certification.
pub const TRIANGULARITY_TOL: f64 = 1e-9;
/// Support outside the zero-helicity pair above this fails decoding.
pub const CODE_SUPPORT_TOL: f64 = 1e-12;

/// One photon at sharp momentum with helicity amplitudes (a₊, a₋).
#[derive(Debug, Clone)]
pub struct PhotonMode {
    momentum: FourVector,
    amp_plus: Complex64,
    amp_minus: Complex64,
}

impl PhotonMode {
    pub fn new(momentum: FourVector, amp_plus: Complex64, amp_minus: Complex64) -> Result<Self> {
        momentum.check_massless_shell()?;
        let norm = amp_plus.norm_sqr() + amp_minus.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "helicity amplitudes norm {norm} differs from 1"
            )));
        }
        Ok(PhotonMode {
            momentum,
            amp_plus,
            amp_minus,
        })
    }

    pub fn momentum(&self) -> &FourVector {
        &self.momentum
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.amp_plus, self.amp_minus)
    }
}

/// Two photons sharing one sharp momentum; amplitudes over the helicity
/// basis {++, +−, −+, −−}.
#[derive(Debug, Clone)]
pub struct TwoPhotonState {
    momentum: FourVector,
    amplitudes: [Complex64; 4],
}

impl TwoPhotonState {
    pub fn new(momentum: FourVector, amplitudes: [Complex64; 4]) -> Result<Self> {
        momentum.check_massless_shell()?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("amplitude norm {norm} differs from 1")));
        }
        Ok(TwoPhotonState {
            momentum,
            amplitudes,
        })
    }

    pub fn momentum(&self) -> &FourVector {
        &self.momentum
    }

    /// Amplitudes in the order ++, +−, −+, −−.
    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    /// Squared weight outside the zero-total-helicity pair {+−, −+}.
    pub fn nonzero_helicity_weight(&self) -> f64 {
        self.amplitudes[0].norm_sqr() + self.amplitudes[3].norm_sqr()
    }
}

/// Standard boost for a massless momentum: a z-boost scaling the fiducial
/// (1,0,0,1) to energy |k⃗|, then the rotation taking ẑ to k̂ about
/// ẑ×k̂ (about x̂ by π in the antipodal case).
pub fn massless_standard_boost(p: &FourVector) -> Result<LorentzElement> {
    p.check_massless_shell()?;
    let e = p.t;
    let z_boost = boost_along(Vector3::z(), e.ln())?;
    let dir = p.spatial() / e;
    let cos_angle = dir.z.clamp(-1.0, 1.0);
    if cos_angle > 1.0 - 1e-15 {
        return Ok(z_boost);
    }
    let rotation = if cos_angle < -1.0 + 1e-15 {
        rotation_about(Vector3::x(), std::f64::consts::PI)?
    } else {
        let axis = Vector3::z().cross(&dir);
        rotation_about(axis, cos_angle.acos())?
    };
    Ok(compose(&rotation, &z_boost))
}

/// The little-group element at `p`: phase angle ω, null-rotation
/// parameter ζ (diagnostic only), and the raw 2×2 matrix.
#[derive(Debug, Clone)]
pub struct LittleGroupElement {
    omega: f64,
    beta: Complex64,
    sl2: Matrix2<Complex64>,
}

impl LittleGroupElement {
    /// Helicity phase angle in [0, 2π).
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Null-rotation parameter; never applied to physical states.
    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn sl2(&self) -> &Matrix2<Complex64> {
        &self.sl2
    }

    /// Structural self-check: upper triangular, unit-modulus diagonal,
    /// consistent with the stored (ω, ζ) up to the double-cover sign.
    pub fn check(&self) -> Result<()> {
        if self.sl2[(1, 0)].norm() > TRIANGULARITY_TOL {
            return Err(Error::Degeneracy("not upper triangular".into()));
        }
        if (self.sl2[(0, 0)].norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Degeneracy("diagonal not unimodular".into()));
        }
        let q = c(0.0, self.omega / 2.0).exp();
        let model = Matrix2::new(q.conj(), self.beta * q, cr(0.0), q);
        let plus = (self.sl2 - model).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let minus = (self.sl2 + model).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if plus.min(minus) > 1e-10 {
            return Err(Error::Degeneracy("stored (ω, ζ) inconsistent with matrix".into()));
        }
        Ok(())
    }
}

/// `W(Λ,p) = L(Λp)⁻¹ Λ L(p)` in the double cover, certified upper
/// triangular (it must fix the fiducial null direction).
pub fn little_group_phase(lambda: &LorentzElement, p: &FourVector) -> Result<LittleGroupElement> {
    p.check_massless_shell()?;
    let q = apply(lambda, p);
    let lp = massless_standard_boost(p)?;
    let lq = massless_standard_boost(&q)?;
    let w = inverse(&lq).sl2() * lambda.sl2() * lp.sl2();
    if w[(1, 0)].norm() > TRIANGULARITY_TOL {
        return Err(Error::Degeneracy(format!(
            "little-group triangularity defect {:e} — standard-boost convention broken",
            w[(1, 0)].norm()
        )));
    }
    let omega = (2.0 * w[(1, 1)].arg()).rem_euclid(TAU);
    let beta = w[(0, 1)] / w[(1, 1)];
    Ok(LittleGroupElement {
        omega,
        beta,
        sl2: w,
    })
}

/// Transform a single photon: momentum to Λp, amplitudes by e^{±iω}.
pub fn apply_lorentz_mode(lambda: &LorentzElement, mode: &PhotonMode) -> Result<PhotonMode> {
    let lg = little_group_phase(lambda, &mode.momentum)?;
    let phase_plus = c(0.0, lg.omega).exp();
    PhotonMode::new(
        apply(lambda, &mode.momentum),
        mode.amp_plus * phase_plus,
        mode.amp_minus * phase_plus.conj(),
    )
}

/// Transform a common-momentum photon pair: each component picks up
/// e^{iω(σ₁+σ₂)}, so the zero-helicity pair is untouched.
pub fn apply_lorentz_pair(
    lambda: &LorentzElement,
    state: &TwoPhotonState,
) -> Result<TwoPhotonState> {
    let lg = little_group_phase(lambda, &state.momentum)?;
    let plus = c(0.0, lg.omega).exp();
    let minus = plus.conj();
    let a = &state.amplitudes;
    TwoPhotonState::new(
        apply(lambda, &state.momentum),
        [
            a[0] * plus * plus,
            a[1] * plus * minus,
            a[2] * minus * plus,
            a[3] * minus * minus,
        ],
    )
}

/// Encode one logical qubit into the invariant pair basis
/// |0⟩ ↦ (|+−⟩ + |−+⟩)/√2, |1⟩ ↦ (|+−⟩ − |−+⟩)/√2.
pub fn photon_codec_encode(logical: &PureState, p: &FourVector) -> Result<TwoPhotonState> {
    if logical.dim() != 2 {
        return Err(Error::Shape("photon codec encodes exactly one qubit".into()));
    }
    let l = logical.amplitudes();
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    TwoPhotonState::new(*p, [cr(0.0), (l[0] + l[1]) * s, (l[0] - l[1]) * s, cr(0.0)])
}

/// Invert the encoding; errors when the state leaks outside {+−, −+}.
pub fn photon_codec_decode(state: &TwoPhotonState) -> Result<PureState> {
    let outside = state.nonzero_helicity_weight();
    if outside > CODE_SUPPORT_TOL {
        return Err(Error::OutOfCode(format!(
            "weight {outside:e} outside the zero-helicity pair"
        )));
    }
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let a = &state.amplitudes;
    let v: CVector = nalgebra::DVector::from_vec(vec![(a[1] + a[2]) * s, (a[1] - a[2]) * s]);
    PureState::new_normalized(v)
}

fn balanced_bitstrings(n: u64) -> u128 {
    // C(n, n/2)
    let k = n / 2;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Whole qubits encodable in the zero-total-helicity sector of `n`
/// photons under collective phases: ⌊log₂ C(n, n/2)⌋.
pub fn dephasing_logical_count(n: usize) -> Result<u32> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "zero-helicity encoding needs an even photon count ≥ 2, got {n}"
        )));
    }
    Ok((balanced_bitstrings(n as u64) as u64).ilog2())
}

/// Qubit capacity of the zero-helicity sector before flooring:
/// log₂ C(n, n/2). This is the quantity with the n − ½log₂n asymptote.
pub fn dephasing_capacity_bits(n: usize) -> Result<f64> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "zero-helicity encoding needs an even photon count ≥ 2, got {n}"
        )));
    }
    Ok((balanced_bitstrings(n as u64) as f64).log2())
}
