//! Clebsch–Gordan coefficients in the Condon–Shortley convention.
//!
//! Angular momenta are passed as doubled integers (`two_j`, `two_m`) so
//! half-integers stay exact. The coefficient is evaluated from the Racah
//! closed form with exact big-integer arithmetic: the square of the
//! coefficient is assembled as a rational number and only the final square
//! root is floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

fn is_valid_jm(two_j: u32, two_m: i32) -> bool {
    two_m.unsigned_abs() <= two_j && (two_j as i64 + two_m as i64) % 2 == 0
}

fn triangle_ok(two_j1: u32, two_j2: u32, two_j: u32) -> bool {
    let lo = two_j1.abs_diff(two_j2);
    let hi = two_j1 + two_j2;
    two_j >= lo && two_j <= hi && (two_j1 + two_j2 + two_j).is_multiple_of(2)
}

/// `⟨j1 m1; j2 m2 | j m⟩`.
///
/// Returns 0 when `m ≠ m1 + m2`; errors on an inadmissible triangle or
/// invalid `(j, m)` pairs.
pub fn clebsch_gordan(
    two_j1: u32,
    two_j2: u32,
    two_j: u32,
    two_m1: i32,
    two_m2: i32,
    two_m: i32,
) -> Result<f64> {
    if !is_valid_jm(two_j1, two_m1) || !is_valid_jm(two_j2, two_m2) || !is_valid_jm(two_j, two_m) {
        return Err(Error::Domain(format!(
            "invalid (j,m) pair among 2j={two_j1},{two_j2},{two_j} 2m={two_m1},{two_m2},{two_m}"
        )));
    }
    if !triangle_ok(two_j1, two_j2, two_j) {
        return Err(Error::Domain(format!(
            "triangle violated: 2j1={two_j1}, 2j2={two_j2}, 2j={two_j}"
        )));
    }
    if two_m1 + two_m2 != two_m {
        return Ok(0.0);
    }

    // All of these are genuine integers for admissible quantum numbers.
    let j1p_m1 = (two_j1 as i64 + two_m1 as i64) / 2;
    let j1m_m1 = (two_j1 as i64 - two_m1 as i64) / 2;
    let j2p_m2 = (two_j2 as i64 + two_m2 as i64) / 2;
    let j2m_m2 = (two_j2 as i64 - two_m2 as i64) / 2;
    let jp_m = (two_j as i64 + two_m as i64) / 2;
    let jm_m = (two_j as i64 - two_m as i64) / 2;
    let j1pj2_mj = (two_j1 as i64 + two_j2 as i64 - two_j as i64) / 2;
    let j1mj2_pj = (two_j1 as i64 - two_j2 as i64 + two_j as i64) / 2;
    let mj1pj2_pj = (-(two_j1 as i64) + two_j2 as i64 + two_j as i64) / 2;
    let jtot_p1 = (two_j1 as i64 + two_j2 as i64 + two_j as i64) / 2 + 1;
    let j_mj2_pm1 = (two_j as i64 - two_j2 as i64 + two_m1 as i64) / 2;
    let j_mj1_mm2 = (two_j as i64 - two_j1 as i64 - two_m2 as i64) / 2;

    // Prefactor²: (2j+1)·Δ(j1,j2,j)·(j1±m1)!(j2±m2)!(j±m)!.
    let mut num = BigInt::from(two_j as i64 + 1);
    num *= factorial(j1pj2_mj);
    num *= factorial(j1mj2_pj);
    num *= factorial(mj1pj2_pj);
    num *= factorial(j1p_m1);
    num *= factorial(j1m_m1);
    num *= factorial(j2p_m2);
    num *= factorial(j2m_m2);
    num *= factorial(jp_m);
    num *= factorial(jm_m);
    let prefactor_sq = BigRational::new(num, factorial(jtot_p1));

    // Racah sum.
    let k_lo = 0i64.max(-j_mj2_pm1).max(-j_mj1_mm2);
    let k_hi = j1pj2_mj.min(j1m_m1).min(j2p_m2);
    let mut sum = BigRational::zero();
    let mut k = k_lo;
    while k <= k_hi {
        let mut den = factorial(k);
        den *= factorial(j1pj2_mj - k);
        den *= factorial(j1m_m1 - k);
        den *= factorial(j2p_m2 - k);
        den *= factorial(j_mj2_pm1 + k);
        den *= factorial(j_mj1_mm2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        k += 1;
    }
    if sum.is_zero() {
        return Ok(0.0);
    }
    let cg_sq = prefactor_sq * &sum * &sum;
    let magnitude = cg_sq.to_f64().expect("CG² fits in f64 at desk scale").sqrt();
    Ok(if sum.is_negative() { -magnitude } else { magnitude })
}
