//! One step of the digit chain.
//!
//! With the previous digit mapped to `phi` and weight `q`, the partition
//! kernel is `delta(k) = phi (1+q) / (k + phi q)`, strictly decreasing in
//! the candidate digit `k`, with `delta(phi) = 1`. A draw `w` in `(0, 1]`
//! selects the digit `k` with `delta(k+1) < w <= delta(k)`, i.e.
//! `k = floor(phi (1+q) / w - phi q)` clamped below at `phi`. For `W`
//! distributed according to `F` the selected digit then carries mass
//! `F(delta(k)) - F(delta(k+1))`, which is exactly the chain's conditional
//! law; boundary draws belong to the right-closed cell.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::EngineError;

const TWO_POW_53: f64 = 9007199254740992.0;

/// delta(phi, k, q) in float arithmetic.
pub fn delta_kernel(phi: f64, k: f64, q: f64) -> f64 {
    phi * (1.0 + q) / (k + phi * q)
}

/// Digit selection at plain-integer scale.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ConditionalDigit {
    pub h_next: u64,
    /// delta(h_next + 1, q): open left end of the selected cell.
    pub alpha_end: f64,
    /// delta(h_next, q): closed right end; the ratio is its reciprocal.
    pub beta_end: f64,
}

/// Selects the digit for a draw `w`, with the cell endpoints.
///
/// This is the small-scale entry point (digits up to 2^53); the path
/// sampler uses the same rule through the exact and float state advances
/// below.
pub fn conditional_digit(
    phi_val: u64,
    q_val: f64,
    w: f64,
) -> Result<ConditionalDigit, EngineError> {
    if phi_val < 1 {
        return Err(EngineError::BadSystem(alloc::format!(
            "phi value must be >= 1, got {phi_val}"
        )));
    }
    if !(q_val.is_finite() && q_val >= 0.0) {
        return Err(EngineError::BadSystem(alloc::format!(
            "q value must be finite and >= 0, got {q_val}"
        )));
    }
    if !(w > 0.0 && w <= 1.0) {
        return Err(EngineError::BadW(w));
    }
    let phi = phi_val as f64;
    let h = float_digit(phi, q_val, w).ok_or(EngineError::NumericOverflow { step: 0 })?;
    if h > TWO_POW_53 {
        return Err(EngineError::NumericOverflow { step: 0 });
    }
    Ok(ConditionalDigit {
        h_next: h as u64,
        alpha_end: delta_kernel(phi, h + 1.0, q_val),
        beta_end: delta_kernel(phi, h, q_val),
    })
}

/// Digit selection in float arithmetic with a bracket correction.
///
/// The raw floor can land one off when `w` sits within an ulp of a cell
/// boundary; nudging against the float-evaluated kernel makes the result
/// agree exactly with the right-closed brackets `delta(k+1) < w <= delta(k)`
/// as seen in f64. Returns `None` on float overflow. Digits at or above
/// 2^53 are left where floor put them (floor is the identity there).
pub(super) fn float_digit(phi: f64, q: f64, w: f64) -> Option<f64> {
    let x = phi * (1.0 + q) / w - phi * q;
    if !x.is_finite() {
        return None;
    }
    let mut h = crate::math::floor(x).max(phi);
    if h < TWO_POW_53 {
        while h > phi && w > delta_kernel(phi, h, q) {
            h -= 1.0;
        }
        while w <= delta_kernel(phi, h + 1.0, q) {
            h += 1.0;
        }
    }
    Some(h)
}

/// w as an exact binary rational m * 2^e with odd m.
fn decompose(w: f64) -> (u64, i64) {
    debug_assert!(w > 0.0 && w.is_finite());
    let bits = w.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp_bits == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let tz = m.trailing_zeros() as i64;
    m >>= tz;
    e += tz;
    (m, e)
}

/// Exact digit via integer arithmetic: floor(phi (1+q) / w - phi q).
///
/// `w` and `q` are used as the binary rationals they are. The zero-q fast
/// path is a shift and a division; constant q goes through big rationals.
/// `cap` bounds the digit magnitude (checked on a float estimate first so
/// oversized shifts are never materialized).
pub(super) fn exact_digit(
    phi: &BigUint,
    q: f64,
    w: f64,
    cap: Option<f64>,
    step: u64,
) -> Result<BigUint, EngineError> {
    let phi_f = phi.to_f64().unwrap_or(f64::INFINITY);
    let estimate = phi_f * (1.0 + q) / w;
    if !estimate.is_finite() {
        return Err(EngineError::NumericOverflow { step });
    }
    if let Some(cap) = cap {
        if estimate > cap {
            return Err(EngineError::DigitCapExceeded { step });
        }
    }
    if q == 0.0 {
        let (m, e) = decompose(w);
        debug_assert!(e <= 0, "w <= 1 has a nonpositive exponent");
        Ok((phi << (-e) as u64) / BigUint::from(m))
    } else {
        let w_r = BigRational::from_float(w).expect("w is finite");
        let q_r = BigRational::from_float(q).expect("q is finite");
        let phi_r = BigRational::from_integer(BigInt::from(phi.clone()));
        let x = &phi_r * (BigRational::one() + &q_r) / w_r - phi_r * q_r;
        let floored = x.floor().to_integer();
        debug_assert!(!floored.is_negative());
        Ok(floored.magnitude().clone())
    }
}
