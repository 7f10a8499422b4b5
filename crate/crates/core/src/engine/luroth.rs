//! The iid Lüroth ratio law and its closed forms.
//!
//! Ratios take values h = 2, 3, ... with mass 1/(h(h-1)) and tail
//! P(R >= t) = 1/(ceil(t) - 1) for t > 1. Sampling is one floor:
//! R = floor(1/U) + 1 with U uniform.
//!
//! The unit chain (phi = 1, q = 0, uniform F) has the shifted law
//! P(R = h) = 1/(h(h+1)) on h >= 1; its closed forms live here too since
//! both serve as finite-n oracles for the extreme-value experiments.

use alloc::vec::Vec;

use super::EngineError;
use crate::math;
use crate::rng::PathRng;

/// P(R >= t) = 1/(ceil(t) - 1), defined for t > 1.
pub fn luroth_tail(t: f64) -> Result<f64, EngineError> {
    if !(t > 1.0) {
        return Err(EngineError::TailDomain(t));
    }
    Ok(1.0 / (math::ceil(t) - 1.0))
}

/// P(R = h) = 1/(h(h-1)) for h >= 2.
pub fn luroth_pmf(h: u64) -> f64 {
    debug_assert!(h >= 2);
    1.0 / (h as f64 * (h as f64 - 1.0))
}

/// R = floor(1/u) + 1 for u in (0, 1].
pub fn luroth_ratio_from_u(u: f64) -> f64 {
    debug_assert!(u > 0.0 && u <= 1.0);
    math::floor(1.0 / u) + 1.0
}

/// n iid draws from the Lüroth marginal.
pub fn sample_luroth_iid(n: u64, seed: u64) -> Vec<f64> {
    let mut rng = PathRng::from_seed(seed);
    (0..n)
        .map(|_| luroth_ratio_from_u(rng.next_u01()))
        .collect()
}

/// Exact finite-n law of the running maximum:
/// P(max <= t) = (1 - P(R > t))^n with P(R > t) = 1/floor(t) for t >= 1.
pub fn luroth_max_cdf(t: f64, n: u64) -> f64 {
    if t < 1.0 {
        return 0.0;
    }
    math::powi(1.0 - 1.0 / math::floor(t), n)
}

/// Exact finite-n law of the reciprocal minimum:
/// P(1/Z_n <= y) = P(all R >= 1/y) = (1/(ceil(1/y) - 1))^n, with the
/// convention that thresholds at or above 1/2 are certain (R >= 2 a.s.).
pub fn luroth_invmin_cdf(y: f64, n: u64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    let s = 1.0 / y;
    if s <= 2.0 {
        return 1.0;
    }
    math::powi(1.0 / (math::ceil(s) - 1.0), n)
}

/// Unit-chain marginal: P(R = h) = 1/(h(h+1)) for h >= 1.
pub fn unit_pmf(h: u64) -> f64 {
    debug_assert!(h >= 1);
    1.0 / (h as f64 * (h as f64 + 1.0))
}

/// Unit-chain tail: P(R > x) = 1/(floor(x) + 1) for x >= 1; 1 below.
pub fn unit_tail(x: f64) -> f64 {
    if x < 1.0 {
        return 1.0;
    }
    1.0 / (math::floor(x) + 1.0)
}

/// Exact finite-n law of the unit-chain running maximum.
pub fn unit_max_cdf(t: f64, n: u64) -> f64 {
    math::powi(1.0 - unit_tail(t), n)
}

/// Exact finite-n law of the unit-chain reciprocal minimum:
/// P(1/Z_n <= y) = (P(R >= 1/y))^n with P(R >= s) = 1/ceil(s) for s > 1.
pub fn unit_invmin_cdf(y: f64, n: u64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    let s = 1.0 / y;
    if s <= 1.0 {
        return 1.0;
    }
    math::powi(1.0 / math::ceil(s), n)
}
