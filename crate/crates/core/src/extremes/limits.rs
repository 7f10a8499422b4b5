//! Closed-form limit CDFs for normalized extremes.
//!
//! The nondegenerate limits are a unit-exponent Fréchet in the scale
//! `ell0` (the slope of F at 0+) and a unit-exponent negative Weibull in
//! the scale `ell1` (the slope of F at 1-). The degenerate limits that
//! appear when a slope vanishes or diverges are steps and constants.

use alloc::format;

use serde::{Deserialize, Serialize};

use super::ExtremesError;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum LimitSpec {
    /// 0 for x <= 0, exp(-ell0/x) for x > 0.
    Frechet { ell0: f64 },
    /// exp(ell1 * x) for x <= 0, 1 for x > 0.
    Weibull { ell1: f64 },
    /// 0 for x < 0, 1 for x >= 0 (diverging upper-tail slope).
    StepAtZero,
    /// Identically 1 (vanishing upper-tail slope).
    ConstOne,
    /// 0 for x <= 0, 1 for x > 0 (vanishing lower-tail slope).
    StepPositive,
    /// Identically 0 (diverging lower-tail slope).
    ConstZero,
}

impl LimitSpec {
    pub fn validate(&self) -> Result<(), ExtremesError> {
        match self {
            LimitSpec::Frechet { ell0 } if !(ell0.is_finite() && *ell0 > 0.0) => Err(
                ExtremesError::BadLimit(format!("frechet scale must be finite positive: {ell0}")),
            ),
            LimitSpec::Weibull { ell1 } if !(ell1.is_finite() && *ell1 > 0.0) => Err(
                ExtremesError::BadLimit(format!("weibull scale must be finite positive: {ell1}")),
            ),
            _ => Ok(()),
        }
    }
}

pub fn limit_cdf(spec: &LimitSpec, x: f64) -> f64 {
    match spec {
        LimitSpec::Frechet { ell0 } => {
            if x <= 0.0 {
                0.0
            } else {
                math::exp(-ell0 / x)
            }
        }
        LimitSpec::Weibull { ell1 } => {
            if x > 0.0 {
                1.0
            } else {
                math::exp(ell1 * x)
            }
        }
        LimitSpec::StepAtZero => {
            if x < 0.0 {
                0.0
            } else {
                1.0
            }
        }
        LimitSpec::ConstOne => 1.0,
        LimitSpec::StepPositive => {
            if x <= 0.0 {
                0.0
            } else {
                1.0
            }
        }
        LimitSpec::ConstZero => 0.0,
    }
}
