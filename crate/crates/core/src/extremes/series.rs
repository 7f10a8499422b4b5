//! Prefix extremes of a ratio path.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ExtremesError;

/// Running maxima M_k and minima Z_k of R_1 ..= R_n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeSeries {
    pub n: u64,
    pub running_max: Vec<f64>,
    pub running_min: Vec<f64>,
}

pub fn extreme_series(ratios: &[f64]) -> Result<ExtremeSeries, ExtremesError> {
    if ratios.is_empty() {
        return Err(ExtremesError::EmptySamples);
    }
    let mut running_max = Vec::with_capacity(ratios.len());
    let mut running_min = Vec::with_capacity(ratios.len());
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for &r in ratios {
        hi = hi.max(r);
        lo = lo.min(r);
        running_max.push(hi);
        running_min.push(lo);
    }
    Ok(ExtremeSeries {
        n: ratios.len() as u64,
        running_max,
        running_min,
    })
}
