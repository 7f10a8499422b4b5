//! Empirical CDF evaluation on a grid with binomial standard errors.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::limits::{limit_cdf, LimitSpec};
use super::ExtremesError;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub p: f64,
    pub se: f64,
}

/// Human-readable record of the normalization applied to the statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationNote {
    pub scale: String,
    pub shift: String,
}

impl NormalizationNote {
    pub fn none() -> Self {
        NormalizationNote {
            scale: String::from("none"),
            shift: String::from("none"),
        }
    }
}

/// Grid comparison of an empirical CDF against a reference CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfReport {
    pub grid: Vec<f64>,
    pub empirical: Vec<PointEstimate>,
    pub theoretical: Vec<f64>,
    /// Exact finite-n values when the sampled law has a closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_n_oracle: Option<Vec<f64>>,
    /// max over the grid of |empirical - theoretical|.
    pub ks_distance: f64,
    pub replicas: u64,
    pub n: u64,
    pub normalization: NormalizationNote,
}

pub(super) fn validate_grid(grid: &[f64]) -> Result<(), ExtremesError> {
    if grid.is_empty() || grid.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(ExtremesError::BadGrid);
    }
    Ok(())
}

pub(super) fn report_from_counts(
    grid: Vec<f64>,
    counts: &[u64],
    replicas: u64,
    theoretical: Vec<f64>,
    finite_n_oracle: Option<Vec<f64>>,
    n: u64,
    normalization: NormalizationNote,
) -> EcdfReport {
    let empirical: Vec<PointEstimate> = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / replicas as f64;
            PointEstimate {
                p,
                se: math::binomial_se(p, replicas),
            }
        })
        .collect();
    let ks_distance = empirical
        .iter()
        .zip(&theoretical)
        .map(|(e, t)| (e.p - t).abs())
        .fold(0.0, f64::max);
    EcdfReport {
        grid,
        empirical,
        theoretical,
        finite_n_oracle,
        ks_distance,
        replicas,
        n,
        normalization,
    }
}

/// Empirical CDF of raw samples on a grid against an arbitrary reference.
pub fn ecdf_against<F: Fn(f64) -> f64>(
    samples: &[f64],
    grid: &[f64],
    reference: F,
) -> Result<EcdfReport, ExtremesError> {
    if samples.is_empty() {
        return Err(ExtremesError::EmptySamples);
    }
    validate_grid(grid)?;
    let counts: Vec<u64> = grid
        .iter()
        .map(|&g| samples.iter().filter(|&&s| s <= g).count() as u64)
        .collect();
    let theoretical: Vec<f64> = grid.iter().map(|&g| reference(g)).collect();
    Ok(report_from_counts(
        grid.to_vec(),
        &counts,
        samples.len() as u64,
        theoretical,
        None,
        samples.len() as u64,
        NormalizationNote::none(),
    ))
}

/// Empirical CDF of raw samples against one of the limit families.
pub fn compare_to_limit(
    samples: &[f64],
    spec: &LimitSpec,
    grid: &[f64],
) -> Result<EcdfReport, ExtremesError> {
    spec.validate()?;
    ecdf_against(samples, grid, |x| limit_cdf(spec, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn ks_against_identity_reference() {
        // max deviation 2/3 - 0.4 at the middle grid point
        let rep = ecdf_against(&[0.2, 0.4, 0.9], &[0.2, 0.4, 0.9], |x| x).unwrap();
        assert!((rep.ks_distance - (2.0 / 3.0 - 0.4)).abs() < 1e-12);
        assert_eq!(rep.empirical[0].p, 1.0 / 3.0);
        assert_eq!(rep.empirical[2].p, 1.0);
    }

    #[test]
    fn ks_zero_iff_exact_match() {
        // degenerate samples vs a step limit, grid avoiding the atom
        let rep = compare_to_limit(&[0.5, 0.5, 0.5], &LimitSpec::StepAtZero, &[0.7, 0.9]).unwrap();
        assert_eq!(rep.ks_distance, 0.0);
        // a grid point below the samples but above 0 separates the two
        let rep2 = compare_to_limit(&[0.5, 0.5, 0.5], &LimitSpec::StepAtZero, &[0.2, 0.7]).unwrap();
        assert_eq!(rep2.ks_distance, 1.0);
    }

    #[test]
    fn sampling_the_limit_itself_is_close() {
        // Frechet(1) via inverse transform; DKW at n = 1e5 is ~0.004
        let mut rng = crate::rng::PathRng::from_seed(2024);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| -1.0 / crate::math::ln(rng.next_u01()))
            .collect();
        let grid: Vec<f64> = (1..=40).map(|i| i as f64 * 0.25).collect();
        let rep = compare_to_limit(&samples, &LimitSpec::Frechet { ell0: 1.0 }, &grid).unwrap();
        assert!(rep.ks_distance <= 0.01, "ks = {}", rep.ks_distance);
    }

    #[test]
    fn bad_inputs() {
        assert!(ecdf_against(&[], &[0.5], |x| x).is_err());
        assert!(ecdf_against(&[0.1], &[], |x| x).is_err());
        assert!(ecdf_against(&[0.1], &[0.5, 0.2], |x| x).is_err());
    }

    #[test]
    fn se_is_binomial() {
        let rep = ecdf_against(&vec![0.0; 64], &[0.5], |_| 0.5).unwrap();
        assert_eq!(rep.empirical[0].p, 1.0);
        assert_eq!(rep.empirical[0].se, 0.0);
    }
}
