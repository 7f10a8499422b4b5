//! Monte Carlo experiments on normalized extremes.
//!
//! Replica `r` of an experiment derives its seed from the master seed, so
//! the replica loop can be split across workers arbitrarily; aggregation
//! adds integer counts, which makes results worker-count invariant.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ecdf::{
    report_from_counts, validate_grid, EcdfReport, NormalizationNote, PointEstimate,
};
use super::limits::{limit_cdf, LimitSpec};
use super::ExtremesError;
use crate::bounds::{
    gap_standard_error_product, thm6_band, verdict_for, GapEstimate, HypothesisFlags, Thm6Variant,
};
use crate::dist::{default_probe_sequence, ExtendedLimit};
use crate::engine::{
    luroth_invmin_cdf, luroth_max_cdf, sample_ratios, unit_invmin_cdf, unit_max_cdf,
    OppenheimSystem, PhiRule, QRule, SystemKind,
};
use crate::exec::ReplicaExecutor;
use crate::math;
use crate::rng::replica_seed;

const MIN_REPLICAS: u64 = 100;

/// Diverging normalization sequence presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleTag {
    SqrtN,
    N,
    NLogN,
}

impl ScaleTag {
    pub fn apply(&self, n: u64) -> f64 {
        let nf = n as f64;
        match self {
            ScaleTag::SqrtN => math::sqrt(nf),
            ScaleTag::N => nf,
            ScaleTag::NLogN => nf * math::ln(nf),
        }
    }
}

/// How the extreme statistic is normalized before the grid comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Normalization {
    /// M_n against thresholds x * n * ell0; limit exp(-1/x).
    FrechetScale { ell0: Option<f64> },
    /// max 1/R (= 1/Z_n) against thresholds 1 + x/(ell1 * n); limit e^x
    /// below zero. Ratios are at least 1, so thresholds near 1 only make
    /// sense for the reciprocal statistic.
    WeibullShift { ell1: Option<f64> },
    /// 1/Z_n against thresholds 1/p + x/n; the reference limit is the
    /// step at 0 (the experiment reports empirical values rather than
    /// asserting a family: normalization can flip the answer).
    InverseMin { p: u64 },
}

fn resolve_positive_scale(
    kind: &SystemKind,
    explicit: Option<f64>,
    lower_tail: bool,
) -> Result<f64, ExtremesError> {
    if let Some(v) = explicit {
        if !(v.is_finite() && v > 0.0) {
            return Err(ExtremesError::BadThreshold(format!(
                "normalization constant must be finite positive, got {v}"
            )));
        }
        return Ok(v);
    }
    let tails = kind
        .dist()
        .estimate_tail_limits(&default_probe_sequence())?;
    let limit = if lower_tail {
        tails.ell0_plus
    } else {
        tails.ell1_minus
    };
    match limit {
        ExtendedLimit::Finite(v) if v > 0.0 => Ok(v),
        ExtendedLimit::Finite(_) => Err(ExtremesError::ScaleUndetermined("zero".into())),
        ExtendedLimit::Infinite => Err(ExtremesError::ScaleUndetermined("infinite".into())),
        ExtendedLimit::Undetermined => Err(ExtremesError::ScaleUndetermined("undetermined".into())),
    }
}

fn is_unit_chain(system: &OppenheimSystem) -> bool {
    system.phi == PhiRule::Unit
        && system.q == QRule::Zero
        && system.dist == crate::dist::DistributionSpec::Uniform
}

/// Runs a per-replica job that yields one indicator per threshold, plus a
/// trailing failure slot.
fn accumulate_indicators(
    kind: &SystemKind,
    n: u64,
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
    stat: &(dyn Fn(&[f64]) -> f64 + Sync),
    thresholds: &[f64],
) -> Result<Vec<u64>, ExtremesError> {
    let slots = thresholds.len();
    let job = move |replica: u64| -> Vec<u64> {
        let mut counts = vec![0u64; slots + 1];
        match sample_ratios(kind, n, replica_seed(master_seed, replica)) {
            Ok(ratios) => {
                let s = stat(&ratios);
                for (i, &t) in thresholds.iter().enumerate() {
                    if s <= t {
                        counts[i] = 1;
                    }
                }
            }
            Err(_) => counts[slots] = 1,
        }
        counts
    };
    let counts = exec.accumulate(replicas, &job);
    if counts[slots] > 0 {
        return Err(ExtremesError::ReplicaFailed {
            failures: counts[slots],
        });
    }
    Ok(counts[..slots].to_vec())
}

fn running_max(ratios: &[f64]) -> f64 {
    ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn reciprocal_max(ratios: &[f64]) -> f64 {
    ratios
        .iter()
        .map(|r| 1.0 / r)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Simulates `replicas` paths of length `n`, normalizes the extreme
/// statistic, and reports its empirical CDF on `grid` against the matching
/// limit. The Lüroth and unit presets also get the exact finite-n law.
pub fn max_limit_experiment(
    kind: &SystemKind,
    n: u64,
    replicas: u64,
    normalization: &Normalization,
    grid: &[f64],
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<EcdfReport, ExtremesError> {
    kind.validate()?;
    validate_grid(grid)?;
    if replicas < MIN_REPLICAS {
        return Err(ExtremesError::TooFewReplicas(MIN_REPLICAS));
    }
    if n == 0 {
        return Err(ExtremesError::Engine(crate::engine::EngineError::EmptyPath));
    }

    let nf = n as f64;
    let (thresholds, use_reciprocal, theoretical, note): (Vec<f64>, bool, Vec<f64>, _) =
        match normalization {
            Normalization::FrechetScale { ell0 } => {
                let ell0 = resolve_positive_scale(kind, *ell0, true)?;
                let thresholds: Vec<f64> = grid.iter().map(|&x| x * nf * ell0).collect();
                let theoretical = grid
                    .iter()
                    .map(|&x| limit_cdf(&LimitSpec::Frechet { ell0: 1.0 }, x))
                    .collect();
                let note = NormalizationNote {
                    scale: format!("threshold = x * n * ell0, ell0 = {ell0}"),
                    shift: String::from("none"),
                };
                (thresholds, false, theoretical, note)
            }
            Normalization::WeibullShift { ell1 } => {
                let ell1 = resolve_positive_scale(kind, *ell1, false)?;
                let thresholds: Vec<f64> = grid.iter().map(|&x| 1.0 + x / (ell1 * nf)).collect();
                let theoretical = grid
                    .iter()
                    .map(|&x| limit_cdf(&LimitSpec::Weibull { ell1: 1.0 }, x))
                    .collect();
                let note = NormalizationNote {
                    scale: String::from("statistic = max 1/R"),
                    shift: format!("threshold = 1 + x / (ell1 * n), ell1 = {ell1}"),
                };
                (thresholds, true, theoretical, note)
            }
            Normalization::InverseMin { p } => {
                if *p < 1 {
                    return Err(ExtremesError::BadThreshold(
                        "inverse-min shift needs p >= 1".into(),
                    ));
                }
                let pf = *p as f64;
                let thresholds: Vec<f64> = grid.iter().map(|&x| 1.0 / pf + x / nf).collect();
                let theoretical = grid
                    .iter()
                    .map(|&x| limit_cdf(&LimitSpec::StepAtZero, x))
                    .collect();
                let note = NormalizationNote {
                    scale: String::from("statistic = max 1/R"),
                    shift: format!("threshold = 1/p + x/n, p = {p}"),
                };
                (thresholds, true, theoretical, note)
            }
        };

    let finite_n_oracle: Option<Vec<f64>> = match kind {
        SystemKind::LurothIid => Some(
            thresholds
                .iter()
                .map(|&t| {
                    if use_reciprocal {
                        luroth_invmin_cdf(t, n)
                    } else {
                        luroth_max_cdf(t, n)
                    }
                })
                .collect(),
        ),
        SystemKind::Chain(system) if is_unit_chain(system) => Some(
            thresholds
                .iter()
                .map(|&t| {
                    if use_reciprocal {
                        unit_invmin_cdf(t, n)
                    } else {
                        unit_max_cdf(t, n)
                    }
                })
                .collect(),
        ),
        _ => None,
    };

    let stat: &(dyn Fn(&[f64]) -> f64 + Sync) = if use_reciprocal {
        &reciprocal_max
    } else {
        &running_max
    };
    let counts = accumulate_indicators(kind, n, replicas, master_seed, exec, stat, &thresholds)?;
    Ok(report_from_counts(
        grid.to_vec(),
        &counts,
        replicas,
        theoretical,
        finite_n_oracle,
        n,
        note,
    ))
}

/// Empirical probabilities of `max 1/R <= b_n + x/a_n` over a grid, for
/// inspecting degeneracy of user-chosen normalizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub grid: Vec<f64>,
    pub empirical: Vec<PointEstimate>,
    pub a_n: f64,
    pub b_n: f64,
    pub n: u64,
    pub replicas: u64,
}

#[allow(clippy::too_many_arguments)]
pub fn inverse_min_scan(
    kind: &SystemKind,
    n: u64,
    a_n: f64,
    b_n: f64,
    grid: &[f64],
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<ScanReport, ExtremesError> {
    kind.validate()?;
    validate_grid(grid)?;
    if replicas < MIN_REPLICAS {
        return Err(ExtremesError::TooFewReplicas(MIN_REPLICAS));
    }
    if !(a_n.is_finite() && a_n > 0.0) || !b_n.is_finite() {
        return Err(ExtremesError::BadThreshold(
            "scan needs finite a_n > 0 and finite b_n".into(),
        ));
    }
    let thresholds: Vec<f64> = grid.iter().map(|&x| b_n + x / a_n).collect();
    let counts = accumulate_indicators(
        kind,
        n,
        replicas,
        master_seed,
        exec,
        &reciprocal_max,
        &thresholds,
    )?;
    let empirical = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / replicas as f64;
            PointEstimate {
                p,
                se: math::binomial_se(p, replicas),
            }
        })
        .collect();
    Ok(ScanReport {
        grid: grid.to_vec(),
        empirical,
        a_n,
        b_n,
        n,
        replicas,
    })
}

/// Monte Carlo estimate of the joint-vs-product gap
/// P(Z_n > a, M_n <= b) - P(Z_n > a) P(M_n <= b), with the bound assembled
/// from the three band inequalities and the mass hypothesis flagged.
///
/// Optional diverging scales turn (a, b) into (x rho_n, y sigma_n).
#[allow(clippy::too_many_arguments)]
pub fn independence_gap(
    kind: &SystemKind,
    n: u64,
    x: f64,
    y: f64,
    rho_scale: Option<ScaleTag>,
    sigma_scale: Option<ScaleTag>,
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<GapEstimate, ExtremesError> {
    kind.validate()?;
    if !(x > 1.0) {
        return Err(ExtremesError::BadThreshold(format!("need x > 1, got {x}")));
    }
    if !(y > x) {
        return Err(ExtremesError::BadThreshold(format!(
            "need y > x, got y = {y}, x = {x}"
        )));
    }
    if replicas < MIN_REPLICAS {
        return Err(ExtremesError::TooFewReplicas(MIN_REPLICAS));
    }
    if n == 0 {
        return Err(ExtremesError::Engine(crate::engine::EngineError::EmptyPath));
    }
    let a = x * rho_scale.map_or(1.0, |s| s.apply(n));
    let b = y * sigma_scale.map_or(1.0, |s| s.apply(n));
    if !(a < b) {
        return Err(ExtremesError::BadThreshold(format!(
            "scaled thresholds must satisfy a < b, got a = {a}, b = {b}"
        )));
    }

    let job = move |replica: u64| -> Vec<u64> {
        let mut counts = vec![0u64; 5];
        match sample_ratios(kind, n, replica_seed(master_seed, replica)) {
            Ok(ratios) => {
                let z_above = ratios.iter().all(|r| *r > a);
                let m_below = ratios.iter().all(|r| *r <= b);
                counts[(z_above as usize) * 2 + m_below as usize] = 1;
            }
            Err(_) => counts[4] = 1,
        }
        counts
    };
    let counts = exec.accumulate(replicas, &job);
    if counts[4] > 0 {
        return Err(ExtremesError::ReplicaFailed {
            failures: counts[4],
        });
    }

    let total = replicas as f64;
    let p_joint = counts[3] as f64 / total; // Z above and M below
    let p_z = (counts[2] + counts[3]) as f64 / total;
    let p_m = (counts[1] + counts[3]) as f64 / total;
    let gap = p_joint - p_z * p_m;
    let se = gap_standard_error_product(&[counts[0], counts[1], counts[2], counts[3]], replicas);

    let dist = kind.dist();
    let band_i = thm6_band(&dist, Thm6Variant::I, Some(a), Some(b), n)?;
    let band_ii = thm6_band(&dist, Thm6Variant::II, None, Some(b), n)?;
    let band_iii = thm6_band(&dist, Thm6Variant::III, Some(a), None, n)?;
    let f_at_a = dist.cdf(1.0 / a);
    let bound =
        band_i.half_width + math::powi(f_at_a, n) * band_ii.half_width + band_iii.half_width;

    let slope_grid_sup = if rho_scale.is_some() || sigma_scale.is_some() {
        // finite-grid proxy for sup of the slope over large thresholds
        let mut sup: f64 = 0.0;
        for j in 0..=20u32 {
            let at = a * math::powi(2.0, j as u64);
            sup = sup.max(dist.slope(at).map_err(ExtremesError::Dist)?);
        }
        Some(sup)
    } else {
        None
    };

    let flags = HypothesisFlags {
        beta_used: dist.lipschitz_beta(),
        f_at_lower_threshold: Some(f_at_a),
        lower_mass_below_half: Some(f_at_a < 0.5),
        slope_grid_sup,
        layout_tail_overlap: None,
    };
    Ok(GapEstimate {
        empirical_gap: gap,
        standard_error: se,
        theoretical_bound: bound,
        hypothesis_flags: flags,
        verdict: verdict_for(gap, se, bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Verdict;
    use crate::exec::SerialExecutor;

    #[test]
    fn luroth_frechet_mc_close_to_oracle() {
        let kind = SystemKind::LurothIid;
        let grid = [0.5, 1.0, 2.0];
        let rep = max_limit_experiment(
            &kind,
            200,
            2000,
            &Normalization::FrechetScale { ell0: Some(1.0) },
            &grid,
            42,
            &SerialExecutor,
        )
        .unwrap();
        let oracle = rep.finite_n_oracle.as_ref().unwrap();
        for (i, (point, want)) in rep.empirical.iter().zip(oracle).enumerate() {
            let d = (point.p - want).abs();
            assert!(d <= 4.0 * point.se.max(1e-3), "point {i}: d = {d}");
        }
    }

    #[test]
    fn luroth_inverse_min_is_degenerate() {
        let kind = SystemKind::LurothIid;
        let rep = max_limit_experiment(
            &kind,
            50,
            200,
            &Normalization::InverseMin { p: 1 },
            &[-1.0],
            7,
            &SerialExecutor,
        )
        .unwrap();
        // R >= 2 a.s., so max 1/R <= 1/2 < 1 - 1/n always
        assert_eq!(rep.empirical[0].p, 1.0);
        assert_eq!(rep.finite_n_oracle.as_ref().unwrap()[0], 1.0);

        let rep2 = max_limit_experiment(
            &kind,
            50,
            200,
            &Normalization::InverseMin { p: 2 },
            &[-1.0],
            7,
            &SerialExecutor,
        )
        .unwrap();
        assert_eq!(rep2.empirical[0].p, 0.0);
    }

    #[test]
    fn frechet_scale_resolves_from_distribution() {
        // unit chain has uniform F, ell0 = 1
        let kind = SystemKind::Chain(OppenheimSystem::unit());
        let rep = max_limit_experiment(
            &kind,
            100,
            200,
            &Normalization::FrechetScale { ell0: None },
            &[1.0],
            5,
            &SerialExecutor,
        )
        .unwrap();
        assert!(rep.normalization.scale.contains("ell0 = 1"));
        assert!(rep.finite_n_oracle.is_some());
    }

    #[test]
    fn undetermined_scale_is_refused() {
        // flat lower tail: ell0 = 0, no usable Frechet scale
        let mut sys = OppenheimSystem::unit();
        sys.dist = crate::dist::DistributionSpec::piecewise_linear(alloc::vec![
            [0.0, 0.0],
            [0.5, 0.0],
            [1.0, 1.0],
        ])
        .unwrap();
        let err = max_limit_experiment(
            &SystemKind::Chain(sys),
            10,
            200,
            &Normalization::FrechetScale { ell0: None },
            &[1.0],
            1,
            &SerialExecutor,
        )
        .unwrap_err();
        assert!(matches!(err, ExtremesError::ScaleUndetermined(_)));
    }

    #[test]
    fn independence_gap_iid_is_near_zero() {
        let kind = SystemKind::Chain(OppenheimSystem::unit());
        let est =
            independence_gap(&kind, 30, 2.5, 10.0, None, None, 5000, 11, &SerialExecutor).unwrap();
        assert!(est.empirical_gap.abs() <= 3.0 * est.standard_error.max(1e-4));
        assert_eq!(est.verdict, Verdict::WithinBand);
        // uniform F: F(1/2.5) = 0.4 < 1/2
        assert_eq!(est.hypothesis_flags.lower_mass_below_half, Some(true));
    }

    #[test]
    fn independence_gap_hypothesis_flag_false_at_small_x() {
        let kind = SystemKind::Chain(OppenheimSystem::unit());
        let est =
            independence_gap(&kind, 10, 1.5, 10.0, None, None, 200, 3, &SerialExecutor).unwrap();
        // F(2/3) = 2/3 >= 1/2: computation proceeds, flag reports it
        assert_eq!(est.hypothesis_flags.lower_mass_below_half, Some(false));
    }

    #[test]
    fn independence_gap_domain_errors() {
        let kind = SystemKind::LurothIid;
        assert!(
            independence_gap(&kind, 10, 0.9, 2.0, None, None, 200, 1, &SerialExecutor).is_err()
        );
        assert!(
            independence_gap(&kind, 10, 3.0, 2.0, None, None, 200, 1, &SerialExecutor).is_err()
        );
    }

    #[test]
    fn scan_reports_probabilities() {
        let rep = inverse_min_scan(
            &SystemKind::LurothIid,
            40,
            1.0,
            0.0,
            &[0.25, 0.5, 0.75],
            200,
            9,
            &SerialExecutor,
        )
        .unwrap();
        assert_eq!(rep.empirical.len(), 3);
        // thresholds are absolute here: max 1/R <= 0.75 always (R >= 2)
        assert_eq!(rep.empirical[2].p, 1.0);
    }
}
