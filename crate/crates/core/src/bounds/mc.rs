//! Monte Carlo verification of the bound inequalities.
//!
//! Per-replica jobs return small integer count vectors (joint event hits,
//! or joint/marginal bit patterns); the executor merges them in any order.
//! Standard errors for gap statistics come from the influence function of
//! the plug-in estimator, computed from the pattern counts.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::bands::{
    decoupling_bound, lemma1_sandwich, prop4_band, resolve_beta, thm6_band, BandParams,
    BandVariant, BoundBand, DecouplingVariant, Thm6Variant,
};
use super::blocking::BlockingLayout;
use super::BoundsError;
use crate::engine::{sample_ratios, SystemKind};
use crate::exec::ReplicaExecutor;
use crate::math;
use crate::rng::replica_seed;

const MIN_REPLICAS: u64 = 100;

/// Threshold predicate on one ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatioPredicate {
    /// R > x (equivalently 1/R < 1/x).
    GreaterThan { x: f64 },
    /// R <= x.
    AtMost { x: f64 },
    /// a < R <= b.
    InOpenClosed { a: f64, b: f64 },
}

impl RatioPredicate {
    fn holds(&self, r: f64) -> bool {
        match self {
            RatioPredicate::GreaterThan { x } => r > *x,
            RatioPredicate::AtMost { x } => r <= *x,
            RatioPredicate::InOpenClosed { a, b } => *a < r && r <= *b,
        }
    }
}

/// One conjunct of a joint event: predicate on the ratio at a 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventAtom {
    pub index: u64,
    pub predicate: RatioPredicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    WithinBand,
    Violated,
    Inconclusive,
}

/// Three-valued call: inside the band up to 3 se, violated beyond 5 se,
/// and a buffer zone in between where Monte Carlo cannot distinguish.
pub fn verdict_for(gap: f64, se: f64, bound: f64) -> Verdict {
    if gap.abs() <= bound + 3.0 * se {
        Verdict::WithinBand
    } else if gap.abs() > bound + 5.0 * se {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

/// Conditions the experiment relied on, echoed for the reader.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct HypothesisFlags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_used: Option<f64>,
    /// F at the reciprocal of the lower threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_at_lower_threshold: Option<f64>,
    /// Whether that mass stays below 1/2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_mass_below_half: Option<bool>,
    /// Grid supremum of the mean slope over large thresholds (a finite
    /// proxy only; no claim about the true supremum).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_grid_sup: Option<f64>,
    /// The layout's (k+1)-th block overlaps the k-th pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout_tail_overlap: Option<bool>,
}

/// Monte Carlo estimate of a probability gap with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub empirical_gap: f64,
    pub standard_error: f64,
    pub theoretical_bound: f64,
    pub hypothesis_flags: HypothesisFlags,
    pub verdict: Verdict,
}

/// A band plus the Monte Carlo point estimate checked against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCheck {
    pub band: BoundBand,
    pub p_hat: f64,
    pub se: f64,
    pub verdict: Verdict,
}

/// Influence-function standard error of p11 - pL * pR where the four
/// counts index the (left, right) indicator pattern as 2*left + right and
/// the joint event is the conjunction.
pub fn gap_standard_error_product(counts: &[u64; 4], replicas: u64) -> f64 {
    let total = replicas as f64;
    let p_join = counts[3] as f64 / total;
    let p_left = (counts[2] + counts[3]) as f64 / total;
    let p_right = (counts[1] + counts[3]) as f64 / total;
    let mut sum_sq = 0.0;
    for (pattern, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let l = (pattern >> 1) as f64;
        let r = (pattern & 1) as f64;
        let influence = (l * r - p_join) - p_right * (l - p_left) - p_left * (r - p_right);
        sum_sq += count as f64 * influence * influence;
    }
    math::sqrt(sum_sq) / total
}

fn validate_replicas(replicas: u64) -> Result<(), BoundsError> {
    if replicas < MIN_REPLICAS {
        return Err(BoundsError::TooFewReplicas(MIN_REPLICAS));
    }
    Ok(())
}

/// Simulates paths long enough to cover every event index and counts joint
/// hits. Deterministic for fixed seeds; the estimate is binomial.
pub fn mc_joint_estimate(
    kind: &SystemKind,
    event: &[EventAtom],
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<(f64, f64), BoundsError> {
    kind.validate()?;
    validate_replicas(replicas)?;
    if event.is_empty() || event.iter().any(|atom| atom.index < 1) {
        return Err(BoundsError::BadEvent);
    }
    let path_len = event.iter().map(|atom| atom.index).max().unwrap();
    let job = move |replica: u64| -> Vec<u64> {
        match sample_ratios(kind, path_len, replica_seed(master_seed, replica)) {
            Ok(ratios) => {
                let hit = event
                    .iter()
                    .all(|atom| atom.predicate.holds(ratios[(atom.index - 1) as usize]));
                vec![hit as u64, 0]
            }
            Err(_) => vec![0, 1],
        }
    };
    let counts = exec.accumulate(replicas, &job);
    if counts[1] > 0 {
        return Err(BoundsError::ReplicaFailed {
            failures: counts[1],
        });
    }
    let p_hat = counts[0] as f64 / replicas as f64;
    Ok((p_hat, math::binomial_se(p_hat, replicas)))
}

/// Verifies the product sandwich on the joint tail event built from
/// consecutive index blocks (block j holds multiplicity_j indices, all
/// thresholded at xs_j).
pub fn verify_lemma1(
    kind: &SystemKind,
    xs: &[f64],
    multiplicities: &[u64],
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<BandCheck, BoundsError> {
    let (lower, upper) = lemma1_sandwich(&kind.dist(), xs, multiplicities)?;
    let mut event = Vec::new();
    let mut next_index = 1u64;
    for (&x, &q) in xs.iter().zip(multiplicities) {
        for _ in 0..q {
            event.push(EventAtom {
                index: next_index,
                predicate: RatioPredicate::GreaterThan { x },
            });
            next_index += 1;
        }
    }
    let (p_hat, se) = if event.is_empty() {
        (1.0, 0.0) // empty conjunction is certain
    } else {
        mc_joint_estimate(kind, &event, replicas, master_seed, exec)?
    };
    // signed excursion out of [lower, upper]; zero inside
    let excursion = if p_hat < lower {
        p_hat - lower
    } else if p_hat > upper {
        p_hat - upper
    } else {
        0.0
    };
    Ok(BandCheck {
        band: BoundBand {
            variant: BandVariant::Lemma1LowerUpper,
            params: BandParams {
                xs: Some(xs.to_vec()),
                multiplicities: Some(multiplicities.to_vec()),
                ..BandParams::default()
            },
            center: Some(0.5 * (lower + upper)),
            half_width: 0.5 * (upper - lower),
        },
        p_hat,
        se,
        verdict: verdict_for(excursion, se, 0.0),
    })
}

/// Verifies one band inequality: the cell event over indices 1..=n against
/// the product approximation.
#[allow(clippy::too_many_arguments)]
pub fn verify_thm6(
    kind: &SystemKind,
    variant: Thm6Variant,
    a: Option<f64>,
    b: Option<f64>,
    n: u64,
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<BandCheck, BoundsError> {
    let band = thm6_band(&kind.dist(), variant, a, b, n)?;
    let predicate = match variant {
        Thm6Variant::I => RatioPredicate::InOpenClosed {
            a: a.unwrap(),
            b: b.unwrap(),
        },
        Thm6Variant::II => RatioPredicate::AtMost { x: b.unwrap() },
        Thm6Variant::III => RatioPredicate::GreaterThan { x: a.unwrap() },
    };
    let event: Vec<EventAtom> = (1..=n)
        .map(|index| EventAtom { index, predicate })
        .collect();
    let (p_hat, se) = mc_joint_estimate(kind, &event, replicas, master_seed, exec)?;
    let gap = p_hat - band.center.unwrap();
    let verdict = verdict_for(gap, se, band.half_width);
    Ok(BandCheck {
        band,
        p_hat,
        se,
        verdict,
    })
}

fn strictly_increasing(indices: &[u64]) -> bool {
    !indices.is_empty() && indices[0] >= 1 && indices.windows(2).all(|pair| pair[1] > pair[0])
}

/// Distributional-mixing check: two index groups, both thresholded at u,
/// joint exceedance versus the product of the group exceedances, bounded
/// by 2 beta (p+q)/u^2 + beta^2 p q / u^4.
#[allow(clippy::too_many_arguments)]
pub fn mixing_gap_experiment(
    kind: &SystemKind,
    i_indices: &[u64],
    j_indices: &[u64],
    u: f64,
    beta: Option<f64>,
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<GapEstimate, BoundsError> {
    kind.validate()?;
    validate_replicas(replicas)?;
    if !strictly_increasing(i_indices)
        || !strictly_increasing(j_indices)
        || i_indices[i_indices.len() - 1] >= j_indices[0]
    {
        return Err(BoundsError::BadIndexGroups);
    }
    if !(u >= 1.0) {
        return Err(BoundsError::ThresholdDomain(u));
    }
    let dist = kind.dist();
    let beta_value = resolve_beta(&dist, beta)?;
    let bound = decoupling_bound(
        &dist,
        &DecouplingVariant::DeltaMixing {
            p: i_indices.len() as u64,
            q: j_indices.len() as u64,
            u,
        },
        Some(beta_value),
    )?;

    let path_len = j_indices[j_indices.len() - 1];
    let job = move |replica: u64| -> Vec<u64> {
        let mut counts = vec![0u64; 5];
        match sample_ratios(kind, path_len, replica_seed(master_seed, replica)) {
            Ok(ratios) => {
                let left = i_indices.iter().all(|&i| ratios[(i - 1) as usize] > u);
                let right = j_indices.iter().all(|&j| ratios[(j - 1) as usize] > u);
                counts[(left as usize) * 2 + right as usize] = 1;
            }
            Err(_) => counts[4] = 1,
        }
        counts
    };
    let counts = exec.accumulate(replicas, &job);
    if counts[4] > 0 {
        return Err(BoundsError::ReplicaFailed {
            failures: counts[4],
        });
    }
    let pattern = [counts[0], counts[1], counts[2], counts[3]];
    let total = replicas as f64;
    let p_joint = counts[3] as f64 / total;
    let p_left = (counts[2] + counts[3]) as f64 / total;
    let p_right = (counts[1] + counts[3]) as f64 / total;
    let gap = p_joint - p_left * p_right;
    let se = gap_standard_error_product(&pattern, replicas);
    Ok(GapEstimate {
        empirical_gap: gap,
        standard_error: se,
        theoretical_bound: bound,
        hypothesis_flags: HypothesisFlags {
            beta_used: Some(beta_value),
            ..HypothesisFlags::default()
        },
        verdict: verdict_for(gap, se, bound),
    })
}

/// Blocking-gap experiment: compares P(max over 1..n of 1/R < u) with the
/// k-th power of the single-block probability, against the assembled
/// bound. Paths run to k n' + m, past n, because the construction's last
/// separator does.
pub fn blocking_gap_experiment(
    kind: &SystemKind,
    layout: &BlockingLayout,
    u: f64,
    beta: Option<f64>,
    replicas: u64,
    master_seed: u64,
    exec: &dyn ReplicaExecutor,
) -> Result<GapEstimate, BoundsError> {
    kind.validate()?;
    validate_replicas(replicas)?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(BoundsError::UDomain(u));
    }
    let dist = kind.dist();
    let band = prop4_band(&dist, layout, u, beta)?;
    let beta_value = resolve_beta(&dist, beta)?;

    let n = layout.n;
    let n_prime = layout.n_prime;
    let path_len = layout.max_index();
    let threshold = 1.0 / u; // 1/R < u  <=>  R > 1/u
    let job = move |replica: u64| -> Vec<u64> {
        let mut counts = vec![0u64; 5];
        match sample_ratios(kind, path_len, replica_seed(master_seed, replica)) {
            Ok(ratios) => {
                let full = ratios[..n as usize].iter().all(|r| *r > threshold);
                let block = ratios[..n_prime as usize].iter().all(|r| *r > threshold);
                counts[(full as usize) * 2 + block as usize] = 1;
            }
            Err(_) => counts[4] = 1,
        }
        counts
    };
    let counts = exec.accumulate(replicas, &job);
    if counts[4] > 0 {
        return Err(BoundsError::ReplicaFailed {
            failures: counts[4],
        });
    }
    let total = replicas as f64;
    let p_full = counts[3] as f64 / total; // full implies block
    let p_block = (counts[1] + counts[3]) as f64 / total;
    let k = layout.k;
    let gap = p_full - math::powi(p_block, k);

    // delta method for p_full - p_block^k from the joint pattern counts
    let grad_block = -(k as f64) * math::powi(p_block, k - 1);
    let var_full = p_full * (1.0 - p_full);
    let var_block = p_block * (1.0 - p_block);
    let cov = p_full * (1.0 - p_block); // full is contained in block
    let variance =
        (var_full + grad_block * grad_block * var_block + 2.0 * grad_block * cov) / total;
    let se = math::sqrt(variance.max(0.0));

    Ok(GapEstimate {
        empirical_gap: gap,
        standard_error: se,
        theoretical_bound: band.half_width,
        hypothesis_flags: HypothesisFlags {
            beta_used: Some(beta_value),
            layout_tail_overlap: Some(layout.tail_overlaps_previous),
            ..HypothesisFlags::default()
        },
        verdict: verdict_for(gap, se, band.half_width),
    })
}
