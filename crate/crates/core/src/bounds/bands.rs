//! Closed-form bound evaluation.
//!
//! Centers are product approximations; half-widths are the displayed
//! bounds. A band is an envelope around the approximation, not an estimate
//! of the true probability, so verification always reports
//! (center, half_width, p_hat, se) and a verdict without asserting which
//! side the truth lies on.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::BoundsError;
use crate::dist::DistributionSpec;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandVariant {
    Lemma1LowerUpper,
    Thm6I,
    Thm6II,
    Thm6III,
    Lemma2,
    Lemma9,
    DeltaMixing,
    Prop3II,
    Prop3III,
    Prop4Total,
}

/// Parameter record echoed into reports; only the fields a variant uses
/// are set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BandParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

/// A theoretical center with the half-width of the displayed inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundBand {
    pub variant: BandVariant,
    pub params: BandParams,
    /// The product/power approximation, when the variant has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    pub half_width: f64,
}

/// Product sandwich for joint tails: for blocks with per-block threshold
/// x_j repeated q_j times,
/// prod F^{q_j}(1/(x_j+1)) <= P <= prod F^{q_j}(1/x_j).
/// The empty product is 1.
pub fn lemma1_sandwich(
    dist: &DistributionSpec,
    xs: &[f64],
    multiplicities: &[u64],
) -> Result<(f64, f64), BoundsError> {
    if xs.len() != multiplicities.len() || multiplicities.contains(&0) {
        return Err(BoundsError::LengthMismatch);
    }
    let mut lower = 1.0;
    let mut upper = 1.0;
    for (&x, &q) in xs.iter().zip(multiplicities) {
        if !(x >= 1.0) {
            return Err(BoundsError::ThresholdDomain(x));
        }
        lower *= math::powi(dist.cdf(1.0 / (x + 1.0)), q);
        upper *= math::powi(dist.cdf(1.0 / x), q);
    }
    Ok((lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm6Variant {
    /// Two-sided cell: all ratios in (a, b].
    I,
    /// Upper cell: all ratios <= b.
    II,
    /// Tail cell: all ratios > a.
    III,
}

impl Thm6Variant {
    pub fn band_variant(&self) -> BandVariant {
        match self {
            Thm6Variant::I => BandVariant::Thm6I,
            Thm6Variant::II => BandVariant::Thm6II,
            Thm6Variant::III => BandVariant::Thm6III,
        }
    }
}

/// Band inequality around the product approximation of an n-fold cell
/// probability. The constant is the mean slope of F over the relevant
/// reciprocal cell (the larger of the two for the two-sided variant).
pub fn thm6_band(
    dist: &DistributionSpec,
    variant: Thm6Variant,
    a: Option<f64>,
    b: Option<f64>,
    n: u64,
) -> Result<BoundBand, BoundsError> {
    if n < 1 {
        return Err(BoundsError::BadBandParams("n must be >= 1".into()));
    }
    let nf = n as f64;
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| BoundsError::BadBandParams(format!("{name} is required")))
    };
    let (center, half_width, params) = match variant {
        Thm6Variant::III => {
            let a = need(a, "a")?;
            if !(a >= 1.0) {
                return Err(BoundsError::ThresholdDomain(a));
            }
            let fa = dist.cdf(1.0 / a);
            let s_a = dist.slope(a)?;
            let center = math::powi(fa, n);
            let half = s_a * nf / (a * a) * math::powi(fa, n - 1);
            (
                center,
                half,
                BandParams {
                    a: Some(a),
                    n: Some(n),
                    ..BandParams::default()
                },
            )
        }
        Thm6Variant::II => {
            let b = need(b, "b")?;
            if !(b >= 1.0) {
                return Err(BoundsError::ThresholdDomain(b));
            }
            let fb = dist.cdf(1.0 / b);
            let s_b = dist.slope(b)?;
            let center = math::powi(1.0 - fb, n);
            let half = s_b * nf / (b * b) * math::powi(1.0 + fb, n - 1);
            (
                center,
                half,
                BandParams {
                    b: Some(b),
                    n: Some(n),
                    ..BandParams::default()
                },
            )
        }
        Thm6Variant::I => {
            let a = need(a, "a")?;
            let b = need(b, "b")?;
            if !(a >= 1.0) {
                return Err(BoundsError::ThresholdDomain(a));
            }
            if !(b > a) {
                return Err(BoundsError::BadBandParams(format!(
                    "need 1 <= a < b, got a = {a}, b = {b}"
                )));
            }
            let fa = dist.cdf(1.0 / a);
            let fb = dist.cdf(1.0 / b);
            let s = dist.slope(a)?.max(dist.slope(b)?);
            let center = math::powi(fa, n) * math::powi(1.0 - fb, n);
            let half = s * nf / (b * b) * math::powi(1.0 + fb, n - 1) * math::powi(fa, n)
                + s * nf / (a * a) * math::powi(fa, n - 1) * math::powi(1.0 + fb, n)
                + s * nf / (a * a) * math::powi(fa, n - 1);
            (
                center,
                half,
                BandParams {
                    a: Some(a),
                    b: Some(b),
                    n: Some(n),
                    ..BandParams::default()
                },
            )
        }
    };
    Ok(BoundBand {
        variant: variant.band_variant(),
        params,
        center: Some(center),
        half_width,
    })
}

/// Decoupling bounds: the displayed right-hand sides for the joint-minus-
/// product gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DecouplingVariant {
    /// beta * sum_j (1/x_j^2) prod_{r != j} F(1/x_r).
    Lemma2 { xs: Vec<f64> },
    /// beta * q / x^2 * F^{q-1}(1/x) for q indices above one threshold.
    Lemma9 { q: u64, x: f64 },
    /// 2 beta (p+q)/u^2 + beta^2 p q / u^4 for separated index groups.
    DeltaMixing { p: u64, q: u64, u: f64 },
}

/// Resolves beta from the argument or the distribution's exact constant.
pub(crate) fn resolve_beta(dist: &DistributionSpec, beta: Option<f64>) -> Result<f64, BoundsError> {
    beta.or_else(|| dist.lipschitz_beta())
        .ok_or(BoundsError::Dist(crate::dist::DistError::MissingBeta))
}

pub fn decoupling_bound(
    dist: &DistributionSpec,
    variant: &DecouplingVariant,
    beta: Option<f64>,
) -> Result<f64, BoundsError> {
    let beta = resolve_beta(dist, beta)?;
    match variant {
        DecouplingVariant::Lemma2 { xs } => {
            if xs.is_empty() {
                return Err(BoundsError::BadBandParams("xs must be nonempty".into()));
            }
            let mut total = 0.0;
            for (j, &xj) in xs.iter().enumerate() {
                if !(xj >= 1.0) {
                    return Err(BoundsError::ThresholdDomain(xj));
                }
                let mut prod = 1.0;
                for (r, &xr) in xs.iter().enumerate() {
                    if r != j {
                        prod *= dist.cdf(1.0 / xr);
                    }
                }
                total += prod / (xj * xj);
            }
            Ok(beta * total)
        }
        DecouplingVariant::Lemma9 { q, x } => {
            if *q < 1 {
                return Err(BoundsError::BadBandParams("q must be >= 1".into()));
            }
            if !(*x >= 1.0) {
                return Err(BoundsError::ThresholdDomain(*x));
            }
            Ok(beta * *q as f64 / (x * x) * math::powi(dist.cdf(1.0 / x), q - 1))
        }
        DecouplingVariant::DeltaMixing { p, q, u } => {
            if *p < 1 || *q < 1 {
                return Err(BoundsError::BadBandParams("p and q must be >= 1".into()));
            }
            if !(*u >= 1.0) {
                return Err(BoundsError::ThresholdDomain(*u));
            }
            let (pf, qf) = (*p as f64, *q as f64);
            Ok(2.0 * beta * (pf + qf) / (u * u) + beta * beta * pf * qf / (u * u * u * u))
        }
    }
}

/// Residual of the telescoping product identity
/// prod a_j - prod b_j = sum_r prod_{j<r} a_j (a_r - b_r) prod_{j>r} b_j.
pub fn telescoping_check(a: &[f64], b: &[f64]) -> Result<f64, BoundsError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(BoundsError::LengthMismatch);
    }
    let lhs: f64 = a.iter().product::<f64>() - b.iter().product::<f64>();
    let mut rhs = 0.0;
    for r in 0..a.len() {
        let head: f64 = a[..r].iter().product();
        let tail: f64 = b[r + 1..].iter().product();
        rhs += head * (a[r] - b[r]) * tail;
    }
    Ok((lhs - rhs).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop3Part {
    /// Joint over long blocks vs product over long blocks.
    II,
    /// Product over long blocks vs k-th power of the first.
    III,
}

/// Blocking-method bounds for one part of the three-step comparison.
pub fn prop3_band(
    dist: &DistributionSpec,
    layout: &super::BlockingLayout,
    part: Prop3Part,
    x: f64,
    beta: Option<f64>,
) -> Result<BoundBand, BoundsError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(BoundsError::UDomain(x));
    }
    let beta = resolve_beta(dist, beta)?;
    let k = layout.k;
    let block = layout.n_prime - layout.m; // long-block length n' - m
    let fx = dist.cdf(x);
    let (variant, half_width) = match part {
        Prop3Part::II => (
            BandVariant::Prop3II,
            beta * (k - 1) as f64 * block as f64 * x * x * math::powi(fx, k * block - 1),
        ),
        Prop3Part::III => (
            BandVariant::Prop3III,
            beta * k as f64 * block as f64 * x * x * math::powi(fx, block - 1),
        ),
    };
    Ok(BoundBand {
        variant,
        params: BandParams {
            k: Some(k),
            m: Some(layout.m),
            n: Some(layout.n),
            x: Some(x),
            beta: Some(beta),
            ..BandParams::default()
        },
        center: None,
        half_width,
    })
}

/// The three summands of the assembled blocking-gap bound, as displayed:
/// two decoupling terms plus (2k+1) copies of the block-boundary term
/// F^{n'-m}(u) - F^{n'-m}(u/(1+u)) F^m(u/(1+u)).
pub fn prop4_components(
    dist: &DistributionSpec,
    layout: &super::BlockingLayout,
    u: f64,
    beta: Option<f64>,
) -> Result<(f64, f64, f64), BoundsError> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(BoundsError::UDomain(u));
    }
    let beta = resolve_beta(dist, beta)?;
    let k = layout.k as f64;
    let block = (layout.n_prime - layout.m) as f64;
    let kb = layout.k * (layout.n_prime - layout.m);
    let fu = dist.cdf(u);
    let fv = dist.cdf(u / (1.0 + u));
    let t1 = beta * k * block * u * u * math::powi(fu, kb - 1);
    let t2 = beta * (k - 1.0) * block * u * u * math::powi(fu, (layout.n_prime - layout.m) - 1);
    let boundary = math::powi(fu, layout.n_prime - layout.m)
        - math::powi(fv, layout.n_prime - layout.m) * math::powi(fv, layout.m);
    let t3 = (2.0 * k + 1.0) * boundary;
    Ok((t1, t2, t3))
}

/// Assembled blocking-gap bound (sum of the three displayed components).
pub fn prop4_band(
    dist: &DistributionSpec,
    layout: &super::BlockingLayout,
    u: f64,
    beta: Option<f64>,
) -> Result<BoundBand, BoundsError> {
    let (t1, t2, t3) = prop4_components(dist, layout, u, beta)?;
    Ok(BoundBand {
        variant: BandVariant::Prop4Total,
        params: BandParams {
            k: Some(layout.k),
            m: Some(layout.m),
            n: Some(layout.n),
            u: Some(u),
            beta: Some(resolve_beta(dist, beta)?),
            ..BandParams::default()
        },
        center: None,
        half_width: t1 + t2 + t3,
    })
}
