//! Experiment dispatch.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use oppenheim_core::bounds::{
    blocking_gap_experiment, blocking_layout, mixing_gap_experiment, verify_lemma1, verify_thm6,
    Thm6Variant,
};
use oppenheim_core::dist::{default_h_grid, default_probe_sequence, DistributionSpec};
use oppenheim_core::engine::sample_path;
use oppenheim_core::engine::SystemKind;
use oppenheim_core::exec::ReplicaExecutor;
use oppenheim_core::extremes::{
    independence_gap, inverse_min_scan, max_limit_experiment, Normalization, ScaleTag,
};

use crate::battery;
use crate::config::{Experiment, RunConfig};
use crate::parallel::RayonExecutor;
use crate::report::{MixingRow, ReportDocument, ResultsPayload};

/// Runs the configured experiment. Deterministic given the config: the
/// seed is explicit, replica seeds derive from it, and aggregation is
/// worker-count invariant.
pub fn run(config: &RunConfig) -> Result<ReportDocument> {
    let started = Instant::now();
    let experiment = config.experiment()?;
    let exec = RayonExecutor::new(config.workers())?;
    let results = match experiment {
        Experiment::Sample => run_sample(config)?,
        Experiment::Extremes => run_extremes(config, &exec)?,
        Experiment::Bounds => run_bounds(config, &exec)?,
        Experiment::Mixing => run_mixing(config, &exec)?,
        Experiment::Blocking => run_blocking(config, &exec)?,
        Experiment::Mda => run_mda(config)?,
    };
    Ok(ReportDocument {
        config_echo: config.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        results,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

fn run_sample(config: &RunConfig) -> Result<ResultsPayload> {
    let kind = config.system_kind()?;
    let n = config.require_n()?;
    let seed = config.seed()?;
    let system = match kind {
        SystemKind::Chain(system) => system,
        SystemKind::LurothIid => {
            bail!("system: the luroth preset has no digit chain; use `extremes` or a chain preset")
        }
    };
    let path = sample_path(&system, n, seed).map_err(|f| {
        anyhow::anyhow!(
            "sampling failed after {} step(s): {}",
            f.partial.ratios.len(),
            f.error
        )
    })?;
    Ok(ResultsPayload::Sample(path))
}

fn parse_scale_tag(tag: &str) -> Result<ScaleTag> {
    match tag {
        "sqrt_n" => Ok(ScaleTag::SqrtN),
        "n" => Ok(ScaleTag::N),
        "n_log_n" => Ok(ScaleTag::NLogN),
        other => bail!("params: unknown scale tag `{other}` (sqrt_n | n | n_log_n)"),
    }
}

/// Default grid: 21 points covering the central 98% of the limit family,
/// or a symmetric window for the degenerate families.
fn default_grid(normalization: &str) -> Vec<f64> {
    match normalization {
        "frechet_scale" => (0..21)
            .map(|i| {
                let q = 0.01 + 0.049 * i as f64;
                -1.0 / q.ln()
            })
            .collect(),
        "weibull_shift" => (0..21)
            .map(|i| {
                let q = 0.01 + 0.049 * i as f64;
                q.ln()
            })
            .collect(),
        _ => (0..21).map(|i| -2.0 + 0.2 * i as f64).collect(),
    }
}

fn run_extremes(config: &RunConfig, exec: &dyn ReplicaExecutor) -> Result<ResultsPayload> {
    let kind = config.system_kind()?;
    let n = config.require_n()?;
    let replicas = config.require_replicas()?;
    let seed = config.seed()?;
    let params = &config.params;

    if params.x.is_some() || params.y.is_some() {
        // joint-extremes gap experiment (asymptotic independence check)
        let x = params.x.context("params.x: missing")?;
        let y = params.y.context("params.y: missing")?;
        let rho = params
            .rho_scale
            .as_deref()
            .map(parse_scale_tag)
            .transpose()?;
        let sigma = params
            .sigma_scale
            .as_deref()
            .map(parse_scale_tag)
            .transpose()?;
        let gap = independence_gap(&kind, n, x, y, rho, sigma, replicas, seed, exec)?;
        return Ok(ResultsPayload::Mixing {
            rows: vec![MixingRow {
                u: x,
                estimate: gap,
            }],
        });
    }

    let tag = params
        .normalization
        .as_deref()
        .unwrap_or("frechet_scale")
        .to_string();
    let grid = params.grid.clone().unwrap_or_else(|| default_grid(&tag));
    match tag.as_str() {
        "scan" => {
            let a_n = params.a_n.context("params.a_n: missing for scan")?;
            let b_n = params.b_n.context("params.b_n: missing for scan")?;
            let report = inverse_min_scan(&kind, n, a_n, b_n, &grid, replicas, seed, exec)?;
            Ok(ResultsPayload::Scan(report))
        }
        name => {
            let normalization = match name {
                "frechet_scale" => Normalization::FrechetScale { ell0: params.ell0 },
                "weibull_shift" => Normalization::WeibullShift { ell1: params.ell1 },
                "inverse_min" => Normalization::InverseMin {
                    p: params.p.unwrap_or(1),
                },
                other => bail!(
                    "params.normalization: unknown tag `{other}` \
                     (frechet_scale | weibull_shift | inverse_min | scan)"
                ),
            };
            let report =
                max_limit_experiment(&kind, n, replicas, &normalization, &grid, seed, exec)?;
            Ok(ResultsPayload::Ecdf(report))
        }
    }
}

fn run_bounds(config: &RunConfig, exec: &dyn ReplicaExecutor) -> Result<ResultsPayload> {
    let kind = config.system_kind()?;
    let replicas = config.require_replicas()?;
    let seed = config.seed()?;
    let params = &config.params;
    let mut checks = Vec::new();

    match (params.battery.as_deref(), params.variant.as_deref()) {
        (Some("thm6"), None) => {
            for (variant, a, b, n) in battery::thm6_battery() {
                checks.push(verify_thm6(&kind, variant, a, b, n, replicas, seed, exec)?);
            }
        }
        (Some("lemma1"), None) => {
            for (xs, mults) in battery::lemma1_battery() {
                checks.push(verify_lemma1(&kind, &xs, &mults, replicas, seed, exec)?);
            }
        }
        (Some(other), None) => bail!("params.battery: unknown battery `{other}` (thm6 | lemma1)"),
        (None, Some("lemma1")) => {
            let xs = params.xs.clone().context("params.xs: missing")?;
            let mults = params
                .multiplicities
                .clone()
                .unwrap_or_else(|| vec![1; xs.len()]);
            checks.push(verify_lemma1(&kind, &xs, &mults, replicas, seed, exec)?);
        }
        (None, Some(variant @ ("thm6_i" | "thm6_ii" | "thm6_iii"))) => {
            let v = match variant {
                "thm6_i" => Thm6Variant::I,
                "thm6_ii" => Thm6Variant::II,
                _ => Thm6Variant::III,
            };
            let n = config.require_n()?;
            checks.push(verify_thm6(
                &kind, v, params.a, params.b, n, replicas, seed, exec,
            )?);
        }
        (None, Some(other)) => {
            bail!(
                "params.variant: unknown variant `{other}` (lemma1 | thm6_i | thm6_ii | thm6_iii)"
            )
        }
        (None, None) => bail!("params: set either `battery` or `variant`"),
        (Some(_), Some(_)) => bail!("params: `battery` and `variant` are mutually exclusive"),
    }
    Ok(ResultsPayload::Bounds { checks })
}

fn run_mixing(config: &RunConfig, exec: &dyn ReplicaExecutor) -> Result<ResultsPayload> {
    let kind = config.system_kind()?;
    let replicas = config.require_replicas()?;
    let seed = config.seed()?;
    let params = &config.params;
    let i_indices = params.i_indices.clone().unwrap_or_else(|| vec![1, 2]);
    let j_indices = params.j_indices.clone().unwrap_or_else(|| vec![8, 9, 10]);
    let u_values = match (&params.u_values, params.u) {
        (Some(values), None) => values.clone(),
        (None, Some(u)) => vec![u],
        (None, None) => vec![5.0, 10.0, 20.0],
        (Some(_), Some(_)) => bail!("params: set `u` or `u_values`, not both"),
    };
    let mut rows = Vec::with_capacity(u_values.len());
    for &u in &u_values {
        let estimate = mixing_gap_experiment(
            &kind,
            &i_indices,
            &j_indices,
            u,
            params.beta,
            replicas,
            seed,
            exec,
        )?;
        rows.push(MixingRow { u, estimate });
    }
    Ok(ResultsPayload::Mixing { rows })
}

fn run_blocking(config: &RunConfig, exec: &dyn ReplicaExecutor) -> Result<ResultsPayload> {
    let kind = config.system_kind()?;
    let replicas = config.require_replicas()?;
    let seed = config.seed()?;
    let n = config.require_n()?;
    let params = &config.params;
    let k = params.k.context("params.k: missing")?;
    let m = params.m.context("params.m: missing")?;
    let u = params.u.context("params.u: missing")?;
    let layout = blocking_layout(n, k, m).context("params")?;
    let gap = blocking_gap_experiment(&kind, &layout, u, params.beta, replicas, seed, exec)?;
    Ok(ResultsPayload::Blocking { layout, gap })
}

fn run_mda(config: &RunConfig) -> Result<ResultsPayload> {
    let dist: DistributionSpec = match (&config.distribution, &config.system) {
        (Some(dist), _) => dist.clone(),
        (None, Some(_)) => config.system_kind()?.dist(),
        (None, None) => bail!("distribution: missing (set [distribution] or a [system])"),
    };
    dist.validate().context("distribution")?;
    let h_values = config
        .params
        .h_values
        .clone()
        .unwrap_or_else(default_h_grid);
    let beta = config
        .params
        .beta
        .or_else(|| dist.lipschitz_beta())
        .unwrap_or(1.0);
    let report = dist.check_mda_conditions(&h_values, &default_probe_sequence(), beta)?;
    Ok(ResultsPayload::Mda(report))
}
