use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use oppenheim_cli::config::{Experiment, Overrides, RunConfig};
use oppenheim_cli::export;
use oppenheim_cli::run::run;

/// Simulation and verification toolkit for digit-ratio chains of
/// generalized Oppenheim expansions.
#[derive(Parser)]
#[command(name = "oppenheim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration file (TOML). Flags below override its fields.
    #[arg(long)]
    config: Option<String>,
    /// Master seed (mandatory here or in the config; no entropy default).
    #[arg(long)]
    seed: Option<u64>,
    /// Path length.
    #[arg(long)]
    n: Option<u64>,
    /// Monte Carlo replicas.
    #[arg(long)]
    replicas: Option<u64>,
    /// System preset: unit | growth | luroth.
    #[arg(long)]
    preset: Option<String>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<String>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one digit/ratio path and export its step records.
    Sample(CommonArgs),
    /// Normalized-extremes experiments against the limit laws.
    Extremes(CommonArgs),
    /// Verify sandwich and band inequalities by Monte Carlo.
    Bounds(CommonArgs),
    /// Joint-vs-product exceedance gaps against the decoupling bound.
    Mixing(CommonArgs),
    /// Blocking construction and its gap experiment.
    Blocking(CommonArgs),
    /// Distribution condition checks (Lipschitz scan, tail slopes,
    /// limit-law conditions).
    Mda(CommonArgs),
}

impl Command {
    fn experiment(&self) -> Experiment {
        match self {
            Command::Sample(_) => Experiment::Sample,
            Command::Extremes(_) => Experiment::Extremes,
            Command::Bounds(_) => Experiment::Bounds,
            Command::Mixing(_) => Experiment::Mixing,
            Command::Blocking(_) => Experiment::Blocking,
            Command::Mda(_) => Experiment::Mda,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Sample(a)
            | Command::Extremes(a)
            | Command::Bounds(a)
            | Command::Mixing(a)
            | Command::Blocking(a)
            | Command::Mda(a) => a,
        }
    }
}

fn execute(command: &Command) -> Result<i32> {
    let args = command.args();
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };

    let experiment = command.experiment();
    if let Some(configured) = config.experiment {
        if configured != experiment {
            anyhow::bail!(
                "experiment: config says `{}` but the subcommand is `{}`",
                configured.name(),
                experiment.name()
            );
        }
    }
    config.experiment = Some(experiment);

    let format = args
        .format
        .as_deref()
        .map(export::validate_format_tag)
        .transpose()?;
    Overrides {
        seed: args.seed,
        n: args.n,
        replicas: args.replicas,
        preset: args.preset.clone(),
        out: args.out.clone(),
        format,
    }
    .apply(&mut config);

    let report = run(&config)?;
    export::export(&report, config.output_format(), config.output_path())?;
    eprintln!(
        "{}: done in {:.3}s{}",
        experiment.name(),
        report.wall_time_secs,
        match report.worst_verdict() {
            Some(v) => format!(", verdict {v:?}"),
            None => String::new(),
        }
    );
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
