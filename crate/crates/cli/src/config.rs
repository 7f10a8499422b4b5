//! Run configuration: one structured TOML file, CLI flags override fields.

use anyhow::{bail, Context, Result};
use oppenheim_core::dist::DistributionSpec;
use oppenheim_core::engine::{
    ArithmeticMode, OppenheimSystem, PhiRule, QRule, SystemKind, DEFAULT_DIGIT_CAP,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Sample,
    Extremes,
    Bounds,
    Mixing,
    Blocking,
    Mda,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Sample => "sample",
            Experiment::Extremes => "extremes",
            Experiment::Bounds => "bounds",
            Experiment::Mixing => "mixing",
            Experiment::Blocking => "blocking",
            Experiment::Mda => "mda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// File path; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// System section: a preset name or an explicit chain definition.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<QRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_digit: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digit_cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<ArithmeticMode>,
}

impl SystemConfig {
    pub fn resolve(&self) -> Result<SystemKind> {
        if let Some(name) = &self.preset {
            if name != "custom" {
                if self.phi.is_some() || self.q.is_some() || self.distribution.is_some() {
                    bail!("system: preset `{name}` does not take explicit phi/q/distribution");
                }
                return SystemKind::preset(name).context("system.preset");
            }
        }
        let system = OppenheimSystem {
            id: self.preset.clone().unwrap_or_else(|| "custom".to_string()),
            phi: self.phi.clone().unwrap_or(PhiRule::Unit),
            q: self.q.clone().unwrap_or(QRule::Zero),
            dist: self
                .distribution
                .clone()
                .unwrap_or(DistributionSpec::Uniform),
            initial_digit: self.initial_digit.unwrap_or(1),
            digit_cap: Some(self.digit_cap.unwrap_or(DEFAULT_DIGIT_CAP)),
            mode: self.arithmetic.unwrap_or(ArithmeticMode::Exact),
        };
        system.validate().context("system")?;
        Ok(SystemKind::Chain(system))
    }
}

/// Experiment-specific parameters; each experiment reads the fields it
/// needs and validation rejects what it cannot use.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_indices: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_indices: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_scale: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_scale: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

/// One experiment run. The seed is mandatory: there is no entropy-source
/// fallback anywhere.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSpec>,
    #[serde(default, skip_serializing_if = "is_default_params")]
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

fn is_default_params(p: &Params) -> bool {
    *p == Params::default()
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("config file")
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).context("config serialization")
    }

    /// Resolved experiment; set by the file or the subcommand.
    pub fn experiment(&self) -> Result<Experiment> {
        self.experiment
            .context("experiment: missing (set it in the config or use a subcommand)")
    }

    /// Mandatory explicit seed.
    pub fn seed(&self) -> Result<u64> {
        self.master_seed.context(
            "master_seed: missing (explicit seeds are required; pass --seed or set master_seed)",
        )
    }

    pub fn system_kind(&self) -> Result<SystemKind> {
        match &self.system {
            Some(sys) => sys.resolve(),
            None => bail!("system: missing (set [system] preset or an explicit definition)"),
        }
    }

    pub fn require_n(&self) -> Result<u64> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            Some(n) => bail!("n: must be positive, got {n}"),
            None => bail!("n: missing"),
        }
    }

    pub fn require_replicas(&self) -> Result<u64> {
        match self.replicas {
            Some(r) if r >= 1 => Ok(r),
            Some(r) => bail!("replicas: must be positive, got {r}"),
            None => bail!("replicas: missing"),
        }
    }

    pub fn workers(&self) -> usize {
        self.params.workers.unwrap_or(1).max(1)
    }

    pub fn output_format(&self) -> OutputFormat {
        self.output
            .as_ref()
            .and_then(|o| o.format)
            .unwrap_or(OutputFormat::Json)
    }

    pub fn output_path(&self) -> Option<&str> {
        self.output.as_ref().and_then(|o| o.path.as_deref())
    }
}

/// Flag overrides applied on top of the config file; flags win.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub n: Option<u64>,
    pub replicas: Option<u64>,
    pub preset: Option<String>,
    pub out: Option<String>,
    pub format: Option<OutputFormat>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(seed) = self.seed {
            config.master_seed = Some(seed);
        }
        if let Some(n) = self.n {
            config.n = Some(n);
        }
        if let Some(replicas) = self.replicas {
            config.replicas = Some(replicas);
        }
        if let Some(preset) = &self.preset {
            config.system = Some(SystemConfig {
                preset: Some(preset.clone()),
                ..SystemConfig::default()
            });
        }
        if self.out.is_some() || self.format.is_some() {
            let output = config.output.get_or_insert_with(OutputConfig::default);
            if let Some(out) = &self.out {
                output.path = Some(out.clone());
            }
            if let Some(format) = self.format {
                output.format = Some(format);
            }
        }
    }
}
