//! System definitions and presets.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::dist::DistributionSpec;

/// Exact-mode digits are rejected once they pass this magnitude by default.
pub const DEFAULT_DIGIT_CAP: f64 = 1e300;

/// Integer growth rule applied to the previous digit.
///
/// Non-integer rules would leave the conditional law sub-stochastic (the
/// digit masses would sum to less than one), so only integer-valued rules
/// are representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum PhiRule {
    /// phi(h) = 1.
    Unit,
    /// phi(h) = h.
    Growth,
    /// phi(h) = mul * h + add.
    Affine { mul: u64, add: u64 },
}

impl PhiRule {
    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            PhiRule::Affine { mul, add } if *mul == 0 && *add == 0 => Err(EngineError::BadSystem(
                "affine phi must satisfy phi(h) >= 1".to_string(),
            )),
            _ => Ok(()),
        }
    }

    pub fn apply_f64(&self, h: f64) -> f64 {
        match self {
            PhiRule::Unit => 1.0,
            PhiRule::Growth => h,
            PhiRule::Affine { mul, add } => *mul as f64 * h + *add as f64,
        }
    }

    pub fn apply_big(&self, h: &BigUint) -> BigUint {
        match self {
            PhiRule::Unit => BigUint::from(1u32),
            PhiRule::Growth => h.clone(),
            PhiRule::Affine { mul, add } => h * BigUint::from(*mul) + BigUint::from(*add),
        }
    }
}

/// Weight rule; the general chain allows dependence on the whole digit
/// history, but only history-free rules are shipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum QRule {
    Zero,
    Constant { value: f64 },
}

impl QRule {
    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            QRule::Constant { value } if !(value.is_finite() && *value >= 0.0) => Err(
                EngineError::BadSystem("q must be a finite nonnegative number".to_string()),
            ),
            _ => Ok(()),
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            QRule::Zero => 0.0,
            QRule::Constant { value } => *value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// The digit chain: growth rule, weight rule, distribution, start digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OppenheimSystem {
    pub id: String,
    pub phi: PhiRule,
    pub q: QRule,
    pub dist: DistributionSpec,
    /// The law of the first digit is not pinned down by the chain; it is a
    /// fixed configurable constant here (every bound is uniform over
    /// histories, so extreme-value conclusions do not depend on it).
    pub initial_digit: u64,
    /// Magnitude cap for exact-mode digits; `None` disables the check
    /// (digits are still bounded by the float range of the diagnostics).
    pub digit_cap: Option<f64>,
    pub mode: ArithmeticMode,
}

impl OppenheimSystem {
    /// phi = 1, q = 0, uniform F: digits are iid and the ratio equals the
    /// next digit.
    pub fn unit() -> Self {
        OppenheimSystem {
            id: "unit".to_string(),
            phi: PhiRule::Unit,
            q: QRule::Zero,
            dist: DistributionSpec::uniform(),
            initial_digit: 1,
            digit_cap: Some(DEFAULT_DIGIT_CAP),
            mode: ArithmeticMode::Exact,
        }
    }

    /// phi(h) = h, q = 0, uniform F: digits grow geometrically.
    pub fn growth() -> Self {
        OppenheimSystem {
            id: "growth".to_string(),
            phi: PhiRule::Growth,
            q: QRule::Zero,
            dist: DistributionSpec::uniform(),
            initial_digit: 1,
            digit_cap: Some(DEFAULT_DIGIT_CAP),
            mode: ArithmeticMode::Exact,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        self.phi.validate()?;
        self.q.validate()?;
        self.dist
            .validate()
            .map_err(|e| EngineError::BadSystem(alloc::format!("distribution: {e}")))?;
        if self.initial_digit < 1 {
            return Err(EngineError::BadSystem(
                "initial digit must be >= 1".to_string(),
            ));
        }
        if let Some(cap) = self.digit_cap {
            if !(cap >= 1.0 && cap.is_finite()) {
                return Err(EngineError::BadSystem(
                    "digit cap must be a finite value >= 1".to_string(),
                ));
            }
        }
        Ok(())
    }
}

/// A ratio source: either a digit chain or the iid Lüroth law.
///
/// The Lüroth preset draws ratios directly from the closed-form marginal
/// (support {2, 3, ...}); its related distribution function is uniform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemKind {
    Chain(OppenheimSystem),
    LurothIid,
}

impl SystemKind {
    pub fn preset(name: &str) -> Result<SystemKind, EngineError> {
        match name {
            "unit" => Ok(SystemKind::Chain(OppenheimSystem::unit())),
            "growth" => Ok(SystemKind::Chain(OppenheimSystem::growth())),
            "luroth" => Ok(SystemKind::LurothIid),
            other => Err(EngineError::UnknownPreset(other.to_string())),
        }
    }

    pub fn id(&self) -> &str {
        match self {
            SystemKind::Chain(sys) => &sys.id,
            SystemKind::LurothIid => "luroth",
        }
    }

    pub fn dist(&self) -> DistributionSpec {
        match self {
            SystemKind::Chain(sys) => sys.dist.clone(),
            SystemKind::LurothIid => DistributionSpec::uniform(),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            SystemKind::Chain(sys) => sys.validate(),
            SystemKind::LurothIid => Ok(()),
        }
    }
}
