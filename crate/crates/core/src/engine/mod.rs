//! Oppenheim systems and the digit/ratio chain sampler.
//!
//! A system is the triple (growth rule `phi`, weight rule `q`, distribution
//! `F`) plus a starting digit and an arithmetic mode. Exact mode carries
//! digits as arbitrary-size integers (growth rules make them explode);
//! float mode lets `floor` saturate above 2^53 and keeps going with the
//! real-valued approximation, recording that it did so.

mod luroth;
mod path;
mod step;
mod system;

pub use luroth::{
    luroth_invmin_cdf, luroth_max_cdf, luroth_pmf, luroth_ratio_from_u, luroth_tail,
    sample_luroth_iid, unit_invmin_cdf, unit_max_cdf, unit_pmf, unit_tail,
};
pub use path::{
    run_injected, sample_path, sample_ratios, Digit, DigitStep, InjectedW, PathFailure, RngW,
    SamplePath, WSource,
};
pub use step::{conditional_digit, delta_kernel, ConditionalDigit};
pub use system::{ArithmeticMode, OppenheimSystem, PhiRule, QRule, SystemKind, DEFAULT_DIGIT_CAP};

use alloc::string::String;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize, Deserialize)]
pub enum EngineError {
    #[error("w must lie in (0, 1], got {0}")]
    BadW(f64),
    #[error("invalid system: {0}")]
    BadSystem(String),
    #[error("injected w stream exhausted")]
    WStreamExhausted,
    #[error("digit cap exceeded at step {step}")]
    DigitCapExceeded { step: u64 },
    #[error("digit left the representable float range at step {step}")]
    NumericOverflow { step: u64 },
    #[error("path length must be at least 1")]
    EmptyPath,
    #[error("tail formula needs t > 1, got {0}")]
    TailDomain(f64),
    #[error("unknown system preset `{0}`")]
    UnknownPreset(String),
}
