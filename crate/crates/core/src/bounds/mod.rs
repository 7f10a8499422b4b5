//! Explicit inequality bounds and the Monte Carlo experiments that verify
//! them: product sandwiches for joint tails, band inequalities around
//! product approximations, decoupling bounds, and the blocking
//! construction with its gap experiment.

mod bands;
mod blocking;
mod mc;

pub use bands::{
    decoupling_bound, lemma1_sandwich, prop3_band, prop4_band, prop4_components, telescoping_check,
    thm6_band, BandParams, BandVariant, BoundBand, DecouplingVariant, Prop3Part, Thm6Variant,
};
pub use blocking::{blocking_layout, BlockingLayout};
pub use mc::{
    blocking_gap_experiment, gap_standard_error_product, mc_joint_estimate, mixing_gap_experiment,
    verdict_for, verify_lemma1, verify_thm6, BandCheck, EventAtom, GapEstimate, HypothesisFlags,
    RatioPredicate, Verdict,
};

use alloc::string::String;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize, Deserialize)]
pub enum BoundsError {
    #[error("thresholds must be >= 1, got {0}")]
    ThresholdDomain(f64),
    #[error("xs and multiplicities must have equal lengths with positive counts")]
    LengthMismatch,
    #[error("band parameters: {0}")]
    BadBandParams(String),
    #[error("blocking layout: {0}")]
    BadLayout(String),
    #[error("event must be nonempty with 1-based indices")]
    BadEvent,
    #[error("experiment needs at least {0} replicas")]
    TooFewReplicas(u64),
    #[error("replica simulation failed {failures} time(s); raise digit_cap or use float mode")]
    ReplicaFailed { failures: u64 },
    #[error("u must lie in (0, 1], got {0}")]
    UDomain(f64),
    #[error("index groups must be strictly increasing and disjoint in order")]
    BadIndexGroups,
    #[error("distribution: {0}")]
    Dist(#[from] crate::dist::DistError),
    #[error("engine: {0}")]
    Engine(#[from] crate::engine::EngineError),
}
