//! Running extremes, limit distributions, and the Monte Carlo experiments
//! that compare normalized extremes against them.

mod ecdf;
mod experiments;
mod limits;
mod series;

pub use ecdf::{compare_to_limit, ecdf_against, EcdfReport, NormalizationNote, PointEstimate};
pub use experiments::{
    independence_gap, inverse_min_scan, max_limit_experiment, Normalization, ScaleTag, ScanReport,
};
pub use limits::{limit_cdf, LimitSpec};
pub use series::{extreme_series, ExtremeSeries};

use alloc::string::String;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize, Deserialize)]
pub enum ExtremesError {
    #[error("input sample list must be nonempty")]
    EmptySamples,
    #[error("grid must be nonempty and sorted ascending")]
    BadGrid,
    #[error("invalid limit family: {0}")]
    BadLimit(String),
    #[error("experiment needs at least {0} replicas")]
    TooFewReplicas(u64),
    #[error("tail slope of F is {0}: supply the normalization constant explicitly (ell0/ell1)")]
    ScaleUndetermined(String),
    #[error("threshold domain: {0}")]
    BadThreshold(String),
    #[error("replica simulation failed {failures} time(s); raise digit_cap or use float mode")]
    ReplicaFailed { failures: u64 },
    #[error("engine: {0}")]
    Engine(#[from] crate::engine::EngineError),
    #[error("distribution: {0}")]
    Dist(#[from] crate::dist::DistError),
    #[error("bounds: {0}")]
    Bounds(#[from] crate::bounds::BoundsError),
}
