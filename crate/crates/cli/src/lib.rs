//! Config-driven experiment runner around `oppenheim-core`.
//!
//! A run is described by one TOML file (plus a few CLI overrides), executes
//! deterministically from its mandatory seed, and exports JSON or CSV whose
//! bytes depend only on the resolved config.

pub mod battery;
pub mod config;
pub mod export;
pub mod parallel;
pub mod report;
pub mod run;
