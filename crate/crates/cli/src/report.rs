//! The report document: resolved config echo plus experiment results.

use oppenheim_core::bounds::{BandCheck, BlockingLayout, GapEstimate, Verdict};
use oppenheim_core::dist::MdaReport;
use oppenheim_core::engine::SamplePath;
use oppenheim_core::extremes::{EcdfReport, ScanReport};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingRow {
    pub u: f64,
    pub estimate: GapEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResultsPayload {
    Sample(SamplePath),
    Ecdf(EcdfReport),
    Scan(ScanReport),
    Bounds {
        checks: Vec<BandCheck>,
    },
    Mixing {
        rows: Vec<MixingRow>,
    },
    Blocking {
        layout: BlockingLayout,
        gap: GapEstimate,
    },
    Mda(MdaReport),
}

/// The full report. `wall_time_secs` is diagnostic only and never
/// serialized: exported bytes must be a pure function of the config.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub config_echo: RunConfig,
    pub tool_version: String,
    pub results: ResultsPayload,
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl ReportDocument {
    /// Worst verdict across the payload: `Violated` dominates.
    pub fn worst_verdict(&self) -> Option<Verdict> {
        let verdicts: Vec<Verdict> = match &self.results {
            ResultsPayload::Bounds { checks } => checks.iter().map(|c| c.verdict).collect(),
            ResultsPayload::Mixing { rows } => rows.iter().map(|r| r.estimate.verdict).collect(),
            ResultsPayload::Blocking { gap, .. } => vec![gap.verdict],
            _ => return None,
        };
        verdicts.into_iter().reduce(|acc, v| {
            use Verdict::*;
            match (acc, v) {
                (Violated, _) | (_, Violated) => Violated,
                (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
                _ => WithinBand,
            }
        })
    }

    /// Process exit code: 0 unless some verdict is violated.
    pub fn exit_code(&self) -> i32 {
        match self.worst_verdict() {
            Some(Verdict::Violated) => 2,
            _ => 0,
        }
    }
}
