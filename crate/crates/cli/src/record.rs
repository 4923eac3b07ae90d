use hystlab_core::hysteresis::{EquilibriumCensus, LoopMetrics, Verdict};
use hystlab_core::llpde::ResolvedProbe;
use hystlab_core::Schedule;
use serde::{Deserialize, Serialize};

use crate::spec::ExperimentSpec;

pub const TOOLKIT: &str = concat!("hystlab ", env!("CARGO_PKG_VERSION"));

/// Metadata written next to every output. The echoed spec has all defaults
/// and command-line overrides applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub toolkit: String,
    pub command: String,
    pub spec: ExperimentSpec,
    pub runs: Vec<RunInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Normalized Hausdorff distance between the two lowest-frequency loops.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_independence: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<EquilibriumCensus>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl RunRecord {
    pub fn new(command: &str, spec: &ExperimentSpec) -> Self {
        RunRecord {
            toolkit: TOOLKIT.to_string(),
            command: command.to_string(),
            spec: spec.resolved(),
            runs: Vec::new(),
            verdict: None,
            rate_independence: None,
            census: None,
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records always serialize") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub omega: f64,
    pub dt: f64,
    pub steps: usize,
    pub record_stride: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<LoopMetrics>,
    /// Largest per-node `| |m| − 1 |` before renormalization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_pre_projection: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_post_projection: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ResolvedProbe>,
}

impl RunInfo {
    pub fn new(omega: f64, schedule: &Schedule) -> Self {
        RunInfo {
            omega,
            dt: schedule.dt,
            steps: schedule.steps,
            record_stride: schedule.record_stride,
            metrics: None,
            drift_pre_projection: None,
            drift_post_projection: None,
            probe: None,
        }
    }
}
