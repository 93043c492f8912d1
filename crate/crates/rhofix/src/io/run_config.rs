//! Run configuration consumed by the CLI.

use crate::contraction::SolveMode;
use crate::nonexpansive::{Schedule, ScheduleRule};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

const MAX_SCHEDULE_LEN: usize = 10_000;

/// Solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Strong,
    StrictDelta2,
    Segment,
    ApproxSchedule,
    Schauder,
    Prop31,
}

/// Certification requests for the `certify` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyRequest {
    Axioms,
    Strong,
    Strict,
    Nonexpansive,
    Delta2,
    RegularGrowth,
}

/// Scheme constants, present as the selected solver requires.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub big_l: Option<f64>,
    #[serde(default, rename = "M", skip_serializing_if = "Option::is_none")]
    pub big_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

/// Schedule description: a rule plus a length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    #[serde(flatten)]
    pub rule: ScheduleRule,
    pub len: usize,
}

impl ScheduleDoc {
    pub fn build(&self) -> Result<Schedule> {
        if self.len > MAX_SCHEDULE_LEN {
            return Err(Error::Parse(format!(
                "schedule length {} exceeds cap {MAX_SCHEDULE_LEN}",
                self.len
            )));
        }
        Schedule::new(self.rule.clone(), self.len)
    }
}

fn default_tol() -> f64 {
    1e-12
}
fn default_max_iter() -> usize {
    crate::contraction::DEFAULT_MAX_ITER
}
fn default_sample_count() -> usize {
    1_000
}

/// Everything a batch run needs. All randomness downstream flows from the
/// single `seed` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Path to the modular document, resolved relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modular: Option<String>,
    /// Path to the problem document.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverKind>,
    #[serde(default)]
    pub constants: Constants,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certify: Vec<CertifyRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_center: Option<Vec<f64>>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SolveMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_cap: Option<f64>,
    /// Grid for regular-growth certification; defaults to 20 points in
    /// `[0, 0.95]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth_grid: Option<Vec<f64>>,
}

/// Parse and validate a run configuration.
pub fn parse_run_config(json: &str) -> Result<RunConfig> {
    let config: RunConfig =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("run config: {e}")))?;
    if !(config.tol.is_finite() && config.tol > 0.0) {
        return Err(Error::Parse(format!("tol must be positive, got {}", config.tol)));
    }
    if config.max_iter == 0 {
        return Err(Error::Parse("max_iter must be ≥ 1".into()));
    }
    if let Some(schedule) = &config.schedule {
        schedule.build()?;
    }
    Ok(config)
}

/// Render a config back to JSON.
pub fn write_run_config(config: &RunConfig) -> String {
    let mut out = serde_json::to_string_pretty(config).expect("doc types always serialize");
    out.push('\n');
    out
}
