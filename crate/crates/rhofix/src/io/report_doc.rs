//! Structured result and certification report documents.

use crate::contraction::{
    CertificateUsed, FixedPointResult, NonexpansiveReport, SolveMode, StrictCertification,
    StrongCertification,
};
use crate::modular::{AxiomReport, Delta2Certificate, RegularGrowthReport};
use serde::{Deserialize, Serialize};

/// Serialized view of a [`FixedPointResult`]; the trace itself goes to the
/// tabular format, only its summary is embedded here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDoc {
    pub mode: SolveMode,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub point: Vec<f64>,
    pub certificate: CertificateUsed,
    pub trace_rows: usize,
    pub bound_compliance: f64,
    pub initial_r: f64,
}

impl From<&FixedPointResult> for ResultDoc {
    fn from(result: &FixedPointResult) -> Self {
        ResultDoc {
            mode: result.mode,
            converged: result.converged,
            iterations: result.iterations,
            residual: result.residual,
            point: result.point.coords().to_vec(),
            certificate: result.certificate.clone(),
            trace_rows: result.trace.rows.len(),
            bound_compliance: result.trace.bound_compliance(),
            initial_r: result.trace.initial_r,
        }
    }
}

/// Render a solve result as a JSON document.
pub fn write_result_json(result: &FixedPointResult) -> String {
    let doc = ResultDoc::from(result);
    let mut out = serde_json::to_string_pretty(&doc).expect("doc types always serialize");
    out.push('\n');
    out
}

/// Outcome of one certification request.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Axioms {
        passed: bool,
        report: AxiomReport,
    },
    Strong {
        passed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        certification: Option<StrongCertification>,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
    Strict {
        passed: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        certification: Option<StrictCertification>,
        #[serde(skip_serializing_if = "Option::is_none")]
        error: Option<String>,
    },
    Nonexpansive {
        passed: bool,
        report: NonexpansiveReport,
    },
    Delta2 {
        passed: bool,
        certificate: Delta2Certificate,
    },
    RegularGrowth {
        passed: bool,
        report: RegularGrowthReport,
    },
}

impl CertifyOutcome {
    pub fn passed(&self) -> bool {
        match self {
            CertifyOutcome::Axioms { passed, .. }
            | CertifyOutcome::Strong { passed, .. }
            | CertifyOutcome::Strict { passed, .. }
            | CertifyOutcome::Nonexpansive { passed, .. }
            | CertifyOutcome::Delta2 { passed, .. }
            | CertifyOutcome::RegularGrowth { passed, .. } => *passed,
        }
    }
}

/// Full certification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyReportDoc {
    pub outcomes: Vec<CertifyOutcome>,
    pub all_passed: bool,
}

impl CertifyReportDoc {
    pub fn new(outcomes: Vec<CertifyOutcome>) -> Self {
        let all_passed = outcomes.iter().all(|o| o.passed());
        CertifyReportDoc {
            outcomes,
            all_passed,
        }
    }
}

/// Render a certification report as JSON.
pub fn write_certify_report(doc: &CertifyReportDoc) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("doc types always serialize");
    out.push('\n');
    out
}

/// One sweep row for the aggregate table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
    pub bound_compliance: f64,
    pub status: String,
}

/// Render the sweep aggregate table.
pub fn write_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("value,iterations,residual,bound_compliance,status\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.value, row.iterations, row.residual, row.bound_compliance, row.status
        ));
    }
    out
}
