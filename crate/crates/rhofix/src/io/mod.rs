//! Document formats: JSON for modulars, problems, configs, results and
//! certification reports; flat CSV for iteration traces. These parsers are
//! the crate's untrusted-input surface and are fuzzed; they validate caps
//! and structure before any allocation-heavy construction.

mod modular_doc;
mod problem_doc;
mod report_doc;
mod run_config;
mod trace_csv;

pub use modular_doc::{parse_modular, write_modular, MAX_DIMENSION};
pub use problem_doc::{
    parse_problem, write_problem, BuiltProblem, ProblemSpec, MAX_AFFINE_DIMENSION, MAX_GRID_SIZE,
};
pub use report_doc::{
    write_certify_report, write_result_json, write_sweep_csv, CertifyOutcome, CertifyReportDoc,
    ResultDoc, SweepRow,
};
pub use run_config::{
    parse_run_config, write_run_config, CertifyRequest, Constants, RunConfig, ScheduleDoc,
    SolverKind,
};
pub use trace_csv::{
    parse_trace_csv, write_approx_trace_csv, write_trace_csv, ParsedTrace, ParsedTraceRow,
    TraceKind, APPROX_HEADER, TRACE_HEADER,
};
