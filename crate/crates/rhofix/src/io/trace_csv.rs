//! Flat tabular trace format: one row per iteration.
//!
//! Two schemas share the machinery, distinguished by their header line:
//! `index,residual,bound` for solver traces and `index,k_n,residual,bound`
//! for approximating-sequence traces. Floats render through Rust's
//! shortest-roundtrip formatting, so equal runs produce identical bytes.

use crate::contraction::IterationTrace;
use crate::nonexpansive::ApproxFixedPointTrace;
use crate::{Error, Result};
use std::fmt::Write as _;

pub const TRACE_HEADER: &str = "index,residual,bound";
pub const APPROX_HEADER: &str = "index,k_n,residual,bound";

/// Which schema a parsed trace followed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Solver,
    Approx,
}

/// One parsed row; `k_n` present only in the approx schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsedTraceRow {
    pub index: usize,
    pub k_n: Option<f64>,
    pub residual: f64,
    pub bound: f64,
}

impl ParsedTraceRow {
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound * (1.0 + 1e-9) + f64::MIN_POSITIVE
    }

    /// Signed compliance margin `residual − bound·(1+1e−9)`; positive means
    /// the row violates its bound.
    pub fn margin(&self) -> f64 {
        self.residual - self.bound * (1.0 + 1e-9)
    }
}

/// A parsed trace table.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub kind: TraceKind,
    pub rows: Vec<ParsedTraceRow>,
}

/// Render a solver trace.
pub fn write_trace_csv(trace: &IterationTrace) -> String {
    let mut out = String::with_capacity(32 * (trace.rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for row in &trace.rows {
        writeln!(out, "{},{},{}", row.index, row.residual, row.bound)
            .expect("string writes cannot fail");
    }
    out
}

/// Render an approximating-sequence trace.
pub fn write_approx_trace_csv(trace: &ApproxFixedPointTrace) -> String {
    let mut out = String::with_capacity(40 * (trace.rows.len() + 1));
    out.push_str(APPROX_HEADER);
    out.push('\n');
    for row in &trace.rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.index,
            row.k_n,
            row.residual,
            row.bound()
        )
        .expect("string writes cannot fail");
    }
    out
}

fn parse_float(field: &str, line: usize, name: &str) -> Result<f64> {
    let value: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {name} field `{field}` is not a number")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!(
            "line {line}: {name} field must be finite, got {value}"
        )));
    }
    Ok(value)
}

/// Parse either trace schema back from text.
pub fn parse_trace_csv(text: &str) -> Result<ParsedTrace> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trace".into()))?;
    let kind = match header.trim() {
        TRACE_HEADER => TraceKind::Solver,
        APPROX_HEADER => TraceKind::Approx,
        other => {
            return Err(Error::Parse(format!(
                "unknown trace header `{other}`"
            )))
        }
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = match kind {
            TraceKind::Solver => 3,
            TraceKind::Approx => 4,
        };
        if fields.len() != expected {
            return Err(Error::Parse(format!(
                "line {line_no}: expected {expected} fields, got {}",
                fields.len()
            )));
        }
        let index: usize = fields[0].trim().parse().map_err(|_| {
            Error::Parse(format!("line {line_no}: index `{}` is not an integer", fields[0]))
        })?;
        let row = match kind {
            TraceKind::Solver => ParsedTraceRow {
                index,
                k_n: None,
                residual: parse_float(fields[1], line_no, "residual")?,
                bound: parse_float(fields[2], line_no, "bound")?,
            },
            TraceKind::Approx => ParsedTraceRow {
                index,
                k_n: Some(parse_float(fields[1], line_no, "k_n")?),
                residual: parse_float(fields[2], line_no, "residual")?,
                bound: parse_float(fields[3], line_no, "bound")?,
            },
        };
        rows.push(row);
    }
    Ok(ParsedTrace { kind, rows })
}
