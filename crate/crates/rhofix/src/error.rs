//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by constructors, evaluators, certifiers and solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An element was evaluated against a modular of a different dimension.
    #[error("dimension mismatch: modular has dimension {expected}, element has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A modular evaluation left the finite range of `f64`.
    #[error("modular value overflowed at coordinate {coordinate} (|x| = {magnitude})")]
    Overflow { coordinate: usize, magnitude: f64 },

    /// A constructor was handed structurally invalid data.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// A precondition of an operation was violated by the caller.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Certification scanned a witness that breaks the requested inequality.
    #[error("certification rejected: {reason} (worst ratio {ratio})")]
    CertificationRejected { reason: String, ratio: f64 },

    /// The starting point has no finite initial constant `r`.
    #[error("no admissible starting point: {0}")]
    NoAdmissibleStart(String),

    /// A solver needed a valid Δ₂ certificate and none was attached.
    #[error("Δ₂ certificate required: {0}")]
    Delta2Required(String),

    /// Regular growth fails at the scale an operation needs.
    #[error("regular growth violated at t = {t} (estimate {estimate})")]
    RegularGrowthViolated { t: f64, estimate: f64 },

    /// Iterates left every bounded region, so no cluster point exists.
    #[error("compactness surrogate violated: {0}")]
    CompactnessViolated(String),

    /// The running sup over the λ-scheme iterates exceeded the cap.
    #[error("hypothesis sup ρ(x) < ∞ not observed: running sup {sup} exceeded cap {cap}")]
    SupUnbounded { sup: f64, cap: f64 },

    /// A mapping produced a point outside its declared domain.
    #[error("mapping left its domain: {0}")]
    DomainViolation(String),

    /// A solve exhausted its budget without meeting its tolerance.
    #[error("did not converge: {0}")]
    Unconverged(String),

    /// An inner segment solve failed while walking a schedule.
    #[error("segment solve failed at schedule index {index}: {source}")]
    SegmentSolve {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Internal consistency check failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),

    /// A document failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}
