//! Strong and strict ρ-contraction machinery: certificates, sampled
//! certification, and bound-instrumented Picard iteration.

mod certificate;
mod certify;
mod strict;
mod strong;
mod trace;

pub use certificate::{
    conjugate_exponent, corollary_reduction, StrictContractionCertificate,
    StrongContractionCertificate,
};
pub use certify::{
    certify_nonexpansive, certify_strict, certify_strong, ratio_scan_on_pairs,
    sample_certification_pairs, NonexpansiveReport, RatioScan, StrictCertification,
    StrongCertification, K_FLOOR, K_SAFETY,
};
pub use strict::{solve_strict_delta2, StrictSolveReport, BURN_IN_CAP};
pub use strong::{solve_strong, DEFAULT_MAX_ITER};
pub use trace::{
    residual, residual_at, CertificateUsed, FixedPointResult, IterationTrace, SolveMode,
    TraceRow, ITERATE_STORE_CAP,
};
