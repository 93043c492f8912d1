//! Picard iteration for certified strong ρ-contractions, instrumented with
//! the geometric Cauchy bounds the certificate promises.

use crate::contraction::certificate::StrongContractionCertificate;
use crate::contraction::trace::{
    residual, CertificateUsed, FixedPointResult, IterationTrace, SolveMode, TraceRow,
};
use crate::mapping::Mapping;
use crate::modular::{Element, ModularFunctional};
use crate::{Error, Result};

/// Default iteration budget.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Iterate `x ← Tx` from `x0` until the a-priori bound `k^m/(1−k)·r` drops
/// below `tol`, then run the fixed-point residual check.
///
/// `r = ρ(α·l·(Tx₀ − x₀))` with α the conjugate exponent of `c/l`; trace
/// row `m` records the step residual `ρ(c(x_{m+1} − x_m))` against its
/// bound `k^m·r`. The distance-to-limit envelope `ρ(c(z − x_m)) ≤
/// k^m/(1−k)·r` is available post-run via
/// [`IterationTrace::apriori_envelope`] once a reference point is known.
///
/// The three convergence modes run the same loop in this finite-dimensional
/// realization (all the convergence notions coincide here); the mode is
/// validated against its hypotheses and recorded in the result.
pub fn solve_strong(
    mapping: &Mapping,
    rho: &ModularFunctional,
    cert: &StrongContractionCertificate,
    x0: &Element,
    tol: f64,
    max_iter: usize,
    mode: SolveMode,
) -> Result<FixedPointResult> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    match mode {
        SolveMode::ScaledRho => {}
        SolveMode::PlainLargeC => {
            if cert.c < 1.0 {
                return Err(Error::Precondition(format!(
                    "mode plain_large_c needs c ≥ 1, got c = {}",
                    cert.c
                )));
            }
        }
        SolveMode::PlainSmallCDelta2 => {
            if !(cert.c > 0.0 && cert.c < 1.0) {
                return Err(Error::Precondition(format!(
                    "mode plain_small_c_delta2 needs 0 < c < 1, got c = {}",
                    cert.c
                )));
            }
            match rho.delta2() {
                Some(d2) if d2.valid => {}
                _ => {
                    return Err(Error::Delta2Required(
                        "mode plain_small_c_delta2 needs a valid Δ₂ certificate attached to ρ".into(),
                    ))
                }
            }
        }
        other => {
            return Err(Error::Precondition(format!(
                "solve_strong does not run mode {other:?}"
            )));
        }
    }
    if !mapping.domain().contains(x0) {
        return Err(Error::Precondition("x₀ lies outside the domain".into()));
    }

    let alpha = cert.conjugate_exponent();
    let tx0 = mapping.apply(x0)?;
    let r = match rho.distance(alpha * cert.l, &tx0, x0) {
        Ok(v) => v,
        Err(Error::Overflow { .. }) => {
            return Err(Error::NoAdmissibleStart(format!(
                "r = ρ(αl(Tx₀−x₀)) overflows at α = {alpha}"
            )));
        }
        Err(e) => return Err(e),
    };

    let k = cert.k;
    let mut trace = IterationTrace::new(r);
    trace.push_iterate(x0);

    let mut x = x0.clone();
    let mut tx = tx0;
    let mut m = 0usize;
    let mut bound_met = r / (1.0 - k) <= tol;
    while !bound_met && m < max_iter {
        let step_residual = rho.distance(cert.c, &tx, &x)?;
        trace.push_row(TraceRow {
            index: m,
            residual: step_residual,
            bound: k.powi(m as i32) * r,
        });
        x = tx;
        trace.push_iterate(&x);
        tx = mapping.apply(&x)?;
        m += 1;
        bound_met = k.powi(m as i32) / (1.0 - k) * r <= tol;
    }

    let final_residual = residual(rho, cert.c, &x, &tx)?;
    Ok(FixedPointResult {
        point: x,
        residual: final_residual,
        iterations: m,
        trace,
        certificate: CertificateUsed::Strong {
            certificate: cert.clone(),
        },
        converged: bound_met && final_residual <= tol,
        mode,
    })
}
