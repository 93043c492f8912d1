//! λ-scheme for strict contractions on convex domains containing 0:
//! solve `x_n = λ_n·Tx_n` along `λ_n ↗ 1` and pass to the limit while the
//! almost-fixed set stays bounded.

use crate::contraction::{
    solve_strong, CertificateUsed, FixedPointResult, IterationTrace, SolveMode,
    StrongContractionCertificate, TraceRow, DEFAULT_MAX_ITER,
};
use crate::mapping::Mapping;
use crate::modular::{Element, ModularFunctional};
use crate::nonexpansive::Schedule;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Default cap on the running sup of `ρ(x_n)` before the boundedness
/// hypothesis is declared unobserved.
pub const DEFAULT_SUP_CAP: f64 = 1e8;

const INNER_TOL_FACTOR: f64 = 1e-6;

/// One λ-row: the solution of `x = λ·Tx` and its modular size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaRow {
    pub index: usize,
    pub lambda: f64,
    pub x: Element,
    pub rho_x: f64,
}

/// Pairwise Cauchy-bound check row.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CauchyRow {
    pub n: usize,
    pub m: usize,
    pub distance: f64,
    pub bound: f64,
}

impl CauchyRow {
    pub fn within_bound(&self) -> bool {
        self.distance <= self.bound * (1.0 + 1e-9) + f64::MIN_POSITIVE
    }
}

/// λ-scheme outcome: the limit candidate plus the full λ-trace.
#[derive(Debug, Clone)]
pub struct Prop31Report {
    pub result: FixedPointResult,
    pub lambda_rows: Vec<LambdaRow>,
    /// Final running sup of `ρ(x_n)`.
    pub sup_rho: f64,
}

impl Prop31Report {
    /// Evaluate the Cauchy bound
    /// `ρ(x_m − x_n) ≤ (λ_m − λ_n)/(λ_m(1−k))·sup ρ(x)` on every recorded
    /// pair `m > n`, with the final running sup.
    pub fn cauchy_rows(&self, rho: &ModularFunctional, k: f64) -> Result<Vec<CauchyRow>> {
        let mut rows = Vec::new();
        for (i, low) in self.lambda_rows.iter().enumerate() {
            for high in &self.lambda_rows[i + 1..] {
                let distance = rho.distance(1.0, &high.x, &low.x)?;
                let bound =
                    (high.lambda - low.lambda) / (high.lambda * (1.0 - k)) * self.sup_rho;
                rows.push(CauchyRow {
                    n: low.index,
                    m: high.index,
                    distance,
                    bound,
                });
            }
        }
        Ok(rows)
    }
}

/// Solve the λ-scheme for a mapping with `ρ(Tx − Ty) ≤ k·ρ(x − y)` on a
/// convex ρ-closed domain containing 0, under a convex modular.
///
/// Each `x_n = λ_n·Tx_n` is the fixed point of `U_n x = λ_n·Tx`, a strong
/// contraction with constants `(c = 1/λ_n, l = 1, k)`: by convexity
/// `ρ(c·λ_n(Tx − Ty)) = ρ(Tx − Ty) ≤ k·ρ(x − y)`. The running sup of
/// `ρ(x_n)` is monitored against `sup_cap`; exceeding it rejects the run,
/// since the theorem's hypothesis `sup ρ < ∞` was not observed.
pub fn proposition31_solve(
    mapping: &Mapping,
    rho: &ModularFunctional,
    k: f64,
    schedule: &Schedule,
    tol: f64,
    sup_cap: Option<f64>,
) -> Result<Prop31Report> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Precondition(format!("k must lie in (0, 1), got {k}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    if !rho.is_convex() {
        return Err(Error::Precondition(
            "the λ-scheme needs a convex modular (s = 1 on every coordinate)".into(),
        ));
    }
    let domain = mapping.domain();
    let origin = Element::zeros(domain.dimension());
    if !domain.contains(&origin) {
        return Err(Error::Precondition("the domain must contain 0".into()));
    }
    if domain.is_convex() == Some(false) {
        return Err(Error::Precondition("the domain must be convex".into()));
    }
    let cap = sup_cap.unwrap_or(DEFAULT_SUP_CAP);
    let inner_tol = (tol * INNER_TOL_FACTOR).max(1e-300);
    let s = 1.0;

    let mut lambda_rows = Vec::with_capacity(schedule.len());
    let mut sup_rho = 0.0f64;
    let mut warm = origin.clone();
    for (i, lambda) in schedule.values().enumerate() {
        let index = i + 1;
        let inner = mapping.clone();
        let scaled = Mapping::new(
            format!("λ·T at λ = {lambda}"),
            domain.clone(),
            Arc::new(move |x: &Element| inner.apply_raw(x).scale(lambda)),
        );
        let cert = StrongContractionCertificate::new(1.0 / lambda, 1.0, k, s)?;
        let solved = solve_strong(
            &scaled,
            rho,
            &cert,
            &warm,
            inner_tol,
            DEFAULT_MAX_ITER,
            SolveMode::PlainLargeC,
        )
        .map_err(|e| Error::SegmentSolve {
            index,
            source: Box::new(e),
        })?;
        let x = solved.point;
        let rho_x = rho.evaluate(&x)?;
        sup_rho = sup_rho.max(rho_x);
        if sup_rho > cap {
            return Err(Error::SupUnbounded {
                sup: sup_rho,
                cap,
            });
        }
        warm = x.clone();
        lambda_rows.push(LambdaRow {
            index,
            lambda,
            x,
            rho_x,
        });
    }

    let last = lambda_rows
        .last()
        .ok_or_else(|| Error::Internal("empty λ schedule".into()))?;
    let point = last.x.clone();
    let t_point = mapping.apply(&point)?;
    let residual = rho.distance(1.0 / 3.0, &t_point, &point)?;

    // trace: consecutive-pair distances against the Cauchy bound at the
    // final running sup
    let mut trace = IterationTrace::new(sup_rho);
    for pair in lambda_rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        trace.push_row(TraceRow {
            index: b.index,
            residual: rho.distance(1.0, &b.x, &a.x)?,
            bound: (b.lambda - a.lambda) / (b.lambda * (1.0 - k)) * sup_rho,
        });
    }
    for row in &lambda_rows {
        trace.push_iterate(&row.x);
    }

    Ok(Prop31Report {
        result: FixedPointResult {
            point,
            residual,
            iterations: lambda_rows.len(),
            trace,
            certificate: CertificateUsed::LambdaScheme { k },
            converged: residual <= tol,
            mode: SolveMode::LambdaScheme,
        },
        lambda_rows,
        sup_rho,
    })
}
