//! Iteration traces pairing observed residuals with theoretical bounds.

use crate::contraction::certificate::{StrictContractionCertificate, StrongContractionCertificate};
use crate::mapping::Mapping;
use crate::modular::{Delta2Certificate, Element, ModularFunctional};
use crate::Result;
use serde::{Deserialize, Serialize};

/// Cap on stored per-iteration elements; residual/bound rows are always
/// kept, full iterates only up to here.
pub const ITERATE_STORE_CAP: usize = 8192;

/// One recorded iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub index: usize,
    /// Scheme-specific residual (see the solver that produced the trace).
    pub residual: f64,
    /// The theoretical bound the scheme promises at this index.
    pub bound: f64,
}

impl TraceRow {
    /// Bound compliance with the crate-wide slack `(1 + 1e−9)`.
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound * (1.0 + 1e-9) + f64::MIN_POSITIVE
    }
}

/// Residual/bound rows plus (capped) stored iterates for post-run checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationTrace {
    pub rows: Vec<TraceRow>,
    /// The constant `r` of the active theorem, fixed before the run.
    pub initial_r: f64,
    /// Stored iterates `x_0, x_1, …` (at most [`ITERATE_STORE_CAP`]).
    pub iterates: Vec<Element>,
}

impl IterationTrace {
    pub fn new(initial_r: f64) -> Self {
        IterationTrace {
            rows: Vec::new(),
            initial_r,
            iterates: Vec::new(),
        }
    }

    pub fn push_iterate(&mut self, x: &Element) {
        if self.iterates.len() < ITERATE_STORE_CAP {
            self.iterates.push(x.clone());
        }
    }

    pub fn push_row(&mut self, row: TraceRow) {
        self.rows.push(row);
    }

    /// Fraction of rows satisfying their bound.
    pub fn bound_compliance(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        let ok = self.rows.iter().filter(|r| r.within_bound()).count();
        ok as f64 / self.rows.len() as f64
    }

    /// A-priori envelope against a reference point: for every stored
    /// iterate `x_m`, pair `ρ(c(z_ref − x_m))` with `k^m/(1−k)·r`.
    pub fn apriori_envelope(
        &self,
        rho: &ModularFunctional,
        z_ref: &Element,
        c: f64,
        k: f64,
    ) -> Result<Vec<TraceRow>> {
        let mut rows = Vec::with_capacity(self.iterates.len());
        for (m, x_m) in self.iterates.iter().enumerate() {
            let distance = rho.distance(c, z_ref, x_m)?;
            let bound = k.powi(m as i32) / (1.0 - k) * self.initial_r;
            rows.push(TraceRow {
                index: m,
                residual: distance,
                bound,
            });
        }
        Ok(rows)
    }
}

/// Which convergence mode a solve ran under.
///
/// The three strong-contraction modes run the same loop in this
/// finite-dimensional realization (every convergence notion coincides
/// here); they differ in which hypotheses they validate and record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Convergence measured at scale `c`: `ρ(c(x_m − z)) → 0`.
    ScaledRho,
    /// Plain ρ-convergence (`ρ(x_m − z) → 0`), admissible when `c ≥ 1`.
    PlainLargeC,
    /// Plain ρ-convergence with `0 < c < 1`; needs Δ₂ on the modular.
    PlainSmallCDelta2,
    /// Strict contraction routed through `S = T^{p₀}` under local Δ₂.
    StrictDelta2,
    /// Approximating sequence along a schedule, no extraction step.
    ApproximatingSequence,
    /// Schauder-type extraction from an approximating sequence.
    Schauder,
    /// λ-scheme for strict contractions with bounded almost-fixed sets.
    LambdaScheme,
}

/// The certificate a solve relied on, kept with the result for audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateUsed {
    Strong {
        certificate: StrongContractionCertificate,
    },
    Strict {
        certificate: StrictContractionCertificate,
        delta2: Delta2Certificate,
        /// Power `p₀` with `k^{p₀}` below the local-constant threshold.
        power: u32,
        /// Effective constant `k₀ = k^{p₀}` of `S = T^{p₀}`.
        effective_k: f64,
    },
    Nonexpansive {
        margin: f64,
    },
    /// λ-scheme hypothesis `ρ(Tx − Ty) ≤ k·ρ(x − y)` with convex ρ.
    LambdaScheme {
        k: f64,
    },
}

/// A fixed-point solve outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub point: Element,
    /// Fixed-point residual; `ρ((c/2)(T·point − point))` for the
    /// contraction schemes, `ρ((T·point − point)/3)` for the §III schemes.
    pub residual: f64,
    pub iterations: usize,
    pub trace: IterationTrace,
    pub certificate: CertificateUsed,
    pub converged: bool,
    pub mode: SolveMode,
}

/// `ρ((c/2)(Tx − x))`: the paper's fixed-point test quantity. Zero exactly
/// at fixed points (for strictly increasing generators).
pub fn residual(rho: &ModularFunctional, c: f64, x: &Element, tx: &Element) -> Result<f64> {
    rho.distance(c / 2.0, tx, x)
}

/// Convenience: residual of a mapping at a point.
pub fn residual_at(rho: &ModularFunctional, c: f64, mapping: &Mapping, x: &Element) -> Result<f64> {
    let tx = mapping.apply(x)?;
    residual(rho, c, x, &tx)
}
