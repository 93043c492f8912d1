//! The segment equation `x = (1−β)z + β·Tx` and the approximating-fixed-
//! point schedule built on it.

use crate::contraction::{solve_strong, SolveMode, StrongContractionCertificate, K_FLOOR};
use crate::mapping::Mapping;
use crate::modular::{
    growth_function_estimate, Element, GrowthProfile, ModularFunctional, REGULAR_GROWTH_MARGIN,
};
use crate::nonexpansive::Schedule;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Inner segment solves run this much tighter than the outer target.
pub const INNER_TOL_FACTOR: f64 = 1e-6;

/// Budget for the residual refinement loop after the delegated solve.
const REFINE_CAP: usize = 50_000_000;

/// Build the segment mapping `S x = (1−β)z + β·Tx` on T's domain.
fn segment_mapping(mapping: &Mapping, z: &Element, beta: f64) -> Mapping {
    let inner = mapping.clone();
    let center = z.clone();
    Mapping::new(
        format!("segment(β = {beta}) of {}", mapping.label()),
        mapping.domain().clone(),
        Arc::new(move |x: &Element| {
            let tx = inner.apply_raw(x);
            center.combine(1.0 - beta, &tx, beta)
        }),
    )
}

fn solve_segment_inner(
    mapping: &Mapping,
    z: &Element,
    beta: f64,
    rho: &ModularFunctional,
    growth: &GrowthProfile,
    tol: f64,
    x_start: &Element,
) -> Result<Element> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Precondition(format!(
            "segment parameter β must lie in (0, 1), got {beta}"
        )));
    }
    if !mapping.domain().contains(z) {
        return Err(Error::Precondition(
            "segment center z lies outside the domain".into(),
        ));
    }
    if !growth.regular_growth_ok {
        return Err(Error::Precondition(
            "regular growth certification is required for segment solves".into(),
        ));
    }

    // λ midway inside (1, 1/β); then λβ = (1 + β)/2 < 1
    let lambda = 0.5 * (1.0 + 1.0 / beta);
    let t = lambda * beta;
    let w_hat = growth_function_estimate(rho, t, growth.sample_count, growth.seed)?.estimate;
    if w_hat >= 1.0 - REGULAR_GROWTH_MARGIN {
        return Err(Error::RegularGrowthViolated {
            t,
            estimate: w_hat,
        });
    }

    let s = rho.s_convexity().unwrap_or(1.0);
    let cert = StrongContractionCertificate::new(lambda, 1.0, w_hat.max(K_FLOOR), s)?;
    let segment = segment_mapping(mapping, z, beta);
    let delegated = solve_strong(
        &segment,
        rho,
        &cert,
        x_start,
        tol,
        crate::contraction::DEFAULT_MAX_ITER,
        SolveMode::PlainLargeC,
    )?;

    // the delegated stop bounds ρ((λ/2)·(Sx − x)); the contract here is at
    // scale 1, so refine on the raw residual
    let mut x = delegated.point;
    let mut sx = segment.apply(&x)?;
    let mut refinements = 0usize;
    while rho.distance(1.0, &x, &sx)? > tol {
        x = sx;
        sx = segment.apply(&x)?;
        refinements += 1;
        if refinements >= REFINE_CAP {
            return Err(Error::Unconverged(format!(
                "segment refinement exhausted {REFINE_CAP} steps at β = {beta}"
            )));
        }
    }
    Ok(x)
}

/// Solve the segment equation `x = (1−β)z + β·Tx` for a ρ-nonexpansive
/// mapping under regular growth, to `ρ(x − ((1−β)z + β·Tx)) ≤ tol`.
///
/// Picks `λ` midway in `(1, 1/β)`, certifies the auxiliary mapping as a
/// strong contraction with `c = λ, l = 1, k = Ŵ(λβ)` and delegates to the
/// strong solver, then refines on the scale-1 residual.
pub fn solve_segment(
    mapping: &Mapping,
    z: &Element,
    beta: f64,
    rho: &ModularFunctional,
    growth: &GrowthProfile,
    tol: f64,
) -> Result<Element> {
    solve_segment_inner(mapping, z, beta, rho, growth, tol, z)
}

/// One row of an approximating-fixed-point run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxRow {
    pub index: usize,
    pub k_n: f64,
    pub x_n: Element,
    pub tx_n: Element,
    /// `ρ(Tx_n − x_n)`.
    pub residual: f64,
    /// First bound term, `ρ(2(1−k_n)·Tx_n)`; this is the τ_ρ-boundedness
    /// quantity that must vanish along the run.
    pub tau_term: f64,
    /// Second bound term, `ρ(2(1−k_n)·z)`.
    pub z_term: f64,
}

impl ApproxRow {
    pub fn bound(&self) -> f64 {
        self.tau_term + self.z_term
    }

    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound() * (1.0 + 1e-9) + f64::MIN_POSITIVE
    }
}

/// Trace of an approximating-fixed-point run along a schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApproxFixedPointTrace {
    pub rows: Vec<ApproxRow>,
    /// True when the final residual reached the requested tolerance before
    /// the schedule was exhausted.
    pub converged: bool,
}

impl ApproxFixedPointTrace {
    pub fn final_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.residual)
    }
}

/// The τ-term must have shrunk by row [`TAU_CHECK_FROM`] or the range is
/// declared not τ_ρ-bounded; mappings whose segment solutions escape keep
/// `ρ(2(1−k_n)Tx_n)` constant, and every further row only gets costlier.
const TAU_CHECK_FROM: usize = 4;
const TAU_ABS_FLOOR: f64 = 1e-9;

/// Walk the schedule `k_n ↗ 1`, solving `x_n = (1−k_n)z + k_n·Tx_n` at each
/// step (warm-started from `x_{n−1}`), and record the residual
/// `ρ(Tx_n − x_n)` against its bound `ρ(2(1−k_n)Tx_n) + ρ(2(1−k_n)z)`.
///
/// Stops early once the residual reaches `tol`. The recorded `tau_term`
/// column is the empirical τ_ρ-boundedness check: for mappings with
/// τ_ρ-bounded range it tends to zero along the run, and a run on which it
/// refuses to decrease is aborted with a diagnostic.
pub fn approximating_sequence(
    mapping: &Mapping,
    z: &Element,
    schedule: &Schedule,
    rho: &ModularFunctional,
    growth: &GrowthProfile,
    tol: f64,
) -> Result<ApproxFixedPointTrace> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
    }
    let inner_tol = (tol * INNER_TOL_FACTOR).max(1e-300);
    let mut rows: Vec<ApproxRow> = Vec::with_capacity(schedule.len());
    let mut warm = z.clone();
    let mut converged = false;
    for (i, k_n) in schedule.values().enumerate() {
        let index = i + 1;
        let x_n = solve_segment_inner(mapping, z, k_n, rho, growth, inner_tol, &warm)
            .map_err(|e| Error::SegmentSolve {
                index,
                source: Box::new(e),
            })?;
        let tx_n = mapping.apply(&x_n)?;
        let residual = rho.distance(1.0, &tx_n, &x_n)?;
        let scale = 2.0 * (1.0 - k_n);
        let tau_term = rho.evaluate(&tx_n.scale(scale))?;
        let z_term = rho.evaluate(&z.scale(scale))?;
        warm = x_n.clone();
        rows.push(ApproxRow {
            index,
            k_n,
            x_n,
            tx_n,
            residual,
            tau_term,
            z_term,
        });
        if residual <= tol {
            converged = true;
            break;
        }
        if index >= TAU_CHECK_FROM {
            let tau_first = rows[0].tau_term;
            if tau_term > TAU_ABS_FLOOR && tau_term >= tau_first * (1.0 - 1e-6) {
                return Err(Error::CompactnessViolated(format!(
                    "ρ(2(1−k_n)Tx_n) is not decaying: {} at n = 1 vs {} at n = {}; T(B) is not τ_ρ-bounded along this orbit",
                    tau_first, tau_term, index
                )));
            }
        }
    }
    Ok(ApproxFixedPointTrace { rows, converged })
}
