//! Schauder-type fixed point extraction for ρ-nonexpansive mappings:
//! approximating sequence, cluster-point extraction, residual certificate.

use crate::contraction::{
    certify_nonexpansive, CertificateUsed, FixedPointResult, IterationTrace, SolveMode, TraceRow,
};
use crate::mapping::{DomainDescriptor, Mapping};
use crate::modular::{Element, GrowthProfile, ModularFunctional};
use crate::nonexpansive::{approximating_sequence, ApproxFixedPointTrace, Schedule};
use crate::{Error, Result};

/// Tail length over which the cluster point is taken.
const CLUSTER_TAIL: usize = 5;

/// The approximating sequence runs this much past the requested tolerance,
/// because the extracted medoid may sit a few rows behind the last iterate
/// and the certificate is evaluated at the medoid's own row. 256 = 4⁴
/// covers a medoid four rows back at quadratic residual growth per row.
const SEQUENCE_TOL_FACTOR: f64 = 1.0 / 256.0;

/// The τ-term of the last row must have decayed to this fraction of the
/// first row's (or below the absolute floor) for the bounded-range
/// surrogate to count as satisfied.
const TAU_DECAY_FACTOR: f64 = 0.5;
const TAU_ABS_FLOOR: f64 = 1e-9;

/// Pairs in the internal nonexpansiveness pre-check.
const PRECHECK_PAIRS: usize = 200;

/// Medoid of `points` under ρ-distance at scale 1.
fn medoid(rho: &ModularFunctional, points: &[&Element]) -> Result<usize> {
    let mut best = (0usize, f64::INFINITY);
    for (i, candidate) in points.iter().enumerate() {
        let mut total = 0.0;
        for other in points {
            total += rho.distance(1.0, candidate, other)?;
        }
        if total < best.1 {
            best = (i, total);
        }
    }
    Ok(best.0)
}

/// Decide whether the run stayed inside a bounded region. ρ-compactness of
/// the range closure is not decidable from samples; in this
/// finite-dimensional realization bounded iterates have cluster points, so
/// the check is a boundedness surrogate: the τ-term `ρ(2(1−k_n)Tx_n)` must
/// decay along the run, and iterates must stay finite.
fn check_compactness_surrogate(trace: &ApproxFixedPointTrace) -> Result<()> {
    let first = trace
        .rows
        .first()
        .ok_or_else(|| Error::Internal("empty approximating trace".into()))?;
    let last = trace.rows.last().expect("nonempty");
    for row in &trace.rows {
        if !(row.x_n.is_finite() && row.tx_n.is_finite()) {
            return Err(Error::CompactnessViolated(format!(
                "iterate diverged at schedule index {}",
                row.index
            )));
        }
    }
    let budget = (first.tau_term * TAU_DECAY_FACTOR).max(TAU_ABS_FLOOR);
    if last.tau_term > budget {
        return Err(Error::CompactnessViolated(format!(
            "ρ(2(1−k_n)Tx_n) failed to decay: {} at n = {} vs {} at n = {}",
            first.tau_term, first.index, last.tau_term, last.index
        )));
    }
    Ok(())
}

/// Fixed point of a ρ-nonexpansive mapping on a ρ-closed star-shaped
/// domain, via the approximating schedule and cluster-point extraction.
///
/// The returned residual is `ρ((Ty − y)/3)`, certified through
/// `ρ((Ty−y)/3) ≤ 2ρ(Tx_{n'} − y) + ρ(Tx_{n'} − x_{n'})` at the best tail
/// index `n'`.
pub fn schauder_fixed_point(
    mapping: &Mapping,
    domain: &DomainDescriptor,
    schedule: &Schedule,
    rho: &ModularFunctional,
    growth: &GrowthProfile,
    tol: f64,
) -> Result<FixedPointResult> {
    if !domain.is_closed() {
        return Err(Error::Precondition(
            "schauder extraction needs a ρ-closed domain".into(),
        ));
    }
    let z = domain
        .star_center()
        .ok_or_else(|| Error::Precondition("domain declares no star center".into()))?
        .clone();

    let nonexpansive = certify_nonexpansive(mapping, rho, PRECHECK_PAIRS, growth.seed)?;
    if !nonexpansive.passed {
        return Err(Error::Precondition(format!(
            "mapping is not ρ-nonexpansive on samples (margin {})",
            nonexpansive.margin
        )));
    }

    let approx = approximating_sequence(
        mapping,
        &z,
        schedule,
        rho,
        growth,
        tol * SEQUENCE_TOL_FACTOR,
    )?;
    check_compactness_surrogate(&approx)?;

    let tail_start = approx.rows.len().saturating_sub(CLUSTER_TAIL);
    let tail = &approx.rows[tail_start..];
    let candidates: Vec<&Element> = tail.iter().map(|r| &r.tx_n).collect();
    let y = candidates[medoid(rho, &candidates)?].clone();

    // proof estimate: ρ((Ty−y)/3) ≤ 2ρ(Tx_{n'} − y) + ρ(Tx_{n'} − x_{n'})
    let mut best_rhs = f64::INFINITY;
    for row in tail {
        let rhs = 2.0 * rho.distance(1.0, &row.tx_n, &y)? + row.residual;
        best_rhs = best_rhs.min(rhs);
    }
    let ty = mapping.apply(&y)?;
    let residual = rho.distance(1.0 / 3.0, &ty, &y)?;

    let mut trace = IterationTrace::new(0.0);
    for row in &approx.rows {
        trace.push_row(TraceRow {
            index: row.index,
            residual: row.residual,
            bound: row.bound(),
        });
        trace.push_iterate(&row.x_n);
    }

    Ok(FixedPointResult {
        point: y,
        residual,
        iterations: approx.rows.len(),
        trace,
        certificate: CertificateUsed::Nonexpansive {
            margin: nonexpansive.margin,
        },
        converged: best_rhs <= tol && residual <= tol,
        mode: SolveMode::Schauder,
    })
}
