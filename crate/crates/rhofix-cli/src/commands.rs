//! The four subcommands.

use crate::common::{classify, CliError, RunContext, RunOverrides};
use rhofix::contraction::{
    certify_nonexpansive, certify_strict, certify_strong, solve_strict_delta2, solve_strong,
    CertificateUsed, FixedPointResult, IterationTrace, SolveMode, StrictContractionCertificate,
    StrongContractionCertificate, TraceRow,
};
use rhofix::io::{
    parse_trace_csv, write_approx_trace_csv, write_certify_report, write_result_json,
    write_sweep_csv, write_trace_csv, CertifyOutcome, CertifyReportDoc, CertifyRequest,
    ProblemSpec, SolverKind, SweepRow, TraceKind,
};
use rhofix::modular::{
    check_regular_growth, estimate_delta2, verify_modular_axioms, Delta2Certificate, Element,
    GrowthProfile, ModularFunctional,
};
use rhofix::nonexpansive::{
    approximating_sequence, proposition31_solve, schauder_fixed_point, solve_segment,
};
use rhofix::Mapping;
use std::path::PathBuf;
use std::process::ExitCode;

fn need(value: Option<f64>, name: &str, solver: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| {
        CliError::Usage(format!("solver `{solver}` needs constant `{name}` in the config"))
    })
}

fn growth_profile(
    ctx: &RunContext,
    rho: &ModularFunctional,
) -> Result<GrowthProfile, CliError> {
    let grid = ctx.growth_grid();
    let report =
        check_regular_growth(rho, &grid, ctx.config.sample_count).map_err(classify)?;
    if !report.ok {
        return Err(CliError::Math(format!(
            "regular growth fails on the certification grid (margin {})",
            report.margin
        )));
    }
    Ok(report.profile)
}

/// `certify`: run the requested hypothesis checks and write `report.json`.
pub fn certify(overrides: &RunOverrides) -> Result<ExitCode, CliError> {
    let ctx = RunContext::load(overrides)?;
    if ctx.config.certify.is_empty() {
        return Err(CliError::Usage(
            "config requests no certifications (`certify` list is empty)".into(),
        ));
    }
    let rho = ctx.load_modular()?;
    let needs_mapping = ctx.config.certify.iter().any(|r| {
        matches!(
            r,
            CertifyRequest::Strong | CertifyRequest::Strict | CertifyRequest::Nonexpansive
        )
    });
    let mapping = if needs_mapping {
        Some(ctx.load_problem()?.mapping)
    } else {
        None
    };

    let constants = &ctx.config.constants;
    let (sample_count, seed) = (ctx.config.sample_count, ctx.config.seed);
    let mut outcomes = Vec::new();
    for request in &ctx.config.certify {
        let outcome = match request {
            CertifyRequest::Axioms => {
                let report = verify_modular_axioms(&rho, sample_count, seed).map_err(classify)?;
                CertifyOutcome::Axioms {
                    passed: report.all_passed(),
                    report,
                }
            }
            CertifyRequest::Strong => {
                let c = need(constants.c, "c", "strong")?;
                let l = need(constants.l, "l", "strong")?;
                let mapping = mapping.as_ref().expect("mapping loaded");
                match certify_strong(mapping, &rho, c, l, sample_count, seed) {
                    Ok(certification) => CertifyOutcome::Strong {
                        passed: true,
                        certification: Some(certification),
                        error: None,
                    },
                    Err(e @ rhofix::Error::CertificationRejected { .. }) => {
                        CertifyOutcome::Strong {
                            passed: false,
                            certification: None,
                            error: Some(e.to_string()),
                        }
                    }
                    Err(e) => return Err(classify(e)),
                }
            }
            CertifyRequest::Strict => {
                let c = need(constants.c, "c", "strict")?;
                let mapping = mapping.as_ref().expect("mapping loaded");
                match certify_strict(mapping, &rho, c, sample_count, seed) {
                    Ok(certification) => CertifyOutcome::Strict {
                        passed: true,
                        certification: Some(certification),
                        error: None,
                    },
                    Err(e @ rhofix::Error::CertificationRejected { .. }) => {
                        CertifyOutcome::Strict {
                            passed: false,
                            certification: None,
                            error: Some(e.to_string()),
                        }
                    }
                    Err(e) => return Err(classify(e)),
                }
            }
            CertifyRequest::Nonexpansive => {
                let mapping = mapping.as_ref().expect("mapping loaded");
                let report =
                    certify_nonexpansive(mapping, &rho, sample_count, seed).map_err(classify)?;
                CertifyOutcome::Nonexpansive {
                    passed: report.passed,
                    report,
                }
            }
            CertifyRequest::Delta2 => {
                let delta = constants.delta.unwrap_or(1.0);
                let certificate =
                    estimate_delta2(&rho, delta, sample_count, seed).map_err(classify)?;
                CertifyOutcome::Delta2 {
                    passed: certificate.valid,
                    certificate,
                }
            }
            CertifyRequest::RegularGrowth => {
                let grid = ctx.growth_grid();
                let report =
                    check_regular_growth(&rho, &grid, sample_count).map_err(classify)?;
                CertifyOutcome::RegularGrowth {
                    passed: report.ok,
                    report,
                }
            }
        };
        outcomes.push(outcome);
    }

    let doc = CertifyReportDoc::new(outcomes);
    let path = ctx.write_output("report.json", &write_certify_report(&doc))?;
    for outcome in &doc.outcomes {
        println!(
            "{}: {}",
            certify_name(outcome),
            if outcome.passed() { "pass" } else { "FAIL" }
        );
    }
    println!("report written to {}", path.display());
    Ok(if doc.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn certify_name(outcome: &CertifyOutcome) -> &'static str {
    match outcome {
        CertifyOutcome::Axioms { .. } => "axioms",
        CertifyOutcome::Strong { .. } => "strong",
        CertifyOutcome::Strict { .. } => "strict",
        CertifyOutcome::Nonexpansive { .. } => "nonexpansive",
        CertifyOutcome::Delta2 { .. } => "delta2",
        CertifyOutcome::RegularGrowth { .. } => "regular_growth",
    }
}

/// Everything one solver run produces.
struct SolveArtifacts {
    result: FixedPointResult,
    trace_csv: String,
    note: Option<String>,
}

fn strong_certificate(
    ctx: &RunContext,
    mapping: &Mapping,
    rho: &ModularFunctional,
) -> Result<StrongContractionCertificate, CliError> {
    let constants = &ctx.config.constants;
    let c = need(constants.c, "c", "strong")?;
    let l = need(constants.l, "l", "strong")?;
    let s = constants
        .s
        .or_else(|| rho.s_convexity())
        .unwrap_or(1.0);
    match constants.k {
        Some(k) => StrongContractionCertificate::new(c, l, k, s).map_err(classify),
        None => Ok(
            certify_strong(mapping, rho, c, l, ctx.config.sample_count, ctx.config.seed)
                .map_err(classify)?
                .certificate,
        ),
    }
}

fn run_solver(ctx: &RunContext, spec: &ProblemSpec) -> Result<SolveArtifacts, CliError> {
    let solver = ctx
        .config
        .solver
        .ok_or_else(|| CliError::Usage("config selects no solver".into()))?;
    let built = spec.build().map_err(classify)?;
    let mapping = &built.mapping;
    let rho = ctx.load_modular()?;
    let dimension = mapping.domain().dimension();
    if rho.dimension() != dimension {
        return Err(CliError::Usage(format!(
            "modular dimension {} does not match problem dimension {dimension}",
            rho.dimension()
        )));
    }
    let constants = &ctx.config.constants;
    let (tol, max_iter) = (ctx.config.tol, ctx.config.max_iter);

    match solver {
        SolverKind::Strong => {
            let cert = strong_certificate(ctx, mapping, &rho)?;
            let x0 = ctx.start_point(dimension)?;
            let mode = ctx.config.mode.unwrap_or(SolveMode::ScaledRho);
            let result = solve_strong(mapping, &rho, &cert, &x0, tol, max_iter, mode)
                .map_err(classify)?;
            Ok(SolveArtifacts {
                trace_csv: write_trace_csv(&result.trace),
                result,
                note: None,
            })
        }
        SolverKind::StrictDelta2 => {
            let c = need(constants.c, "c", "strict_delta2")?;
            let k = need(constants.k, "k", "strict_delta2")?;
            let cert = StrictContractionCertificate::new(c, k).map_err(classify)?;
            let d2 = match (constants.delta, constants.big_l, constants.big_m) {
                (Some(delta), Some(l), Some(m)) => {
                    // user-supplied constants are replayed against the
                    // modular before they are trusted
                    let mut d2 = Delta2Certificate::from_constants(delta, l, m);
                    let margin = d2
                        .replay(&rho, ctx.config.sample_count, ctx.config.seed)
                        .map_err(classify)?;
                    d2.empirical_margin = margin;
                    d2.valid = margin <= rhofix::modular::ABS_TOL;
                    d2
                }
                _ => {
                    let delta = constants.delta.unwrap_or(1.0);
                    estimate_delta2(&rho, delta, ctx.config.sample_count, ctx.config.seed)
                        .map_err(classify)?
                }
            };
            if !d2.valid {
                return Err(CliError::Usage(format!(
                    "Δ₂ certificate is invalid (worst ratio {}, margin {})",
                    d2.worst_ratio, d2.empirical_margin
                )));
            }
            let x0 = ctx.start_point(dimension)?;
            let report = solve_strict_delta2(mapping, &rho, &cert, &d2, &x0, tol, max_iter)
                .map_err(classify)?;
            Ok(SolveArtifacts {
                trace_csv: write_trace_csv(&report.result.trace),
                note: Some(format!(
                    "burn_in={} p0={} k0={} r={} uniqueness_gap={:?}",
                    report.burn_in_steps,
                    report.power,
                    report.effective_k,
                    report.r,
                    report.uniqueness_gap
                )),
                result: report.result,
            })
        }
        SolverKind::Segment => {
            let beta = need(constants.beta, "beta", "segment")?;
            let z = ctx
                .star_center(dimension)?
                .unwrap_or_else(|| Element::zeros(dimension));
            let growth = growth_profile(ctx, &rho)?;
            let x = solve_segment(mapping, &z, beta, &rho, &growth, tol).map_err(classify)?;
            let tx = mapping.apply(&x).map_err(classify)?;
            let segment_image = z.combine(1.0 - beta, &tx, beta);
            let residual = rho.distance(1.0, &x, &segment_image).map_err(classify)?;
            let result = FixedPointResult {
                point: x,
                residual,
                iterations: 0,
                trace: IterationTrace::new(0.0),
                certificate: CertificateUsed::Nonexpansive { margin: 0.0 },
                converged: true,
                mode: SolveMode::PlainLargeC,
            };
            Ok(SolveArtifacts {
                trace_csv: write_trace_csv(&result.trace),
                result,
                note: None,
            })
        }
        SolverKind::ApproxSchedule => {
            let schedule = ctx
                .config
                .schedule
                .as_ref()
                .ok_or_else(|| CliError::Usage("approx_schedule needs a schedule".into()))?
                .build()
                .map_err(classify)?;
            let z = ctx
                .star_center(dimension)?
                .unwrap_or_else(|| Element::zeros(dimension));
            let growth = growth_profile(ctx, &rho)?;
            let trace = approximating_sequence(mapping, &z, &schedule, &rho, &growth, tol)
                .map_err(classify)?;
            let trace_csv = write_approx_trace_csv(&trace);
            let last = trace
                .rows
                .last()
                .ok_or_else(|| CliError::Usage("schedule produced no rows".into()))?;
            let mut solver_trace = IterationTrace::new(0.0);
            for row in &trace.rows {
                solver_trace.push_row(TraceRow {
                    index: row.index,
                    residual: row.residual,
                    bound: row.bound(),
                });
            }
            let result = FixedPointResult {
                point: last.x_n.clone(),
                residual: last.residual,
                iterations: trace.rows.len(),
                trace: solver_trace,
                certificate: CertificateUsed::Nonexpansive { margin: 0.0 },
                converged: trace.converged,
                mode: SolveMode::ApproximatingSequence,
            };
            Ok(SolveArtifacts {
                trace_csv,
                result,
                note: None,
            })
        }
        SolverKind::Schauder => {
            let schedule = ctx
                .config
                .schedule
                .as_ref()
                .ok_or_else(|| CliError::Usage("schauder needs a schedule".into()))?
                .build()
                .map_err(classify)?;
            let growth = growth_profile(ctx, &rho)?;
            let domain = match ctx.star_center(dimension)? {
                Some(z) => mapping.domain().clone().with_star_center(z),
                None => mapping.domain().clone(),
            };
            let result =
                schauder_fixed_point(mapping, &domain, &schedule, &rho, &growth, tol)
                    .map_err(classify)?;
            Ok(SolveArtifacts {
                trace_csv: write_trace_csv(&result.trace),
                result,
                note: None,
            })
        }
        SolverKind::Prop31 => {
            let k = need(constants.k, "k", "prop31")?;
            let schedule = ctx
                .config
                .schedule
                .as_ref()
                .ok_or_else(|| CliError::Usage("prop31 needs a schedule".into()))?
                .build()
                .map_err(classify)?;
            let report = proposition31_solve(
                mapping,
                &rho,
                k,
                &schedule,
                tol,
                ctx.config.sup_cap,
            )
            .map_err(classify)?;
            Ok(SolveArtifacts {
                trace_csv: write_trace_csv(&report.result.trace),
                note: Some(format!("sup_rho={}", report.sup_rho)),
                result: report.result,
            })
        }
    }
}

/// `solve`: run the configured solver, write `result.json` + `trace.csv`.
pub fn solve(overrides: &RunOverrides) -> Result<ExitCode, CliError> {
    let ctx = RunContext::load(overrides)?;
    let spec = ctx.load_problem_spec()?;
    let artifacts = match run_solver(&ctx, &spec) {
        Ok(a) => a,
        Err(CliError::Math(message)) => {
            // a mathematical failure still leaves a (possibly empty) trace
            ctx.write_output("trace.csv", "index,residual,bound\n")?;
            return Err(CliError::Math(message));
        }
        Err(e) => return Err(e),
    };
    let trace_path = ctx.write_output("trace.csv", &artifacts.trace_csv)?;
    let result_path = ctx.write_output("result.json", &write_result_json(&artifacts.result))?;
    if let Some(note) = &artifacts.note {
        println!("{note}");
    }
    let compliance = artifacts.result.trace.bound_compliance();
    println!(
        "converged={} iterations={} residual={} bound_compliance={}",
        artifacts.result.converged,
        artifacts.result.iterations,
        artifacts.result.residual,
        compliance
    );
    println!("result written to {}", result_path.display());
    println!("trace written to {}", trace_path.display());
    Ok(if artifacts.result.converged && compliance == 1.0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn apply_sweep_value(
    ctx: &mut RunContext,
    spec: &mut ProblemSpec,
    param: &str,
    value: f64,
) -> Result<(), CliError> {
    match param {
        "k" => ctx.config.constants.k = Some(value),
        "c" => ctx.config.constants.c = Some(value),
        "l" => ctx.config.constants.l = Some(value),
        "beta" => ctx.config.constants.beta = Some(value),
        "schedule_length" => {
            let doc = ctx.config.schedule.as_mut().ok_or_else(|| {
                CliError::Usage("sweeping schedule_length needs a schedule in the config".into())
            })?;
            if value < 1.0 || value.fract() != 0.0 {
                return Err(CliError::Usage(format!(
                    "schedule_length values must be positive integers, got {value}"
                )));
            }
            doc.len = value as usize;
        }
        "grid_size" => match spec {
            ProblemSpec::Volterra(volterra) => {
                if value < 2.0 || value.fract() != 0.0 {
                    return Err(CliError::Usage(format!(
                        "grid_size values must be integers ≥ 2, got {value}"
                    )));
                }
                volterra.grid_size = value as usize;
            }
            _ => {
                return Err(CliError::Usage(
                    "grid_size only applies to volterra problems".into(),
                ))
            }
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown sweep parameter `{other}` (expected k, c, l, beta, schedule_length, grid_size)"
            )))
        }
    }
    Ok(())
}

/// `sweep`: one solve per value; aggregate table plus per-row traces.
pub fn sweep(overrides: &RunOverrides, param: &str, values: &str) -> Result<ExitCode, CliError> {
    let values: Vec<f64> = values
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("sweep value `{s}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs a nonempty values list".into()));
    }

    let base_ctx = RunContext::load(overrides)?;
    let base_spec = base_ctx.load_problem_spec()?;
    let mut rows = Vec::with_capacity(values.len());
    let mut any_failed = false;
    for (i, &value) in values.iter().enumerate() {
        let mut ctx = RunContext::load(overrides)?;
        let mut spec = base_spec.clone();
        apply_sweep_value(&mut ctx, &mut spec, param, value)?;
        match run_solver(&ctx, &spec) {
            Ok(artifacts) => {
                base_ctx.write_output(&format!("trace_{i}.csv"), &artifacts.trace_csv)?;
                let ok = artifacts.result.converged
                    && artifacts.result.trace.bound_compliance() == 1.0;
                any_failed |= !ok;
                rows.push(SweepRow {
                    value,
                    iterations: artifacts.result.iterations,
                    residual: artifacts.result.residual,
                    bound_compliance: artifacts.result.trace.bound_compliance(),
                    status: if ok { "ok".into() } else { "unconverged".into() },
                });
            }
            Err(CliError::Usage(message)) => return Err(CliError::Usage(message)),
            Err(CliError::Math(message)) => {
                any_failed = true;
                rows.push(SweepRow {
                    value,
                    iterations: 0,
                    residual: f64::MAX,
                    bound_compliance: 0.0,
                    status: format!("error: {message}"),
                });
            }
        }
    }
    let path = base_ctx.write_output("sweep.csv", &write_sweep_csv(&rows))?;
    for row in &rows {
        println!(
            "{param}={} iterations={} residual={} status={}",
            row.value, row.iterations, row.residual, row.status
        );
    }
    println!("sweep table written to {}", path.display());
    Ok(if any_failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

/// `report`: summarize trace files — compliance, worst row, decay slope.
pub fn report(paths: &[PathBuf]) -> Result<ExitCode, CliError> {
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let trace = parse_trace_csv(&text).map_err(classify)?;
        let total = trace.rows.len();
        if total == 0 {
            println!("{}: empty trace", path.display());
            continue;
        }
        let compliant = trace.rows.iter().filter(|r| r.within_bound()).count();
        let pct = 100.0 * compliant as f64 / total as f64;
        let kind = match trace.kind {
            TraceKind::Solver => "solver",
            TraceKind::Approx => "approx",
        };
        if compliant == total {
            println!(
                "{}: {kind} trace, {total} rows, 100% rows within bound",
                path.display()
            );
        } else {
            let worst = trace
                .rows
                .iter()
                .max_by(|a, b| a.margin().partial_cmp(&b.margin()).expect("finite margins"))
                .expect("nonempty");
            println!(
                "{}: {kind} trace, {total} rows, {pct:.1}% rows within bound; worst violation at row {} (margin {})",
                path.display(),
                worst.index,
                worst.margin()
            );
        }
        if let Some(slope) = log_residual_slope(&trace.rows) {
            println!(
                "  log-residual slope {slope:.6} (per-step decay factor {:.6})",
                slope.exp()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Least-squares slope of `ln residual` against the row index, over rows
/// with positive residual.
fn log_residual_slope(rows: &[rhofix::io::ParsedTraceRow]) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.residual > 0.0)
        .map(|r| (r.index as f64, r.residual.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy): (f64, f64) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (sxx, sxy): (f64, f64) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x * x, b + x * y));
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}
