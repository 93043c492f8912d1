//! Sampled verification of the modular axioms.

use crate::modular::{Element, ModularFunctional};
use crate::sampling;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Outcome of one axiom check: worst margin over the sample set (positive
/// means violated) and the witness attaining it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub passed: bool,
    /// Worst observed violation; `≤ 0` when the axiom held on every sample.
    pub worst_margin: f64,
    pub witness: Option<AxiomWitness>,
}

/// The sample on which the worst margin was observed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomWitness {
    pub x: Element,
    pub y: Option<Element>,
    pub scalars: Vec<f64>,
}

/// Pass/fail report per modular axiom. Failures are reported, never raised.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxiomReport {
    /// `ρ(0) = 0` and `ρ(x) ≥ 0` on every sample.
    pub zero: AxiomCheck,
    /// `ρ(x) = ρ(−x)`.
    pub symmetry: AxiomCheck,
    /// `ρ(αx + βy) ≤ ρ(x) + ρ(y)` for `α + β = 1`, `α, β ≥ 0`.
    pub subadditivity: AxiomCheck,
    /// `t ↦ ρ(t·x)` is non-decreasing on `t ≥ 0`.
    pub monotonicity: AxiomCheck,
    pub sample_count: usize,
    pub seed: u64,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.zero.passed
            && self.symmetry.passed
            && self.subadditivity.passed
            && self.monotonicity.passed
    }
}

struct MarginTracker {
    worst: f64,
    witness: Option<AxiomWitness>,
}

impl MarginTracker {
    fn new() -> Self {
        MarginTracker {
            worst: f64::NEG_INFINITY,
            witness: None,
        }
    }

    fn observe(&mut self, margin: f64, witness: AxiomWitness) {
        if margin > self.worst {
            self.worst = margin;
            if margin > 0.0 {
                self.witness = Some(witness);
            }
        }
    }

    fn finish(self, tol: f64) -> AxiomCheck {
        let worst = if self.worst == f64::NEG_INFINITY {
            0.0
        } else {
            self.worst
        };
        AxiomCheck {
            passed: worst <= tol,
            worst_margin: worst,
            witness: if worst <= tol { None } else { self.witness },
        }
    }
}

/// Check the four modular axioms on `sample_count` seeded samples.
///
/// Margins are violation amounts: `-ρ(x)` for nonnegativity,
/// `|ρ(x) − ρ(−x)|` minus tolerance for symmetry, and so on. A corrupted
/// functional (negative weight, non-monotone table) shows up as a positive
/// margin with the violating sample attached.
pub fn verify_modular_axioms(
    rho: &ModularFunctional,
    sample_count: usize,
    seed: u64,
) -> Result<AxiomReport> {
    if sample_count < 1 {
        return Err(Error::Precondition("sample_count must be ≥ 1".into()));
    }
    let n = rho.dimension();
    let mut rng = sampling::rng_from_seed(seed);
    let tol = super::functional::ABS_TOL;

    // ρ may only be evaluated where it is finite; skip overflowing samples.
    let eval = |x: &Element| rho.evaluate(x).ok();

    let mut zero = MarginTracker::new();
    let mut symmetry = MarginTracker::new();
    let mut subadd = MarginTracker::new();
    let mut monotone = MarginTracker::new();

    let origin = Element::zeros(n);
    if let Some(v0) = eval(&origin) {
        zero.observe(
            v0.abs(),
            AxiomWitness {
                x: origin,
                y: None,
                scalars: vec![],
            },
        );
    }

    for _ in 0..sample_count {
        let x = sampling::sample_element(&mut rng, n, sampling::DEFAULT_SCALE);
        let y = sampling::sample_element(&mut rng, n, sampling::DEFAULT_SCALE);
        let (vx, vy) = match (eval(&x), eval(&y)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };

        zero.observe(
            -vx,
            AxiomWitness {
                x: x.clone(),
                y: None,
                scalars: vec![],
            },
        );

        if let Some(v_neg) = eval(&x.scale(-1.0)) {
            symmetry.observe(
                (vx - v_neg).abs(),
                AxiomWitness {
                    x: x.clone(),
                    y: None,
                    scalars: vec![],
                },
            );
        }

        let alpha: f64 = rng.gen_range(0.0..=1.0);
        let beta = 1.0 - alpha;
        if let Some(v_mix) = eval(&x.combine(alpha, &y, beta)) {
            subadd.observe(
                v_mix - (vx + vy),
                AxiomWitness {
                    x: x.clone(),
                    y: Some(y.clone()),
                    scalars: vec![alpha, beta],
                },
            );
        }

        let mut t1: f64 = rng.gen_range(0.0..=2.0);
        let mut t2: f64 = rng.gen_range(0.0..=2.0);
        if t1 > t2 {
            std::mem::swap(&mut t1, &mut t2);
        }
        if let (Some(v1), Some(v2)) = (eval(&x.scale(t1)), eval(&x.scale(t2))) {
            monotone.observe(
                v1 - v2,
                AxiomWitness {
                    x: x.clone(),
                    y: None,
                    scalars: vec![t1, t2],
                },
            );
        }
    }

    Ok(AxiomReport {
        zero: zero.finish(tol),
        symmetry: symmetry.finish(tol),
        subadditivity: subadd.finish(tol),
        monotonicity: monotone.finish(tol),
        sample_count,
        seed,
    })
}
