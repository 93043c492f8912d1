//! The coordinate-wise weighted modular `ρ(x) = Σ wᵢ·φᵢ(|xᵢ|)`.

use crate::modular::delta2::Delta2Certificate;
use crate::modular::{Element, OrliczGenerator};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute tolerance for modular-value comparisons.
pub const ABS_TOL: f64 = 1e-12;
/// Relative tolerance for modular-value comparisons.
pub const REL_TOL: f64 = 1e-9;

/// `a ≤ b` up to the crate-wide modular-value tolerance.
pub fn leq_tol(a: f64, b: f64) -> bool {
    a <= b + ABS_TOL + REL_TOL * b.abs()
}

/// `a == b` up to the crate-wide modular-value tolerance.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

/// One coordinate of a modular: a weight and its generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularEntry {
    pub weight: f64,
    pub generator: OrliczGenerator,
}

/// A coordinate-wise weighted Orlicz-type modular on `ℝⁿ`.
///
/// Immutable after construction; evaluation is pure and safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularFunctional {
    entries: Vec<ModularEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta2: Option<Delta2Certificate>,
}

impl ModularFunctional {
    /// Build from per-coordinate entries, requiring positive finite weights.
    pub fn new(entries: Vec<ModularEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSpec("modular needs dimension ≥ 1".into()));
        }
        for (i, e) in entries.iter().enumerate() {
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "weight at coordinate {i} must be positive and finite, got {}",
                    e.weight
                )));
            }
        }
        Ok(ModularFunctional {
            entries,
            delta2: None,
        })
    }

    /// Build without weight validation. Exists so deliberately corrupted
    /// functionals can be fed to `verify_modular_axioms`, which reports the
    /// violation instead of refusing construction.
    pub fn new_unchecked(entries: Vec<ModularEntry>) -> Self {
        ModularFunctional {
            entries,
            delta2: None,
        }
    }

    /// Same generator and unit weight on every coordinate.
    pub fn uniform(dimension: usize, generator: OrliczGenerator) -> Result<Self> {
        Self::weighted(vec![1.0; dimension], generator)
    }

    /// Same generator with per-coordinate weights.
    pub fn weighted(weights: Vec<f64>, generator: OrliczGenerator) -> Result<Self> {
        Self::new(
            weights
                .into_iter()
                .map(|weight| ModularEntry {
                    weight,
                    generator: generator.clone(),
                })
                .collect(),
        )
    }

    /// Unit-weight power modular `Σ |xᵢ|^p`; the workhorse of the test beds.
    pub fn power(dimension: usize, p: f64) -> Result<Self> {
        Self::uniform(dimension, OrliczGenerator::power(p)?)
    }

    /// Attach a Δ₂ certificate. Consumed by solvers whose convergence mode
    /// requires the Δ₂ condition.
    pub fn with_delta2(mut self, certificate: Delta2Certificate) -> Self {
        self.delta2 = Some(certificate);
        self
    }

    pub fn delta2(&self) -> Option<&Delta2Certificate> {
        self.delta2.as_ref()
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[ModularEntry] {
        &self.entries
    }

    /// Declared s-convexity of the whole modular: the weakest (smallest)
    /// per-coordinate claim, or `None` if any coordinate makes no claim.
    pub fn s_convexity(&self) -> Option<f64> {
        let mut s_min = 1.0f64;
        for e in &self.entries {
            s_min = s_min.min(e.generator.s_convexity()?);
        }
        Some(s_min)
    }

    /// True when every generator claims `s = 1` (plain convexity).
    pub fn is_convex(&self) -> bool {
        self.s_convexity() == Some(1.0)
    }

    /// Evaluate `ρ(x) = Σ wᵢ·φᵢ(|xᵢ|)`.
    ///
    /// Overflow is an error, not a value: the theory's finiteness
    /// hypotheses are enforced by rejecting non-finite results.
    pub fn evaluate(&self, x: &Element) -> Result<f64> {
        if x.dimension() != self.entries.len() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                actual: x.dimension(),
            });
        }
        let mut total = 0.0;
        for (i, (entry, &xi)) in self.entries.iter().zip(x.coords()).enumerate() {
            let term = entry.weight * entry.generator.eval(xi.abs());
            if !term.is_finite() {
                return Err(Error::Overflow {
                    coordinate: i,
                    magnitude: xi.abs(),
                });
            }
            total += term;
        }
        if !total.is_finite() {
            return Err(Error::Overflow {
                coordinate: 0,
                magnitude: x.max_abs(),
            });
        }
        Ok(total)
    }

    /// `ρ(t·(x − y))`, the scaled modular distance used throughout the
    /// iteration schemes.
    pub fn distance(&self, t: f64, x: &Element, y: &Element) -> Result<f64> {
        self.evaluate(&x.sub(y).scale(t))
    }
}
