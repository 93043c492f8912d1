//! Scalar Orlicz-type generators `φ: [0, ∞) → [0, ∞)`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// The shape of a generator. Only these three kinds are admitted; arbitrary
/// user functions enter through piecewise-linear tables, which keeps every
/// structural check decidable on grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `φ(t) = t^p`, `p > 0`.
    Power { p: f64 },
    /// `φ(t) = e^t − 1 − t`.
    Exponential,
    /// Piecewise-linear interpolation through `(t, v)` knots starting at
    /// `(0, 0)`; past the last knot the final segment slope extends.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

/// A scalar generator together with its declared s-convexity parameter.
///
/// `s = Some(σ)` claims `φ(a·t) ≤ a^σ·φ(t)` for `a ∈ [0, 1]`; `σ = 1` is
/// plain convexity. `None` makes no claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrliczGenerator {
    kind: GeneratorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
}

impl OrliczGenerator {
    /// Power generator `t^p` with the sharpest admissible claim
    /// `s = min(p, 1)`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "power generator needs finite p > 0, got {p}"
            )));
        }
        Ok(OrliczGenerator {
            kind: GeneratorKind::Power { p },
            s: Some(p.min(1.0)),
        })
    }

    /// Power generator with an explicit s-convexity claim `0 < s ≤ min(p, 1)`.
    pub fn power_with_s(p: f64, s: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "power generator needs finite p > 0, got {p}"
            )));
        }
        if !(s > 0.0 && s <= 1.0 && p >= s) {
            return Err(Error::InvalidSpec(format!(
                "power exponent p = {p} must satisfy p ≥ s and 0 < s ≤ 1, got s = {s}"
            )));
        }
        Ok(OrliczGenerator {
            kind: GeneratorKind::Power { p },
            s: Some(s),
        })
    }

    /// `φ(t) = e^t − 1 − t`, convex, so `s = 1`.
    pub fn exponential() -> Self {
        OrliczGenerator {
            kind: GeneratorKind::Exponential,
            s: Some(1.0),
        }
    }

    /// Piecewise-linear generator with no s-convexity claim. Structural
    /// requirements: first knot `(0, 0)`, strictly increasing abscissae,
    /// finite values, at least two knots. Monotonicity of the values is
    /// deliberately *not* enforced here — deliberately corrupted tables
    /// must be constructible so axiom verification can report them.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidSpec(
                "piecewise generator needs at least two knots".into(),
            ));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidSpec(format!(
                "piecewise generator must start at (0, 0), got {:?}",
                knots[0]
            )));
        }
        for pair in knots.windows(2) {
            if !(pair[1].0.is_finite() && pair[1].1.is_finite()) {
                return Err(Error::InvalidSpec("non-finite knot".into()));
            }
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidSpec(format!(
                    "knot abscissae must strictly increase, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        Ok(OrliczGenerator {
            kind: GeneratorKind::PiecewiseLinear { knots },
            s: None,
        })
    }

    /// Piecewise generator with an s-convexity claim, verified on a grid at
    /// construction time.
    pub fn piecewise_linear_with_s(knots: Vec<(f64, f64)>, s: f64) -> Result<Self> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidSpec(format!("s must lie in (0, 1], got {s}")));
        }
        let base = Self::piecewise_linear(knots)?;
        let claimed = OrliczGenerator {
            kind: base.kind,
            s: Some(s),
        };
        claimed.check_s_claim_on_grid()?;
        Ok(claimed)
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    /// Declared s-convexity parameter, if any.
    pub fn s_convexity(&self) -> Option<f64> {
        self.s
    }

    /// Evaluate `φ(t)` for `t ≥ 0`. Exact special cases for `p ∈ {0.5, 1, 2}`
    /// keep the worked examples free of `powf` rounding.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0, "generator argument must be nonnegative");
        match &self.kind {
            GeneratorKind::Power { p } => {
                if *p == 1.0 {
                    t
                } else if *p == 2.0 {
                    t * t
                } else if *p == 0.5 {
                    t.sqrt()
                } else {
                    t.powf(*p)
                }
            }
            GeneratorKind::Exponential => t.exp_m1() - t,
            GeneratorKind::PiecewiseLinear { knots } => {
                let last = knots.len() - 1;
                if t >= knots[last].0 {
                    let (t0, v0) = knots[last - 1];
                    let (t1, v1) = knots[last];
                    let slope = (v1 - v0) / (t1 - t0);
                    return v1 + slope * (t - t1);
                }
                // knots[0].0 == 0 and t < knots[last].0, so the segment exists
                let idx = knots.partition_point(|&(kt, _)| kt <= t);
                let (t0, v0) = knots[idx - 1];
                let (t1, v1) = knots[idx];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Verify the declared s-claim `φ(a·t) ≤ a^s·φ(t)` on an `a × t` grid.
    fn check_s_claim_on_grid(&self) -> Result<()> {
        let s = match self.s {
            Some(s) => s,
            None => return Ok(()),
        };
        let t_max = match &self.kind {
            GeneratorKind::PiecewiseLinear { knots } => 2.0 * knots[knots.len() - 1].0,
            _ => 16.0,
        };
        for ai in 1..=40 {
            let a = ai as f64 / 40.0;
            for ti in 1..=200 {
                let t = t_max * ti as f64 / 200.0;
                let lhs = self.eval(a * t);
                let rhs = a.powf(s) * self.eval(t);
                if lhs > rhs + 1e-12 + 1e-9 * rhs.abs() {
                    return Err(Error::InvalidSpec(format!(
                        "s-convexity claim s = {s} fails at a = {a}, t = {t}: φ(at) = {lhs} > a^s·φ(t) = {rhs}"
                    )));
                }
            }
        }
        Ok(())
    }
}
