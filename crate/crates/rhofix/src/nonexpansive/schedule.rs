//! Parameter schedules `k_n ↗ 1` (resp. `λ_n ↗ 1`) in `(0, 1)`.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rule generating the n-th schedule value, indexed from `n = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleRule {
    /// `k_n = 1 − 1/(n + offset)`, `offset > 0`.
    Harmonic { offset: f64 },
    /// `k_n = 1 − ratio^n`, `ratio ∈ (0, 1)`.
    Geometric { ratio: f64 },
    /// Explicit values.
    Table { values: Vec<f64> },
}

/// A finite, strictly increasing schedule in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    rule: ScheduleRule,
    len: usize,
}

impl Schedule {
    pub fn new(rule: ScheduleRule, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidSpec("schedule length must be ≥ 1".into()));
        }
        match &rule {
            ScheduleRule::Harmonic { offset } => {
                if !(offset.is_finite() && *offset > 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "harmonic schedule needs offset > 0, got {offset}"
                    )));
                }
            }
            ScheduleRule::Geometric { ratio } => {
                if !(ratio.is_finite() && *ratio > 0.0 && *ratio < 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "geometric schedule needs ratio in (0, 1), got {ratio}"
                    )));
                }
            }
            ScheduleRule::Table { values } => {
                if values.len() < len {
                    return Err(Error::InvalidSpec(format!(
                        "table holds {} values but the schedule needs {len}",
                        values.len()
                    )));
                }
                let mut prev = 0.0;
                for (i, &v) in values.iter().take(len).enumerate() {
                    if !(v > prev && v < 1.0) {
                        return Err(Error::InvalidSpec(format!(
                            "schedule values must strictly increase inside (0, 1); index {i} holds {v}"
                        )));
                    }
                    prev = v;
                }
            }
        }
        Ok(Schedule { rule, len })
    }

    /// `k_n = 1 − 2^{−n}`; the workhorse of the nonexpansive test beds.
    pub fn geometric_halving(len: usize) -> Self {
        Schedule::new(ScheduleRule::Geometric { ratio: 0.5 }, len).expect("ratio 0.5 is valid")
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn rule(&self) -> &ScheduleRule {
        &self.rule
    }

    /// Value at 1-based index `n ∈ [1, len]`.
    pub fn value(&self, n: usize) -> f64 {
        debug_assert!(n >= 1 && n <= self.len);
        match &self.rule {
            ScheduleRule::Harmonic { offset } => 1.0 - 1.0 / (n as f64 + offset),
            ScheduleRule::Geometric { ratio } => 1.0 - ratio.powi(n as i32),
            ScheduleRule::Table { values } => values[n - 1],
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.len).map(move |n| self.value(n))
    }
}
