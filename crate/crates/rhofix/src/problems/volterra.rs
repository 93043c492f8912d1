//! Discretized Volterra operators `u ↦ g + ∫₀ᵗ K(t,s)·f(u(s)) ds` on a
//! uniform grid over `[0, A]`, with the modulars that make them ρ-Lipschitz.

use crate::mapping::{DomainDescriptor, Mapping};
use crate::modular::{Element, GridTag, ModularEntry, ModularFunctional, OrliczGenerator};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Kernels come from a fixed registry; no arbitrary code enters through
/// problem documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `K(t, s) = value`.
    Constant { value: f64 },
    /// `K(t, s) = e^{t − s}`.
    ExpDiff,
}

impl KernelSpec {
    fn eval(&self, t: f64, s: f64) -> f64 {
        match self {
            KernelSpec::Constant { value } => *value,
            KernelSpec::ExpDiff => (t - s).exp(),
        }
    }

    /// Sup of `|K|` over the triangle `0 ≤ s ≤ t ≤ horizon`.
    fn sup_abs(&self, horizon: f64) -> f64 {
        match self {
            KernelSpec::Constant { value } => value.abs(),
            KernelSpec::ExpDiff => horizon.exp(),
        }
    }
}

/// Registry of scalar nonlinearities with their Lipschitz constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearitySpec {
    Identity,
    /// `f(u) = slope·u`.
    Linear { slope: f64 },
    Tanh,
    Sine,
}

impl NonlinearitySpec {
    fn eval(&self, u: f64) -> f64 {
        match self {
            NonlinearitySpec::Identity => u,
            NonlinearitySpec::Linear { slope } => slope * u,
            NonlinearitySpec::Tanh => u.tanh(),
            NonlinearitySpec::Sine => u.sin(),
        }
    }

    /// Declared Lipschitz constant; verified on a sample grid at build time.
    pub fn lipschitz(&self) -> f64 {
        match self {
            NonlinearitySpec::Identity => 1.0,
            NonlinearitySpec::Linear { slope } => slope.abs(),
            NonlinearitySpec::Tanh | NonlinearitySpec::Sine => 1.0,
        }
    }

    fn verify_lipschitz(&self) -> Result<()> {
        let lip = self.lipschitz();
        let grid: Vec<f64> = (-50..=50).map(|i| i as f64 * 0.2).collect();
        for (i, &a) in grid.iter().enumerate() {
            for &b in &grid[i + 1..] {
                let lhs = (self.eval(a) - self.eval(b)).abs();
                let rhs = lip * (a - b).abs();
                if lhs > rhs * (1.0 + 1e-9) + 1e-12 {
                    return Err(Error::InvalidSpec(format!(
                        "declared Lipschitz constant {lip} fails at ({a}, {b}): |Δf| = {lhs}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Forcing term `g` as a grid function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForcingSpec {
    Constant { value: f64 },
    Table { values: Vec<f64> },
}

/// Full Volterra problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolterraSpec {
    /// Time horizon `A > 0`.
    pub horizon: f64,
    /// Number of grid nodes `m ≥ 2`; nodes sit at `tᵢ = i·A/(m−1)`.
    pub grid_size: usize,
    pub kernel: KernelSpec,
    pub nonlinearity: NonlinearitySpec,
    pub forcing: ForcingSpec,
    /// Decay rate γ of the weighted modular `Σ h·e^{−γtᵢ}|uᵢ|`; when
    /// absent, `γ = 2·sup|K|·Lip(f)` is used, which caps the weighted
    /// contraction constant at 1/2 regardless of the horizon.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_rate: Option<f64>,
}

/// Contraction constants induced by the operator on the two modulars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolterraContractionHints {
    /// `κ = sup|K|·Lip(f)`.
    pub kappa: f64,
    /// Decay rate of the weighted modular.
    pub gamma: f64,
    /// Strict constant on the plain quadrature modular: `k = κ·A`
    /// (contraction only when < 1).
    pub plain_k: f64,
    /// Strict constant on the weighted modular:
    /// `k = κ·(1 − e^{−γA})/γ < 1` for any `κ > 0`.
    pub weighted_k: f64,
    /// `(c, k, l)` for `certify_strong` against the weighted modular.
    pub strong: Option<(f64, f64, f64)>,
}

/// A built Volterra problem: the operator plus the modulars it contracts.
#[derive(Debug, Clone)]
pub struct VolterraProblem {
    pub mapping: Mapping,
    /// Plain quadrature modular `ρ(u) = Σ h·|uᵢ|`.
    pub plain_modular: ModularFunctional,
    /// Exponentially weighted modular `ρ(u) = Σ h·e^{−γtᵢ}·|uᵢ|`.
    pub weighted_modular: ModularFunctional,
    pub hints: VolterraContractionHints,
    pub nodes: Vec<f64>,
}

/// Left-rectangle quadrature Volterra operator
/// `(Tu)ᵢ = gᵢ + Σ_{j<i} h·K(tᵢ, tⱼ)·f(uⱼ)`.
///
/// The triangle structure of the kernel is preserved exactly: node `i`
/// only sees nodes `j < i`. The reported hints translate the sup-norm
/// Lipschitz data `κ = sup|K|·Lip(f)` into modular constants for the two
/// `p = 1` modulars (the general-φ translation is not attempted).
pub fn make_volterra_operator(spec: &VolterraSpec) -> Result<VolterraProblem> {
    if !(spec.horizon.is_finite() && spec.horizon > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "horizon must be positive, got {}",
            spec.horizon
        )));
    }
    if spec.grid_size < 2 {
        return Err(Error::InvalidSpec(format!(
            "grid size must be ≥ 2, got {}",
            spec.grid_size
        )));
    }
    spec.nonlinearity.verify_lipschitz()?;

    let m = spec.grid_size;
    let h = spec.horizon / (m - 1) as f64;
    let nodes: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();

    // kernel values on the triangle, validated finite up front
    let mut kernel_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(i);
        for j in 0..i {
            let v = spec.kernel.eval(nodes[i], nodes[j]);
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "kernel evaluation failed at (t, s) = ({}, {})",
                    nodes[i], nodes[j]
                )));
            }
            row.push(v);
        }
        kernel_rows.push(row);
    }

    let forcing: Vec<f64> = match &spec.forcing {
        ForcingSpec::Constant { value } => {
            if !value.is_finite() {
                return Err(Error::InvalidSpec("non-finite forcing".into()));
            }
            vec![*value; m]
        }
        ForcingSpec::Table { values } => {
            if values.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    actual: values.len(),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSpec("non-finite forcing".into()));
            }
            values.clone()
        }
    };

    let kappa = spec.kernel.sup_abs(spec.horizon) * spec.nonlinearity.lipschitz();
    let gamma = spec.weight_rate.unwrap_or(2.0 * kappa);
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidSpec(format!("weight rate must be ≥ 0, got {gamma}")));
    }

    let generator = OrliczGenerator::power(1.0)?;
    let plain_modular = ModularFunctional::weighted(vec![h; m], generator.clone())?;
    let weighted_modular = ModularFunctional::new(
        nodes
            .iter()
            .map(|&t| ModularEntry {
                weight: h * (-gamma * t).exp(),
                generator: generator.clone(),
            })
            .collect(),
    )?;

    let plain_k = kappa * spec.horizon;
    let weighted_k = if gamma > 0.0 {
        kappa * (1.0 - (-gamma * spec.horizon).exp()) / gamma
    } else {
        plain_k
    };
    let strong = if weighted_k > 0.0 && weighted_k < 1.0 {
        let c = 0.5 * (1.0 + 1.0 / weighted_k);
        Some((c, c * weighted_k, 1.0))
    } else {
        None
    };

    let horizon = spec.horizon;
    let nonlinearity = spec.nonlinearity.clone();
    let apply = Arc::new(move |u: &Element| {
        let coords = u.coords();
        let mut out = Vec::with_capacity(coords.len());
        for (i, (g, row)) in forcing.iter().zip(&kernel_rows).enumerate() {
            let _ = i;
            let integral: f64 = row
                .iter()
                .zip(coords)
                .map(|(k, &uj)| k * nonlinearity.eval(uj))
                .sum::<f64>()
                * h;
            out.push(g + integral);
        }
        Element::with_grid(out, GridTag::TimeGrid { horizon })
    });

    Ok(VolterraProblem {
        mapping: Mapping::new("volterra", DomainDescriptor::all(m), apply),
        plain_modular,
        weighted_modular,
        hints: VolterraContractionHints {
            kappa,
            gamma,
            plain_k,
            weighted_k,
            strong,
        },
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_spec(m: usize) -> VolterraSpec {
        VolterraSpec {
            horizon: 1.0,
            grid_size: m,
            kernel: KernelSpec::Constant { value: 1.0 },
            nonlinearity: NonlinearitySpec::Identity,
            forcing: ForcingSpec::Constant { value: 1.0 },
            weight_rate: None,
        }
    }

    #[test]
    fn zero_kernel_reduces_to_the_forcing() {
        let spec = VolterraSpec {
            kernel: KernelSpec::Constant { value: 0.0 },
            ..unit_spec(8)
        };
        let problem = make_volterra_operator(&spec).unwrap();
        let u = Element::new(vec![5.0; 8]);
        let tu = problem.mapping.apply(&u).unwrap();
        assert!(tu.coords().iter().all(|&v| v == 1.0));
        // g is then the fixed point
        let g = Element::new(vec![1.0; 8]);
        assert_eq!(problem.mapping.apply(&g).unwrap().coords(), g.coords());
    }

    #[test]
    fn small_kernel_with_zero_forcing_fixes_zero() {
        let spec = VolterraSpec {
            kernel: KernelSpec::Constant { value: 0.25 },
            forcing: ForcingSpec::Constant { value: 0.0 },
            ..unit_spec(16)
        };
        let problem = make_volterra_operator(&spec).unwrap();
        let zero = Element::zeros(16);
        assert_eq!(problem.mapping.apply(&zero).unwrap().coords(), zero.coords());
    }

    // Discrete oracle for u = 1 + ∫₀ᵗ u ds under the left-rectangle rule:
    // uᵢ = (1 + h)^i, the compound-interest approximation of e^{tᵢ}.
    #[test]
    fn unit_instance_discrete_solution_is_compound_interest() {
        let m = 32;
        let problem = make_volterra_operator(&unit_spec(m)).unwrap();
        let h = 1.0 / (m - 1) as f64;
        let exact: Vec<f64> = (0..m).map(|i| (1.0 + h).powi(i as i32)).collect();
        let fixed = Element::new(exact.clone());
        let image = problem.mapping.apply(&fixed).unwrap();
        assert!(image.sub(&fixed).max_abs() < 1e-12);
    }

    #[test]
    fn weighted_contraction_constant_stays_below_half() {
        let problem = make_volterra_operator(&unit_spec(64)).unwrap();
        let hints = &problem.hints;
        assert!((hints.kappa - 1.0).abs() < 1e-15);
        assert!((hints.plain_k - 1.0).abs() < 1e-15);
        // κ(1 − e^{−2})/2 ≈ 0.43233
        assert!((hints.weighted_k - 0.5 * (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        assert!(hints.weighted_k < 0.5);
        let (c, k, l) = hints.strong.unwrap();
        assert!(c > l && k < 1.0);
    }

    #[test]
    fn lipschitz_declaration_is_verified() {
        // slope 3 linear map declares Lipschitz 3 and passes
        let spec = VolterraSpec {
            nonlinearity: NonlinearitySpec::Linear { slope: 3.0 },
            ..unit_spec(8)
        };
        assert!(make_volterra_operator(&spec).is_ok());
    }

    #[test]
    fn rejects_undersized_grid_and_bad_table() {
        assert!(make_volterra_operator(&unit_spec(1)).is_err());
        let spec = VolterraSpec {
            forcing: ForcingSpec::Table {
                values: vec![1.0; 3],
            },
            ..unit_spec(8)
        };
        assert!(make_volterra_operator(&spec).is_err());
    }
}
