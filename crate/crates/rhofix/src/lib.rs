//! Fixed-point solvers on discretized modular spaces.
//!
//! A modular `ρ` is a norm-like functional without homogeneity: `ρ(0) = 0`,
//! `ρ(x) = ρ(−x)`, and `ρ(αx + βy) ≤ ρ(x) + ρ(y)` whenever `α + β = 1`,
//! `α, β ≥ 0`. This crate realizes modular spaces as `ℝⁿ` with
//! coordinate-wise weighted Orlicz-type modulars `ρ(x) = Σ wᵢ φᵢ(|xᵢ|)`,
//! certifies the structural hypotheses that the iteration theory needs
//! (modular axioms, local Δ₂ constants, regular growth, s-convexity), and
//! runs three families of fixed-point schemes with bound-instrumented
//! traces:
//!
//! - strong ρ-contractions `ρ(c(Tx−Ty)) ≤ k·ρ(l(x−y))` with `c > l`,
//!   iterated with an a-priori geometric error envelope,
//! - strict ρ-contractions (`c = l`) under a local Δ₂ condition, iterated
//!   through a power `S = T^{p₀}` chosen so the local constants apply,
//! - ρ-nonexpansive maps, approximated through segment equations
//!   `x = (1−k_n)z + k_n·Tx` along a schedule `k_n ↗ 1`, with a
//!   cluster-point extraction step and a `λ_n`-scheme variant.
//!
//! The [`problems`] module builds the affine, rotation, and discretized
//! Volterra operators used as test beds, together with brute-force oracles.
//! The [`io`] module defines the on-disk document formats consumed by the
//! `rhofix` CLI: JSON for modulars, problems, configs and results, and a
//! flat CSV table for iteration traces.

pub mod contraction;
pub mod error;
pub mod io;
pub mod mapping;
pub mod modular;
pub mod nonexpansive;
pub mod problems;

pub(crate) mod sampling;

pub use error::Error;
pub use mapping::{DomainDescriptor, Mapping};
pub use modular::{Element, ModularFunctional, OrliczGenerator};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
