//! Elements, modular functionals, and certification of their structural
//! hypotheses (axioms, Δ₂, regular growth, s-convexity).

mod axioms;
mod delta2;
mod element;
pub(crate) mod functional;
mod generator;
mod growth;

pub use axioms::{verify_modular_axioms, AxiomCheck, AxiomReport, AxiomWitness};
pub use delta2::{estimate_delta2, Delta2Certificate, RATIO_CAP, SAMPLE_CAP};
pub use element::{Element, GridTag};
pub use functional::{approx_eq, leq_tol, ModularEntry, ModularFunctional, ABS_TOL, REL_TOL};
pub use generator::{GeneratorKind, OrliczGenerator};
pub use growth::{
    check_regular_growth, growth_function_estimate, GrowthProfile, GrowthSample,
    RegularGrowthReport, DEFAULT_GROWTH_SEED, REGULAR_GROWTH_MARGIN,
};
