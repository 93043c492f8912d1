//! Test-bed mappings (affine, rotation, discretized Volterra) and the
//! brute-force oracles the acceptance checks compare against.

mod affine;
pub mod linalg;
mod oracle;
mod volterra;

pub use affine::{make_affine_map, make_rotation_map, rotation_matrix, AffineMapSpec};
pub use oracle::{brute_force_fixed_point, BruteForceMethod, BruteForceOutcome};
pub use volterra::{
    make_volterra_operator, ForcingSpec, KernelSpec, NonlinearitySpec, VolterraContractionHints,
    VolterraProblem, VolterraSpec,
};
