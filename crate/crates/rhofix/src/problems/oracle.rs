//! Brute-force fixed-point oracles, independent of the iteration schemes
//! they are used to check.

use crate::mapping::Mapping;
use crate::modular::Element;
use crate::problems::linalg;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Oracle selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BruteForceMethod {
    /// Direct solve of `(I − A)x = b`; needs an affine backing.
    LinearSolve,
    /// Plain iteration from 0 for a fixed budget.
    DensePicard,
}

/// Oracle output: the point and how far the mapping still moves it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BruteForceOutcome {
    pub point: Element,
    /// `max |(T·point − point)ᵢ|`.
    pub displacement: f64,
}

/// Compute a reference fixed point by the requested method.
pub fn brute_force_fixed_point(
    mapping: &Mapping,
    method: BruteForceMethod,
    budget: usize,
) -> Result<BruteForceOutcome> {
    match method {
        BruteForceMethod::LinearSolve => {
            let (matrix, offset) = mapping.affine_backing().ok_or_else(|| {
                Error::Precondition(
                    "linear_solve needs an affine-backed mapping".into(),
                )
            })?;
            let n = offset.len();
            let mut i_minus_a = vec![vec![0.0; n]; n];
            for (i, row) in matrix.iter().enumerate() {
                for (j, &a) in row.iter().enumerate() {
                    i_minus_a[i][j] = if i == j { 1.0 - a } else { -a };
                }
            }
            let solution = linalg::solve_dense(&i_minus_a, offset).map_err(|_| {
                Error::InvalidSpec("no unique fixed point: I − A is singular".into())
            })?;
            let point = Element::new(solution);
            let image = mapping.apply_raw(&point);
            Ok(BruteForceOutcome {
                displacement: image.sub(&point).max_abs(),
                point,
            })
        }
        BruteForceMethod::DensePicard => {
            let mut x = Element::zeros(mapping.domain().dimension());
            for step in 0..budget {
                let next = mapping.apply_raw(&x);
                if !next.is_finite() {
                    return Err(Error::DomainViolation(format!(
                        "picard iterate diverged at step {step}"
                    )));
                }
                x = next;
            }
            let image = mapping.apply_raw(&x);
            Ok(BruteForceOutcome {
                displacement: image.sub(&x).max_abs(),
                point: x,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::affine::{make_affine_map, AffineMapSpec};

    #[test]
    fn linear_solve_recovers_the_affine_fixed_point() {
        let spec = AffineMapSpec {
            matrix: vec![vec![0.5, 0.0], vec![0.0, 0.5]],
            offset: vec![1.0, 0.0],
            domain_box: None,
        };
        let map = make_affine_map(&spec).unwrap();
        let out = brute_force_fixed_point(&map, BruteForceMethod::LinearSolve, 0).unwrap();
        assert!((out.point.coords()[0] - 2.0).abs() < 1e-14);
        assert!(out.point.coords()[1].abs() < 1e-14);
        assert!(out.displacement < 1e-14);
    }

    #[test]
    fn identity_map_has_no_unique_fixed_point() {
        let spec = AffineMapSpec {
            matrix: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            offset: vec![1.0, 1.0],
            domain_box: None,
        };
        let map = make_affine_map(&spec).unwrap();
        let err = brute_force_fixed_point(&map, BruteForceMethod::LinearSolve, 0).unwrap_err();
        assert!(err.to_string().contains("no unique fixed point"));
    }

    #[test]
    fn dense_picard_settles_on_contraction_fixed_points() {
        let spec = AffineMapSpec {
            matrix: vec![vec![0.5, 0.1], vec![0.0, 0.25]],
            offset: vec![1.0, 2.0],
            domain_box: None,
        };
        let map = make_affine_map(&spec).unwrap();
        let out = brute_force_fixed_point(&map, BruteForceMethod::DensePicard, 200).unwrap();
        assert!(out.displacement < 1e-12);
        let reference = brute_force_fixed_point(&map, BruteForceMethod::LinearSolve, 0).unwrap();
        assert!(out.point.sub(&reference.point).max_abs() < 1e-10);
    }
}
