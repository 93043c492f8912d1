//! Affine and rotation test mappings.

use crate::mapping::{DomainDescriptor, Mapping};
use crate::modular::Element;
use crate::problems::linalg;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Specification of `T x = Ax + b` on an optional box domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMapSpec {
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_box: Option<(Vec<f64>, Vec<f64>)>,
}

impl AffineMapSpec {
    pub fn dimension(&self) -> usize {
        self.offset.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.offset.len();
        if n == 0 {
            return Err(Error::InvalidSpec("affine spec needs dimension ≥ 1".into()));
        }
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.matrix.len(),
            });
        }
        if self
            .matrix
            .iter()
            .flatten()
            .chain(self.offset.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidSpec("affine spec holds non-finite entries".into()));
        }
        Ok(())
    }

    /// Diagnostic estimate of the spectral radius of `A`.
    pub fn spectral_radius(&self) -> f64 {
        linalg::spectral_radius_estimate(&self.matrix, 200)
    }
}

fn apply_affine(matrix: &[Vec<f64>], offset: &[f64], x: &Element) -> Element {
    let coords = x.coords();
    Element::new(
        matrix
            .iter()
            .zip(offset)
            .map(|(row, b)| row.iter().zip(coords).map(|(a, c)| a * c).sum::<f64>() + b)
            .collect(),
    )
}

/// Build `T x = Ax + b` as a [`Mapping`] on the declared box or all of ℝⁿ.
pub fn make_affine_map(spec: &AffineMapSpec) -> Result<Mapping> {
    spec.validate()?;
    let domain = match &spec.domain_box {
        Some((lo, hi)) => DomainDescriptor::boxed(lo.clone(), hi.clone())?,
        None => DomainDescriptor::all(spec.dimension()),
    };
    let matrix = spec.matrix.clone();
    let offset = spec.offset.clone();
    let (matrix_c, offset_c) = (matrix.clone(), offset.clone());
    Ok(Mapping::new(
        "affine",
        domain,
        Arc::new(move |x: &Element| apply_affine(&matrix_c, &offset_c, x)),
    )
    .with_affine_backing(matrix, offset))
}

/// Block-diagonal rotation by `theta` plus a shift. `b` must have even
/// length; every 2×2 block rotates by the same angle, which keeps the map
/// isometric under the unit-weight `p = 2` power modular.
pub fn make_rotation_map(theta: f64, b: &[f64]) -> Result<Mapping> {
    if b.is_empty() || b.len() % 2 != 0 {
        return Err(Error::InvalidSpec(format!(
            "rotation offset needs even positive length, got {}",
            b.len()
        )));
    }
    if !theta.is_finite() || b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec("rotation spec holds non-finite entries".into()));
    }
    let n = b.len();
    let (cos, sin) = (theta.cos(), theta.sin());
    let offset = b.to_vec();
    Ok(Mapping::new(
        "rotation",
        DomainDescriptor::all(n),
        Arc::new(move |x: &Element| {
            let c = x.coords();
            let mut out = Vec::with_capacity(n);
            for block in 0..n / 2 {
                let (u, v) = (c[2 * block], c[2 * block + 1]);
                out.push(cos * u - sin * v + offset[2 * block]);
                out.push(sin * u + cos * v + offset[2 * block + 1]);
            }
            Element::new(out)
        }),
    )
    .with_affine_backing(rotation_matrix(theta, n), b.to_vec()))
}

/// The rotation matrix backing [`make_rotation_map`], for oracle use.
pub fn rotation_matrix(theta: f64, dimension: usize) -> Vec<Vec<f64>> {
    let (cos, sin) = (theta.cos(), theta.sin());
    let mut a = vec![vec![0.0; dimension]; dimension];
    for block in 0..dimension / 2 {
        let (i, j) = (2 * block, 2 * block + 1);
        a[i][i] = cos;
        a[i][j] = -sin;
        a[j][i] = sin;
        a[j][j] = cos;
    }
    a
}
