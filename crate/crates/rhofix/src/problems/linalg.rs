//! Small dense linear algebra for the oracle paths: pivoted Gaussian
//! elimination and power-iteration spectral estimates. The systems here
//! are tiny (n ≤ a few hundred), so no external solver is warranted.

use crate::{Error, Result};

/// Solve `Ax = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::InvalidSpec("system must be square".into()));
    }
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .expect("finite pivots")
            })
            .expect("nonempty range");
        let pivot = m[pivot_row][col];
        if pivot.abs() < 1e-12 {
            return Err(Error::InvalidSpec(format!(
                "singular system: pivot {pivot} in column {col}"
            )));
        }
        m.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in (row + 1)..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Estimate the spectral radius of `A` by power iteration on a fixed
/// start vector; diagnostic quality, not a certified bound.
pub fn spectral_radius_estimate(a: &[Vec<f64>], iterations: usize) -> f64 {
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64) * 0.37).collect();
    let mut radius = 0.0;
    for _ in 0..iterations {
        let w: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] * v[j]).sum())
            .collect();
        let norm = w.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if norm == 0.0 {
            return 0.0;
        }
        radius = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    radius
}
