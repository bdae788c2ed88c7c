//! Dense linear least squares with column equilibration.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff below which the design is rank deficient.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Solution {
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
}

/// Solves `min |A x - b|` for a design matrix given row by row.
///
/// Columns are scaled to unit norm before the SVD so that wildly different
/// magnitudes (1 vs. displacement squared, 1/AR vs. 1/AR^6) do not masquerade
/// as rank deficiency. Returns `None` when the scaled design is rank deficient.
pub(crate) fn solve(rows: &[Vec<f64>], rhs: &[f64]) -> Option<Solution> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 || m < n {
        return None;
    }
    let mut a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let scales: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    if scales.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return None;
    }
    for (j, s) in scales.iter().enumerate() {
        a.column_mut(j).unscale_mut(*s);
    }
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > RANK_TOL * smax) {
        return None;
    }
    let x = svd.solve(&b, 0.0).ok()?;
    let residual = &a * &x - &b;
    let rms_residual = (residual.norm_squared() / m as f64).sqrt();
    let coefficients = x.iter().zip(&scales).map(|(v, s)| v / s).collect();
    Some(Solution {
        coefficients,
        rms_residual,
    })
}
