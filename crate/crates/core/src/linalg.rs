//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Orthonormal basis (as columns) of the hyperplane orthogonal to `u`,
/// built from the Householder reflection that maps `u/|u|` to `±e_n`.
/// Deterministic in `u`.
pub fn orthonormal_complement(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let unit = u / u.norm();
    let sign = if unit[n - 1] >= 0.0 { 1.0 } else { -1.0 };
    // w = unit + sign * e_n; reflection H = I - 2 w w^T / (w^T w) sends unit to -sign * e_n
    let mut w = unit.clone();
    w[n - 1] += sign;
    let ww = w.dot(&w);
    let mut basis = DMatrix::zeros(n, n - 1);
    for j in 0..(n - 1) {
        for i in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            basis[(i, j)] = delta - 2.0 * w[i] * w[j] / ww;
        }
    }
    basis
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

pub fn is_spd(m: &DMatrix<f64>) -> bool {
    m.iter().all(|v| v.is_finite()) && symmetrize(m).cholesky().is_some()
}

/// Relative Frobenius distance `|a - b|_F / max(|a|_F, |b|_F)`.
pub fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        return 0.0;
    }
    (a - b).norm() / scale
}

pub fn log_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = symmetrize(m).cholesky()?;
    let l = chol.l();
    Some(2.0 * (0..m.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}
