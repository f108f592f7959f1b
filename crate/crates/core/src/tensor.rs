//! The fundamental tensor `g_ij(v) = (1/2) d^2(F^2)/dv^i dv^j` computed by
//! three independent routes:
//!
//! * vertical: finite differences of `F^2/2` in `v` at fixed `x`;
//! * horizontal (Funk only): finite differences of `F` in `x` at fixed `v`,
//!   through `g = (1/F) d^2F/dx^2 - (1/F^2) dF/dx (dF/dx)^T`, which follows
//!   from `dF/dx^i = F dF/dv^i`;
//! * boundary graph: closed form in the boundary-height jets `h`, `b` of the
//!   chart adapted to `v`, no finite differences.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diff::{self, DiffScheme};
use crate::domain::{BoundaryGraphJet, ConvexBody};
use crate::error::{GeomError, Result};
use crate::finsler::{finsler_norm, raw_norm, MetricKind, TangentVector};
use crate::linalg::{is_spd, log_det_spd, rel_frobenius, symmetrize};
use crate::sampling;

/// Default step for `v`-derivatives, as a fraction of `|v|`.
pub const VERTICAL_STEP: f64 = 0.02;
/// Default step for `x`-derivatives, as a fraction of the safe radius.
pub const HORIZONTAL_STEP: f64 = 0.05;

/// Symmetric positive-definite `n x n` matrix `g_ij(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix(DMatrix<f64>);

impl MetricMatrix {
    /// Symmetrizes and checks positive definiteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let m = symmetrize(&m);
        if !is_spd(&m) {
            return Err(GeomError::NotSpd);
        }
        Ok(MetricMatrix(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn inner(&self, w1: &DVector<f64>, w2: &DVector<f64>) -> f64 {
        inner_product(self, w1, w2)
    }

    pub fn log_det(&self) -> f64 {
        log_det_spd(&self.0).expect("metric matrix is SPD")
    }
}

impl Deref for MetricMatrix {
    type Target = DMatrix<f64>;

    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// Which computation produces `g_ij(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorRoute {
    Vertical,
    Horizontal,
    GraphJet,
}

/// `g_v(w1, w2) = sum a_i b_j g_ij(v)`.
pub fn inner_product(g: &MetricMatrix, w1: &DVector<f64>, w2: &DVector<f64>) -> f64 {
    w1.dot(&(g.matrix() * w2))
}

pub fn metric_tensor(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<MetricMatrix> {
    finsler_norm(kind, body, tv)?;
    let h = scheme.step_or(VERTICAL_STEP) * tv.v.norm();
    let half_sq = |w: &DVector<f64>| -> Result<Vec<f64>> {
        let f = raw_norm(kind, body, &tv.x, w)?;
        Ok(vec![0.5 * f * f])
    };
    with_retry(h, |step| {
        let jet = diff::jet_nd(half_sq, &tv.v, step, scheme.levels)?;
        Ok(hessian_of(&jet.best.hess, 0))
    })
}

/// Funk tensor from positional derivatives of `F` at fixed `v`.
pub fn metric_tensor_horizontal(
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<MetricMatrix> {
    let f0 = finsler_norm(MetricKind::Funk, body, tv)?;
    let h = scheme.step_or(HORIZONTAL_STEP) * body.safe_radius(&tv.x)?;
    let norm_at = |y: &DVector<f64>| -> Result<Vec<f64>> {
        Ok(vec![raw_norm(MetricKind::Funk, body, y, &tv.v)?])
    };
    with_retry(h, |step| {
        let jet = diff::jet_nd(norm_at, &tv.x, step, scheme.levels)?;
        let hess = hessian_of(&jet.best.hess, 0);
        let grad = DVector::from_iterator(tv.x.len(), jet.best.grad.iter().map(|g| g[0]));
        Ok(hess / f0 - &grad * grad.transpose() / (f0 * f0))
    })
}

/// Closed-form tensor from the boundary graph jets.
///
/// In the chart `(z, t)` with `V = d/dt` and `P = h - t`, `Q = t - b`:
///
/// * Funk: `g = -D^2 P / P + DP DP^T / P^2`
/// * reverse Funk: `g = -D^2 Q / Q + DQ DQ^T / Q^2`
/// * Hilbert: `4 g = -(D^2 P + D^2 Q)(1/P + 1/Q) + (DP/P - DQ/Q)(DP/P - DQ/Q)^T`
///
/// evaluated at `z = 0, t = 0` and pulled back to ambient coordinates. No
/// normalization of the chart (such as `g_in(v) = 0`) is assumed.
pub fn metric_tensor_graph_oracle(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
) -> Result<MetricMatrix> {
    let jet = body.boundary_graph_jet(&tv.x, &tv.v)?;
    MetricMatrix::new(graph_tensor_from_jet(kind, &jet))
}

pub(crate) fn graph_tensor_from_jet(kind: MetricKind, jet: &BoundaryGraphJet) -> DMatrix<f64> {
    let n = jet.frame.nrows();
    let m = n - 1;
    let mut d2p = DMatrix::zeros(n, n);
    d2p.view_mut((0, 0), (m, m)).copy_from(&jet.hess_h);
    let mut dp = DVector::zeros(n);
    dp.rows_mut(0, m).copy_from(&jet.grad_h);
    dp[m] = -1.0;
    let p = jet.h0;

    let mut d2q = DMatrix::zeros(n, n);
    d2q.view_mut((0, 0), (m, m)).copy_from(&(-&jet.hess_b));
    let mut dq = DVector::zeros(n);
    dq.rows_mut(0, m).copy_from(&(-&jet.grad_b));
    dq[m] = 1.0;
    let q = -jet.b0;

    let chart = match kind {
        MetricKind::Funk => -&d2p / p + &dp * dp.transpose() / (p * p),
        MetricKind::ReverseFunk => -&d2q / q + &dq * dq.transpose() / (q * q),
        MetricKind::Hilbert => {
            let mixed = &dp / p - &dq / q;
            (-(&d2p + &d2q) * (1.0 / p + 1.0 / q) + &mixed * mixed.transpose()) * 0.25
        }
    };
    // frame = [U | v] with U orthonormal and orthogonal to v, so
    // frame^{-1} = [U^T ; v^T / |v|^2]
    let v = jet.frame.column(m);
    let mut inv = DMatrix::zeros(n, n);
    inv.view_mut((0, 0), (m, n))
        .copy_from(&jet.frame.columns(0, m).transpose());
    inv.row_mut(m)
        .copy_from(&(v.transpose() / v.norm_squared()));
    symmetrize(&(inv.transpose() * chart * inv))
}

/// Dispatches to the requested route. The horizontal route exists only for
/// the Funk metric.
pub fn metric_tensor_by(
    route: TensorRoute,
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<MetricMatrix> {
    match route {
        TensorRoute::Vertical => metric_tensor(kind, body, tv, scheme),
        TensorRoute::Horizontal => match kind {
            MetricKind::Funk => metric_tensor_horizontal(body, tv, scheme),
            _ => Err(GeomError::BadSpec(
                "the horizontal route applies to the funk metric only".into(),
            )),
        },
        TensorRoute::GraphJet => metric_tensor_graph_oracle(kind, body, tv),
    }
}

fn hessian_of(hess: &[Vec<Vec<f64>>], c: usize) -> DMatrix<f64> {
    let n = hess.len();
    DMatrix::from_fn(n, n, |k, l| hess[k][l][c])
}

// One retry with a quarter step when the estimate is not positive definite.
fn with_retry<F>(h: f64, compute: F) -> Result<MetricMatrix>
where
    F: Fn(f64) -> Result<DMatrix<f64>>,
{
    match MetricMatrix::new(compute(h)?) {
        Err(GeomError::NotSpd) => MetricMatrix::new(compute(0.25 * h)?),
        other => other,
    }
}

/// `max_i |dF/dx^i - sigma F dF/dv^i|` with `sigma = +1` for Funk and `-1`
/// for reverse Funk, both partials by central differences.
pub fn okada_residual(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<f64> {
    let sigma = match kind {
        MetricKind::Funk => 1.0,
        MetricKind::ReverseFunk => -1.0,
        MetricKind::Hilbert => {
            return Err(GeomError::BadSpec(
                "the okada identity holds for funk and rfunk only".into(),
            ))
        }
    };
    let f0 = finsler_norm(kind, body, tv)?;
    let hx = scheme.step_or(HORIZONTAL_STEP) * body.safe_radius(&tv.x)?;
    let hv = scheme.step_or(VERTICAL_STEP) * tv.v.norm();
    let dx = diff::gradient(|y| raw_norm(kind, body, y, &tv.v), &tv.x, hx, scheme.levels)?;
    let dv = diff::gradient(|w| raw_norm(kind, body, &tv.x, w), &tv.v, hv, scheme.levels)?;
    Ok((dx - dv * (sigma * f0)).amax())
}

/// Largest sampled value of `F(w) / sqrt(g_v(w, w))` over seeded pairs of
/// unit vectors `(v, w)` at the point `x`. A lower bound for the pointwise
/// uniform convexity constant.
pub fn uniform_convexity_estimate(
    kind: MetricKind,
    body: &ConvexBody,
    x: &DVector<f64>,
    direction_samples: usize,
    seed: u64,
) -> Result<f64> {
    let n = body.dim();
    let mut best: f64 = 0.0;
    for i in 0..direction_samples as u64 {
        let mut rng = sampling::stream(seed, i);
        let v = sampling::unit_vector(&mut rng, n);
        let w = sampling::unit_vector(&mut rng, n);
        let tv = TangentVector::new(x.clone(), v);
        let chord = body.chord(x, &tv.v)?;
        body.check_clearance(&chord, &tv.v)?;
        let g = metric_tensor_graph_oracle(kind, body, &tv)?;
        let fw = finsler_norm(kind, body, &TangentVector::new(x.clone(), w.clone()))?;
        best = best.max(fw / g.inner(&w, &w).sqrt());
    }
    Ok(best)
}

/// Worst cross-route discrepancies over a seeded sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteAgreement {
    pub samples: usize,
    /// Largest relative Frobenius distance between any two routes
    /// (vertical, graph, and horizontal for Funk).
    pub max_discrepancy: f64,
    /// Largest `|g_v(v, v) - F(v)^2| / F(v)^2` over all routes.
    pub max_norm_residual: f64,
}

pub fn route_agreement(
    kind: MetricKind,
    body: &ConvexBody,
    samples: usize,
    seed: u64,
    scheme: &DiffScheme,
) -> Result<RouteAgreement> {
    let mut out = RouteAgreement {
        samples,
        max_discrepancy: 0.0,
        max_norm_residual: 0.0,
    };
    for i in 0..samples as u64 {
        let tv = sampling::interior_tangent(body, seed, i)?;
        let f2 = finsler_norm(kind, body, &tv)?.powi(2);
        let mut routes = vec![
            metric_tensor(kind, body, &tv, scheme)?,
            metric_tensor_graph_oracle(kind, body, &tv)?,
        ];
        if kind == MetricKind::Funk {
            routes.push(metric_tensor_horizontal(body, &tv, scheme)?);
        }
        for (a, g) in routes.iter().enumerate() {
            let residual = (g.inner(&tv.v, &tv.v) - f2).abs() / f2;
            out.max_norm_residual = out.max_norm_residual.max(residual);
            for h in &routes[a + 1..] {
                out.max_discrepancy = out.max_discrepancy.max(rel_frobenius(g, h));
            }
        }
    }
    Ok(out)
}

/// Largest [`okada_residual`] over a seeded sweep.
pub fn okada_sweep(
    kind: MetricKind,
    body: &ConvexBody,
    samples: usize,
    seed: u64,
    scheme: &DiffScheme,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..samples as u64 {
        let tv = sampling::interior_tangent(body, seed, i)?;
        worst = worst.max(okada_residual(kind, body, &tv, scheme)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{load_domain, DomainSpec};

    fn identity_err(g: &MetricMatrix) -> f64 {
        (g.matrix() - DMatrix::identity(g.nrows(), g.ncols())).amax()
    }

    #[test]
    fn center_of_disk_is_euclidean() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let s = DiffScheme::default();
        for v in [[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]] {
            let tv = TangentVector::from_slices(&[0.0, 0.0], &v);
            for kind in [MetricKind::Funk, MetricKind::Hilbert] {
                assert!(identity_err(&metric_tensor(kind, &d, &tv, &s).unwrap()) < 1e-9);
                assert!(identity_err(&metric_tensor_graph_oracle(kind, &d, &tv).unwrap()) < 1e-12);
            }
            assert!(identity_err(&metric_tensor_horizontal(&d, &tv, &s).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn zero_homogeneous_in_v() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let s = DiffScheme::default();
        let tv = TangentVector::from_slices(&[0.0, 0.0], &[0.3, 0.4]);
        let g1 = metric_tensor(MetricKind::Hilbert, &d, &tv, &s).unwrap();
        let g2 = metric_tensor(MetricKind::Hilbert, &d, &tv.scaled(2.0), &s).unwrap();
        assert!((g1.matrix() - g2.matrix()).amax() < 1e-8);
    }

    #[test]
    fn horizontal_and_graph_agree_with_vertical() {
        let s = DiffScheme::default();
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let e = load_domain(&DomainSpec::ellipsoid(&[2.0, 1.0])).unwrap();
        for (body, x, v) in [
            (&d, [0.3, 0.0], [1.0, 0.0]),
            (&e, [0.0, 0.0], [0.0, 1.0]),
            (&e, [0.5, -0.3], [0.2, 0.7]),
        ] {
            let tv = TangentVector::from_slices(&x, &v);
            let vert = metric_tensor(MetricKind::Funk, body, &tv, &s).unwrap();
            let hor = metric_tensor_horizontal(body, &tv, &s).unwrap();
            let graph = metric_tensor_graph_oracle(MetricKind::Funk, body, &tv).unwrap();
            assert!(crate::linalg::rel_frobenius(&vert, &hor) < 1e-5);
            assert!(crate::linalg::rel_frobenius(&vert, &graph) < 1e-5);
        }
    }

    #[test]
    fn inner_product_examples() {
        let id = MetricMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let w = DVector::from_vec(vec![3.0, 4.0]);
        assert_eq!(inner_product(&id, &w, &w), 25.0);
        assert_eq!(inner_product(&id, &w, &DVector::zeros(2)), 0.0);
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let tv = TangentVector::from_slices(&[0.0, 0.0], &[1.0, 0.0]);
        let g = metric_tensor(MetricKind::Funk, &d, &tv, &DiffScheme::default()).unwrap();
        assert!((g.inner(&tv.v, &tv.v) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn okada_examples() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let s = DiffScheme::default();
        let tv = TangentVector::from_slices(&[0.2, 0.1], &[1.0, 0.0]);
        assert!(okada_residual(MetricKind::Funk, &d, &tv, &s).unwrap() <= 1e-6);
        assert!(okada_residual(MetricKind::ReverseFunk, &d, &tv, &s).unwrap() <= 1e-6);
        assert!(okada_residual(MetricKind::Hilbert, &d, &tv, &s).is_err());
    }

    #[test]
    fn hilbert_center_constant_is_one() {
        let d = load_domain(&DomainSpec::unit_ball(2)).unwrap();
        let c = uniform_convexity_estimate(MetricKind::Hilbert, &d, &DVector::zeros(2), 500, 11)
            .unwrap();
        assert!((c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn not_spd_is_reported() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(MetricMatrix::new(m).unwrap_err(), GeomError::NotSpd);
    }
}
