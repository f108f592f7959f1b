//! Finsler Ricci curvature through a geodesic field.
//!
//! For a unit vector `v` at `x`, extend it to a field `V` whose integral
//! curves are unit-speed geodesics. The Riemannian metric `g_V` then has the
//! same Ricci curvature in direction `v` as the Finsler metric. Funk and
//! Hilbert geodesics are straight lines, so `V(y) = w / F(y, w)` with
//! constant `w` works, and by 0-homogeneity `g_V(y) = g_w(y)`.

use std::fmt;
use std::ops::Index;

use nalgebra::{DMatrix, DVector};

use crate::diff::{self, DiffScheme, JetN};
use crate::domain::ConvexBody;
use crate::error::{GeomError, Result};
use crate::finsler::{finsler_norm, raw_norm, MetricKind, TangentVector};
use crate::tensor::{metric_tensor_by, MetricMatrix, TensorRoute};

/// Default positional step, as a fraction of the field's stencil radius.
pub const RICCI_STEP: f64 = 0.1;
/// Default bound on the Richardson discrepancy of a Ricci value.
pub const RICCI_TOL: f64 = 1e-3;

type Evaluator<'a> = Box<dyn Fn(&DVector<f64>) -> Result<DMatrix<f64>> + Send + Sync + 'a>;
type RadiusFn<'a> = Box<dyn Fn(&DVector<f64>) -> Result<f64> + Send + Sync + 'a>;

#[derive(Debug, Clone, PartialEq)]
pub enum FieldProvenance {
    GeodesicField { kind: MetricKind, w: Vec<f64> },
    Synthetic(String),
}

/// A Riemannian metric on a neighborhood, `y -> g(y)`.
pub struct MetricField<'a> {
    dim: usize,
    eval: Evaluator<'a>,
    radius: RadiusFn<'a>,
    pub provenance: FieldProvenance,
}

impl fmt::Debug for MetricField<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("dim", &self.dim)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl<'a> MetricField<'a> {
    /// A field given directly by a closure. `radius` is the stencil radius
    /// used for finite differences around any point.
    pub fn synthetic<F>(dim: usize, name: &str, radius: f64, eval: F) -> Self
    where
        F: Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'a,
    {
        MetricField {
            dim,
            eval: Box::new(move |y| Ok(eval(y))),
            radius: Box::new(move |_| Ok(radius)),
            provenance: FieldProvenance::Synthetic(name.to_string()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, y: &DVector<f64>) -> Result<MetricMatrix> {
        MetricMatrix::new((self.eval)(y)?)
    }

    pub fn stencil_radius(&self, y: &DVector<f64>) -> Result<f64> {
        (self.radius)(y)
    }
}

/// `y -> g_{V(y)}(y)` with `V(y) = w / F(y, w)`, tensors from the boundary
/// graph jets.
pub fn geodesic_metric_field<'a>(
    kind: MetricKind,
    body: &'a ConvexBody,
    w: &DVector<f64>,
) -> Result<MetricField<'a>> {
    geodesic_metric_field_by(TensorRoute::GraphJet, kind, body, w, DiffScheme::default())
}

pub fn geodesic_metric_field_by<'a>(
    route: TensorRoute,
    kind: MetricKind,
    body: &'a ConvexBody,
    w: &DVector<f64>,
    scheme: DiffScheme,
) -> Result<MetricField<'a>> {
    if w.len() != body.dim() {
        return Err(GeomError::BadSpec(format!(
            "expected a {}-vector",
            body.dim()
        )));
    }
    if w.norm() < 1e-14 {
        return Err(GeomError::ZeroVector);
    }
    let w_owned = w.clone();
    Ok(MetricField {
        dim: body.dim(),
        eval: Box::new(move |y| {
            let speed = raw_norm(kind, body, y, &w_owned)?;
            let tv = TangentVector::new(y.clone(), &w_owned / speed);
            Ok(metric_tensor_by(route, kind, body, &tv, &scheme)?.into_inner())
        }),
        radius: Box::new(move |y| body.safe_radius(y)),
        provenance: FieldProvenance::GeodesicField {
            kind,
            w: w.iter().copied().collect(),
        },
    })
}

/// Christoffel symbols of the second kind, `gamma[(k, i, j)] = Γ^k_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `|Γ^k_ij - Γ^k_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((self[(k, i, j)] - self[(k, j, i)]).abs());
                }
            }
        }
        worst
    }
}

impl Index<(usize, usize, usize)> for Christoffel {
    type Output = f64;

    fn index(&self, (k, i, j): (usize, usize, usize)) -> &f64 {
        &self.data[(k * self.n + i) * self.n + j]
    }
}

/// Metric, first and second derivatives at a point, unpacked from a jet of
/// the flattened matrix field.
struct MetricJet {
    n: usize,
    ginv: DMatrix<f64>,
    // dg[k][(a, b)] = d_k g_ab
    dg: Vec<DMatrix<f64>>,
    // ddg[k][l][(a, b)] = d_k d_l g_ab
    ddg: Vec<Vec<DMatrix<f64>>>,
}

impl MetricJet {
    fn from_jet(n: usize, jet: &JetN) -> Result<Self> {
        let g = DMatrix::from_column_slice(n, n, &jet.value);
        let ginv = MetricMatrix::new(g)?
            .into_inner()
            .try_inverse()
            .ok_or(GeomError::NotSpd)?;
        let dg = (0..n)
            .map(|k| DMatrix::from_column_slice(n, n, &jet.grad[k]))
            .collect();
        let ddg = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| DMatrix::from_column_slice(n, n, &jet.hess[k][l]))
                    .collect()
            })
            .collect();
        Ok(MetricJet { n, ginv, dg, ddg })
    }

    fn christoffel(&self) -> Christoffel {
        let n = self.n;
        let mut first = vec![0.0; n * n * n]; // Γ_{m,jk}
        for m in 0..n {
            for j in 0..n {
                for k in 0..n {
                    first[(m * n + j) * n + k] =
                        0.5 * (self.dg[j][(k, m)] + self.dg[k][(j, m)] - self.dg[m][(j, k)]);
                }
            }
        }
        let mut data = vec![0.0; n * n * n];
        for l in 0..n {
            for j in 0..n {
                for k in 0..n {
                    data[(l * n + j) * n + k] = (0..n)
                        .map(|m| self.ginv[(l, m)] * first[(m * n + j) * n + k])
                        .sum();
                }
            }
        }
        Christoffel { n, data }
    }

    /// `Ric(v, v)` with `R^l_ijk = d_i Γ^l_jk - d_j Γ^l_ik + Γ^l_im Γ^m_jk -
    /// Γ^l_jm Γ^m_ik` and `Ric_jk = R^i_ijk`.
    fn ricci(&self, v: &DVector<f64>) -> f64 {
        let n = self.n;
        let gamma = self.christoffel();
        // dgamma[i][(l, j, k)] = d_i Γ^l_jk
        let mut dgamma = vec![vec![0.0; n * n * n]; n];
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = 0.0;
                        for m in 0..n {
                            let d_first = 0.5
                                * (self.ddg[i][j][(k, m)] + self.ddg[i][k][(j, m)]
                                    - self.ddg[i][m][(j, k)]);
                            acc += self.ginv[(l, m)] * d_first;
                            // d_i g^{lm} = -g^{la} d_i g_ab g^{bm}; contracted with Γ_{m,jk}
                            for a in 0..n {
                                acc -= self.ginv[(l, a)] * self.dg[i][(a, m)] * gamma[(m, j, k)];
                            }
                        }
                        dgamma[i][(l * n + j) * n + k] = acc;
                    }
                }
            }
        }
        let dg_at = |i: usize, l: usize, j: usize, k: usize| dgamma[i][(l * n + j) * n + k];
        let mut ric = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += dg_at(i, i, j, k) - dg_at(j, i, i, k);
                    for m in 0..n {
                        acc += gamma[(i, i, m)] * gamma[(m, j, k)]
                            - gamma[(i, j, m)] * gamma[(m, i, k)];
                    }
                }
                ric[(j, k)] = acc;
            }
        }
        v.dot(&(ric * v))
    }
}

fn field_jet(
    field: &MetricField<'_>,
    x: &DVector<f64>,
    scheme: &DiffScheme,
) -> Result<diff::JetEstimate> {
    let h = scheme.step_or(RICCI_STEP) * field.stencil_radius(x)?;
    diff::jet_nd(
        |y| Ok((field.eval)(y)?.as_slice().to_vec()),
        x,
        h,
        scheme.levels,
    )
}

pub fn christoffel(
    field: &MetricField<'_>,
    x: &DVector<f64>,
    scheme: &DiffScheme,
) -> Result<Christoffel> {
    let jet = field_jet(field, x, scheme)?;
    Ok(MetricJet::from_jet(field.dim(), &jet.best)?.christoffel())
}

/// Result of a Ricci evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub ricci_value: f64,
    pub christoffel_norm: f64,
    pub stencil_step: f64,
    /// Discrepancy between the two highest Richardson levels.
    pub estimated_error: f64,
}

/// Riemannian `Ric(v, v)` of a metric field at `x`.
pub fn ricci_of_field(
    field: &MetricField<'_>,
    x: &DVector<f64>,
    v: &DVector<f64>,
    scheme: &DiffScheme,
) -> Result<CurvatureReport> {
    let jet = field_jet(field, x, scheme)?;
    let best = MetricJet::from_jet(field.dim(), &jet.best)?;
    let coarse = MetricJet::from_jet(field.dim(), &jet.coarse)?;
    let value = best.ricci(v);
    let estimated_error = (value - coarse.ricci(v)).abs();
    let tolerance = scheme.tolerance_or(RICCI_TOL);
    if !(estimated_error <= tolerance) {
        return Err(GeomError::Tolerance {
            estimate: estimated_error,
            tolerance,
        });
    }
    Ok(CurvatureReport {
        ricci_value: value,
        christoffel_norm: best.christoffel().norm(),
        stencil_step: jet.step,
        estimated_error,
    })
}

/// Finsler Ricci curvature `Ric(v)`, with `Ric(c v) = c^2 Ric(v)`.
pub fn ricci(
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<CurvatureReport> {
    ricci_by(TensorRoute::GraphJet, kind, body, tv, scheme)
}

pub fn ricci_by(
    route: TensorRoute,
    kind: MetricKind,
    body: &ConvexBody,
    tv: &TangentVector,
    scheme: &DiffScheme,
) -> Result<CurvatureReport> {
    let speed = finsler_norm(kind, body, tv)?;
    let unit = &tv.v / speed;
    let field = geodesic_metric_field_by(route, kind, body, &unit, DiffScheme::default())?;
    let mut report = ricci_of_field(&field, &tv.x, &unit, scheme)?;
    report.ricci_value *= speed * speed;
    report.estimated_error *= speed * speed;
    Ok(report)
}

/// Klein-model metric `g = I / (1 - |y|^2) + y y^T / (1 - |y|^2)^2` on the
/// unit ball; constant sectional curvature `-1`.
pub fn klein_metric(y: &DVector<f64>) -> DMatrix<f64> {
    let n = y.len();
    let s = 1.0 - y.norm_squared();
    DMatrix::identity(n, n) / s + y * y.transpose() / (s * s)
}
