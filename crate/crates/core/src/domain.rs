//! Bounded smooth convex domains given as sublevel sets `{phi < 0}` of a
//! convex defining function, together with the line and boundary
//! subproblems every metric evaluation relies on.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::linalg::{min_eigenvalue, orthonormal_complement};
use crate::sampling;

/// One half-space `normal . x <= offset` of a smoothed polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Serializable description of a domain. Matrices are arrays of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Ellipsoid {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<Vec<f64>>>,
    },
    PnormBall {
        center: Vec<f64>,
        radius: f64,
        p: f64,
    },
    /// `phi(x) = (1/beta) log sum_i exp(beta (a_i . x - b_i))`.
    Logsumexp {
        facets: Vec<Facet>,
        #[serde(alias = "sharpness")]
        beta: f64,
    },
}

impl DomainSpec {
    pub fn unit_ball(n: usize) -> Self {
        DomainSpec::Ellipsoid {
            center: vec![0.0; n],
            semi_axes: vec![1.0; n],
            rotation: None,
        }
    }

    pub fn ellipsoid(semi_axes: &[f64]) -> Self {
        DomainSpec::Ellipsoid {
            center: vec![0.0; semi_axes.len()],
            semi_axes: semi_axes.to_vec(),
            rotation: None,
        }
    }

    pub fn pnorm_ball(n: usize, p: f64) -> Self {
        DomainSpec::PnormBall {
            center: vec![0.0; n],
            radius: 1.0,
            p,
        }
    }

    /// Smoothed regular `k`-gon with inradius 1.
    pub fn smoothed_polygon(k: usize, beta: f64) -> Self {
        let facets = (0..k)
            .map(|i| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                Facet {
                    normal: vec![angle.cos(), angle.sin()],
                    offset: 1.0,
                }
            })
            .collect();
        DomainSpec::Logsumexp { facets, beta }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DomainSpec =
            serde_json::from_str(text).map_err(|e| GeomError::BadSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain spec serializes")
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ellipsoid { center, .. } | DomainSpec::PnormBall { center, .. } => {
                center.len()
            }
            DomainSpec::Logsumexp { facets, .. } => facets.first().map_or(0, |f| f.normal.len()),
        }
    }

    /// Checks the structural invariants that do not need the realized body.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n < 2 {
            return Err(GeomError::BadSpec(format!("dimension {n} < 2")));
        }
        let bad = |msg: String| Err(GeomError::BadSpec(msg));
        let all_finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            DomainSpec::Ellipsoid {
                center,
                semi_axes,
                rotation,
            } => {
                if semi_axes.len() != n {
                    return bad(format!(
                        "semi_axes has {} entries, expected {n}",
                        semi_axes.len()
                    ));
                }
                if !all_finite(center) || semi_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                    return bad("semi_axes must be positive and finite".into());
                }
                if let Some(rows) = rotation {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n || !all_finite(r)) {
                        return bad(format!("rotation must be a finite {n}x{n} matrix"));
                    }
                    let r = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
                    let defect = (r.transpose() * &r - DMatrix::identity(n, n)).norm();
                    if defect > 1e-9 {
                        return bad(format!("rotation is not orthogonal (defect {defect:e})"));
                    }
                }
            }
            DomainSpec::PnormBall { center, radius, p } => {
                if !all_finite(center) || !(radius.is_finite() && *radius > 0.0) {
                    return bad("radius must be positive and finite".into());
                }
                if !(p.is_finite() && *p >= 2.0) {
                    return bad(format!("exponent p = {p} must satisfy p >= 2"));
                }
            }
            DomainSpec::Logsumexp { facets, beta } => {
                if !(beta.is_finite() && *beta > 0.0) {
                    return bad("beta must be positive and finite".into());
                }
                if facets
                    .iter()
                    .any(|f| f.normal.len() != n || !all_finite(&f.normal) || !f.offset.is_finite())
                {
                    return bad("facet normals must share one dimension and be finite".into());
                }
                if facets.len() <= n {
                    return bad(format!(
                        "{} facets cannot bound a region in dimension {n}",
                        facets.len()
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Where a point sits relative to the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone)]
enum Shape {
    Ellipsoid {
        center: DVector<f64>,
        // columns are the principal axes
        rotation: DMatrix<f64>,
        inv_sq: DVector<f64>,
    },
    Pnorm {
        center: DVector<f64>,
        radius: f64,
        p: f64,
    },
    LogSumExp {
        normals: DMatrix<f64>,
        offsets: DVector<f64>,
        beta: f64,
    },
}

impl Shape {
    fn value(&self, x: &DVector<f64>) -> f64 {
        match self {
            Shape::Ellipsoid {
                center,
                rotation,
                inv_sq,
            } => {
                let y = rotation.tr_mul(&(x - center));
                y.iter()
                    .zip(inv_sq.iter())
                    .map(|(a, s)| a * a * s)
                    .sum::<f64>()
                    - 1.0
            }
            Shape::Pnorm { center, radius, p } => {
                (x - center)
                    .iter()
                    .map(|d| (d.abs() / radius).powf(*p))
                    .sum::<f64>()
                    - 1.0
            }
            Shape::LogSumExp {
                normals,
                offsets,
                beta,
            } => {
                let s = normals * x - offsets;
                let top = s.max();
                top + s
                    .iter()
                    .map(|si| (beta * (si - top)).exp())
                    .sum::<f64>()
                    .ln()
                    / beta
            }
        }
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            Shape::Ellipsoid {
                center,
                rotation,
                inv_sq,
            } => {
                let y = rotation.tr_mul(&(x - center));
                rotation * y.component_mul(inv_sq) * 2.0
            }
            Shape::Pnorm { center, radius, p } => {
                (x - center).map(|d| p * d.signum() * d.abs().powf(p - 1.0) / radius.powf(*p))
            }
            Shape::LogSumExp {
                normals,
                offsets,
                beta,
            } => {
                let w = softmax(&(normals * x - offsets), *beta);
                normals.tr_mul(&w)
            }
        }
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        match self {
            Shape::Ellipsoid {
                rotation, inv_sq, ..
            } => rotation * DMatrix::from_diagonal(inv_sq) * rotation.transpose() * 2.0,
            Shape::Pnorm { center, radius, p } => DMatrix::from_diagonal(
                &(x - center).map(|d| p * (p - 1.0) * d.abs().powf(p - 2.0) / radius.powf(*p)),
            ),
            Shape::LogSumExp {
                normals,
                offsets,
                beta,
            } => {
                let w = softmax(&(normals * x - offsets), *beta);
                let mean = normals.tr_mul(&w);
                let second = normals.transpose() * DMatrix::from_diagonal(&w) * normals;
                (second - &mean * mean.transpose()) * *beta
            }
        }
    }
}

fn softmax(s: &DVector<f64>, beta: f64) -> DVector<f64> {
    let top = s.max();
    let e = s.map(|si| (beta * (si - top)).exp());
    let total = e.sum();
    e / total
}

/// Forward and backward boundary hits along the line `x + u v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordData {
    /// Forward hit parameter, in units of `v`.
    pub t_plus: f64,
    /// Backward hit parameter, in units of `v`.
    pub t_minus: f64,
    /// `x + t_plus v`
    pub b_point: DVector<f64>,
    /// `x - t_minus v`
    pub a_point: DVector<f64>,
}

/// Second-order jets of the two boundary sheets seen as graphs over the
/// hyperplane spanned by the first `n - 1` frame columns.
///
/// In the chart `(z, t) -> x + U z + t v` (with `U` the first `n - 1`
/// columns of `frame`) the boundary near the forward hit is
/// `{(z, h(z))}` and near the backward hit `{(z, b(z))}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGraphJet {
    pub frame: DMatrix<f64>,
    pub h0: f64,
    pub grad_h: DVector<f64>,
    pub hess_h: DMatrix<f64>,
    pub b0: f64,
    pub grad_b: DVector<f64>,
    pub hess_b: DMatrix<f64>,
}

const NEWTON_MAX_ITER: usize = 200;

/// A realized convex body. Immutable once built.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    spec: DomainSpec,
    shape: Shape,
    dim: usize,
    bbox_lo: DVector<f64>,
    bbox_hi: DVector<f64>,
    interior: DVector<f64>,
    diameter: f64,
}

/// Builds a [`ConvexBody`] from its description and checks that the
/// defining function, its gradient and Hessian are mutually consistent.
pub fn load_domain(spec: &DomainSpec) -> Result<ConvexBody> {
    ConvexBody::new(spec.clone())
}

impl ConvexBody {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.dim();
        let (shape, lo, hi) = match &spec {
            DomainSpec::Ellipsoid {
                center,
                semi_axes,
                rotation,
            } => {
                let c = DVector::from_column_slice(center);
                let r = match rotation {
                    Some(rows) => DMatrix::from_fn(n, n, |i, j| rows[i][j]),
                    None => DMatrix::identity(n, n),
                };
                let half = DVector::from_fn(n, |k, _| {
                    (0..n)
                        .map(|j| (r[(k, j)] * semi_axes[j]).powi(2))
                        .sum::<f64>()
                        .sqrt()
                });
                let inv_sq = DVector::from_iterator(n, semi_axes.iter().map(|a| 1.0 / (a * a)));
                (
                    Shape::Ellipsoid {
                        center: c.clone(),
                        rotation: r,
                        inv_sq,
                    },
                    &c - &half,
                    &c + &half,
                )
            }
            DomainSpec::PnormBall { center, radius, p } => {
                let c = DVector::from_column_slice(center);
                let half = DVector::from_element(n, *radius);
                (
                    Shape::Pnorm {
                        center: c.clone(),
                        radius: *radius,
                        p: *p,
                    },
                    &c - &half,
                    &c + &half,
                )
            }
            DomainSpec::Logsumexp { facets, beta } => {
                let normals = DMatrix::from_fn(facets.len(), n, |i, j| facets[i].normal[j]);
                let offsets = DVector::from_iterator(facets.len(), facets.iter().map(|f| f.offset));
                let (lo, hi) = polytope_box(&normals, &offsets)?;
                (
                    Shape::LogSumExp {
                        normals,
                        offsets,
                        beta: *beta,
                    },
                    lo,
                    hi,
                )
            }
        };
        // pad so the exit point of any ray is strictly outside the closure
        let pad = 0.01 * (&hi - &lo).norm();
        let bbox_lo = lo.add_scalar(-pad);
        let bbox_hi = hi.add_scalar(pad);
        let diameter = (&hi - &lo).norm();
        let interior = match &shape {
            Shape::Ellipsoid { center, .. } | Shape::Pnorm { center, .. } => center.clone(),
            Shape::LogSumExp { .. } => deepest_point(&shape, (&lo + &hi) * 0.5)?,
        };
        let body = ConvexBody {
            spec,
            shape,
            dim: n,
            bbox_lo,
            bbox_hi,
            interior,
            diameter,
        };
        if body.value(&body.interior) >= 0.0 {
            return Err(GeomError::BadSpec("domain is empty".into()));
        }
        body.check_consistency()?;
        Ok(body)
    }

    fn check_consistency(&self) -> Result<()> {
        let n = self.dim;
        let mut rng = sampling::stream(0x5eed, 0);
        let h = 1e-6 * self.diameter;
        for i in 0..16 {
            let x = if i == 0 {
                self.interior.clone()
            } else {
                DVector::from_fn(n, |k, _| {
                    self.bbox_lo[k] + rng.random::<f64>() * (self.bbox_hi[k] - self.bbox_lo[k])
                })
            };
            let g = self.gradient(&x);
            let hess = self.hessian(&x);
            for k in 0..n {
                let mut xp = x.clone();
                xp[k] += h;
                let mut xm = x.clone();
                xm[k] -= h;
                let fd = (self.value(&xp) - self.value(&xm)) / (2.0 * h);
                if (fd - g[k]).abs() > 1e-5 * (1.0 + g.norm()) {
                    return Err(GeomError::BadSpec(format!(
                        "gradient check failed at sample {i}, component {k}"
                    )));
                }
            }
            let scale = hess.norm().max(1e-300);
            if min_eigenvalue(&hess) < -1e-9 * scale {
                return Err(GeomError::BadSpec(format!(
                    "defining function is not convex at sample {i}"
                )));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Padded axis-aligned box containing the closure of the domain.
    pub fn bounding_box(&self) -> (&DVector<f64>, &DVector<f64>) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    /// A point guaranteed to be interior (center, or minimizer of `phi`).
    pub fn interior_point(&self) -> &DVector<f64> {
        &self.interior
    }

    /// Diagonal of the unpadded bounding box; an upper bound on the diameter.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.shape.value(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.shape.gradient(x)
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.shape.hessian(x)
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.value(x) < 0.0
    }

    pub fn classify_point(&self, x: &DVector<f64>, tol: f64) -> PointClass {
        let phi = self.value(x);
        let scale = self.gradient(x).norm();
        if phi.abs() <= tol * scale {
            PointClass::Boundary
        } else if phi < 0.0 {
            PointClass::Interior
        } else {
            PointClass::Exterior
        }
    }

    fn check_direction(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim || v.len() != self.dim {
            return Err(GeomError::BadSpec(format!(
                "expected vectors of dimension {}",
                self.dim
            )));
        }
        if !(v.norm() >= 1e-14 * (1.0 + x.norm())) {
            return Err(GeomError::ZeroVector);
        }
        if !(self.value(x) < 0.0) {
            return Err(GeomError::Outside);
        }
        Ok(())
    }

    /// Boundary hits of the line through interior `x` with direction `v`.
    pub fn chord(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<ChordData> {
        self.check_direction(x, v)?;
        let t_plus = self.ray_root(x, v)?;
        let t_minus = self.ray_root(x, &-v)?;
        Ok(ChordData {
            t_plus,
            t_minus,
            b_point: x + v * t_plus,
            a_point: x - v * t_minus,
        })
    }

    /// Forward hit parameter only.
    pub fn forward_hit(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        self.check_direction(x, v)?;
        self.ray_root(x, v)
    }

    fn exit_parameter(&self, x: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let mut u = f64::INFINITY;
        for k in 0..self.dim {
            if v[k] > 0.0 {
                u = u.min((self.bbox_hi[k] - x[k]) / v[k]);
            } else if v[k] < 0.0 {
                u = u.min((self.bbox_lo[k] - x[k]) / v[k]);
            }
        }
        u
    }

    fn line_eval(&self, x: &DVector<f64>, v: &DVector<f64>, u: f64) -> (f64, f64) {
        let p = x + v * u;
        (self.value(&p), self.gradient(&p).dot(v))
    }

    /// Root of `u -> phi(x + u v)` on `(0, U_max]`, where `U_max` is the
    /// exit parameter of the bounding box. The function is convex along the
    /// line and negative at 0, so starting Newton from the right end gives a
    /// monotone iteration; bisection guards against any step leaving the
    /// bracket.
    fn ray_root(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        let u_max = self.exit_parameter(x, v);
        let (mut lo, mut hi) = (0.0, u_max);
        let (f_hi, _) = self.line_eval(x, v, hi);
        if !(f_hi > 0.0) {
            return Err(GeomError::NoConverge(
                "bounding box does not enclose the domain along this ray".into(),
            ));
        }
        let mut u = hi;
        for _ in 0..NEWTON_MAX_ITER {
            let (f, df) = self.line_eval(x, v, u);
            if f < 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            if f.abs() < 1e-12 * (1.0 + df.abs()) {
                return Ok(self.polish(x, v, u, lo, hi));
            }
            let newton = u - f / df;
            u = if df > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-14 * u_max {
                return Ok(self.polish(x, v, u, lo, hi));
            }
        }
        Err(GeomError::NoConverge(format!(
            "ray root not found in {NEWTON_MAX_ITER} iterations"
        )))
    }

    // Two more guarded Newton steps bring the root to full precision.
    fn polish(&self, x: &DVector<f64>, v: &DVector<f64>, mut u: f64, lo: f64, hi: f64) -> f64 {
        for _ in 0..2 {
            let (f, df) = self.line_eval(x, v, u);
            if f == 0.0 || !(df > 0.0) {
                break;
            }
            let next = u - f / df;
            if next >= lo && next <= hi {
                u = next;
            } else {
                break;
            }
        }
        u
    }

    /// Implicit-function jets of the forward and backward boundary sheets in
    /// the orthonormal chart adapted to `v`.
    pub fn boundary_graph_jet(
        &self,
        x: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<BoundaryGraphJet> {
        let chord = self.chord(x, v)?;
        let complement = orthonormal_complement(v);
        let n = self.dim;
        let mut frame = DMatrix::zeros(n, n);
        frame.columns_mut(0, n - 1).copy_from(&complement);
        frame.set_column(n - 1, v);
        let (grad_h, hess_h) = sheet_jet(self, &chord.b_point, &complement, v)?;
        let (grad_b, hess_b) = sheet_jet(self, &chord.a_point, &complement, v)?;
        Ok(BoundaryGraphJet {
            frame,
            h0: chord.t_plus,
            grad_h,
            hess_h,
            b0: -chord.t_minus,
            grad_b,
            hess_b,
        })
    }

    /// Smallest principal curvature of the boundary over `sample_count`
    /// seeded boundary points (rays from the interior point).
    pub fn strong_convexity_margin(&self, sample_count: usize, seed: u64) -> f64 {
        (0..sample_count.max(1))
            .map(|i| {
                let mut rng = sampling::stream(seed, i as u64);
                let u = sampling::unit_vector(&mut rng, self.dim);
                match self.forward_hit(&self.interior, &u) {
                    Ok(t) => self.boundary_curvature_min(&(&self.interior + u * t)),
                    Err(_) => f64::NAN,
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum eigenvalue of the second fundamental form at a boundary point.
    pub fn boundary_curvature_min(&self, p: &DVector<f64>) -> f64 {
        let g = self.gradient(p);
        let gn = g.norm();
        let tangent = orthonormal_complement(&g);
        let form = tangent.transpose() * self.hessian(p) * &tangent / gn;
        min_eigenvalue(&form)
    }

    /// Radius `r` such that `x + d` is interior whenever `|d|_1 <= r`
    /// (half the smallest axis chord; the cross-polytope on the axis hits is
    /// inside by convexity).
    pub fn safe_radius(&self, x: &DVector<f64>) -> Result<f64> {
        let mut r = f64::INFINITY;
        for k in 0..self.dim {
            let e = DVector::from_fn(self.dim, |i, _| if i == k { 1.0 } else { 0.0 });
            let c = self.chord(x, &e)?;
            r = r.min(c.t_plus.min(c.t_minus));
        }
        Ok(0.5 * r)
    }

    /// Rejects chords whose nearer endpoint lies within `1e-6` diameters.
    pub fn check_clearance(&self, chord: &ChordData, v: &DVector<f64>) -> Result<()> {
        let distance = chord.t_plus.min(chord.t_minus) * v.norm();
        if distance < 1e-6 * self.diameter {
            return Err(GeomError::NearBoundary { distance });
        }
        Ok(())
    }

    /// Seeded interior point `c + rho * t(u) * u` with `u` uniform on the
    /// sphere, `c` the interior point and `rho` uniform on `[0, max_depth]`.
    pub fn sample_interior<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        max_depth: f64,
    ) -> Result<DVector<f64>> {
        let u = sampling::unit_vector(rng, self.dim);
        let t = self.forward_hit(&self.interior, &u)?;
        let rho: f64 = rng.random::<f64>() * max_depth;
        Ok(&self.interior + u * (rho * t))
    }
}

fn sheet_jet(
    body: &ConvexBody,
    p: &DVector<f64>,
    complement: &DMatrix<f64>,
    v: &DVector<f64>,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let g = body.gradient(p);
    let hess = body.hessian(p);
    let psi_t = g.dot(v);
    if psi_t.abs() <= 1e-12 * g.norm() * v.norm() {
        return Err(GeomError::TangentRay);
    }
    let psi_z = complement.tr_mul(&g);
    let hv = &hess * v;
    let psi_zt = complement.tr_mul(&hv);
    let psi_tt = v.dot(&hv);
    let psi_zz = complement.transpose() * &hess * complement;
    let grad = -psi_z / psi_t;
    let cross = &psi_zt * grad.transpose();
    let hess_graph =
        -(psi_zz + &cross + cross.transpose() + &grad * grad.transpose() * psi_tt) / psi_t;
    Ok((grad, hess_graph))
}

/// Bounding box of `{x : A x <= b}` by vertex enumeration, after checking
/// that the polyhedron is bounded (no extreme ray of `{d : A d <= 0}`).
fn polytope_box(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let (m, n) = a.shape();
    if a.clone().svd(false, false).rank(1e-10 * a.norm()) < n {
        return Err(GeomError::BadSpec(
            "facet normals do not span the space".into(),
        ));
    }
    let scale = a.norm();
    for subset in combinations(m, n - 1) {
        let rows = DMatrix::from_fn(n - 1, n, |i, j| a[(subset[i], j)]);
        let eig = SymmetricEigen::new(rows.transpose() * &rows);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        // rank n - 1: exactly one (near) zero eigenvalue
        if eig.eigenvalues[order[1]] < 1e-20 * scale * scale {
            continue;
        }
        let d = eig.eigenvectors.column(order[0]).into_owned();
        for dir in [d.clone(), -d] {
            if (a * &dir).iter().all(|s| *s <= 1e-12 * scale) {
                return Err(GeomError::BadSpec(
                    "facets do not enclose a bounded region".into(),
                ));
            }
        }
    }
    let mut lo = DVector::from_element(n, f64::INFINITY);
    let mut hi = DVector::from_element(n, f64::NEG_INFINITY);
    let mut found = false;
    for subset in combinations(m, n) {
        let sys = DMatrix::from_fn(n, n, |i, j| a[(subset[i], j)]);
        let rhs = DVector::from_fn(n, |i, _| b[subset[i]]);
        let Some(x) = sys.lu().solve(&rhs) else {
            continue;
        };
        if !x.iter().all(|c| c.is_finite()) {
            continue;
        }
        let slack = a * &x - b;
        if slack.iter().all(|s| *s <= 1e-9 * (1.0 + b.amax())) {
            found = true;
            lo = lo.inf(&x);
            hi = hi.sup(&x);
        }
    }
    if !found {
        return Err(GeomError::BadSpec("facets define an empty region".into()));
    }
    Ok((lo, hi))
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Minimizer of a smooth strictly convex `phi` by damped Newton.
fn deepest_point(shape: &Shape, start: DVector<f64>) -> Result<DVector<f64>> {
    let mut x = start;
    for _ in 0..100 {
        let g = shape.gradient(&x);
        if g.norm() < 1e-12 {
            break;
        }
        let n = x.len();
        let hess = shape.hessian(&x) + DMatrix::identity(n, n) * 1e-12;
        let step = hess.lu().solve(&g).unwrap_or_else(|| g.clone());
        let f0 = shape.value(&x);
        let mut alpha = 1.0;
        loop {
            let trial = &x - &step * alpha;
            if shape.value(&trial) <= f0 - 1e-4 * alpha * g.dot(&step) || alpha < 1e-12 {
                x = trial;
                break;
            }
            alpha *= 0.5;
        }
        if alpha < 1e-12 {
            break;
        }
    }
    if x.iter().all(|c| c.is_finite()) {
        Ok(x)
    } else {
        Err(GeomError::BadSpec(
            "could not locate an interior point".into(),
        ))
    }
}
