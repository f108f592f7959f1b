//! Fixtures shared by the benchmarks.

use fhgeom::{load_domain, ConvexBody, DomainSpec, TangentVector};

/// Named bodies used across the benchmark groups.
pub fn bodies() -> Vec<(&'static str, ConvexBody)> {
    [
        ("disk", DomainSpec::unit_ball(2)),
        ("ellipsoid3", DomainSpec::ellipsoid(&[2.0, 1.0, 1.5])),
        ("hexagon", DomainSpec::smoothed_polygon(6, 3.0)),
        ("p4", DomainSpec::pnorm_ball(2, 4.0)),
    ]
    .into_iter()
    .map(|(name, spec)| (name, load_domain(&spec).expect("fixture body loads")))
    .collect()
}

/// A fixed off-center tangent vector in the body's dimension.
pub fn probe(body: &ConvexBody) -> TangentVector {
    let n = body.dim();
    let x: Vec<f64> = (0..n).map(|i| 0.2 - 0.15 * i as f64).collect();
    let v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * i as f64).collect();
    TangentVector::from_slices(&x, &v)
}

/// Origin of the body's ambient space as a vector.
pub fn origin(body: &ConvexBody) -> nalgebra::DVector<f64> {
    nalgebra::DVector::zeros(body.dim())
}
