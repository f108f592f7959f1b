//! Funk, reverse Funk and Hilbert geometry on smooth convex bodies, with
//! numerical fundamental tensors, Ricci and weighted Ricci curvature, and
//! forward-ball volumes.
//!
//! ```
//! use fhgeom::{load_domain, hilbert_distance, DomainSpec};
//! use nalgebra::DVector;
//!
//! let disk = load_domain(&DomainSpec::unit_ball(2)).unwrap();
//! let x = DVector::from_vec(vec![0.0, 0.0]);
//! let y = DVector::from_vec(vec![0.5, 0.0]);
//! let d = hilbert_distance(&disk, &x, &y).unwrap();
//! assert!((d - 0.5f64.atanh()).abs() < 1e-12);
//! ```

// NaN-rejecting comparisons and index loops over tensor components are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curvature;
pub mod diff;
pub mod domain;
pub mod error;
pub mod finsler;
pub mod linalg;
pub mod measure;
pub mod sampling;
pub mod tensor;
pub mod wricci;

pub use curvature::{ricci, ricci_of_field, CurvatureReport, MetricField};
pub use diff::DiffScheme;
pub use domain::{load_domain, ChordData, ConvexBody, DomainSpec, PointClass};
pub use error::{GeomError, Result};
pub use finsler::{
    distance, exp_map, finsler_norm, funk_distance, geodesic_point, hilbert_distance, MetricKind,
    TangentVector, UnitGeodesic,
};
pub use measure::{
    bishop_gromov_check, forward_ball_volume, BishopGromovReport, VolumeEstimate, VolumeMethod,
};
pub use tensor::{
    metric_tensor, okada_residual, uniform_convexity_estimate, MetricMatrix, TensorRoute,
};
pub use wricci::{
    funk_oracle, hilbert_oracle, psi_at, psi_derivatives, verify_theorems, weighted_ricci, NValue,
    Tolerances, VerificationReport, WeightedRicciReport,
};
