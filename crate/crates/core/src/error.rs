use thiserror::Error;

/// Errors raised by geometric and numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("E_BAD_SPEC: {0}")]
    BadSpec(String),
    #[error("E_OUTSIDE: point is not in the interior of the domain")]
    Outside,
    #[error("E_ZERO_VECTOR: direction vector is numerically zero")]
    ZeroVector,
    #[error("E_NO_CONVERGE: {0}")]
    NoConverge(String),
    #[error("E_TANGENT_RAY: chord meets the boundary tangentially")]
    TangentRay,
    #[error("E_NEAR_BOUNDARY: point is within {distance:e} of the boundary")]
    NearBoundary { distance: f64 },
    #[error("E_NOT_SPD: matrix is not positive definite")]
    NotSpd,
    #[error("E_TOLERANCE: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    Tolerance { estimate: f64, tolerance: f64 },
    #[error("E_BAD_N: {0}")]
    BadN(String),
    #[error("E_BAD_K: {0}")]
    BadK(String),
    #[error("E_UNIT_SPEED: chord parameters violate the unit-speed constraint (residual {0:e})")]
    UnitSpeed(f64),
}

impl GeomError {
    /// Stable machine-readable code, e.g. `E_OUTSIDE`.
    pub fn code(&self) -> &'static str {
        match self {
            GeomError::BadSpec(_) => "E_BAD_SPEC",
            GeomError::Outside => "E_OUTSIDE",
            GeomError::ZeroVector => "E_ZERO_VECTOR",
            GeomError::NoConverge(_) => "E_NO_CONVERGE",
            GeomError::TangentRay => "E_TANGENT_RAY",
            GeomError::NearBoundary { .. } => "E_NEAR_BOUNDARY",
            GeomError::NotSpd => "E_NOT_SPD",
            GeomError::Tolerance { .. } => "E_TOLERANCE",
            GeomError::BadN(_) => "E_BAD_N",
            GeomError::BadK(_) => "E_BAD_K",
            GeomError::UnitSpeed(_) => "E_UNIT_SPEED",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeomError>;
