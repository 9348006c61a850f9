use crate::prelude::*;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{op} is not supported in dimension {dim}")]
    DimensionUnsupported { op: &'static str, dim: usize },
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("body is unbounded")]
    UnboundedBody,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("{0} is not supported for this representation")]
    UnsupportedRepresentation(&'static str),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("function is not convex: {0}")]
    NonConvex(String),
    #[error("matrix is not positive semidefinite (determinant {0})")]
    NotPsd(f64),
    #[error("point is not on the boundary (residual {0:e})")]
    NotOnBoundary(f64),
    #[error("gradient vanishes at the point")]
    ZeroGradient,
    #[error("point has a zero coordinate")]
    CoordinateZero,
    #[error("boundary point has no unique outer normal")]
    NoUniqueNormal,
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("floating body is empty (Chebyshev radius {0:e})")]
    EmptyFloatingBody(f64),
    #[error("intersection is empty")]
    EmptyIntersection,
    #[error("body does not contain the unit ball")]
    ContainmentViolation,
    #[error("affine map is singular")]
    SingularMap,
    #[error("centroid is off the origin by {0:e}")]
    CentroidOffOrigin(f64),
    #[error("union of the two bodies is not convex")]
    UnionNotConvex,
    #[error("rejection acceptance rate {0:e} is below 1e-3")]
    LowAcceptance(f64),
    #[error("density is not normalized (integral {0})")]
    UnnormalizedDensity(f64),
    #[error("affine surface area vanishes")]
    ZeroAffineSurfaceArea,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("root finding failed: {0}")]
    NoConvergence(&'static str),
}
