//! Affine surface area of convex bodies and the machinery around it.
//!
//! The crate covers four layers:
//!
//! * [`body`] and [`functionals`]: polytopes (H- and V-representation), smooth
//!   implicit bodies, clipped bodies and star bodies, together with the
//!   support function, polar body, radial function, volume, Hausdorff and
//!   symmetric-difference distances, Minkowski sums, the first mixed volume,
//!   surface area measures, projection bodies and Steiner symmetrization.
//! * [`curvature`]: subdifferentials and generalized second derivatives of
//!   convex functions, and Gauss–Kronecker curvature from graphs, implicit
//!   equations and Dupin slices.
//! * [`asa`]: affine surface area by boundary quadrature, the closed form for
//!   `B_p^n` balls, and the classical identities and inequalities.
//! * [`floating`] and [`random`]: convex floating bodies, the rolling function,
//!   and random polytope approximation.
//!
//! Exact polytope geometry (hulls, facets, volumes) is provided in dimensions
//! two and three. Everything else works from support functions, membership
//! oracles and Monte Carlo sampling.
//!
//! The crate is `no_std` compatible (with `alloc`) when built without the
//! default `std` feature. The `std` feature only adds thread parallelism for
//! Monte Carlo replicates; results are identical either way.
#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod par;
mod prelude;

pub mod asa;
pub mod body;
pub mod curvature;
pub mod error;
pub mod floating;
pub mod functionals;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod quadrature;
pub mod random;
pub mod special;
pub mod sphere;

pub use body::{
    AffineMap, BoundaryPoint, ClippedBody, ConvexBody, Facet, HPolytope, Halfspace, SmoothBody,
    SmoothShape, StarBody, VPolytope,
};
pub use error::{Error, Result};
pub use sphere::SphereGrid;

/// A value together with its standard error (Monte Carlo) or resolution
/// (deterministic quadrature).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateWithError {
    pub value: f64,
    pub error: f64,
    pub kind: ErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Standard error of a Monte Carlo mean.
    StdErr,
    /// Discretization error estimate of a deterministic rule.
    Resolution,
    /// Exact up to floating point.
    Exact,
}

impl EstimateWithError {
    pub fn exact(value: f64) -> Self {
        Self { value, error: 0.0, kind: ErrorKind::Exact }
    }

    pub fn stderr(value: f64, error: f64) -> Self {
        Self { value, error, kind: ErrorKind::StdErr }
    }

    pub fn resolution(value: f64, error: f64) -> Self {
        Self { value, error, kind: ErrorKind::Resolution }
    }
}
