//! Body representations and the single dispatch point [`ConvexBody`].

mod clipped;
mod polytope;
mod smooth;
mod star;

pub use clipped::{BoundaryPiece, ClippedBody};
pub use polytope::{Facet, HPolytope, Halfspace, PolytopeGeometry, VPolytope};
pub use smooth::{AffineMap, SmoothBody, SmoothEval, SmoothShape};
pub use star::StarBody;

pub(crate) use polytope::DEDUP_TOL;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::prelude::*;

/// A boundary location with its outward unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    pub curvature: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    H(HPolytope),
    V(VPolytope),
    Smooth(SmoothBody),
    Clipped(ClippedBody),
    Star(StarBody),
}

impl From<HPolytope> for ConvexBody {
    fn from(p: HPolytope) -> Self {
        ConvexBody::H(p)
    }
}

impl From<VPolytope> for ConvexBody {
    fn from(p: VPolytope) -> Self {
        ConvexBody::V(p)
    }
}

impl From<SmoothBody> for ConvexBody {
    fn from(b: SmoothBody) -> Self {
        ConvexBody::Smooth(b)
    }
}

impl From<ClippedBody> for ConvexBody {
    fn from(b: ClippedBody) -> Self {
        ConvexBody::Clipped(b)
    }
}

impl From<StarBody> for ConvexBody {
    fn from(b: StarBody) -> Self {
        ConvexBody::Star(b)
    }
}

impl ConvexBody {
    /// Unit Euclidean ball.
    pub fn ball(dim: usize) -> Result<Self> {
        Ok(SmoothBody::ball(dim, 1.0)?.into())
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        Ok(SmoothBody::ellipsoid(axes)?.into())
    }

    /// Unit ball of `ℓ_p^n`.
    pub fn bpn(p: f64, dim: usize) -> Result<Self> {
        Ok(SmoothBody::lp_ball(p, dim)?.into())
    }

    /// `[-1, 1]^n`.
    pub fn cube(dim: usize) -> Result<Self> {
        Ok(HPolytope::cube(dim, 1.0)?.into())
    }

    pub fn polygon(vertices: Vec<Vec<f64>>) -> Result<Self> {
        Ok(VPolytope::new(vertices)?.into())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::H(p) => p.dim(),
            ConvexBody::V(p) => p.dim(),
            ConvexBody::Smooth(b) => b.dim(),
            ConvexBody::Clipped(b) => b.dim(),
            ConvexBody::Star(b) => b.dim(),
        }
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self, ConvexBody::H(_) | ConvexBody::V(_))
    }

    /// Exact facet structure for polytopes in dimensions 2 and 3.
    pub fn polytope_geometry(&self) -> Option<&PolytopeGeometry> {
        match self {
            ConvexBody::H(p) => p.geometry(),
            ConvexBody::V(p) => p.geometry(),
            _ => None,
        }
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(())
    }

    /// `h_K(u) = max_{x ∈ K} ⟨x, u⟩`. For star bodies this is the support
    /// function of the hull of the sampled boundary.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_dim(u)?;
        let h = match self {
            ConvexBody::H(p) => p.support(u)?,
            ConvexBody::V(p) => p.support(u),
            ConvexBody::Smooth(b) => b.support(u),
            ConvexBody::Clipped(b) => b.support(u),
            ConvexBody::Star(b) => b.support(u),
        };
        if !h.is_finite() {
            return Err(Error::UnboundedBody);
        }
        Ok(h)
    }

    /// Scale used for relative tolerances.
    pub fn scale(&self) -> f64 {
        let n = self.dim();
        let mut s: f64 = 0.0;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut e = vec![0.0; n];
                e[i] = sign;
                s = s.max(self.support(&e).map(f64::abs).unwrap_or(0.0));
            }
        }
        s.max(1e-300)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            ConvexBody::H(p) => p.contains(x, 0.0),
            ConvexBody::V(p) => match p.geometry() {
                Some(g) => g.max_excess(x) <= 0.0,
                None => vpolytope_contains_lp(p, x),
            },
            ConvexBody::Smooth(b) => b.contains(x),
            ConvexBody::Clipped(b) => b.contains(x),
            ConvexBody::Star(b) => b.contains(x),
        }
    }

    /// A point in the interior: the centroid for polytopes, the center for
    /// smooth bodies, the origin for star bodies.
    pub fn interior_point(&self) -> Vec<f64> {
        match self {
            ConvexBody::H(p) => match p.geometry() {
                Some(g) => g.centroid.clone(),
                None => {
                    let normals: Vec<Vec<f64>> = p.halfspaces().iter().map(|h| h.normal.clone()).collect();
                    let offsets: Vec<f64> = p.halfspaces().iter().map(|h| h.offset).collect();
                    crate::lp::chebyshev_center(&normals, &offsets).map(|(c, _)| c).unwrap_or_else(|| vec![0.0; p.dim()])
                }
            },
            ConvexBody::V(p) => match p.geometry() {
                Some(g) => g.centroid.clone(),
                None => {
                    let k = p.vertices().len() as f64;
                    let mut c = vec![0.0; p.dim()];
                    for v in p.vertices() {
                        for (a, b) in c.iter_mut().zip(v) {
                            *a += b / k;
                        }
                    }
                    c
                }
            },
            ConvexBody::Smooth(b) => b.center(),
            ConvexBody::Clipped(b) => b.interior_point().to_vec(),
            ConvexBody::Star(b) => vec![0.0; b.dim()],
        }
    }

    /// Distance from interior point `p` to the boundary along unit `xi`.
    pub fn ray_exit(&self, p: &[f64], xi: &[f64]) -> Result<f64> {
        self.check_dim(xi)?;
        match self {
            ConvexBody::H(_) | ConvexBody::V(_) => {
                let facets: Vec<(Vec<f64>, f64)> = match self.polytope_geometry() {
                    Some(g) => g.facets.iter().map(|f| (f.normal.clone(), f.offset)).collect(),
                    None => match self {
                        ConvexBody::H(h) => h.halfspaces().iter().map(|h| (h.normal.clone(), h.offset)).collect(),
                        _ => return Err(Error::DimensionUnsupported { op: "radial function of a V-polytope", dim: self.dim() }),
                    },
                };
                let mut t = f64::INFINITY;
                for (a, b) in &facets {
                    let s = b - dot(a, p);
                    if s < 0.0 {
                        return Err(Error::OriginNotInterior);
                    }
                    let d = dot(a, xi);
                    if d > 0.0 {
                        t = t.min(s / d);
                    }
                }
                if !t.is_finite() {
                    return Err(Error::UnboundedBody);
                }
                Ok(t)
            }
            ConvexBody::Smooth(b) => {
                if !b.contains(p) {
                    return Err(Error::OriginNotInterior);
                }
                Ok(b.ray_exit(p, xi))
            }
            ConvexBody::Clipped(b) => {
                if !b.contains(p) {
                    return Err(Error::OriginNotInterior);
                }
                Ok(b.ray_exit(p, xi).0)
            }
            ConvexBody::Star(b) => {
                if norm(p) != 0.0 {
                    return Err(Error::UnsupportedRepresentation("star bodies are radial about the origin only"));
                }
                Ok(b.radial(xi))
            }
        }
    }

    /// `ρ_K(ξ) = max{λ ≥ 0 : λξ ∈ K}`; the origin must be interior.
    pub fn radial(&self, xi: &[f64]) -> Result<f64> {
        let origin = vec![0.0; self.dim()];
        if !self.is_star_body() && !self.strictly_contains(&origin) {
            return Err(Error::OriginNotInterior);
        }
        let r = self.ray_exit(&origin, xi)?;
        if !(r > 0.0) {
            return Err(Error::OriginNotInterior);
        }
        Ok(r)
    }

    fn is_star_body(&self) -> bool {
        matches!(self, ConvexBody::Star(_))
    }

    /// Membership with a small inward margin relative to the body's scale.
    pub fn strictly_contains(&self, x: &[f64]) -> bool {
        let tol = 1e-12 * self.scale();
        match self {
            ConvexBody::H(p) => match p.geometry() {
                Some(g) => g.max_excess(x) < -tol,
                None => p.halfspaces().iter().all(|h| h.excess(x) < -tol),
            },
            ConvexBody::V(p) => match p.geometry() {
                Some(g) => g.max_excess(x) < -tol,
                None => vpolytope_contains_lp(p, x),
            },
            ConvexBody::Smooth(b) => b.value(x) < 0.0,
            ConvexBody::Clipped(b) => b.base().value(x) < 0.0 && b.cuts().iter().all(|h| h.excess(x) < -tol),
            ConvexBody::Star(b) => {
                let r = norm(x);
                r == 0.0 || r < b.radial(&x.iter().map(|v| v / r).collect::<Vec<_>>())
            }
        }
    }

    /// Axis-parallel bounding box from support values.
    pub fn bounding_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            hi[i] = match self {
                // The base body's box is a cheap, valid outer box.
                ConvexBody::Clipped(b) if n > 2 => b.base().support(&e),
                _ => self.support(&e)?,
            };
            e[i] = -1.0;
            lo[i] = -match self {
                ConvexBody::Clipped(b) if n > 2 => b.base().support(&e),
                _ => self.support(&e)?,
            };
        }
        Ok((lo, hi))
    }

    /// Exact or deterministic-quadrature volume. Polytopes need `n ≤ 3`.
    pub fn volume(&self) -> Result<f64> {
        match self {
            ConvexBody::H(_) | ConvexBody::V(_) => self
                .polytope_geometry()
                .map(|g| g.volume)
                .ok_or(Error::DimensionUnsupported { op: "exact polytope volume", dim: self.dim() }),
            ConvexBody::Smooth(b) => Ok(b.volume()),
            ConvexBody::Clipped(b) => b.volume(),
            ConvexBody::Star(b) => Ok(b.volume()),
        }
    }

    pub fn centroid(&self) -> Result<Vec<f64>> {
        match self {
            ConvexBody::H(_) | ConvexBody::V(_) => self
                .polytope_geometry()
                .map(|g| g.centroid.clone())
                .ok_or(Error::DimensionUnsupported { op: "exact polytope centroid", dim: self.dim() }),
            ConvexBody::Smooth(b) => Ok(b.center()),
            ConvexBody::Clipped(b) => b.centroid(),
            ConvexBody::Star(b) => Ok(b.centroid()),
        }
    }

    /// Attach the outward normal to a boundary point. Fails off the
    /// boundary (tolerance `1e-9` relative to the body's scale) and where
    /// the normal is not unique.
    pub fn boundary_point(&self, x: &[f64]) -> Result<BoundaryPoint> {
        self.check_dim(x)?;
        let tol = 1e-9 * self.scale().max(1.0);
        match self {
            ConvexBody::H(_) | ConvexBody::V(_) => {
                let g = self
                    .polytope_geometry()
                    .ok_or(Error::DimensionUnsupported { op: "polytope boundary point", dim: self.dim() })?;
                let ex = g.max_excess(x);
                if ex.abs() > tol {
                    return Err(Error::NotOnBoundary(ex));
                }
                let active: Vec<&Facet> = g.facets.iter().filter(|f| (dot(&f.normal, x) - f.offset).abs() <= tol).collect();
                if active.len() != 1 {
                    return Err(Error::NoUniqueNormal);
                }
                Ok(BoundaryPoint { point: x.to_vec(), normal: active[0].normal.clone(), curvature: Some(0.0) })
            }
            ConvexBody::Smooth(b) => {
                let r = b.boundary_residual(x);
                if r > tol {
                    return Err(Error::NotOnBoundary(r));
                }
                let normal = b.normal(x)?;
                Ok(BoundaryPoint { point: x.to_vec(), normal, curvature: b.curvature(x).ok() })
            }
            ConvexBody::Clipped(b) => {
                let r = b.base().boundary_residual(x);
                let cut_ex: Vec<f64> = b.cuts().iter().map(|h| h.excess(x)).collect();
                let on_smooth = r <= tol && cut_ex.iter().all(|&e| e <= tol);
                let on_cuts: Vec<usize> = (0..cut_ex.len()).filter(|&j| cut_ex[j].abs() <= tol).collect();
                let inside = b.base().value(x) <= 0.0 || r <= tol;
                if !inside || cut_ex.iter().any(|&e| e > tol) || (!on_smooth && on_cuts.is_empty()) {
                    return Err(Error::NotOnBoundary(r.min(cut_ex.iter().fold(f64::INFINITY, |m, e| m.min(e.abs())))));
                }
                match (on_smooth, on_cuts.len()) {
                    (true, 0) => Ok(BoundaryPoint {
                        point: x.to_vec(),
                        normal: b.base().normal(x)?,
                        curvature: b.base().curvature(x).ok(),
                    }),
                    (false, 1) => Ok(BoundaryPoint {
                        point: x.to_vec(),
                        normal: b.cuts()[on_cuts[0]].normal.clone(),
                        curvature: Some(0.0),
                    }),
                    _ => Err(Error::NoUniqueNormal),
                }
            }
            ConvexBody::Star(_) => Err(Error::UnsupportedRepresentation("star bodies carry no normals")),
        }
    }

    /// Image under an affine map.
    pub fn affine_image(&self, t: &AffineMap) -> Result<ConvexBody> {
        if t.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: t.dim() });
        }
        let map_halfspace = |h: &Halfspace| -> Result<Halfspace> {
            // ⟨a, T⁻¹ y⟩ ≤ b  ⇔  ⟨A⁻ᵀ a, y⟩ ≤ b + ⟨A⁻ᵀ a, t⟩
            let a = t.inverse_transpose(&h.normal);
            Halfspace::new(a.clone(), h.offset + dot(&a, t.translation()))
        };
        match self {
            ConvexBody::V(p) => Ok(VPolytope::new(p.vertices().iter().map(|v| t.apply(v)).collect())?.into()),
            ConvexBody::H(p) => {
                let hs = p.halfspaces().iter().map(map_halfspace).collect::<Result<Vec<_>>>()?;
                Ok(HPolytope::new(hs)?.into())
            }
            ConvexBody::Smooth(b) => Ok(b.transformed(t)?.into()),
            ConvexBody::Clipped(b) => {
                let hs = b.cuts().iter().map(map_halfspace).collect::<Result<Vec<_>>>()?;
                Ok(ClippedBody::new(b.base().transformed(t)?, hs)?.into())
            }
            ConvexBody::Star(_) => Err(Error::UnsupportedRepresentation("affine image of a star body")),
        }
    }

    /// `vol_{n-1}(∂K)`: exact for polytopes (n ≤ 3) and by boundary
    /// quadrature otherwise.
    pub fn surface_area(&self) -> Result<f64> {
        if self.is_polytope() {
            return self
                .polytope_geometry()
                .map(|g| g.surface_area())
                .ok_or(Error::DimensionUnsupported { op: "surface area", dim: self.dim() });
        }
        crate::functionals::boundary_area(self)
    }
}

/// Feasibility of `Σ λ_i v_i = x, Σ λ_i = 1, λ ≥ 0`.
fn vpolytope_contains_lp(p: &VPolytope, x: &[f64]) -> bool {
    let n = p.dim();
    let m = p.vertices().len();
    let mut rows: Vec<Vec<f64>> = (0..n).map(|k| p.vertices().iter().map(|v| v[k]).collect()).collect();
    rows.push(vec![1.0; m]);
    let mut f = x.to_vec();
    f.push(1.0);
    matches!(crate::lp::solve_standard_form(&vec![0.0; m], &rows, &f), crate::lp::LpOutcome::Optimal { .. })
}
