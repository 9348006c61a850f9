use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{dot, norm};
use crate::lp;
use crate::prelude::*;

/// Absolute tolerance for vertex and facet deduplication, scaled by the
/// circumradius once bodies leave the unit range.
pub(crate) const DEDUP_TOL: f64 = 1e-9;

/// `{x : ⟨normal, x⟩ ≤ offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `normal` (and rescales `offset` accordingly).
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let len = norm(&normal);
        if !(len > 0.0) || !len.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidBody("halfspace normal must be finite and nonzero".into()));
        }
        Ok(Self { normal: normal.iter().map(|x| x / len).collect(), offset: offset / len })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `⟨normal, x⟩ − offset`; nonpositive inside.
    pub fn excess(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// One facet of a polytope in dimension 2 or 3. In the plane `polygon` is
/// the edge's two endpoints and `area` its length.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub area: f64,
    pub polygon: Vec<Vec<f64>>,
}

/// Exact vertex/facet structure of a full-dimensional polytope (n ∈ {2, 3}).
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeGeometry {
    /// In the plane, counter-clockwise.
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
    pub volume: f64,
    pub centroid: Vec<f64>,
}

impl PolytopeGeometry {
    pub fn from_points(dim: usize, points: &[Vec<f64>]) -> Result<Self> {
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidBody("non-finite coordinate".into()));
            }
        }
        match dim {
            2 => {
                let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
                let h = hull::convex_hull_2d(&pts);
                if h.len() < 3 {
                    return Err(Error::Degenerate("points do not span the plane".into()));
                }
                let poly: Vec<[f64; 2]> = h.iter().map(|&i| pts[i]).collect();
                let area = hull::polygon_area(&poly);
                if !(area > 0.0) {
                    return Err(Error::Degenerate("polygon has zero area".into()));
                }
                let c = hull::polygon_centroid(&poly);
                let k = poly.len();
                let mut facets = Vec::with_capacity(k);
                for i in 0..k {
                    let a = poly[i];
                    let b = poly[(i + 1) % k];
                    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                    let len = (dx * dx + dy * dy).sqrt();
                    let normal = vec![dy / len, -dx / len];
                    let offset = normal[0] * a[0] + normal[1] * a[1];
                    facets.push(Facet { normal, offset, area: len, polygon: vec![a.to_vec(), b.to_vec()] });
                }
                Ok(Self { vertices: poly.iter().map(|p| p.to_vec()).collect(), facets, volume: area, centroid: c.to_vec() })
            }
            3 => {
                let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
                let h = hull::convex_hull_3d(&pts)?;
                let scale = pts.iter().flat_map(|p| p.iter().map(|x| x.abs())).fold(1.0, f64::max);
                let facets = h
                    .facets(DEDUP_TOL * scale)
                    .into_iter()
                    .map(|f| Facet {
                        normal: f.normal.to_vec(),
                        offset: f.offset,
                        area: f.area,
                        polygon: f.polygon.iter().map(|p| p.to_vec()).collect(),
                    })
                    .collect();
                let vertices = h.vertex_indices().iter().map(|&i| pts[i].to_vec()).collect();
                Ok(Self { vertices, facets, volume: h.volume(), centroid: h.centroid().to_vec() })
            }
            _ => Err(Error::DimensionUnsupported { op: "exact polytope geometry", dim }),
        }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        let normals: Vec<Vec<f64>> = halfspaces.iter().map(|h| h.normal.clone()).collect();
        let offsets: Vec<f64> = halfspaces.iter().map(|h| h.offset).collect();
        let (center, radius) = lp::chebyshev_center(&normals, &offsets).ok_or(Error::UnboundedBody)?;
        if !(radius > 1e-12) {
            return Err(Error::Degenerate(format!("Chebyshev radius {radius:e}")));
        }
        let verts: Vec<Vec<f64>> = match dim {
            2 => {
                let n: Vec<[f64; 2]> = normals.iter().map(|a| [a[0], a[1]]).collect();
                hull::halfplane_intersection(&n, &offsets, [center[0], center[1]])?.iter().map(|p| p.to_vec()).collect()
            }
            3 => {
                let n: Vec<[f64; 3]> = normals.iter().map(|a| [a[0], a[1], a[2]]).collect();
                hull::halfspace_intersection_3d(&n, &offsets, [center[0], center[1], center[2]])?
                    .iter()
                    .map(|p| p.to_vec())
                    .collect()
            }
            _ => return Err(Error::DimensionUnsupported { op: "exact polytope geometry", dim }),
        };
        Self::from_points(dim, &verts)
    }

    pub fn surface_area(&self) -> f64 {
        crate::quadrature::compensated_sum(self.facets.iter().map(|f| f.area))
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// Largest facet excess `⟨a, x⟩ − b`; nonpositive inside.
    pub fn max_excess(&self, x: &[f64]) -> f64 {
        self.facets.iter().map(|f| dot(&f.normal, x) - f.offset).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        self.facets.iter().map(|f| Halfspace { normal: f.normal.clone(), offset: f.offset }).collect()
    }
}

/// Intersection of finitely many halfspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    geometry: Option<PolytopeGeometry>,
}

impl HPolytope {
    /// Validates boundedness and nonempty interior. In dimensions 2 and 3
    /// the full vertex/facet structure is computed up front.
    pub fn new(halfspaces: Vec<Halfspace>) -> Result<Self> {
        let dim = halfspaces.first().ok_or_else(|| Error::InvalidBody("no halfspaces".into()))?.dim();
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        let geometry = if (2..=3).contains(&dim) {
            Some(PolytopeGeometry::from_halfspaces(dim, &halfspaces)?)
        } else {
            let normals: Vec<Vec<f64>> = halfspaces.iter().map(|h| h.normal.clone()).collect();
            let offsets: Vec<f64> = halfspaces.iter().map(|h| h.offset).collect();
            let (_, r) = lp::chebyshev_center(&normals, &offsets).ok_or(Error::UnboundedBody)?;
            if !(r > 1e-12) {
                return Err(Error::Degenerate(format!("Chebyshev radius {r:e}")));
            }
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut u = vec![0.0; dim];
                    u[i] = s;
                    lp::maximize_linear(&normals, &offsets, &u).ok_or(Error::UnboundedBody)?;
                }
            }
            None
        };
        Ok(Self { dim, halfspaces, geometry })
    }

    /// `[-r, r]^n`.
    pub fn cube(dim: usize, r: f64) -> Result<Self> {
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut a = vec![0.0; dim];
                a[i] = s;
                hs.push(Halfspace { normal: a, offset: r });
            }
        }
        Self::new(hs)
    }

    /// Axis-parallel box `[lo, hi]`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut a = vec![0.0; dim];
            a[i] = 1.0;
            hs.push(Halfspace { normal: a.clone(), offset: hi[i] });
            a[i] = -1.0;
            hs.push(Halfspace { normal: a, offset: -lo[i] });
        }
        Self::new(hs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn geometry(&self) -> Option<&PolytopeGeometry> {
        self.geometry.as_ref()
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if let Some(g) = &self.geometry {
            return Ok(g.support(u));
        }
        let normals: Vec<Vec<f64>> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        let offsets: Vec<f64> = self.halfspaces.iter().map(|h| h.offset).collect();
        lp::maximize_linear(&normals, &offsets, u).map(|(v, _)| v).ok_or(Error::UnboundedBody)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.excess(x) <= tol)
    }

    pub fn to_v(&self) -> Result<VPolytope> {
        let g = self.geometry.as_ref().ok_or(Error::DimensionUnsupported { op: "vertex enumeration", dim: self.dim })?;
        VPolytope::new(g.vertices.clone())
    }
}

/// Convex hull of finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    geometry: Option<PolytopeGeometry>,
}

impl VPolytope {
    /// In dimensions 2 and 3 interior points are discarded and `vertices()`
    /// returns the hull vertices only.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().ok_or_else(|| Error::InvalidBody("no vertices".into()))?.len();
        if (2..=3).contains(&dim) {
            let g = PolytopeGeometry::from_points(dim, &points)?;
            return Ok(Self { dim, vertices: g.vertices.clone(), geometry: Some(g) });
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        // Full dimension: the differences to the first point have rank n.
        let rows = points.len().saturating_sub(1);
        let m = nalgebra::DMatrix::from_fn(rows, dim, |i, j| points[i + 1][j] - points[0][j]);
        let rank = if rows >= dim { m.rank(1e-10) } else { 0 };
        if rank < dim {
            return Err(Error::Degenerate("vertices do not span the space".into()));
        }
        Ok(Self { dim, vertices: points, geometry: None })
    }

    /// `conv{0, e_1, …, e_n}`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut pts = vec![vec![0.0; dim]];
        for i in 0..dim {
            pts.push(crate::linalg::unit_vector(dim, i));
        }
        Self::new(pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn geometry(&self) -> Option<&PolytopeGeometry> {
        self.geometry.as_ref()
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn translate(&self, t: &[f64]) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| crate::linalg::add(v, t)).collect())
    }

    pub fn to_h(&self) -> Result<HPolytope> {
        let g = self.geometry.as_ref().ok_or(Error::DimensionUnsupported { op: "facet enumeration", dim: self.dim })?;
        HPolytope::new(g.halfspaces())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_geometry() {
        let c = HPolytope::cube(3, 1.0).unwrap();
        let g = c.geometry().unwrap();
        assert_eq!(g.vertices.len(), 8);
        assert_eq!(g.facets.len(), 6);
        assert!((g.volume - 8.0).abs() < 1e-12);
        assert!((g.surface_area() - 24.0).abs() < 1e-12);
        assert!(norm(&g.centroid) < 1e-12);
    }

    #[test]
    fn unbounded_and_empty() {
        let hs = vec![Halfspace::new(vec![1.0, 0.0], 1.0).unwrap(), Halfspace::new(vec![0.0, 1.0], 1.0).unwrap()];
        assert!(HPolytope::new(hs).is_err());
        let hs = vec![
            Halfspace::new(vec![1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![-1.0, 0.0], -1.0).unwrap(),
            Halfspace::new(vec![0.0, 1.0], 1.0).unwrap(),
            Halfspace::new(vec![0.0, -1.0], 1.0).unwrap(),
        ];
        assert!(HPolytope::new(hs).is_err());
    }

    #[test]
    fn triangle_facets() {
        let t = VPolytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2]]).unwrap();
        assert_eq!(t.vertices().len(), 3);
        let mut areas: Vec<f64> = t.geometry().unwrap().facets.iter().map(|f| f.area).collect();
        areas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((areas[0] - 1.0).abs() < 1e-15 && (areas[1] - 1.0).abs() < 1e-15);
        assert!((areas[2] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn high_dimensional_cube_support() {
        let c = HPolytope::cube(4, 1.0).unwrap();
        let u = vec![0.5; 4];
        assert!((c.support(&u).unwrap() - 2.0).abs() < 1e-12);
        let s = VPolytope::standard_simplex(4).unwrap();
        assert!((s.support(&[0.0, 0.0, 0.0, -1.0]) - 0.0).abs() < 1e-15);
        assert!(VPolytope::new(vec![vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]]).is_err());
    }
}
