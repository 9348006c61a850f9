//! Elementary functionals of convex bodies.

use crate::body::{ConvexBody, HPolytope, Halfspace, SmoothBody, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::prelude::*;
use crate::quadrature::CompensatedSum;
use crate::sphere::SphereGrid;
use crate::EstimateWithError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Points drawn per Monte Carlo work unit. Each unit owns its own
/// counter-indexed random stream, so results do not depend on scheduling.
pub(crate) const MC_CHUNK: usize = 1 << 14;

fn check_unit(u: &[f64]) -> Result<()> {
    if (norm(u) - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfRange { what: "|u|", value: norm(u) });
    }
    Ok(())
}

/// `h_K(u)` for a unit vector `u`.
pub fn support(k: &ConvexBody, u: &[f64]) -> Result<f64> {
    check_unit(u)?;
    k.support(u)
}

/// `ρ_L(ξ)` for a unit vector `ξ`.
pub fn radial(l: &ConvexBody, xi: &[f64]) -> Result<f64> {
    check_unit(xi)?;
    l.radial(xi)
}

/// Polar body of a polytope containing the origin in its interior.
/// Vertices become facets and facets become vertices, so an H-polytope maps
/// to a V-polytope and vice versa.
pub fn polar_polytope(p: &ConvexBody) -> Result<ConvexBody> {
    let origin = vec![0.0; p.dim()];
    match p {
        ConvexBody::V(v) => {
            if !p.strictly_contains(&origin) {
                return Err(Error::OriginNotInterior);
            }
            let hs = v
                .vertices()
                .iter()
                .map(|x| Halfspace::new(x.clone(), 1.0))
                .collect::<Result<Vec<_>>>()?;
            Ok(HPolytope::new(hs)?.into())
        }
        ConvexBody::H(h) => {
            if !h.halfspaces().iter().all(|hs| hs.offset > 0.0) || !p.strictly_contains(&origin) {
                return Err(Error::OriginNotInterior);
            }
            // Irredundant facets when available, otherwise all halfspaces.
            let hs = match h.geometry() {
                Some(g) => g.halfspaces(),
                None => h.halfspaces().to_vec(),
            };
            let verts = hs.iter().map(|s| s.normal.iter().map(|a| a / s.offset).collect()).collect();
            Ok(VPolytope::new(verts)?.into())
        }
        _ => Err(Error::UnsupportedRepresentation("polar body of a non-polytope")),
    }
}

/// Volume, centroid and the volume's standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments {
    pub volume: f64,
    pub centroid: Vec<f64>,
    pub stderr: f64,
    /// Fraction of box samples accepted (1 for exact results).
    pub acceptance: f64,
}

/// Exact for polytopes in dimensions 2 and 3, Monte Carlo otherwise.
pub fn moments(k: &ConvexBody, samples: usize, seed: u64) -> Result<Moments> {
    if let Some(g) = k.polytope_geometry() {
        return Ok(Moments { volume: g.volume, centroid: g.centroid.clone(), stderr: 0.0, acceptance: 1.0 });
    }
    monte_carlo_moments(k, samples, seed)
}

/// Rejection sampling from the support-function bounding box.
pub fn monte_carlo_moments(k: &ConvexBody, samples: usize, seed: u64) -> Result<Moments> {
    let n = k.dim();
    let (lo, hi) = k.bounding_box()?;
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let chunks = samples.div_ceil(MC_CHUNK).max(1);
    let parts = crate::par::map_indexed(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = if c + 1 == chunks { samples - c * MC_CHUNK } else { MC_CHUNK };
        let mut hits = 0usize;
        let mut sum = vec![0.0; n];
        let mut x = vec![0.0; n];
        for _ in 0..count {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
            }
            if k.contains(&x) {
                hits += 1;
                for i in 0..n {
                    sum[i] += x[i];
                }
            }
        }
        (hits, sum)
    });
    let hits: usize = parts.iter().map(|p| p.0).sum();
    if hits == 0 {
        return Err(Error::LowAcceptance(0.0));
    }
    let mut centroid = vec![0.0; n];
    for i in 0..n {
        let mut s = CompensatedSum::new();
        for p in &parts {
            s.add(p.1[i]);
        }
        centroid[i] = s.value() / hits as f64;
    }
    let frac = hits as f64 / samples as f64;
    Ok(Moments {
        volume: box_vol * frac,
        centroid,
        stderr: box_vol * (frac * (1.0 - frac) / samples as f64).sqrt(),
        acceptance: frac,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum DistanceMode {
    /// `max_u |h_C(u) − h_K(u)|` over the grid.
    Hausdorff(SphereGrid),
    /// Monte Carlo `vol(C Δ K)`.
    SymmetricDifference { samples: usize, seed: u64 },
}

pub fn body_distance(c: &ConvexBody, k: &ConvexBody, mode: &DistanceMode) -> Result<EstimateWithError> {
    if c.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: k.dim() });
    }
    match mode {
        DistanceMode::Hausdorff(grid) => Ok(EstimateWithError::resolution(hausdorff_distance(c, k, grid)?, 0.0)),
        DistanceMode::SymmetricDifference { samples, seed } => symmetric_difference(c, k, *samples, *seed),
    }
}

pub fn hausdorff_distance(c: &ConvexBody, k: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    let mut d: f64 = 0.0;
    for u in grid.directions() {
        d = d.max((c.support(u)? - k.support(u)?).abs());
    }
    Ok(d)
}

pub fn symmetric_difference(c: &ConvexBody, k: &ConvexBody, samples: usize, seed: u64) -> Result<EstimateWithError> {
    let n = c.dim();
    let (lo1, hi1) = c.bounding_box()?;
    let (lo2, hi2) = k.bounding_box()?;
    let lo: Vec<f64> = lo1.iter().zip(&lo2).map(|(a, b)| a.min(*b)).collect();
    let hi: Vec<f64> = hi1.iter().zip(&hi2).map(|(a, b)| a.max(*b)).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let chunks = samples.div_ceil(MC_CHUNK).max(1);
    let hits: usize = crate::par::map_indexed(chunks, |ch| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ch as u64);
        let count = if ch + 1 == chunks { samples - ch * MC_CHUNK } else { MC_CHUNK };
        let mut x = vec![0.0; n];
        let mut h = 0usize;
        for _ in 0..count {
            for i in 0..n {
                x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
            }
            if c.contains(&x) != k.contains(&x) {
                h += 1;
            }
        }
        h
    })
    .iter()
    .sum();
    let f = hits as f64 / samples as f64;
    Ok(EstimateWithError::stderr(box_vol * f, box_vol * (f * (1.0 - f) / samples as f64).sqrt()))
}

/// Convex hull of all pairwise sums. Inputs are point lists, so lower
/// dimensional summands (points, segments) are allowed.
pub fn minkowski_sum(p: &[Vec<f64>], q: &[Vec<f64>]) -> Result<VPolytope> {
    let n = p.first().map_or(0, |v| v.len());
    if let Some(v) = p.iter().chain(q).find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let mut pts = Vec::with_capacity(p.len() * q.len());
    for a in p {
        for b in q {
            pts.push(crate::linalg::add(a, b));
        }
    }
    VPolytope::new(pts)
}

/// One atom of a polytope's surface area measure.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceAtom {
    pub normal: Vec<f64>,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMeasureAtoms {
    pub atoms: Vec<SurfaceAtom>,
}

impl SurfaceMeasureAtoms {
    pub fn total(&self) -> f64 {
        crate::quadrature::compensated_sum(self.atoms.iter().map(|a| a.mass))
    }

    /// `Σ mass · normal`, zero for closed surfaces.
    pub fn first_moment(&self) -> Vec<f64> {
        let n = self.atoms.first().map_or(0, |a| a.normal.len());
        (0..n)
            .map(|k| crate::quadrature::compensated_sum(self.atoms.iter().map(|a| a.mass * a.normal[k])))
            .collect()
    }
}

/// Facet normals weighted by facet areas.
pub fn surface_measure(p: &ConvexBody) -> Result<SurfaceMeasureAtoms> {
    if !p.is_polytope() {
        return Err(Error::UnsupportedRepresentation("atomic surface measure needs a polytope"));
    }
    let g = p.polytope_geometry().ok_or(Error::DimensionUnsupported { op: "surface measure", dim: p.dim() })?;
    let scale = g.circumradius().max(1.0);
    let mut atoms = Vec::with_capacity(g.facets.len());
    for f in &g.facets {
        if f.area <= crate::body::DEDUP_TOL * scale.powi(p.dim() as i32 - 1) {
            return Err(Error::Degenerate(format!("facet of measure {:e}", f.area)));
        }
        atoms.push(SurfaceAtom { normal: f.normal.clone(), mass: f.area });
    }
    Ok(SurfaceMeasureAtoms { atoms })
}

/// A boundary point produced by radial parametrization, with its share of
/// surface measure.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryNode {
    pub point: Vec<f64>,
    pub normal: Vec<f64>,
    /// Surface measure attributed to this node.
    pub weight: f64,
    /// Whether the node lies on the smooth part of the boundary.
    pub smooth: bool,
}

/// Boundary nodes seen from the body's interior point along each grid
/// direction. The surface element is `ρ^{n−1} / ⟨ξ, N⟩ dσ(ξ)`.
pub fn boundary_nodes(k: &ConvexBody, grid: &SphereGrid) -> Result<Vec<BoundaryNode>> {
    if grid.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), found: grid.dim() });
    }
    let p = k.interior_point();
    let n = k.dim() as i32;
    let mut out = Vec::with_capacity(grid.len());
    for (xi, w) in grid.iter() {
        let (t, normal, smooth) = match k {
            ConvexBody::Smooth(b) => {
                let t = b.ray_exit(&p, xi);
                let x = crate::linalg::axpy(&p, t, xi);
                (t, b.normal(&x)?, true)
            }
            ConvexBody::Clipped(b) => {
                let (t, piece) = b.ray_exit(&p, xi);
                let x = crate::linalg::axpy(&p, t, xi);
                match piece {
                    crate::body::BoundaryPiece::Smooth => (t, b.base().normal(&x)?, true),
                    crate::body::BoundaryPiece::Cut(j) => (t, b.cuts()[j].normal.clone(), false),
                }
            }
            ConvexBody::H(_) | ConvexBody::V(_) => {
                let g = k.polytope_geometry().ok_or(Error::DimensionUnsupported { op: "boundary nodes", dim: k.dim() })?;
                let mut best = (f64::INFINITY, 0usize);
                for (j, f) in g.facets.iter().enumerate() {
                    let d = dot(&f.normal, xi);
                    if d > 0.0 {
                        let t = (f.offset - dot(&f.normal, &p)) / d;
                        if t < best.0 {
                            best = (t, j);
                        }
                    }
                }
                (best.0, g.facets[best.1].normal.clone(), false)
            }
            ConvexBody::Star(_) => return Err(Error::UnsupportedRepresentation("star bodies carry no normals")),
        };
        let x = crate::linalg::axpy(&p, t, xi);
        let c = dot(xi, &normal);
        out.push(BoundaryNode { point: x, weight: w * t.powi(n - 1) / c, normal, smooth });
    }
    Ok(out)
}

/// `vol_{n−1}(∂K)` by boundary quadrature on a refined default grid.
pub fn boundary_area(k: &ConvexBody) -> Result<f64> {
    let grid = match k.dim() {
        2 => SphereGrid::circle(1 << 14),
        3 => SphereGrid::gauss_product(128, 256),
        d => SphereGrid::default_for(d),
    };
    Ok(crate::quadrature::compensated_sum(boundary_nodes(k, &grid)?.iter().map(|b| b.weight)))
}

/// `V₁(K, C) = (1/n) ∫ h_C dσ_K`: atoms for polytopes, boundary quadrature
/// (planar: 8192 angles; space: a Gauss product rule) otherwise.
pub fn mixed_volume_v1(k: &ConvexBody, c: &ConvexBody) -> Result<f64> {
    let n = k.dim();
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    if k.is_polytope() {
        let s = surface_measure(k)?;
        let mut acc = CompensatedSum::new();
        for a in &s.atoms {
            acc.add(a.mass * c.support(&a.normal)?);
        }
        return Ok(acc.value() / n as f64);
    }
    if matches!(k, ConvexBody::Star(_)) {
        return Err(Error::UnsupportedRepresentation("mixed volume needs a convex body"));
    }
    let grid = match n {
        2 => SphereGrid::circle(8192),
        3 => SphereGrid::gauss_product(96, 192),
        d => SphereGrid::default_for(d),
    };
    let mut acc = CompensatedSum::new();
    for b in boundary_nodes(k, &grid)? {
        acc.add(b.weight * c.support(&b.normal)?);
    }
    Ok(acc.value() / n as f64)
}

/// Volume of the polytope `∩_u {⟨x, u⟩ ≤ h(u)}` over the grid directions,
/// an outer approximation of the body with support function `h`.
pub fn volume_from_support<H: Fn(&[f64]) -> Result<f64>>(grid: &SphereGrid, h: H) -> Result<f64> {
    Ok(polytope_from_support(grid, h)?.geometry().map(|g| g.volume).unwrap_or(f64::NAN))
}

pub fn polytope_from_support<H: Fn(&[f64]) -> Result<f64>>(grid: &SphereGrid, h: H) -> Result<HPolytope> {
    let hs = grid
        .directions()
        .iter()
        .map(|u| Ok(Halfspace { normal: u.clone(), offset: h(u)? }))
        .collect::<Result<Vec<_>>>()?;
    HPolytope::new(hs)
}

/// `(vol(K + εC) − vol(K)) / (nε)` at `ε` and `ε/2`, Richardson-combined.
/// Polytope pairs use exact Minkowski sums; other pairs use support-function
/// polytopes on a fine grid (the same grid for both volumes).
pub fn mixed_volume_v1_fd(k: &ConvexBody, c: &ConvexBody, eps: f64) -> Result<f64> {
    let n = k.dim();
    let exact_pair = match (k, c) {
        (ConvexBody::V(_) | ConvexBody::H(_), ConvexBody::V(_) | ConvexBody::H(_)) => n <= 3,
        _ => false,
    };
    let vol_sum = |e: f64| -> Result<f64> {
        if exact_pair {
            let kv = k.polytope_geometry().unwrap().vertices.clone();
            let cv: Vec<Vec<f64>> = c.polytope_geometry().unwrap().vertices.iter().map(|v| v.iter().map(|x| e * x).collect()).collect();
            Ok(minkowski_sum(&kv, &cv)?.geometry().unwrap().volume)
        } else {
            let grid = match n {
                2 => SphereGrid::circle(1 << 14),
                3 => SphereGrid::fibonacci(1 << 13),
                d => return Err(Error::DimensionUnsupported { op: "finite-difference mixed volume", dim: d }),
            };
            volume_from_support(&grid, |u| Ok(k.support(u)? + e * c.support(u)?))
        }
    };
    let v0 = vol_sum(0.0)?;
    let d1 = (vol_sum(eps)? - v0) / (n as f64 * eps);
    let d2 = (vol_sum(eps / 2.0)? - v0) / (n as f64 * eps / 2.0);
    Ok(2.0 * d2 - d1)
}

/// `vol_{n−1}` of the orthogonal projection of `K` onto `ξ^⊥`: the width in
/// the plane; in space the exact shadow polygon for polytopes and a
/// `samples`-direction support polygon (outer approximation) otherwise.
pub fn projection_body_support(k: &ConvexBody, xi: &[f64], samples: usize) -> Result<f64> {
    check_unit(xi)?;
    match k.dim() {
        2 => {
            let e = [-xi[1], xi[0]];
            Ok(k.support(&e)? + k.support(&[-e[0], -e[1]])?)
        }
        3 => {
            let basis = crate::linalg::orthonormal_complement(xi);
            if let Some(g) = k.polytope_geometry() {
                let pts: Vec<[f64; 2]> = g.vertices.iter().map(|v| [dot(v, &basis[0]), dot(v, &basis[1])]).collect();
                return Ok(crate::hull::hull_area_2d(&pts));
            }
            let m = samples.max(8);
            let mut normals = Vec::with_capacity(m);
            let mut offsets = Vec::with_capacity(m);
            for j in 0..m {
                let a = 2.0 * core::f64::consts::PI * j as f64 / m as f64;
                let (s, c) = a.sin_cos();
                let u: Vec<f64> = (0..3).map(|i| c * basis[0][i] + s * basis[1][i]).collect();
                normals.push([c, s]);
                offsets.push(k.support(&u)?);
            }
            let interior = {
                let p = k.interior_point();
                [dot(&p, &basis[0]), dot(&p, &basis[1])]
            };
            let poly = crate::hull::halfplane_intersection(&normals, &offsets, interior)?;
            Ok(crate::hull::polygon_area(&poly))
        }
        d => Err(Error::DimensionUnsupported { op: "projection body", dim: d }),
    }
}

/// Steiner symmetral of `K` in direction `u`: every chord parallel to `u` is
/// replaced by the chord of equal length centered on `u^⊥`.
///
/// Planar polygons are symmetrized exactly (the chord length is affine
/// between vertex projections); other planar bodies are first replaced by
/// the inscribed polygon through `resolution` radial boundary points. In
/// space, chords of the (inscribed) polytope are taken over a
/// `resolution`-point square grid on `u^⊥`. Planar results with more than
/// `resolution` vertices are resampled at `resolution` chord positions.
pub fn steiner_symmetrize(k: &ConvexBody, u: &[f64], resolution: usize) -> Result<VPolytope> {
    check_unit(u)?;
    let n = k.dim();
    let poly = match k.polytope_geometry() {
        Some(g) => g.clone(),
        None => {
            let grid = match n {
                2 => SphereGrid::circle(resolution.max(16)),
                3 => SphereGrid::fibonacci(resolution.max(64)),
                d => return Err(Error::DimensionUnsupported { op: "Steiner symmetrization", dim: d }),
            };
            let p = k.interior_point();
            let pts = grid
                .directions()
                .iter()
                .map(|xi| Ok(crate::linalg::axpy(&p, k.ray_exit(&p, xi)?, xi)))
                .collect::<Result<Vec<_>>>()?;
            crate::body::PolytopeGeometry::from_points(n, &pts)?
        }
    };
    let basis = crate::linalg::orthonormal_complement(u);
    // Chord of the polytope along u through the base point y (in u^⊥).
    let chord = |y: &[f64]| -> Option<f64> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for f in &poly.facets {
            let a = dot(&f.normal, u);
            let rest = f.offset - dot(&f.normal, y);
            if a.abs() < 1e-15 {
                if rest < -1e-12 {
                    return None;
                }
            } else if a > 0.0 {
                hi = hi.min(rest / a);
            } else {
                lo = lo.max(rest / a);
            }
        }
        (hi >= lo).then(|| hi - lo)
    };
    let lift = |coords: &[f64], s: f64| -> Vec<f64> {
        let mut x: Vec<f64> = u.iter().map(|v| v * s).collect();
        for (c, e) in coords.iter().zip(&basis) {
            for (xi, ei) in x.iter_mut().zip(e) {
                *xi += c * ei;
            }
        }
        x
    };
    let mut pts = Vec::new();
    match n {
        2 => {
            let e = &basis[0];
            let mut ys: Vec<f64> = poly.vertices.iter().map(|v| dot(v, e)).collect();
            ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ys.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);
            if ys.len() > resolution.max(8) {
                let (a, b) = (ys[0], ys[ys.len() - 1]);
                let m = resolution.max(8);
                // Cosine spacing resolves the ends, where chords shrink fastest.
                ys = (0..m).map(|i| a + (b - a) * 0.5 * (1.0 - (core::f64::consts::PI * i as f64 / (m - 1) as f64).cos())).collect();
            }
            for &y in &ys {
                let base: Vec<f64> = e.iter().map(|v| v * y).collect();
                let len = chord(&base).unwrap_or(0.0).max(0.0);
                pts.push(lift(&[y], 0.5 * len));
                pts.push(lift(&[y], -0.5 * len));
            }
        }
        3 => {
            let proj: Vec<[f64; 2]> = poly.vertices.iter().map(|v| [dot(v, &basis[0]), dot(v, &basis[1])]).collect();
            let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
            for q in &proj {
                for i in 0..2 {
                    lo[i] = lo[i].min(q[i]);
                    hi[i] = hi[i].max(q[i]);
                }
            }
            let m = (resolution as f64).sqrt().ceil().max(8.0) as usize;
            // Include the projected vertices so the shadow outline is exact.
            let mut bases: Vec<[f64; 2]> = proj.clone();
            for i in 0..=m {
                for j in 0..=m {
                    bases.push([
                        lo[0] + (hi[0] - lo[0]) * i as f64 / m as f64,
                        lo[1] + (hi[1] - lo[1]) * j as f64 / m as f64,
                    ]);
                }
            }
            for b in &bases {
                let y = lift(b, 0.0);
                if let Some(len) = chord(&y) {
                    if len >= 0.0 {
                        pts.push(lift(b, 0.5 * len));
                        pts.push(lift(b, -0.5 * len));
                    }
                }
            }
        }
        d => return Err(Error::DimensionUnsupported { op: "Steiner symmetrization", dim: d }),
    }
    VPolytope::new(pts)
}

/// Planar affine surface areas of a smooth body and of its Steiner symmetral
/// in direction `u`, both through the graph representation
/// `K = {(y, s) : f⁻(y) ≤ s ≤ f⁺(y)}`:
/// `as(K) = ∫ (f⁻'')^{1/3} + ∫ (−f⁺'')^{1/3}` and
/// `as(St K) = 2 ∫ ((f⁻'' − f⁺'')/2)^{1/3}`.
pub fn steiner_asa_pair(body: &SmoothBody, u: &[f64]) -> Result<(f64, f64)> {
    if body.dim() != 2 {
        return Err(Error::DimensionUnsupported { op: "graph affine surface area", dim: body.dim() });
    }
    check_unit(u)?;
    let e = [-u[1], u[0]];
    let neg_e = [-e[0], -e[1]];
    let x_min = body.support_point(&neg_e);
    let x_max = body.support_point(&e);
    let (ya, yb) = (dot(&x_min, &e), dot(&x_max, &e));
    // Second derivative of the graph s(y) at a boundary point by implicit
    // differentiation of F(y e + s u) = 0.
    let second = |x: &[f64]| -> f64 {
        let ev = body.eval(x);
        let g = &ev.gradient;
        let hm = &ev.hessian;
        let fy = dot(g, &e);
        let fs = dot(g, u);
        let quad = |a: &[f64], b: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    s += a[i] * hm[(i, j)] * b[j];
                }
            }
            s
        };
        let d1 = -fy / fs;
        -(quad(&e, &e) + 2.0 * quad(&e, u) * d1 + quad(u, u) * d1 * d1) / fs
    };
    let chord = |y: f64| -> (f64, f64) {
        // Interior point: where the segment between the extreme points in ±e
        // crosses the line at y.
        let lam = (y - ya) / (yb - ya);
        let c: Vec<f64> = x_min.iter().zip(&x_max).map(|(a, b)| a + lam * (b - a)).collect();
        let up = body.ray_exit(&c, u);
        let down = body.ray_exit(&c, &[-u[0], -u[1]]);
        let xp = crate::linalg::axpy(&c, up, u);
        let xm = crate::linalg::axpy(&c, -down, u);
        (second(&xm), second(&xp))
    };
    let ts = crate::quadrature::TanhSinh::new(7);
    let lower = ts.integrate(ya, yb, |y| chord(y).0.max(0.0).cbrt());
    let upper = ts.integrate(ya, yb, |y| (-chord(y).1).max(0.0).cbrt());
    let sym = ts.integrate(ya, yb, |y| {
        let (a, b) = chord(y);
        ((a - b) / 2.0).max(0.0).cbrt()
    });
    Ok((lower.value + upper.value, 2.0 * sym.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn polar_of_square_is_diamond() {
        let c = ConvexBody::cube(2).unwrap();
        let p = polar_polytope(&c).unwrap();
        let g = p.polytope_geometry().unwrap();
        assert_eq!(g.vertices.len(), 4);
        assert!((g.volume - 2.0).abs() < 1e-12);
        let shifted = ConvexBody::polygon(vec![vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(polar_polytope(&shifted), Err(Error::OriginNotInterior));
    }

    #[test]
    fn minkowski_examples() {
        let sq = vec![vec![-1.0, -1.0], vec![1.0, -1.0], vec![1.0, 1.0], vec![-1.0, 1.0]];
        let s = minkowski_sum(&sq, &sq).unwrap();
        assert!((s.geometry().unwrap().volume - 16.0).abs() < 1e-12);
        let z = minkowski_sum(&[vec![0.0, 0.0], vec![1.0, 0.0]], &[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((z.geometry().unwrap().volume - 1.0).abs() < 1e-15);
        let same = minkowski_sum(&sq, &[vec![0.0, 0.0]]).unwrap();
        assert_eq!(same.vertices().len(), 4);
    }

    #[test]
    fn surface_measure_triangle() {
        let t = ConvexBody::polygon(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = surface_measure(&t).unwrap();
        assert!((s.total() - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!(norm(&s.first_moment()) < 1e-14);
    }

    #[test]
    fn projection_widths() {
        let c = ConvexBody::cube(2).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((projection_body_support(&c, &[1.0, 0.0], 0).unwrap() - 2.0).abs() < 1e-14);
        assert!((projection_body_support(&c, &[s, s], 0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        let b = ConvexBody::ball(3).unwrap();
        let a = projection_body_support(&b, &[0.0, 0.0, 1.0], 1024).unwrap();
        assert!((a - PI).abs() < 1e-4);
        assert!(a >= PI);
    }

    #[test]
    fn mixed_volume_square_ball() {
        let c = ConvexBody::cube(2).unwrap();
        assert!((mixed_volume_v1(&c, &c).unwrap() - 4.0).abs() < 1e-12);
        let b = ConvexBody::ball(2).unwrap();
        // Perimeter / 2 = 4.
        assert!((mixed_volume_v1(&c, &b).unwrap() - 4.0).abs() < 1e-12);
        let fd = mixed_volume_v1_fd(&c, &b, 1e-3).unwrap();
        assert!((fd - 4.0).abs() < 0.04, "{fd}");
        assert!((mixed_volume_v1(&b, &b).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn steiner_triangle_and_disk() {
        let t = ConvexBody::polygon(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let s = steiner_symmetrize(&t, &[0.0, 1.0], 512).unwrap();
        assert!((s.geometry().unwrap().volume - 2.0).abs() < 1e-12);
        let b = ConvexBody::ball(2).unwrap();
        let s = steiner_symmetrize(&b, &[0.6, 0.8], 2048).unwrap();
        let sb: ConvexBody = s.into();
        assert!(hausdorff_distance(&sb, &b, &SphereGrid::circle(256)).unwrap() < 1e-5);
    }

    #[test]
    fn graph_asa_of_ellipse() {
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let (a, s) = steiner_asa_pair(&e, &[0.6, 0.8]).unwrap();
        let expect = 2.0 * PI * 2f64.cbrt();
        assert!((a - expect).abs() < 1e-6 * expect, "{a}");
        assert!(s >= a - 1e-9);
    }
}
