//! Convex floating bodies, the floating-body limit for affine surface area,
//! and the rolling function.

use crate::body::{BoundaryPiece, ConvexBody, HPolytope, Halfspace, PolytopeGeometry, SmoothBody, SmoothShape};
use crate::error::{Error, Result};
use crate::functionals::MC_CHUNK;
use crate::linalg::{axpy, dot, norm, orthonormal_complement, sub};
use crate::prelude::*;
use crate::quadrature::{CompensatedSum, GaussLegendre};
use crate::special::{ball_volume, sphere_area, unit_ball_cap_volume};
use crate::sphere::SphereGrid;
use core::f64::consts::PI;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative accuracy to which cut volumes are matched.
const CAP_RTOL: f64 = 1e-10;

/// `vol(K ∩ {⟨x, ξ⟩ ≥ c})`.
///
/// Exact for ellipsoids (any affine image of a ball) and for polytopes with
/// explicit facet structure; other bodies in the plane or in space are
/// integrated slice by slice.
pub fn cap_volume(k: &ConvexBody, xi: &[f64], c: f64) -> Result<f64> {
    let n = k.dim();
    match k {
        ConvexBody::Smooth(b) if matches!(b.shape(), SmoothShape::Ellipsoid { .. }) => Ok(ellipsoid_cap(b, xi, c)),
        ConvexBody::H(_) | ConvexBody::V(_) => {
            let g = k.polytope_geometry().ok_or(Error::DimensionUnsupported { op: "polytope cap volume", dim: n })?;
            Ok(polytope_cap(g, xi, c))
        }
        ConvexBody::Smooth(_) | ConvexBody::Clipped(_) if (2..=3).contains(&n) => sliced_cap(k, xi, c),
        _ => Err(Error::UnsupportedRepresentation("cap volume of this body")),
    }
}

fn ellipsoid_cap(b: &SmoothBody, xi: &[f64], c: f64) -> f64 {
    let n = b.dim();
    let axes = match b.shape() {
        SmoothShape::Ellipsoid { axes } => axes.clone(),
        _ => unreachable!(),
    };
    // x = A diag(a) z + t with |z| ≤ 1.
    let (at, shift, det) = match b.map() {
        Some(m) => (m.transpose(xi), dot(m.translation(), xi), m.det().abs()),
        None => (xi.to_vec(), 0.0, 1.0),
    };
    let u: Vec<f64> = at.iter().zip(&axes).map(|(v, a)| v * a).collect();
    let s = (c - shift) / norm(&u);
    det * axes.iter().product::<f64>() * unit_ball_cap_volume(n, s)
}

/// Divergence form: `vol = (1/n) Σ_F |F ∩ cap| (b_F − ⟨a_F, q⟩)` for a point
/// `q` on the cutting plane, whose own facet then contributes nothing.
fn polytope_cap(g: &PolytopeGeometry, xi: &[f64], c: f64) -> f64 {
    let n = xi.len();
    let level = |x: &[f64]| dot(x, xi) - c;
    let mut pieces: Vec<(usize, f64)> = Vec::new();
    for (j, f) in g.facets.iter().enumerate() {
        let clipped = clip_polygon(&f.polygon, &level);
        let m = if n == 2 {
            if clipped.len() < 2 { 0.0 } else { crate::linalg::distance(&clipped[0], &clipped[clipped.len() - 1]) }
        } else {
            polygon_area_3d(&clipped)
        };
        if m > 0.0 {
            pieces.push((j, m));
        }
    }
    if pieces.is_empty() {
        return 0.0;
    }
    // Anchor on the cutting plane at an edge crossing, close to the cap,
    // to avoid cancellation.
    let q = plane_crossing(g, &level).unwrap_or_else(|| crate::linalg::scale(xi, c));
    let mut s = CompensatedSum::new();
    for (j, m) in pieces {
        let f = &g.facets[j];
        s.add(m * (f.offset - dot(&f.normal, &q)));
    }
    (s.value() / n as f64).max(0.0)
}

fn plane_crossing<L: Fn(&[f64]) -> f64>(g: &PolytopeGeometry, level: &L) -> Option<Vec<f64>> {
    for f in &g.facets {
        let k = f.polygon.len();
        for i in 0..k {
            let (a, b) = (&f.polygon[i], &f.polygon[(i + 1) % k]);
            let (la, lb) = (level(a), level(b));
            if (la >= 0.0) != (lb >= 0.0) {
                let s = la / (la - lb);
                return Some(a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect());
            }
        }
    }
    None
}

/// Sutherland–Hodgman clip of a closed polygon (or a segment) to
/// `level ≥ 0`.
fn clip_polygon<L: Fn(&[f64]) -> f64>(poly: &[Vec<f64>], level: &L) -> Vec<Vec<f64>> {
    if poly.len() == 2 {
        let (la, lb) = (level(&poly[0]), level(&poly[1]));
        let lerp = |s: f64| -> Vec<f64> { poly[0].iter().zip(&poly[1]).map(|(x, y)| x + s * (y - x)).collect() };
        return match (la >= 0.0, lb >= 0.0) {
            (true, true) => poly.to_vec(),
            (false, false) => Vec::new(),
            (true, false) => vec![poly[0].clone(), lerp(la / (la - lb))],
            (false, true) => vec![lerp(la / (la - lb)), poly[1].clone()],
        };
    }
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let (a, b) = (&poly[i], &poly[(i + 1) % k]);
        let (la, lb) = (level(a), level(b));
        if la >= 0.0 {
            out.push(a.clone());
        }
        if (la >= 0.0) != (lb >= 0.0) {
            let s = la / (la - lb);
            out.push(a.iter().zip(b).map(|(x, y)| x + s * (y - x)).collect());
        }
    }
    out
}

fn polygon_area_3d(poly: &[Vec<f64>]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = [0.0; 3];
    let o = &poly[0];
    for i in 1..poly.len() - 1 {
        let c = crate::linalg::cross3(&sub(&poly[i], o), &sub(&poly[i + 1], o));
        for k in 0..3 {
            acc[k] += c[k];
        }
    }
    0.5 * norm(&acc)
}

/// `∫_c^{h(ξ)} A(s) ds` with `A` the slice measure at level `s`, using
/// `s = c + (h − c)(1 − w²)` to absorb the square-root edge at the top.
fn sliced_cap(k: &ConvexBody, xi: &[f64], c: f64) -> Result<f64> {
    let n = k.dim();
    let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
    let (top, bottom) = match k {
        ConvexBody::Smooth(b) => (b.support_point(xi), b.support_point(&neg)),
        ConvexBody::Clipped(b) => (b.support_point(xi), b.support_point(&neg)),
        _ => unreachable!(),
    };
    let (h, lo) = (dot(&top, xi), dot(&bottom, xi));
    if c >= h {
        return Ok(0.0);
    }
    let c = c.max(lo);
    let exit = |p: &[f64], d: &[f64]| -> f64 {
        match k {
            ConvexBody::Smooth(b) => b.ray_exit(p, d).max(0.0),
            ConvexBody::Clipped(b) => b.ray_exit(p, d).0.max(0.0),
            _ => unreachable!(),
        }
    };
    let basis = orthonormal_complement(xi);
    let slice = |s: f64| -> f64 {
        let lam = ((s - lo) / (h - lo)).clamp(0.0, 1.0);
        let q: Vec<f64> = bottom.iter().zip(&top).map(|(a, b)| a + lam * (b - a)).collect();
        if n == 2 {
            let tau = &basis[0];
            let m: Vec<f64> = tau.iter().map(|v| -v).collect();
            exit(&q, tau) + exit(&q, &m)
        } else {
            let m = 128;
            let mut acc = CompensatedSum::new();
            for i in 0..m {
                let phi = 2.0 * PI * i as f64 / m as f64;
                let d = axpy(&crate::linalg::scale(&basis[0], phi.cos()), phi.sin(), &basis[1]);
                let r = exit(&q, &d);
                acc.add(0.5 * r * r);
            }
            acc.value() * 2.0 * PI / m as f64
        }
    };
    let rule = GaussLegendre::new(48);
    let span = h - c;
    let mut s = CompensatedSum::new();
    for piece in 0..4 {
        let (a, b) = (piece as f64 / 4.0, (piece + 1) as f64 / 4.0);
        s.add(rule.integrate(a, b, |w| slice(c + span * (1.0 - w * w)) * 2.0 * span * w));
    }
    Ok(s.value())
}

/// Offset `c` with `vol(K ∩ {⟨x, ξ⟩ ≥ c}) = t`.
///
/// Bracketed regula falsi (Illinois variant) on `ln cap` against
/// `ln(h_K(ξ) − c)`: cap volumes behave like powers of the cap height, so
/// this is nearly linear and converges in a handful of steps.
pub fn cap_height(k: &ConvexBody, xi: &[f64], t: f64) -> Result<f64> {
    let vol = k.volume()?;
    if !(t > 0.0 && t < vol / 2.0) {
        return Err(Error::OutOfRange { what: "cut volume", value: t });
    }
    if (norm(xi) - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfRange { what: "|ξ|", value: norm(xi) });
    }
    let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
    let h = k.support(xi)?;
    let width = h + k.support(&neg)?;
    let g = |v: f64| -> Result<f64> {
        let cap = cap_volume(k, xi, h - v.exp())?;
        Ok(if cap > 0.0 { cap.ln() - t.ln() } else { f64::NEG_INFINITY })
    };
    // Bracket: g(hi) > 0 at half the width (t < vol/2 keeps one side large
    // enough only after possibly growing to the full width).
    let mut hi = (0.5 * width).ln();
    let mut ghi = g(hi)?;
    if !(ghi > 0.0) {
        hi = width.ln();
        ghi = vol.ln() - t.ln();
    }
    let mut lo = hi - 3.0 * core::f64::consts::LN_10;
    let mut glo = g(lo)?;
    let mut guard = 0;
    while glo > 0.0 {
        hi = lo;
        ghi = glo;
        lo -= 3.0 * core::f64::consts::LN_10;
        glo = g(lo)?;
        guard += 1;
        if guard > 100 {
            return Err(Error::NoConvergence("cap height bracket"));
        }
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let v = if glo.is_finite() && ghi.is_finite() {
            let v = (lo * ghi - hi * glo) / (ghi - glo);
            if v > lo && v < hi { v } else { 0.5 * (lo + hi) }
        } else {
            0.5 * (lo + hi)
        };
        let gv = g(v)?;
        if gv.abs() <= CAP_RTOL || hi - lo <= 1e-15 * hi.abs().max(1.0) {
            return Ok(h - v.exp());
        }
        if gv > 0.0 {
            hi = v;
            ghi = gv;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        } else {
            lo = v;
            glo = gv;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::NoConvergence("cap height"))
}

/// `K_t` over a finite set of directions together with its volume deficit.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatingBodyResult {
    pub t: f64,
    pub body: HPolytope,
    /// `vol(K) − vol(K_t)`.
    pub deficit: f64,
    /// `deficit / t^{2/(n+1)}`.
    pub normalized: f64,
}

/// `⋂_ξ {⟨x, ξ⟩ ≤ cap_height(K, ξ, t)}` over the grid directions: an outer
/// approximation of the convex floating body that converges under grid
/// refinement.
pub fn floating_body(k: &ConvexBody, t: f64, grid: &SphereGrid) -> Result<FloatingBodyResult> {
    let n = k.dim();
    if grid.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: grid.dim() });
    }
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported { op: "floating body", dim: n });
    }
    let dirs = grid.directions();
    let heights = crate::par::map_indexed(dirs.len(), |i| cap_height(k, &dirs[i], t));
    let mut hs = Vec::with_capacity(dirs.len());
    for (d, c) in dirs.iter().zip(heights) {
        hs.push(Halfspace { normal: d.clone(), offset: c? });
    }
    let normals: Vec<Vec<f64>> = hs.iter().map(|h| h.normal.clone()).collect();
    let offsets: Vec<f64> = hs.iter().map(|h| h.offset).collect();
    let radius = crate::lp::chebyshev_center(&normals, &offsets).map(|(_, r)| r).unwrap_or(0.0);
    if !(radius >= 1e-9) {
        return Err(Error::EmptyFloatingBody(radius));
    }
    let body = HPolytope::new(hs)?;
    let inner = body.geometry().map(|g| g.volume).ok_or(Error::DimensionUnsupported { op: "floating body", dim: n })?;
    let deficit = k.volume()? - inner;
    Ok(FloatingBodyResult { t, body, deficit, normalized: deficit / t.powf(2.0 / (n as f64 + 1.0)) })
}

/// Gap between the deficits on the default grids of size `m` and `4m`: the
/// part of the deficit lost to the finite set of cutting directions.
pub fn floating_grid_bias(k: &ConvexBody, t: f64, m: usize) -> Result<f64> {
    let coarse = floating_body(k, t, &SphereGrid::with_size(k.dim(), m))?;
    let fine = floating_body(k, t, &SphereGrid::with_size(k.dim(), 4 * m))?;
    Ok((fine.deficit - coarse.deficit).abs())
}

/// `2 (ω_{n−1} / (n+1))^{2/(n+1)}`: turns `deficit / t^{2/(n+1)}` into an
/// affine surface area estimate.
pub fn floating_constant(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (ball_volume(n - 1) / (nf + 1.0)).powf(2.0 / (nf + 1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloatingEstimate {
    pub t: f64,
    pub deficit: f64,
    pub normalized: f64,
    pub asa_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloatingSeries {
    pub rows: Vec<FloatingEstimate>,
    /// Whether successive estimates change monotonically.
    pub monotone: bool,
}

/// Floating-body estimates of `as(K)` along a decreasing sequence of cut
/// volumes.
pub fn asa_via_floating(k: &ConvexBody, ts: &[f64], grid: &SphereGrid) -> Result<FloatingSeries> {
    if ts.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidBody("cut volumes must be strictly decreasing".into()));
    }
    let c = floating_constant(k.dim());
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let r = floating_body(k, t, grid)?;
        rows.push(FloatingEstimate { t, deficit: r.deficit, normalized: r.normalized, asa_estimate: c * r.normalized });
    }
    let diffs: Vec<f64> = rows.windows(2).map(|w| w[1].asa_estimate - w[0].asa_estimate).collect();
    let monotone = diffs.iter().all(|d| *d >= 0.0) || diffs.iter().all(|d| *d <= 0.0);
    Ok(FloatingSeries { rows, monotone })
}

// ---------------------------------------------------------------------------
// Rolling function

/// Boundary points of a smooth base, precomputed once for repeated rolling
/// radius queries.
struct BaseSamples {
    /// Interior point the samples are seen from.
    center: Vec<f64>,
    dirs: Vec<Vec<f64>>,
    points: Vec<Vec<f64>>,
}

impl BaseSamples {
    fn new(b: &SmoothBody) -> Self {
        let n = b.dim();
        let grid = if n == 2 { SphereGrid::circle(4096) } else { SphereGrid::with_size(n, 8192) };
        let center = b.center();
        let dirs = grid.directions().to_vec();
        let points = dirs.iter().map(|d| axpy(&center, b.ray_exit(&center, d), d)).collect();
        Self { center, dirs, points }
    }

    /// `inf_y |y − x|² / (2⟨x − y, N⟩)` over base boundary points `y`; the
    /// largest radius of a ball through `x` with inner normal `−N` whose
    /// interior misses the base boundary. Refined around the best sample.
    fn inf_ratio(&self, b: &SmoothBody, x: &[f64], normal: &[f64]) -> f64 {
        // Points very close to x only see the local curvature, which the
        // caller accounts for exactly; excluding them avoids cancellation.
        let near = 1e-3 * b.circumradius();
        let ratio = |y: &[f64]| {
            let d = sub(x, y);
            let dd = dot(&d, &d);
            let den = 2.0 * dot(&d, normal);
            if dd > near * near && den > 0.0 { dd / den } else { f64::INFINITY }
        };
        let mut best = (f64::INFINITY, 0usize);
        for (i, y) in self.points.iter().enumerate() {
            let r = ratio(y);
            if r < best.0 {
                best = (r, i);
            }
        }
        if !best.0.is_finite() || b.dim() != 2 {
            return best.0;
        }
        // Golden-section search in the angle around the best sample.
        let m = self.dirs.len();
        let th = |i: usize| self.dirs[i % m][1].atan2(self.dirs[i % m][0]);
        let step = 2.0 * PI / m as f64;
        let t0 = th(best.1);
        let f = |a: f64| {
            let d = [a.cos(), a.sin()];
            ratio(&axpy(&self.center, b.ray_exit(&self.center, &d), &d))
        };
        let (mut lo, mut hi) = (t0 - step, t0 + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..60 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = f(d);
            }
        }
        best.0.min(fc).min(fd)
    }
}

/// Largest principal curvature of a smooth boundary at `x`.
pub fn max_principal_curvature(b: &SmoothBody, x: &[f64]) -> Result<f64> {
    if b.is_exceptional(x) {
        return Ok(f64::INFINITY);
    }
    let e = b.eval(x);
    let g = norm(&e.gradient);
    if !(g > 0.0) {
        return Err(Error::ZeroGradient);
    }
    let n = b.dim();
    let normal: Vec<f64> = e.gradient.iter().map(|v| v / g).collect();
    let basis = orthonormal_complement(&normal);
    let mut s = DMatrix::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        let hi = crate::linalg::mat_vec(&e.hessian, &basis[i]);
        for j in 0..n - 1 {
            s[(i, j)] = dot(&hi, &basis[j]) / g;
        }
    }
    Ok(crate::linalg::symmetric_eigenvalues(&s).into_iter().fold(0.0, f64::max))
}

/// Facet constraints: the ball `B(x − ρN, ρ)` lies in `{⟨a, y⟩ ≤ b}` iff
/// `ρ (1 − ⟨a, N⟩) ≤ b − ⟨a, x⟩`.
fn halfspace_limit(hs: &[Halfspace], x: &[f64], normal: &[f64]) -> f64 {
    let mut r = f64::INFINITY;
    for h in hs {
        let den = 1.0 - dot(&h.normal, normal);
        if den > 1e-12 {
            r = r.min((h.offset - dot(&h.normal, x)).max(0.0) / den);
        }
    }
    r
}

struct Roller<'a> {
    k: &'a ConvexBody,
    samples: Option<BaseSamples>,
    halfspaces: Vec<Halfspace>,
}

impl<'a> Roller<'a> {
    fn new(k: &'a ConvexBody) -> Result<Self> {
        let (samples, halfspaces) = match k {
            ConvexBody::H(h) => (None, h.halfspaces().to_vec()),
            ConvexBody::V(_) => {
                let g = k.polytope_geometry().ok_or(Error::DimensionUnsupported { op: "rolling radius", dim: k.dim() })?;
                (None, g.halfspaces())
            }
            ConvexBody::Smooth(b) => (Some(BaseSamples::new(b)), Vec::new()),
            ConvexBody::Clipped(c) => (Some(BaseSamples::new(c.base())), c.cuts().to_vec()),
            ConvexBody::Star(_) => return Err(Error::UnsupportedRepresentation("star bodies carry no normals")),
        };
        Ok(Self { k, samples, halfspaces })
    }

    /// Rolling radius at `x` with outer unit normal `normal`; `on_base`
    /// tells whether `x` lies on the curved part.
    fn radius(&self, x: &[f64], normal: &[f64], on_base: bool) -> Result<f64> {
        let mut r = halfspace_limit(&self.halfspaces, x, normal);
        let base = match self.k {
            ConvexBody::Smooth(b) => Some(b),
            ConvexBody::Clipped(c) => Some(c.base()),
            _ => None,
        };
        if let (Some(b), Some(s)) = (base, &self.samples) {
            r = r.min(s.inf_ratio(b, x, normal));
            if on_base {
                r = r.min(1.0 / max_principal_curvature(b, x)?);
            }
        }
        Ok(r.max(0.0))
    }
}

/// Radius of the largest ball inside `K` that contains the boundary point
/// `x`; 0 where the normal is not unique.
///
/// Exact for polytopes. For curved boundaries, the minimum of the sampled
/// boundary obstruction and the reciprocal largest principal curvature.
pub fn rolling_radius(k: &ConvexBody, x: &[f64]) -> Result<f64> {
    let bp = match k.boundary_point(x) {
        Ok(bp) => bp,
        Err(Error::NoUniqueNormal) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let on_base = match k {
        ConvexBody::Smooth(_) => true,
        ConvexBody::Clipped(c) => c.base().boundary_residual(x) <= 1e-9 * k.scale().max(1.0),
        _ => false,
    };
    Roller::new(k)?.radius(x, &bp.normal, on_base)
}

/// `H_{n−1}{x ∈ ∂K : r(x) ≥ t}` on a grid of `t`, with the reference
/// `(1 − t)^{n−1} vol_{n−1}(∂K)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RollingProfile {
    pub t: Vec<f64>,
    pub m: Vec<f64>,
    pub stderr: Vec<f64>,
    pub reference: Vec<f64>,
    pub boundary_area: f64,
    pub samples: usize,
}

impl RollingProfile {
    /// `m(t) ≥ reference(t) − 3·stderr(t)` at every grid point.
    pub fn inequality_holds(&self) -> bool {
        self.worst_margin() >= 0.0
    }

    /// `min_t (m(t) − reference(t) + 3·stderr(t))`.
    pub fn worst_margin(&self) -> f64 {
        (0..self.t.len())
            .map(|i| self.m[i] - self.reference[i] + 3.0 * self.stderr[i] + 1e-12 * self.boundary_area)
            .fold(f64::INFINITY, f64::min)
    }
}

/// One boundary sample: location, outer normal, whether it is on a curved
/// piece, and its importance weight.
struct Sample {
    x: Vec<f64>,
    normal: Vec<f64>,
    on_base: bool,
    weight: f64,
}

/// Boundary samples distributed by surface measure: per facet, uniform
/// with probability proportional to area (polytopes); uniform directions
/// from the interior point weighted by the surface Jacobian otherwise.
fn boundary_sample<R: Rng>(k: &ConvexBody, g: Option<&PolytopeGeometry>, cum: &[f64], rng: &mut R) -> Result<Sample> {
    let n = k.dim();
    if let Some(g) = g {
        let total = *cum.last().unwrap();
        let u: f64 = rng.random::<f64>() * total;
        let j = cum.partition_point(|&c| c <= u).min(g.facets.len() - 1);
        let f = &g.facets[j];
        let x = if n == 2 {
            let s: f64 = rng.random();
            f.polygon[0].iter().zip(&f.polygon[1]).map(|(a, b)| a + s * (b - a)).collect()
        } else {
            // Fan triangulation, triangle chosen by area.
            let o = &f.polygon[0];
            let tris: Vec<f64> = (1..f.polygon.len() - 1)
                .map(|i| polygon_area_3d(&[o.clone(), f.polygon[i].clone(), f.polygon[i + 1].clone()]))
                .collect();
            let tot: f64 = tris.iter().sum();
            let mut pick = rng.random::<f64>() * tot;
            let mut i = 0;
            while i + 1 < tris.len() && pick >= tris[i] {
                pick -= tris[i];
                i += 1;
            }
            let (a, b) = (&f.polygon[i + 1], &f.polygon[i + 2]);
            let (mut s, mut r): (f64, f64) = (rng.random(), rng.random());
            if s + r > 1.0 {
                s = 1.0 - s;
                r = 1.0 - r;
            }
            (0..3).map(|c| o[c] + s * (a[c] - o[c]) + r * (b[c] - o[c])).collect()
        };
        return Ok(Sample { x, normal: f.normal.clone(), on_base: false, weight: total });
    }
    let p = k.interior_point();
    let xi = loop {
        let v: Vec<f64> = (0..n).map(|_| crate::sphere::gaussian(rng)).collect();
        if let Some(u) = crate::linalg::normalized(&v) {
            break u;
        }
    };
    let (t, normal, on_base) = match k {
        ConvexBody::Smooth(b) => {
            let t = b.ray_exit(&p, &xi);
            (t, b.normal(&axpy(&p, t, &xi))?, true)
        }
        ConvexBody::Clipped(c) => {
            let (t, piece) = c.ray_exit(&p, &xi);
            match piece {
                BoundaryPiece::Smooth => (t, c.base().normal(&axpy(&p, t, &xi))?, true),
                BoundaryPiece::Cut(j) => (t, c.cuts()[j].normal.clone(), false),
            }
        }
        _ => return Err(Error::UnsupportedRepresentation("boundary sampling of this body")),
    };
    let weight = sphere_area(n) * t.powi(n as i32 - 1) / dot(&xi, &normal);
    Ok(Sample { x: axpy(&p, t, &xi), normal, on_base, weight })
}

/// Surface-measure profile of the rolling function for a body containing
/// the unit ball.
///
/// Containment is checked exactly on facets for polytopes and through the
/// radial function on a grid otherwise.
pub fn sw1_profile(k: &ConvexBody, t_grid: &[f64], samples: usize, seed: u64) -> Result<RollingProfile> {
    let n = k.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported { op: "rolling profile", dim: n });
    }
    if samples == 0 {
        return Err(Error::OutOfRange { what: "samples", value: 0.0 });
    }
    let geometry = k.polytope_geometry();
    let contained = match (k, geometry) {
        (_, Some(g)) => g.facets.iter().all(|f| f.offset >= 1.0 - 1e-12),
        (ConvexBody::H(h), None) => h.halfspaces().iter().all(|f| f.offset >= 1.0 - 1e-12),
        _ => {
            let grid = SphereGrid::with_size(n, if n == 2 { 4096 } else { 8192 });
            let mut ok = true;
            for d in grid.directions() {
                if k.radial(d)? < 1.0 - 1e-9 {
                    ok = false;
                    break;
                }
            }
            ok
        }
    };
    if !contained {
        return Err(Error::ContainmentViolation);
    }
    let cum: Vec<f64> = geometry
        .map(|g| {
            let mut acc = 0.0;
            g.facets.iter().map(|f| {
                acc += f.area;
                acc
            }).collect()
        })
        .unwrap_or_default();
    let roller = Roller::new(k)?;
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts = crate::par::map_indexed(chunks, |c| -> Result<Vec<(f64, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = if c + 1 == chunks { samples - c * MC_CHUNK } else { MC_CHUNK };
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let s = boundary_sample(k, geometry, &cum, &mut rng)?;
            let r = roller.radius(&s.x, &s.normal, s.on_base)?;
            out.push((r, s.weight));
        }
        Ok(out)
    });
    let mut draws = Vec::with_capacity(samples);
    for p in parts {
        draws.extend(p?);
    }
    let area = k.surface_area()?;
    let sf = samples as f64;
    let mut m = Vec::with_capacity(t_grid.len());
    let mut stderr = Vec::with_capacity(t_grid.len());
    let mut reference = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut s1 = CompensatedSum::new();
        let mut s2 = CompensatedSum::new();
        for &(r, w) in &draws {
            if r >= t {
                s1.add(w);
                s2.add(w * w);
            }
        }
        let mean = s1.value() / sf;
        let var = (s2.value() / sf - mean * mean).max(0.0);
        m.push(mean);
        stderr.push((var / (sf - 1.0).max(1.0)).sqrt());
        reference.push((1.0 - t).max(0.0).powi(n as i32 - 1) * area);
    }
    Ok(RollingProfile { t: t_grid.to_vec(), m, stderr, reference, boundary_area: area, samples })
}

/// `max (κ(x)^{1/(n−1)} − 1/r(x))` over the boundary nodes of a grid; the
/// curvature–rolling bound says this is at most 0.
pub fn curvature_rolling_gap(k: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    let n = k.dim();
    let roller = Roller::new(k)?;
    let base = match k {
        ConvexBody::Smooth(b) => b,
        ConvexBody::Clipped(c) => c.base(),
        _ => return Err(Error::UnsupportedRepresentation("curvature–rolling bound needs a curved boundary")),
    };
    let nodes = crate::functionals::boundary_nodes(k, grid)?;
    let gaps = crate::par::map_indexed(nodes.len(), |i| -> Result<f64> {
        let b = &nodes[i];
        if !b.smooth || base.is_exceptional(&b.point) {
            return Ok(f64::NEG_INFINITY);
        }
        let kappa = base.curvature(&b.point)?;
        let r = roller.radius(&b.point, &b.normal, true)?;
        Ok(kappa.powf(1.0 / (n as f64 - 1.0)) - 1.0 / r)
    });
    let mut worst = f64::NEG_INFINITY;
    for g in gaps {
        worst = worst.max(g?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment_area(h: f64) -> f64 {
        // Circular segment of height h in the unit disk.
        (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt()
    }

    #[test]
    fn disk_caps() {
        let disk = ConvexBody::ball(2).unwrap();
        let c = cap_height(&disk, &[1.0, 0.0], PI / 2.0 + 1e-9);
        assert!(c.is_err());
        let t = 0.3;
        let c = cap_height(&disk, &[0.6, 0.8], t).unwrap();
        assert!((segment_area(1.0 - c) - t).abs() < 1e-9);
        let c = cap_height(&disk, &[1.0, 0.0], 1e-6).unwrap();
        assert!((segment_area(1.0 - c) / 1e-6 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn square_slab() {
        let sq = ConvexBody::cube(2).unwrap();
        let c = cap_height(&sq, &[1.0, 0.0], 0.4).unwrap();
        assert!((c - 0.8).abs() < 1e-10);
        let d = [0.5f64.sqrt(), 0.5f64.sqrt()];
        let c = cap_height(&sq, &d, 0.02).unwrap();
        // Corner triangle with legs s: area s²/2 = 0.02.
        let s = 0.2;
        assert!((c - (2.0 - s) / 2f64.sqrt()).abs() < 1e-10, "{c}");
    }

    #[test]
    fn sliced_cap_matches_exact() {
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let l = SmoothBody::lp_ball(2.0, 2).unwrap();
        let xi = [0.6, 0.8];
        for c in [0.1, 0.5, 0.9] {
            let exact = unit_ball_cap_volume(2, c);
            let s = sliced_cap(&l.clone().into(), &xi, c).unwrap();
            assert!((s - exact).abs() < 1e-9 * exact, "{s} vs {exact}");
        }
        let k: ConvexBody = e.into();
        let u = [1.0, 0.0];
        let exact = cap_volume(&k, &u, 1.5).unwrap();
        let s = sliced_cap(&k, &u, 1.5).unwrap();
        assert!((s - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn cube_cap_3d() {
        let c = ConvexBody::cube(3).unwrap();
        let v = cap_volume(&c, &[0.0, 0.0, 1.0], 0.5).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let d = 1.0 / 3f64.sqrt();
        // Corner tetrahedron with legs s: s³/6.
        let s = 0.3;
        let v = cap_volume(&c, &[d, d, d], (3.0 - s) * d).unwrap();
        assert!((v - s * s * s / 6.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn disk_floating_body_is_disk() {
        let disk = ConvexBody::ball(2).unwrap();
        let g = SphereGrid::circle(256);
        let r = floating_body(&disk, 1e-3, &g).unwrap();
        let c = cap_height(&disk, &[1.0, 0.0], 1e-3).unwrap();
        let geo = r.body.geometry().unwrap();
        let inr = geo.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        assert!((inr - c).abs() < 1e-6);
        assert!(r.deficit > 0.0);
    }

    #[test]
    fn floating_estimate_disk() {
        let disk = ConvexBody::ball(2).unwrap();
        let s = asa_via_floating(&disk, &[1e-4, 1e-6], &SphereGrid::circle(4096)).unwrap();
        let last = s.rows.last().unwrap().asa_estimate;
        assert!((last / (2.0 * PI) - 1.0).abs() < 0.02, "{last}");
    }

    #[test]
    fn polytope_rolling() {
        let sq = ConvexBody::cube(2).unwrap();
        assert!((rolling_radius(&sq, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((rolling_radius(&sq, &[1.0, 0.5]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(rolling_radius(&sq, &[1.0, 1.0]).unwrap(), 0.0);
        assert!(rolling_radius(&sq, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn smooth_rolling() {
        let b = ConvexBody::ball(2).unwrap();
        let r = rolling_radius(&b, &[0.6, 0.8]).unwrap();
        assert!((r - 1.0).abs() < 1e-9, "{r}");
        let e = ConvexBody::ellipsoid(&[2.0, 1.0]).unwrap();
        assert!((rolling_radius(&e, &[2.0, 0.0]).unwrap() - 0.5).abs() < 1e-9);
        assert!((rolling_radius(&e, &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-6);
        let s = ConvexBody::ball(3).unwrap();
        assert!((rolling_radius(&s, &[0.0, 0.6, 0.8]).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn profiles() {
        let ts: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let b = sw1_profile(&ConvexBody::ball(2).unwrap(), &ts[..10], 2000, 1).unwrap();
        for m in &b.m {
            assert!((m - 2.0 * PI).abs() < 1e-9);
        }
        let big = ConvexBody::Smooth(SmoothBody::ball(2, 2.0).unwrap());
        let p = sw1_profile(&big, &ts, 2000, 1).unwrap();
        assert!(p.m.iter().all(|m| (m - 4.0 * PI).abs() < 1e-9));
        let cube = sw1_profile(&ConvexBody::cube(2).unwrap(), &ts, 20000, 3).unwrap();
        for i in 0..ts.len() {
            let exact = 8.0 * (1.0 - ts[i]);
            assert!((cube.m[i] - exact).abs() <= 4.0 * cube.stderr[i] + 1e-12, "t={}", ts[i]);
        }
        let small = ConvexBody::Smooth(SmoothBody::ball(2, 0.5).unwrap());
        assert!(matches!(sw1_profile(&small, &ts, 10, 1), Err(Error::ContainmentViolation)));
    }

    #[test]
    fn curvature_bound_on_ellipsoids() {
        let e = ConvexBody::ellipsoid(&[2.0, 1.0, 1.5]).unwrap();
        let gap = curvature_rolling_gap(&e, &SphereGrid::fibonacci(200)).unwrap();
        assert!(gap <= 1e-6, "{gap}");
    }
}
