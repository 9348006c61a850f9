//! Affine surface area `as(K) = ∫_{∂K} κ^{1/(n+1)} dμ` and the identities
//! and inequalities around it.

use crate::body::{AffineMap, BoundaryPiece, ClippedBody, ConvexBody, Halfspace, SmoothBody, SmoothShape};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::prelude::*;
use crate::quadrature::{CompensatedSum, TanhSinh};
use crate::special::{ball_volume, gamma};
use crate::sphere::SphereGrid;
use core::f64::consts::PI;
use nalgebra::DMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsaMethod {
    Quadrature,
    ClosedForm,
    DefinitionalZero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsaResult {
    pub value: f64,
    pub method: AsaMethod,
    /// Number of integrand evaluations (grid size for grid rules).
    pub resolution: usize,
    pub error_estimate: f64,
}

/// Tanh–sinh level for piecewise planar integration.
const PLANAR_LEVEL: u32 = 7;
/// Angular scan used to locate breakpoints before bisection.
const SCAN: usize = 4096;

/// Affine surface area by boundary quadrature.
///
/// Polytopes give exactly 0. In the plane, bodies without breakpoints use
/// the periodic trapezoid rule on the grid's angles (error estimate: the
/// difference to the half grid); bodies with breakpoints (vertices of
/// clipped bodies, coordinate axes of `B_p` balls) are integrated piecewise
/// with tanh–sinh. In space, unmapped `B_p` balls use an octant-wise
/// tanh–sinh product rule and everything else uses the supplied grid, with
/// the error estimated against its even-indexed half.
pub fn affine_surface_area(k: &ConvexBody, grid: &SphereGrid) -> Result<AsaResult> {
    if k.is_polytope() {
        return Ok(AsaResult { value: 0.0, method: AsaMethod::DefinitionalZero, resolution: 0, error_estimate: 0.0 });
    }
    if matches!(k, ConvexBody::Star(_)) {
        return Err(Error::UnsupportedRepresentation("affine surface area of a star body"));
    }
    if grid.dim() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), found: grid.dim() });
    }
    let n = k.dim();
    if n == 2 {
        return planar(k, grid.len());
    }
    if let ConvexBody::Smooth(b) = k {
        if n == 3 && matches!(b.shape(), SmoothShape::Lp { p } if *p != 2.0) && b.map().is_none() {
            return octants(b);
        }
    }
    let p = k.interior_point();
    let vals = grid
        .iter()
        .map(|(xi, w)| Ok(w * integrand(k, &p, xi)?))
        .collect::<Result<Vec<f64>>>()?;
    let full = crate::quadrature::compensated_sum(vals.iter().copied());
    let half = 2.0 * crate::quadrature::compensated_sum(vals.iter().step_by(2).copied());
    Ok(AsaResult { value: full, method: AsaMethod::Quadrature, resolution: grid.len(), error_estimate: (full - half).abs() })
}

/// `κ^{1/(n+1)} ρ^{n−1} / ⟨ξ, N⟩` at the boundary point seen from `p` in
/// direction `ξ`; 0 on flat pieces and on the declared exception set.
fn integrand(k: &ConvexBody, p: &[f64], xi: &[f64]) -> Result<f64> {
    let n = k.dim();
    let (b, t) = match k {
        ConvexBody::Smooth(b) => (b, b.ray_exit(p, xi)),
        ConvexBody::Clipped(c) => match c.ray_exit(p, xi) {
            (t, BoundaryPiece::Smooth) => (c.base(), t),
            _ => return Ok(0.0),
        },
        _ => return Ok(0.0),
    };
    let x = axpy(p, t, xi);
    if b.is_exceptional(&x) {
        return Ok(0.0);
    }
    let kappa = match b.curvature(&x) {
        Ok(v) => v,
        Err(Error::CoordinateZero) | Err(Error::ZeroGradient) => return Ok(0.0),
        Err(e) => return Err(e),
    };
    let normal = b.normal(&x)?;
    let c = dot(xi, &normal);
    Ok(kappa.powf(1.0 / (n as f64 + 1.0)) * t.powi(n as i32 - 1) / c)
}

fn planar(k: &ConvexBody, m: usize) -> Result<AsaResult> {
    let p = k.interior_point();
    let f = |th: f64| integrand(k, &p, &[th.cos(), th.sin()]).unwrap_or(f64::NAN);
    let breaks = planar_breakpoints(k, &p);
    if breaks.is_empty() {
        let m = m.max(4) & !1;
        let vals: Vec<f64> = (0..m).map(|i| f(2.0 * PI * i as f64 / m as f64)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NoConvergence("non-finite affine surface area integrand"));
        }
        let h = 2.0 * PI / m as f64;
        let full = h * crate::quadrature::compensated_sum(vals.iter().copied());
        let half = 2.0 * h * crate::quadrature::compensated_sum(vals.iter().step_by(2).copied());
        return Ok(AsaResult { value: full, method: AsaMethod::Quadrature, resolution: m, error_estimate: (full - half).abs() });
    }
    let rule = TanhSinh::new(PLANAR_LEVEL);
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    let mut evals = 0;
    for i in 0..breaks.len() {
        let a = breaks[i];
        let b = if i + 1 < breaks.len() { breaks[i + 1] } else { breaks[0] + 2.0 * PI };
        if b - a <= 0.0 {
            continue;
        }
        let r = rule.integrate(a, b, f);
        total.add(r.value);
        err += r.error;
        evals += r.evaluations;
    }
    Ok(AsaResult { value: total.value(), method: AsaMethod::Quadrature, resolution: evals, error_estimate: err })
}

/// Angles (from `p`) where the planar integrand is not smooth: vertices of
/// clipped bodies and, for `B_p` bases with `p ≠ 2`, the points where a base
/// coordinate vanishes.
fn planar_breakpoints(k: &ConvexBody, p: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    let base = match k {
        ConvexBody::Smooth(b) => b,
        ConvexBody::Clipped(c) => {
            out.extend(c.vertex_angles());
            c.base()
        }
        _ => return out,
    };
    if matches!(base.shape(), SmoothShape::Lp { p } if *p != 2.0) {
        let coord = |th: f64, i: usize| {
            let xi = [th.cos(), th.sin()];
            let t = base.ray_exit(p, &xi);
            base.to_base(&axpy(p, t, &xi))[i]
        };
        let step = 2.0 * PI / SCAN as f64;
        for i in 0..2 {
            let mut prev = coord(0.0, i);
            if prev == 0.0 {
                out.push(0.0);
            }
            for s in 1..=SCAN {
                let th = s as f64 * step;
                let cur = coord(th, i);
                if cur == 0.0 {
                    out.push(th % (2.0 * PI));
                } else if prev != 0.0 && (cur > 0.0) != (prev > 0.0) {
                    let (mut lo, mut hi) = (th - step, th);
                    let slo = prev > 0.0;
                    for _ in 0..100 {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        let v = coord(mid, i);
                        if v == 0.0 {
                            lo = mid;
                            hi = mid;
                            break;
                        }
                        if (v > 0.0) == slo { lo = mid } else { hi = mid }
                    }
                    out.push((0.5 * (lo + hi)) % (2.0 * PI));
                }
                prev = cur;
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    out
}

/// Octant-wise tanh–sinh product rule in `(z, φ)`; `dσ = dz dφ`.
fn octants(b: &SmoothBody) -> Result<AsaResult> {
    let k: ConvexBody = b.clone().into();
    let p = b.center();
    let rule = TanhSinh::new(5);
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    let mut evals = 0;
    for (z0, z1) in [(-1.0, 0.0), (0.0, 1.0)] {
        for q in 0..4 {
            let (f0, f1) = (q as f64 * PI / 2.0, (q + 1) as f64 * PI / 2.0);
            let outer = rule.integrate(z0, z1, |z| {
                let r = (1.0 - z * z).max(0.0).sqrt();
                let inner = rule.integrate(f0, f1, |phi| {
                    integrand(&k, &p, &[r * phi.cos(), r * phi.sin(), z]).unwrap_or(f64::NAN)
                });
                evals += inner.evaluations;
                inner.value
            });
            total.add(outer.value);
            err += outer.error;
        }
    }
    Ok(AsaResult { value: total.value(), method: AsaMethod::Quadrature, resolution: evals, error_estimate: err })
}

/// `as(B_pⁿ) = 2ⁿ (p−1)^{(n−1)/(n+1)} Γ((p+n−1)/((n+1)p))ⁿ / (p^{n−1} Γ(n(p+n−1)/((n+1)p)))`.
pub fn bpn_asa_closed_form(p: f64, n: usize) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange { what: "p", value: p });
    }
    if n < 2 {
        return Err(Error::DimensionUnsupported { op: "B_p closed form", dim: n });
    }
    let nf = n as f64;
    let a = (p + nf - 1.0) / ((nf + 1.0) * p);
    // Work in logs: Γ(a)ⁿ overflows for large n.
    let log = nf * 2f64.ln() + (nf - 1.0) / (nf + 1.0) * (p - 1.0).ln() + nf * crate::special::ln_gamma(a)
        - (nf - 1.0) * p.ln()
        - crate::special::ln_gamma(nf * a);
    Ok(log.exp())
}

/// `as(T K) = |det T|^{(n−1)/(n+1)} as(K)`.
pub fn affine_image_asa(as_k: f64, t: &AffineMap) -> Result<f64> {
    if !(as_k >= 0.0) {
        return Err(Error::OutOfRange { what: "affine surface area", value: as_k });
    }
    let n = t.dim() as f64;
    if !(t.det().abs() > 1e-12) {
        return Err(Error::SingularMap);
    }
    Ok(t.det().abs().powf((n - 1.0) / (n + 1.0)) * as_k)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsoperimetricResult {
    pub asa: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// `n ω_n^{2/(n+1)} vol(K)^{(n−1)/(n+1)}` (equality exactly for ellipsoids)
/// together with `as(K)` and their ratio.
pub fn isoperimetric_bound(k: &ConvexBody, grid: &SphereGrid) -> Result<IsoperimetricResult> {
    let n = k.dim();
    let bound = isoperimetric_rhs(n, k.volume()?);
    let asa = affine_surface_area(k, grid)?.value;
    Ok(IsoperimetricResult { asa, bound, ratio: asa / bound })
}

pub fn isoperimetric_rhs(n: usize, volume: f64) -> f64 {
    let nf = n as f64;
    nf * ball_volume(n).powf(2.0 / (nf + 1.0)) * volume.powf((nf - 1.0) / (nf + 1.0))
}

/// `as(K ∪ C) + as(K ∩ C) − as(K) − as(C)` for clipped bodies over a common
/// smooth base (smooth bodies count as clipped with no cuts).
///
/// The union is represented as the base cut by the halfspaces common to
/// both; that representation is verified by sampling (every sampled point
/// of it must lie in `K` or `C`), otherwise the union is reported as not
/// convex.
pub fn valuation_defect(k: &ConvexBody, c: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    let split = |b: &ConvexBody| -> Result<(crate::body::SmoothBody, Vec<Halfspace>)> {
        match b {
            ConvexBody::Smooth(s) => Ok((s.clone(), Vec::new())),
            ConvexBody::Clipped(cb) => Ok((cb.base().clone(), cb.cuts().to_vec())),
            _ => Err(Error::UnsupportedRepresentation("valuation check needs clipped bodies over a smooth base")),
        }
    };
    let (bk, ck) = split(k)?;
    let (bc, cc) = split(c)?;
    if bk != bc {
        return Err(Error::UnsupportedRepresentation("bodies do not share a smooth base"));
    }
    let k_in_c = sample_points(k)?.iter().all(|x| c.contains(x));
    let c_in_k = sample_points(c)?.iter().all(|x| k.contains(x));
    if k_in_c || c_in_k {
        // One body contains the other: union and intersection are the pair.
        return Ok(0.0);
    }
    let common: Vec<Halfspace> = ck.iter().filter(|h| cc.contains(h)).cloned().collect();
    let union: ConvexBody = if common.is_empty() { bk.clone().into() } else { ClippedBody::new(bk.clone(), common)?.into() };
    if !sample_points(&union)?.iter().all(|x| k.contains(x) || c.contains(x)) {
        return Err(Error::UnionNotConvex);
    }
    let mut all = ck.clone();
    all.extend(cc.iter().filter(|h| !ck.contains(h)).cloned());
    let inter: ConvexBody = ClippedBody::new(bk, all)?.into();
    let a = |b: &ConvexBody| affine_surface_area(b, grid).map(|r| r.value);
    Ok(a(&union)? + a(&inter)? - a(k)? - a(c)?)
}

/// Boundary and interior probe points: boundary points along a fixed set of
/// directions from the interior point, pulled slightly inward, and shrunk
/// copies of them.
fn sample_points(k: &ConvexBody) -> Result<Vec<Vec<f64>>> {
    let grid = SphereGrid::with_size(k.dim(), if k.dim() == 2 { 720 } else { 2000 });
    let p = k.interior_point();
    let mut out = Vec::new();
    for xi in grid.directions() {
        let t = k.ray_exit(&p, xi)?;
        for s in [1.0 - 1e-9, 0.75, 0.5, 0.25] {
            out.push(axpy(&p, s * t, xi));
        }
    }
    Ok(out)
}

/// Lutwak's functional
/// `n^{1/(n+1)} (vol(L)^{1/n} ∫ ρ_L(ξ)^{-1} dσ_K(ξ))^{n/(n+1)}`, an upper
/// bound for `as(K)` whenever `L` has its centroid at the origin.
pub fn lutwak_functional(k: &ConvexBody, l: &ConvexBody, grid: &SphereGrid) -> Result<f64> {
    let n = k.dim();
    if l.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: l.dim() });
    }
    let c = l.centroid()?;
    if norm(&c) > 1e-6 {
        return Err(Error::CentroidOffOrigin(norm(&c)));
    }
    let vol_l = l.volume()?;
    let integral = if k.is_polytope() {
        let s = crate::functionals::surface_measure(k)?;
        let mut acc = CompensatedSum::new();
        for a in &s.atoms {
            acc.add(a.mass / l.radial(&a.normal)?);
        }
        acc.value()
    } else {
        let mut acc = CompensatedSum::new();
        for b in crate::functionals::boundary_nodes(k, grid)? {
            acc.add(b.weight / l.radial(&b.normal)?);
        }
        acc.value()
    };
    let nf = n as f64;
    Ok(nf.powf(1.0 / (nf + 1.0)) * (vol_l.powf(1.0 / nf) * integral).powf(nf / (nf + 1.0)))
}

/// `as(K)^{n+1} / (n^{n+1} ω_n^n ω_{n−1}^{−n} vol(ΠK))`, at most 1 with
/// equality for ellipsoids. `vol(ΠK)` is taken from the outer polytope
/// `∩_ξ {⟨x, ξ⟩ ≤ h_{ΠK}(ξ)}` over `grid`; `samples` is passed on to the
/// projection body support in space.
pub fn petty_ratio(k: &ConvexBody, grid: &SphereGrid, samples: usize) -> Result<f64> {
    let n = k.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported { op: "Petty ratio", dim: n });
    }
    let asa = affine_surface_area(k, grid)?.value;
    if asa == 0.0 {
        return Ok(0.0);
    }
    let vol_pi = crate::functionals::volume_from_support(grid, |xi| crate::functionals::projection_body_support(k, xi, samples))?;
    let nf = n as f64;
    let denom = nf.powi(n as i32 + 1) * ball_volume(n).powi(n as i32) * ball_volume(n - 1).powi(-(n as i32)) * vol_pi;
    Ok(asa.powi(n as i32 + 1) / denom)
}

/// `K ∩ B(0, c√n)`. Halfspaces of a polytope that already contain the ball
/// are dropped, so a ball inside `K` comes back as the ball itself.
pub fn ghsw_candidate(k: &ConvexBody, c: f64) -> Result<ConvexBody> {
    let n = k.dim();
    if !(c > 0.0) {
        return Err(Error::EmptyIntersection);
    }
    let origin = vec![0.0; n];
    if !k.strictly_contains(&origin) {
        return Err(Error::OriginNotInterior);
    }
    let r = c * (n as f64).sqrt();
    let ball = SmoothBody::ball(n, r)?;
    match k {
        ConvexBody::H(_) | ConvexBody::V(_) => {
            let g = k.polytope_geometry().ok_or(Error::DimensionUnsupported { op: "ball intersection", dim: n })?;
            if g.circumradius() <= r {
                return Ok(k.clone());
            }
            let cuts: Vec<Halfspace> = g.halfspaces().into_iter().filter(|h| h.offset < r).collect();
            if cuts.is_empty() {
                return Ok(ball.into());
            }
            Ok(ClippedBody::new(ball, cuts)?.into())
        }
        ConvexBody::Smooth(b) => {
            if b.circumradius() <= r {
                return Ok(k.clone());
            }
            // Inradius about the origin from support values on a grid.
            let grid = SphereGrid::default_for(n);
            let inr = grid.directions().iter().map(|u| b.support(u)).fold(f64::INFINITY, f64::min);
            if inr >= r {
                return Ok(ball.into());
            }
            Err(Error::UnsupportedRepresentation("intersection of two curved bodies"))
        }
        _ => Err(Error::UnsupportedRepresentation("ball intersection of this body")),
    }
}

/// `2 det((A+B)/2)^{e} − det(A)^{e} − det(B)^{e}` with `e = 1/(n+1)` and
/// `A, B` symmetric positive semidefinite of size `n − 1`; nonnegative by
/// concavity of `det^{1/(n+1)}`.
pub fn psd_det_root_gap(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let n = a.nrows() as f64 + 1.0;
    let e = 1.0 / (n + 1.0);
    let m = (a + b) * 0.5;
    let root = |d: f64| d.max(0.0).powf(e);
    2.0 * root(m.determinant()) - root(a.determinant()) - root(b.determinant())
}

/// The `Γ`-function form of `vol_{n−1}(∂B₂ⁿ) = 2π^{n/2} / Γ(n/2)`.
pub fn sphere_area_gamma(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_reduces_to_sphere() {
        for n in 2..6 {
            let v = bpn_asa_closed_form(2.0, n).unwrap();
            assert!((v - sphere_area_gamma(n)).abs() < 1e-12 * v, "n={n}");
        }
    }

    #[test]
    fn disk_and_ellipse() {
        let g = SphereGrid::circle(4096);
        let d = affine_surface_area(&ConvexBody::ball(2).unwrap(), &g).unwrap();
        assert!((d.value - 2.0 * PI).abs() < 1e-12);
        let e = affine_surface_area(&ConvexBody::ellipsoid(&[2.0, 1.0]).unwrap(), &g).unwrap();
        assert!((e.value - 2.0 * PI * 2f64.cbrt()).abs() < 1e-10);
        let c = affine_surface_area(&ConvexBody::cube(2).unwrap(), &g).unwrap();
        assert_eq!(c.method, AsaMethod::DefinitionalZero);
    }

    #[test]
    fn bp_quadrature_matches_closed_form() {
        let g = SphereGrid::circle(4096);
        for p in [1.5, 3.0, 4.0] {
            let q = affine_surface_area(&ConvexBody::bpn(p, 2).unwrap(), &g).unwrap().value;
            let c = bpn_asa_closed_form(p, 2).unwrap();
            assert!((q - c).abs() < 1e-8 * c, "p={p}: {q} vs {c}");
        }
    }

    #[test]
    fn sphere_3d() {
        let g = SphereGrid::gauss_product(32, 64);
        let v = affine_surface_area(&ConvexBody::ball(3).unwrap(), &g).unwrap().value;
        assert!((v - 4.0 * PI).abs() < 1e-10);
        let q = affine_surface_area(&ConvexBody::bpn(4.0, 3).unwrap(), &g).unwrap().value;
        let c = bpn_asa_closed_form(4.0, 3).unwrap();
        assert!((q - c).abs() < 1e-5 * c, "{q} vs {c}");
    }

    #[test]
    fn ghsw_square() {
        let sq = ConvexBody::cube(2).unwrap();
        let g = SphereGrid::circle(4096);
        let disk = ghsw_candidate(&sq, 1.0 / 2f64.sqrt()).unwrap();
        assert!((affine_surface_area(&disk, &g).unwrap().value - 2.0 * PI).abs() < 1e-10);
        let rounded = ghsw_candidate(&sq, 1.2 / 2f64.sqrt()).unwrap();
        let a = affine_surface_area(&rounded, &g).unwrap().value;
        // Four arcs of the circle of radius 1.2 outside the lines |x| = 1, |y| = 1
        // are cut; the remaining arc angle is 2π − 8 arccos(1/1.2).
        let angle = 2.0 * PI - 8.0 * (1.0f64 / 1.2).acos();
        let expect = angle * 1.2f64.powf(2.0 / 3.0);
        assert!((a - expect).abs() < 1e-8, "{a} vs {expect}");
    }
}
