use super::{Halfspace, SmoothBody};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::prelude::*;
use crate::quadrature::{CompensatedSum, GaussLegendre};
use core::f64::consts::PI;

/// Which part of a clipped body's boundary a ray leaves through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPiece {
    Smooth,
    Cut(usize),
}

/// A smooth body intersected with finitely many halfspaces. Boundary points
/// on the cut faces are flat; the rest inherits the smooth structure.
#[derive(Clone, Debug, PartialEq)]
pub struct ClippedBody {
    base: SmoothBody,
    cuts: Vec<Halfspace>,
    interior: Vec<f64>,
}

/// Angular resolution for locating planar vertices before bisection.
const SCAN: usize = 4096;

impl ClippedBody {
    pub fn new(base: SmoothBody, cuts: Vec<Halfspace>) -> Result<Self> {
        let dim = base.dim();
        for h in &cuts {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        let interior = find_interior(&base, &cuts).ok_or(Error::EmptyIntersection)?;
        Ok(Self { base, cuts, interior })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &SmoothBody {
        &self.base
    }

    pub fn cuts(&self) -> &[Halfspace] {
        &self.cuts
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.base.contains(x) && self.cuts.iter().all(|h| h.excess(x) <= 0.0)
    }

    /// Distance from an interior `p` to the boundary along unit `xi`, and the
    /// piece that is hit first.
    pub fn ray_exit(&self, p: &[f64], xi: &[f64]) -> (f64, BoundaryPiece) {
        let mut best = (self.base.ray_exit(p, xi), BoundaryPiece::Smooth);
        for (j, h) in self.cuts.iter().enumerate() {
            let d = dot(&h.normal, xi);
            if d > 0.0 {
                let t = -h.excess(p) / d;
                if t < best.0 {
                    best = (t, BoundaryPiece::Cut(j));
                }
            }
        }
        best
    }

    /// Boundary point seen from the interior point at planar angle `theta`.
    pub fn boundary_at_angle(&self, theta: f64) -> (Vec<f64>, BoundaryPiece) {
        let xi = [theta.cos(), theta.sin()];
        let (t, piece) = self.ray_exit(&self.interior, &xi);
        (axpy(&self.interior, t, &xi), piece)
    }

    /// Planar only: angles (seen from the interior point, in `[0, 2π)`) at
    /// which the boundary switches pieces, i.e. the vertices.
    pub fn vertex_angles(&self) -> Vec<f64> {
        if self.dim() != 2 {
            return Vec::new();
        }
        let label = |th: f64| self.boundary_at_angle(th).1;
        let step = 2.0 * PI / SCAN as f64;
        let mut out = Vec::new();
        let mut prev = label(0.0);
        for k in 1..=SCAN {
            let th = k as f64 * step;
            let cur = label(th);
            if cur != prev {
                let (mut lo, mut hi) = (th - step, th);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if label(mid) == prev { lo = mid } else { hi = mid }
                }
                out.push((0.5 * (lo + hi)) % (2.0 * PI));
            }
            prev = cur;
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        dot(&self.support_point(u), u)
    }

    /// A maximizer of `⟨x, u⟩` over the body.
    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        let sp = self.base.support_point(u);
        if self.cuts.iter().all(|h| h.excess(&sp) <= 1e-12) {
            return sp;
        }
        if self.dim() == 2 {
            let mut best = (f64::NEG_INFINITY, sp);
            for &th in &self.vertex_angles() {
                let x = self.boundary_at_angle(th).0;
                let v = dot(&x, u);
                if v > best.0 {
                    best = (v, x);
                }
            }
            return best.1;
        }
        self.support_search(u)
    }

    /// Maximize `⟨x(ξ), u⟩` over boundary points `x(ξ)` seen from the
    /// interior point: a coarse sphere scan followed by compass search.
    fn support_search(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let p = &self.interior;
        let phi = |xi: &[f64]| {
            let (t, _) = self.ray_exit(p, xi);
            dot(p, u) + t * dot(xi, u)
        };
        let grid = crate::sphere::SphereGrid::with_size(n, 2000);
        let mut best_xi = grid.directions()[0].clone();
        let mut best = f64::NEG_INFINITY;
        for d in grid.directions() {
            let v = phi(d);
            if v > best {
                best = v;
                best_xi = d.clone();
            }
        }
        let mut step = 0.1;
        while step > 1e-12 {
            let basis = crate::linalg::orthonormal_complement(&best_xi);
            let mut improved = false;
            for e in &basis {
                for s in [step, -step] {
                    if let Some(c) = crate::linalg::normalized(&axpy(&best_xi, s, e)) {
                        let v = phi(&c);
                        if v > best {
                            best = v;
                            best_xi = c;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        axpy(p, self.ray_exit(p, &best_xi).0, &best_xi)
    }

    /// Volume by integrating `ρ^n / n` around the interior point: piecewise
    /// Gauss–Legendre between vertices in the plane, a product rule in 3-D.
    pub fn volume(&self) -> Result<f64> {
        let p = self.interior.clone();
        match self.dim() {
            2 => Ok(self.planar_integral(|t, _| 0.5 * t * t)),
            3 => {
                let g = crate::sphere::SphereGrid::gauss_product(96, 192);
                Ok(g.integrate(|xi| self.ray_exit(&p, xi).0.powi(3) / 3.0))
            }
            d => Err(Error::DimensionUnsupported { op: "clipped body volume", dim: d }),
        }
    }

    pub fn centroid(&self) -> Result<Vec<f64>> {
        let p = self.interior.clone();
        let vol = self.volume()?;
        match self.dim() {
            2 => {
                let mx = self.planar_integral(|t, th| t * t * t / 3.0 * th.cos());
                let my = self.planar_integral(|t, th| t * t * t / 3.0 * th.sin());
                Ok(vec![p[0] + mx / vol, p[1] + my / vol])
            }
            _ => {
                let g = crate::sphere::SphereGrid::gauss_product(96, 192);
                let mut c = p.clone();
                for (k, ck) in c.iter_mut().enumerate() {
                    *ck += g.integrate(|xi| self.ray_exit(&p, xi).0.powi(4) / 4.0 * xi[k]) / vol;
                }
                Ok(c)
            }
        }
    }

    /// `∫_0^{2π} g(ρ(θ), θ) dθ`, split at the vertices.
    fn planar_integral<G: Fn(f64, f64) -> f64>(&self, g: G) -> f64 {
        let rule = GaussLegendre::new(48);
        let mut cuts = self.vertex_angles();
        if cuts.is_empty() {
            cuts.push(0.0);
        }
        let mut s = CompensatedSum::new();
        for i in 0..cuts.len() {
            let a = cuts[i];
            let b = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + 2.0 * PI };
            let pieces = 8;
            for k in 0..pieces {
                let lo = a + (b - a) * k as f64 / pieces as f64;
                let hi = a + (b - a) * (k + 1) as f64 / pieces as f64;
                s.add(rule.integrate(lo, hi, |th| {
                    let xi = [th.cos(), th.sin()];
                    g(self.ray_exit(&self.interior, &xi).0, th)
                }));
            }
        }
        s.value()
    }

    /// Upper bound on the distance from the interior point to the boundary.
    pub fn outer_radius(&self) -> f64 {
        norm(&crate::linalg::sub(&self.base.center(), &self.interior)) + self.base.circumradius()
    }
}

/// A point with positive margin to the base boundary and every cut, searched
/// along the segment from the base center to the Chebyshev center of the
/// cuts restricted to the base's bounding box.
fn find_interior(base: &SmoothBody, cuts: &[Halfspace]) -> Option<Vec<f64>> {
    let n = base.dim();
    let c0 = base.center();
    let mut normals: Vec<Vec<f64>> = cuts.iter().map(|h| h.normal.clone()).collect();
    let mut offsets: Vec<f64> = cuts.iter().map(|h| h.offset).collect();
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            offsets.push(base.support(&e));
            normals.push(e);
        }
    }
    let c1 = crate::lp::chebyshev_center(&normals, &offsets).map(|(c, _)| c).unwrap_or_else(|| c0.clone());
    let margin = |x: &[f64]| -> f64 {
        let d = crate::linalg::sub(x, &c0);
        let r = norm(&d);
        let base_margin = if r == 0.0 {
            base.circumradius()
        } else {
            let xi: Vec<f64> = d.iter().map(|v| v / r).collect();
            base.ray_exit(&c0, &xi) - r
        };
        cuts.iter().fold(base_margin, |m, h| m.min(-h.excess(x)))
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..=200 {
        let s = k as f64 / 200.0;
        let x: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| a + s * (b - a)).collect();
        let m = margin(&x);
        if best.as_ref().is_none_or(|(bm, _)| m > *bm) {
            best = Some((m, x));
        }
    }
    let (m, x) = best?;
    if m > 1e-9 { Some(x) } else { None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk_in_square(r: f64) -> ClippedBody {
        let mut cuts = Vec::new();
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            cuts.push(Halfspace::new(vec![a, b], 1.0).unwrap());
        }
        ClippedBody::new(SmoothBody::ball(2, r).unwrap(), cuts).unwrap()
    }

    #[test]
    fn rounded_square_vertices_and_volume() {
        let r = 1.2;
        let k = disk_in_square(r);
        assert_eq!(k.vertex_angles().len(), 8);
        // Square minus four circular-segment corners... computed as disk
        // minus the four segments beyond the lines x = ±1, y = ±1.
        let seg = r * r * (1.0 / r).acos() - (r * r - 1.0).sqrt();
        let expect = PI * r * r - 4.0 * seg;
        assert!((k.volume().unwrap() - expect).abs() < 1e-12, "{}", k.volume().unwrap());
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((k.support(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!((k.support(&[s, s]) - r).abs() < 1e-12);
    }

    #[test]
    fn disjoint_cut_is_empty() {
        let cut = Halfspace::new(vec![1.0, 0.0], -2.0).unwrap();
        assert_eq!(ClippedBody::new(SmoothBody::ball(2, 1.0).unwrap(), vec![cut]), Err(Error::EmptyIntersection));
    }

    #[test]
    fn half_ball_in_space() {
        let cut = Halfspace::new(vec![0.0, 0.0, 1.0], 0.0).unwrap();
        let k = ClippedBody::new(SmoothBody::ball(3, 1.0).unwrap(), vec![cut]).unwrap();
        assert!((k.support(&[0.0, 0.0, 1.0])).abs() < 1e-9);
        assert!((k.support(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-12);
        let v = k.volume().unwrap();
        assert!((v - 2.0 * PI / 3.0).abs() < 1e-3, "{v}");
    }
}
