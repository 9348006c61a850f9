//! Gauss–Kronecker curvature and generalized second derivatives.
//!
//! Three independent routes to the curvature of a smooth boundary point:
//! the implicit formula `|∇Fᵀ cof(∇²F) ∇F| / |∇F|^{n+1}` (and its bordered
//! determinant twin), the graph formula `det ∇²f / (1 + |∇f|²)^{(d+2)/2}` for
//! a graph over `ℝ^d`, and the Dupin indicatrix: shallow slices rescaled by
//! `1/√(2Δ)` converge to an ellipsoid whose semi-axes are the principal radii.

use crate::body::{BoundaryPoint, ConvexBody, SmoothBody};
use crate::error::{Error, Result};
use crate::linalg::{axpy, cofactor, dot, norm};
use crate::prelude::*;
use crate::sphere::SphereGrid;
use nalgebra::{DMatrix, DVector};

/// Symmetric Hessians may be indefinite by at most this much.
const PSD_TOL: f64 = 1e-8;

/// `|gᵀ cof(H) g| / |g|^{n+1}` for a body `{F ≤ 0}` in `ℝⁿ`.
pub fn implicit_cofactor(gradient: &[f64], hessian: &DMatrix<f64>) -> Result<f64> {
    let n = gradient.len();
    let gn = norm(gradient);
    if !(gn > 0.0) {
        return Err(Error::ZeroGradient);
    }
    let g = DVector::from_column_slice(gradient);
    let c = cofactor(hessian);
    let num = g.dot(&(&c * &g));
    Ok(num.abs() / gn.powi(n as i32 + 1))
}

/// `|det [[H, g], [gᵀ, 0]]| / |g|^{n+1}`, the bordered-determinant form.
pub fn implicit_bordered(gradient: &[f64], hessian: &DMatrix<f64>) -> Result<f64> {
    let n = gradient.len();
    let gn = norm(gradient);
    if !(gn > 0.0) {
        return Err(Error::ZeroGradient);
    }
    let mut b = DMatrix::zeros(n + 1, n + 1);
    b.view_mut((0, 0), (n, n)).copy_from(hessian);
    for i in 0..n {
        b[(i, n)] = gradient[i];
        b[(n, i)] = gradient[i];
    }
    // Scale out |g| before the determinant to keep it well conditioned.
    let mut bs = b.clone();
    for i in 0..n {
        bs[(i, n)] /= gn;
        bs[(n, i)] /= gn;
    }
    Ok(bs.determinant().abs() / gn.powi(n as i32 - 1))
}

/// Curvature of the graph of a convex function over `ℝ^d` at a point with
/// the given gradient and Hessian: `det H / (1 + |g|²)^{(d+2)/2}`.
pub fn curvature_graph(gradient: &[f64], hessian: &DMatrix<f64>) -> Result<f64> {
    let d = gradient.len();
    if hessian.nrows() != d || hessian.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: hessian.nrows() });
    }
    let det = if d == 0 { 1.0 } else { hessian.determinant() };
    if det < -PSD_TOL {
        return Err(Error::NotPsd(det));
    }
    let g2 = dot(gradient, gradient);
    Ok(det.max(0.0) / (1.0 + g2).powf((d as f64 + 2.0) / 2.0))
}

/// Implicit-form curvature at a boundary point of a smooth body.
pub fn curvature_implicit(body: &SmoothBody, x: &[f64]) -> Result<f64> {
    if x.len() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: x.len() });
    }
    let e = body.eval(x);
    if e.value.abs() > 1e-9 {
        return Err(Error::NotOnBoundary(e.value));
    }
    if body.is_exceptional(x) {
        return Err(Error::CoordinateZero);
    }
    implicit_cofactor(&e.gradient, &e.hessian)
}

/// Closed-form curvature of `∂B_pⁿ`:
/// `(p−1)^{n−1} Π|x_i|^{p−2} / (Σ|x_i|^{2p−2})^{(n+1)/2}`.
pub fn bpn_curvature(p: f64, x: &[f64]) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::OutOfRange { what: "p", value: p });
    }
    let n = x.len() as f64;
    let s: f64 = x.iter().map(|v| v.abs().powf(p)).sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(Error::NotOnBoundary(s - 1.0));
    }
    if x.iter().any(|&v| v == 0.0) {
        return Err(Error::CoordinateZero);
    }
    let prod: f64 = x.iter().map(|v| v.abs().powf(p - 2.0)).product();
    let den: f64 = x.iter().map(|v| v.abs().powf(2.0 * p - 2.0)).sum();
    Ok((p - 1.0).powf(n - 1.0) * prod / den.powf((n + 1.0) / 2.0))
}

/// Curvature via the graph formula, with the boundary written locally as a
/// graph over the coordinate hyperplane most transverse to the normal. The
/// graph is solved numerically from `F` and differentiated by central
/// differences with step `h`.
pub fn curvature_graph_reparam(body: &SmoothBody, x: &[f64], h: f64) -> Result<f64> {
    let n = body.dim();
    let g = body.eval(x).gradient;
    let k = (0..n).max_by(|&a, &b| g[a].abs().partial_cmp(&g[b].abs()).unwrap()).unwrap();
    if g[k] == 0.0 {
        return Err(Error::ZeroGradient);
    }
    // Body lies below the graph when ∂F/∂x_k > 0; flip so the graph is convex.
    let sign = -g[k].signum();
    let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let solve = |shift: &[f64]| -> Result<f64> {
        let mut y = x.to_vec();
        for (j, &i) in others.iter().enumerate() {
            y[i] += shift[j];
        }
        // Newton on s ↦ F(y with y_k = s), started at x_k.
        let mut s = x[k];
        for _ in 0..100 {
            y[k] = s;
            let e = body.eval(&y);
            let d = e.gradient[k];
            if d == 0.0 {
                return Err(Error::ZeroGradient);
            }
            let step = e.value / d;
            s -= step;
            if step.abs() <= 1e-15 * s.abs().max(1.0) {
                break;
            }
        }
        Ok(sign * s)
    };
    let d = n - 1;
    let f0 = solve(&vec![0.0; d])?;
    let mut grad = vec![0.0; d];
    let mut hess = DMatrix::zeros(d, d);
    let e = |i: usize, s: f64| {
        let mut v = vec![0.0; d];
        v[i] = s;
        v
    };
    for i in 0..d {
        let fp = solve(&e(i, h))?;
        let fm = solve(&e(i, -h))?;
        grad[i] = (fp - fm) / (2.0 * h);
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let mut pp = vec![0.0; d];
            pp[i] = h;
            pp[j] = h;
            let mut pm = pp.clone();
            pm[j] = -h;
            let mut mp = pp.clone();
            mp[i] = -h;
            let mut mm = pm.clone();
            mm[i] = -h;
            let v = (solve(&pp)? - solve(&pm)? - solve(&mp)? + solve(&mm)?) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    curvature_graph(&grad, &hess)
}

/// One slice depth of the Dupin estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct DupinSlice {
    pub delta: f64,
    /// Rescaled slice boundary points in tangent coordinates.
    pub points: Vec<Vec<f64>>,
    /// Fitted semi-axes (empty when flagged as a cylinder).
    pub semi_axes: Vec<f64>,
    pub kappa: f64,
    pub cylinder: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DupinTrace {
    pub slices: Vec<DupinSlice>,
}

impl DupinTrace {
    /// Estimate at the smallest depth.
    pub fn estimate(&self) -> f64 {
        self.slices.last().map_or(0.0, |s| s.kappa)
    }
}

/// Curvature from the Dupin indicatrix. For each depth `Δ` the slice
/// `K ∩ {⟨z − x0, N⟩ = −Δ}` is sampled along rays in the tangent space,
/// rescaled by `1/√(2Δ)` and fitted by a quadric; `κ̂ = Π r_i^{-2}`.
pub fn dupin_curvature(body: &ConvexBody, x0: &BoundaryPoint, deltas: &[f64]) -> Result<DupinTrace> {
    let n = body.dim();
    if n < 2 {
        return Err(Error::DimensionUnsupported { op: "dupin curvature", dim: n });
    }
    let (x, normal) = refine_boundary_point(body, x0)?;
    let tangent = crate::linalg::orthonormal_complement(&normal);
    let d = n - 1;
    let dirs: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => SphereGrid::circle(64).directions().to_vec(),
        3 => SphereGrid::fibonacci(256).directions().to_vec(),
        _ => SphereGrid::random_symmetric(d, 512, 1).directions().to_vec(),
    };
    let mut slices = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if !(delta > 0.0) {
            return Err(Error::OutOfRange { what: "delta", value: delta });
        }
        let c = axpy(&x, -delta, &normal);
        let scale = 1.0 / (2.0 * delta).sqrt();
        let mut pts = Vec::with_capacity(dirs.len());
        for w in &dirs {
            let mut xi = vec![0.0; n];
            for (wj, e) in w.iter().zip(&tangent) {
                for (a, b) in xi.iter_mut().zip(e) {
                    *a += wj * b;
                }
            }
            let t = body.ray_exit(&c, &xi)?;
            pts.push(w.iter().map(|v| v * t * scale).collect::<Vec<f64>>());
        }
        slices.push(fit_indicatrix(delta, pts));
    }
    Ok(DupinTrace { slices })
}

/// Snap `x0` onto the boundary along the ray from an interior point and
/// recompute the normal there when possible.
fn refine_boundary_point(body: &ConvexBody, x0: &BoundaryPoint) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = body.interior_point();
    let dvec = crate::linalg::sub(&x0.point, &p);
    let Some(xi) = crate::linalg::normalized(&dvec) else {
        return Ok((x0.point.clone(), x0.normal.clone()));
    };
    let t = body.ray_exit(&p, &xi)?;
    let x = axpy(&p, t, &xi);
    if crate::linalg::distance(&x, &x0.point) > 1e-6 * body.scale() {
        return Err(Error::NotOnBoundary(crate::linalg::distance(&x, &x0.point)));
    }
    let normal = body.boundary_point(&x).map(|b| b.normal).unwrap_or_else(|_| x0.normal.clone());
    Ok((x, normal))
}

fn fit_indicatrix(delta: f64, points: Vec<Vec<f64>>) -> DupinSlice {
    let d = points[0].len();
    let cylinder = |points: Vec<Vec<f64>>, residual: f64| DupinSlice {
        delta,
        points,
        semi_axes: Vec::new(),
        kappa: 0.0,
        cylinder: true,
        residual,
    };
    if d == 1 {
        let r = 0.5 * (points[0][0] - points[1][0]).abs();
        if r * r > 1e6 || !r.is_finite() {
            return cylinder(points, 0.0);
        }
        return DupinSlice { delta, points, semi_axes: vec![r], kappa: 1.0 / (r * r), cylinder: false, residual: 0.0 };
    }
    // General quadric xᵀQx + lᵀx = 1.
    let nq = d * (d + 1) / 2;
    let cols = nq + d;
    let a = DMatrix::from_fn(points.len(), cols, |r, c| {
        let x = &points[r];
        if c < nq {
            let (i, j) = tri_index(c, d);
            if i == j { x[i] * x[i] } else { 2.0 * x[i] * x[j] }
        } else {
            x[c - nq]
        }
    });
    let Some(sol) = crate::linalg::least_squares(&a, &vec![1.0; points.len()]) else {
        return cylinder(points, f64::INFINITY);
    };
    let mut q = DMatrix::zeros(d, d);
    for c in 0..nq {
        let (i, j) = tri_index(c, d);
        q[(i, j)] = sol[c];
        q[(j, i)] = sol[c];
    }
    let l = DVector::from_column_slice(&sol[nq..]);
    let Some(qinv) = q.clone().try_inverse() else {
        return cylinder(points, f64::INFINITY);
    };
    let xc = -0.5 * (&qinv * &l);
    let m = &q / (1.0 + xc.dot(&(&q * &xc)));
    let eig = crate::linalg::symmetric_eigenvalues(&m);
    let lmin = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut residual: f64 = 0.0;
    let mut diameter: f64 = 0.0;
    for p in &points {
        let v = DVector::from_column_slice(p) - &xc;
        let r = v.norm();
        diameter = diameter.max(2.0 * r);
        let qv = v.dot(&(&m * &v));
        if qv > 0.0 {
            residual = residual.max(r * (qv.sqrt() - 1.0).abs() / qv.sqrt());
        } else {
            residual = f64::INFINITY;
        }
    }
    if !(lmin > 1e-6) || residual > 1e-3 * diameter {
        return cylinder(points, residual);
    }
    let semi_axes = eig.iter().map(|l| 1.0 / l.sqrt()).collect();
    DupinSlice { delta, points, semi_axes, kappa: m.determinant(), cylinder: false, residual }
}

fn tri_index(c: usize, d: usize) -> (usize, usize) {
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            if k == c {
                return (i, j);
            }
            k += 1;
        }
    }
    unreachable!()
}

/// A convex function on an open interval.
pub struct ConvexScalarFunction<F: Fn(f64) -> f64> {
    pub f: F,
    pub domain: (f64, f64),
}

/// `∂f(x) = [lower, upper]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Subdifferential {
    pub lower: f64,
    pub upper: f64,
}

impl Subdifferential {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Generalized second derivative with its residual trace.
#[derive(Clone, Debug, PartialEq)]
pub struct HessianEstimate {
    pub matrix: DMatrix<f64>,
    /// Largest deviation `|ξ − ∇f(x0) − d²f (x − x0)|` over all probes.
    pub residual: f64,
    /// `(r, max deviation at radius r / r)` per probe radius.
    pub trace: Vec<(f64, f64)>,
}

const LADDER: usize = 40;

impl<F: Fn(f64) -> f64> ConvexScalarFunction<F> {
    pub fn new(f: F, domain: (f64, f64)) -> Self {
        Self { f, domain }
    }

    /// One-sided derivatives by a geometric ladder of difference quotients
    /// `r_k = r0 2^{-k}` with Richardson refinement. The refined value whose
    /// neighbours agree best (allowing for rounding noise `~ ε|f|/r`) is
    /// returned. Monotonicity of the quotients is checked as a convexity test.
    pub fn subdifferential(&self, x: f64) -> Result<Subdifferential> {
        let (lo, hi) = self.domain;
        if !(x > lo && x < hi) {
            return Err(Error::OutOfRange { what: "x", value: x });
        }
        let r0 = 0.5 * (x - lo).min(hi - x).min(1.0);
        let fx = (self.f)(x);
        let upper = self.one_sided(x, fx, r0, 1.0)?;
        let lower = self.one_sided(x, fx, r0, -1.0)?;
        let noise = 1e-7 * (1.0 + upper.abs().max(lower.abs()));
        if lower > upper + noise {
            return Err(Error::NonConvex(format!("left derivative {lower} exceeds right derivative {upper} at {x}")));
        }
        Ok(Subdifferential { lower: lower.min(upper), upper: upper.max(lower) })
    }

    fn one_sided(&self, x: f64, fx: f64, r0: f64, dir: f64) -> Result<f64> {
        let q: Vec<f64> = (0..=LADDER + 1)
            .map(|k| {
                let h = r0 * 0.5f64.powi(k as i32);
                ((self.f)(x + dir * h) - fx) / h * dir
            })
            .collect();
        let fscale = fx.abs().max(1e-300);
        let noise = |k: usize| 4.0 * f64::EPSILON * (fscale + q[0].abs() * r0) / (r0 * 0.5f64.powi(k as i32));
        // Convexity: right quotients decrease (left quotients increase) as h shrinks.
        for k in 0..LADDER {
            let jump = dir * (q[k + 1] - q[k]);
            if jump > 1e-9 * (1.0 + q[k].abs()) + 4.0 * noise(k + 1) {
                return Err(Error::NonConvex(format!("difference quotients not monotone at {x}")));
            }
        }
        let rich: Vec<f64> = (0..=LADDER).map(|k| 2.0 * q[k + 1] - q[k]).collect();
        let mut best = (f64::INFINITY, q[LADDER]);
        for k in 1..=LADDER {
            let score = (rich[k] - rich[k - 1]).abs() + noise(k + 1);
            if score < best.0 {
                best = (score, rich[k]);
            }
        }
        Ok(best.1)
    }

    /// Least-squares slope of subgradients against displacement over probes
    /// `x0 ± r` for every radius (both one-sided derivatives are used).
    pub fn generalized_hessian(&self, x0: f64, radii: &[f64]) -> Result<HessianEstimate> {
        let g0 = self.subdifferential(x0)?.midpoint();
        let mut samples: Vec<(f64, f64, f64)> = Vec::new();
        for &r in radii {
            for s in [1.0, -1.0] {
                let dx = s * r;
                let sd = self.subdifferential(x0 + dx)?;
                samples.push((r, dx, sd.lower - g0));
                samples.push((r, dx, sd.upper - g0));
            }
        }
        let num: f64 = samples.iter().map(|(_, dx, dg)| dx * dg).sum();
        let den: f64 = samples.iter().map(|(_, dx, _)| dx * dx).sum();
        let a = if den > 0.0 { num / den } else { 0.0 };
        let mut residual: f64 = 0.0;
        let mut trace = Vec::with_capacity(radii.len());
        for &r in radii {
            let m = samples
                .iter()
                .filter(|(rr, _, _)| *rr == r)
                .map(|(_, dx, dg)| (dg - a * dx).abs())
                .fold(0.0, f64::max);
            residual = residual.max(m);
            trace.push((r, m / r));
        }
        Ok(HessianEstimate { matrix: DMatrix::from_element(1, 1, a), residual, trace })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Convex on [-1, 1]: interpolates x² at ±1/n, linear in between.
    fn staircase(x: f64) -> f64 {
        let a = x.abs();
        if a == 0.0 {
            return 0.0;
        }
        let n = (1.0 / a).floor();
        if (1.0 / n - a).abs() < 1e-300 {
            return a * a;
        }
        (2.0 * n + 1.0) / (n * (n + 1.0)) * a - 1.0 / (n * (n + 1.0))
    }

    #[test]
    fn sphere_curvature_forms() {
        let b = SmoothBody::ball(3, 1.0).unwrap();
        let x = [0.6, 0.0, 0.8];
        assert!((curvature_implicit(&b, &x).unwrap() - 1.0).abs() < 1e-12);
        let e = b.eval(&x);
        assert!((implicit_bordered(&e.gradient, &e.hessian).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn graph_formula_examples() {
        let k = curvature_graph(&[0.0], &DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
        // Hemisphere f = 1 − √(1 − x²) at 0.5.
        let x: f64 = 0.5;
        let s = (1.0 - x * x).sqrt();
        let k = curvature_graph(&[x / s], &DMatrix::from_element(1, 1, 1.0 / (s * s * s))).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        assert!(curvature_graph(&[0.0], &DMatrix::from_element(1, 1, -1.0)).is_err());
    }

    #[test]
    fn ellipse_vertex_curvature() {
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        assert!((curvature_implicit(&e, &[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((curvature_graph_reparam(&e, &[2.0, 0.0], 1e-4).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn bpn_matches_implicit() {
        let p = 4.0;
        let c = 2f64.powf(-0.25);
        let b = SmoothBody::lp_ball(p, 2).unwrap();
        let k1 = bpn_curvature(p, &[c, c]).unwrap();
        let k2 = curvature_implicit(&b, &[c, c]).unwrap();
        assert!((k1 - k2).abs() < 1e-12);
        assert_eq!(bpn_curvature(p, &[1.0, 0.0]), Err(Error::CoordinateZero));
    }

    #[test]
    fn subdifferential_examples() {
        let abs = ConvexScalarFunction::new(|x: f64| x.abs(), (-1.0, 1.0));
        let s = abs.subdifferential(0.0).unwrap();
        assert!((s.lower + 1.0).abs() < 1e-12 && (s.upper - 1.0).abs() < 1e-12);
        let sq = ConvexScalarFunction::new(|x: f64| x * x, (-3.0, 3.0));
        let s = sq.subdifferential(1.0).unwrap();
        assert!((s.lower - 2.0).abs() < 1e-8 && (s.upper - 2.0).abs() < 1e-8);
        let st = ConvexScalarFunction::new(staircase, (-1.0, 1.0));
        let s = st.subdifferential(0.75).unwrap();
        assert!((s.lower - 1.5).abs() < 1e-9 && (s.upper - 1.5).abs() < 1e-9);
        let s = st.subdifferential(0.5).unwrap();
        assert!((s.lower - 5.0 / 6.0).abs() < 1e-9 && (s.upper - 1.5).abs() < 1e-9);
        let bad = ConvexScalarFunction::new(|x: f64| -x * x, (-1.0, 1.0));
        assert!(bad.subdifferential(0.2).is_err());
    }

    #[test]
    fn generalized_hessians() {
        let radii: Vec<f64> = (0..8).map(|k| 1e-3 * 0.5f64.powi(k)).collect();
        let sq = ConvexScalarFunction::new(|x: f64| x * x, (-1.0, 1.0));
        let h = sq.generalized_hessian(0.3, &radii).unwrap();
        assert!((h.matrix[(0, 0)] - 2.0).abs() < 1e-6);
        let st = ConvexScalarFunction::new(staircase, (-1.0, 1.0));
        let h = st.generalized_hessian(0.0, &radii).unwrap();
        assert!((h.matrix[(0, 0)] - 2.0).abs() < 0.1, "{}", h.matrix[(0, 0)]);
        // Piece slopes differ from 2x by at most about r², so the relative
        // deviation at radius r is O(r).
        assert!(h.trace.iter().all(|&(r, d)| d <= 2.0 * r + 1e-9), "{:?}", h.trace);
        let abs = ConvexScalarFunction::new(|x: f64| x.abs(), (-1.0, 1.0));
        let h = abs.generalized_hessian(0.0, &radii).unwrap();
        assert!(h.trace.iter().all(|(_, q)| *q > 1.0));
    }

    #[test]
    fn dupin_sphere_and_square() {
        let b = ConvexBody::ball(3).unwrap();
        let bp = b.boundary_point(&[0.0, 0.6, 0.8]).unwrap();
        let t = dupin_curvature(&b, &bp, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert!((t.estimate() - 1.0).abs() < 5e-3, "{}", t.estimate());
        let c = ConvexBody::cube(3).unwrap();
        let bp = c.boundary_point(&[1.0, 0.1, -0.2]).unwrap();
        let t = dupin_curvature(&c, &bp, &[1e-2, 1e-4]).unwrap();
        assert!(t.slices.iter().all(|s| s.cylinder && s.kappa == 0.0));
    }
}
