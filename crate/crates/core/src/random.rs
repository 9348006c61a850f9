//! Random polytopes in and on convex bodies, and best approximation of the
//! disk by inscribed polygons.
//!
//! Every replicate draws from its own ChaCha8 stream keyed by
//! `(seed, replicate)`, and the point sets for increasing `N` are nested
//! prefixes of one stream, so curves over `N` use common random numbers and
//! results do not depend on the number of worker threads.

use crate::body::{BoundaryPiece, ConvexBody};
use crate::error::{Error, Result};
use crate::functionals::MC_CHUNK;
use crate::linalg::{axpy, dot};
use crate::prelude::*;
use crate::quadrature::CompensatedSum;
use crate::special::{ball_volume, gamma, sphere_area};
use crate::sphere::SphereGrid;
use alloc::sync::Arc;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream offset separating boundary draws from interior draws.
const BOUNDARY_STREAM: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq)]
pub struct InteriorSample {
    pub points: Vec<Vec<f64>>,
    pub acceptance: f64,
}

/// Uniform points in `K` by rejection from the bounding box.
pub fn sample_interior(k: &ConvexBody, count: usize, seed: u64) -> Result<InteriorSample> {
    let (lo, hi) = k.bounding_box()?;
    let chunks = count.div_ceil(MC_CHUNK);
    let parts = crate::par::map_indexed(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let want = if c + 1 == chunks { count - c * MC_CHUNK } else { MC_CHUNK };
        draw_interior(k, &lo, &hi, want, &mut rng)
    });
    let mut points = Vec::with_capacity(count);
    let mut tries = 0usize;
    for p in parts {
        let (pts, t) = p?;
        points.extend(pts);
        tries += t;
    }
    let acceptance = if tries == 0 { 1.0 } else { count as f64 / tries as f64 };
    Ok(InteriorSample { points, acceptance })
}

fn draw_interior<R: Rng>(k: &ConvexBody, lo: &[f64], hi: &[f64], want: usize, rng: &mut R) -> Result<(Vec<Vec<f64>>, usize)> {
    let n = lo.len();
    let mut out = Vec::with_capacity(want);
    let mut tries = 0usize;
    while out.len() < want {
        let x: Vec<f64> = (0..n).map(|i| lo[i] + (hi[i] - lo[i]) * rng.random::<f64>()).collect();
        tries += 1;
        if k.contains(&x) {
            out.push(x);
        }
        if tries >= 10_000 && (out.len() as f64) < 1e-3 * tries as f64 {
            return Err(Error::LowAcceptance(out.len() as f64 / tries as f64));
        }
    }
    Ok((out, tries))
}

/// A probability density on `∂K` with respect to surface measure.
#[derive(Clone)]
pub struct BoundaryDensity {
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    /// Boundary nodes the density was checked on.
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    /// Surface measure of each node.
    pub weights: Vec<f64>,
}

impl core::fmt::Debug for BoundaryDensity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BoundaryDensity").field("nodes", &self.points.len()).finish()
    }
}

fn density_grid(n: usize) -> SphereGrid {
    match n {
        2 => SphereGrid::circle(8192),
        _ => SphereGrid::gauss_product(96, 192),
    }
}

impl BoundaryDensity {
    /// Wraps a density that must already integrate to 1 (within 1e-9).
    pub fn new<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(k: &ConvexBody, f: F) -> Result<Self> {
        let d = Self::unnormalized(k, Arc::new(f))?;
        let mass = d.mass();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::UnnormalizedDensity(mass));
        }
        Ok(d)
    }

    /// Divides a nonnegative weight function by its boundary integral.
    pub fn normalized<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(k: &ConvexBody, f: F) -> Result<Self> {
        let raw = Self::unnormalized(k, Arc::new(f))?;
        let mass = raw.mass();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::UnnormalizedDensity(mass));
        }
        let g = raw.f.clone();
        let mut d = Self::unnormalized(k, Arc::new(move |x: &[f64]| g(x) / mass))?;
        // Renormalize against rounding in the first pass.
        let m2 = d.mass();
        if (m2 - 1.0).abs() > 1e-12 {
            let g = d.f.clone();
            d = Self::unnormalized(k, Arc::new(move |x: &[f64]| g(x) / m2))?;
        }
        Ok(d)
    }

    pub fn uniform(k: &ConvexBody) -> Result<Self> {
        Self::normalized(k, |_| 1.0)
    }

    fn unnormalized(k: &ConvexBody, f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>) -> Result<Self> {
        let nodes = crate::functionals::boundary_nodes(k, &density_grid(k.dim()))?;
        let mut points = Vec::with_capacity(nodes.len());
        let mut values = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        for b in nodes {
            let v = f(&b.point);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange { what: "density value", value: v });
            }
            values.push(v);
            weights.push(b.weight);
            points.push(b.point);
        }
        Ok(Self { f, points, values, weights })
    }

    /// `∫ f dμ_{∂K}` on the nodes.
    pub fn mass(&self) -> f64 {
        crate::quadrature::compensated_sum(self.values.iter().zip(&self.weights).map(|(v, w)| v * w))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `f_as = κ^{1/(n+1)} / as(K)`, the normalized affine surface area density.
pub fn asa_density(k: &ConvexBody) -> Result<BoundaryDensity> {
    let base = match k {
        ConvexBody::Smooth(b) => b.clone(),
        _ => return Err(Error::UnsupportedRepresentation("affine surface area density needs a smooth body")),
    };
    let e = 1.0 / (k.dim() as f64 + 1.0);
    let raw = BoundaryDensity::unnormalized(k, Arc::new(|_: &[f64]| 1.0))?;
    let asa: f64 = crate::quadrature::compensated_sum(
        raw.points.iter().zip(&raw.weights).map(|(x, w)| w * base.curvature(x).map(|c| c.powf(e)).unwrap_or(0.0)),
    );
    if !(asa > 0.0) {
        return Err(Error::ZeroAffineSurfaceArea);
    }
    BoundaryDensity::normalized(k, move |x| base.curvature(x).map(|c| c.powf(e)).unwrap_or(0.0))
}

/// Inverse-CDF table over the angle seen from the interior point (plane) or
/// a rejection bound over directions (space).
struct BoundarySampler<'a> {
    k: &'a ConvexBody,
    density: &'a BoundaryDensity,
    p: Vec<f64>,
    angles: Vec<f64>,
    cdf: Vec<f64>,
    bound: f64,
}

impl<'a> BoundarySampler<'a> {
    fn new(k: &'a ConvexBody, density: &'a BoundaryDensity) -> Result<Self> {
        let n = k.dim();
        if !(2..=3).contains(&n) {
            return Err(Error::DimensionUnsupported { op: "boundary sampling", dim: n });
        }
        let mass = density.mass();
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::UnnormalizedDensity(mass));
        }
        let p = k.interior_point();
        let mut s = Self { k, density, p, angles: Vec::new(), cdf: Vec::new(), bound: 0.0 };
        if n == 2 {
            let m = 1 << 14;
            let h = 2.0 * PI / m as f64;
            let g: Vec<f64> = (0..=m).map(|i| s.jacobian_density(&[(i as f64 * h).cos(), (i as f64 * h).sin()])).collect::<Result<_>>()?;
            let mut acc = 0.0;
            s.cdf.push(0.0);
            s.angles.push(0.0);
            for i in 0..m {
                acc += 0.5 * h * (g[i] + g[i + 1]);
                s.cdf.push(acc);
                s.angles.push((i + 1) as f64 * h);
            }
        } else {
            let grid = SphereGrid::fibonacci(8192);
            let mut b = 0.0f64;
            for d in grid.directions() {
                b = b.max(s.jacobian_density(d)?);
            }
            s.bound = 1.25 * b;
        }
        Ok(s)
    }

    /// Boundary point and `f(x) ρ^{n−1} / ⟨ξ, N⟩` in direction `ξ`.
    fn exit(&self, xi: &[f64]) -> Result<(Vec<f64>, f64)> {
        let n = xi.len();
        let (t, normal) = match self.k {
            ConvexBody::Smooth(b) => {
                let t = b.ray_exit(&self.p, xi);
                (t, b.normal(&axpy(&self.p, t, xi))?)
            }
            ConvexBody::Clipped(c) => {
                let (t, piece) = c.ray_exit(&self.p, xi);
                match piece {
                    BoundaryPiece::Smooth => (t, c.base().normal(&axpy(&self.p, t, xi))?),
                    BoundaryPiece::Cut(j) => (t, c.cuts()[j].normal.clone()),
                }
            }
            _ => return Err(Error::UnsupportedRepresentation("boundary sampling needs a curved body")),
        };
        let x = axpy(&self.p, t, xi);
        let g = self.density.eval(&x) * t.powi(n as i32 - 1) / dot(xi, &normal);
        Ok((x, g))
    }

    fn jacobian_density(&self, xi: &[f64]) -> Result<f64> {
        self.exit(xi).map(|e| e.1)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Result<Vec<f64>> {
        if self.k.dim() == 2 {
            let u: f64 = rng.random::<f64>() * self.cdf[self.cdf.len() - 1];
            let i = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
            let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
            let s = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
            let th = self.angles[i - 1] + s * (self.angles[i] - self.angles[i - 1]);
            return Ok(self.exit(&[th.cos(), th.sin()])?.0);
        }
        for _ in 0..1_000_000 {
            let v: Vec<f64> = (0..3).map(|_| crate::sphere::gaussian(rng)).collect();
            let Some(xi) = crate::linalg::normalized(&v) else { continue };
            let (x, g) = self.exit(&xi)?;
            if rng.random::<f64>() * self.bound <= g {
                return Ok(x);
            }
        }
        Err(Error::LowAcceptance(0.0))
    }
}

/// Points on `∂K` distributed with density `f` against surface measure.
pub fn sample_boundary(k: &ConvexBody, f: &BoundaryDensity, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let sampler = BoundarySampler::new(k, f)?;
    let chunks = count.div_ceil(MC_CHUNK);
    let parts = crate::par::map_indexed(chunks, |c| -> Result<Vec<Vec<f64>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(BOUNDARY_STREAM + c as u64);
        let want = if c + 1 == chunks { count - c * MC_CHUNK } else { MC_CHUNK };
        (0..want).map(|_| sampler.draw(&mut rng)).collect()
    });
    let mut out = Vec::with_capacity(count);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Volume of the convex hull of points in the plane or in space; 0 for
/// affinely dependent sets.
pub fn hull_volume(points: &[Vec<f64>]) -> Result<f64> {
    let Some(first) = points.first() else { return Ok(0.0) };
    match first.len() {
        2 => {
            let p: Vec<[f64; 2]> = points.iter().map(|x| [x[0], x[1]]).collect();
            Ok(crate::hull::hull_area_2d(&p))
        }
        3 => {
            let p: Vec<[f64; 3]> = points.iter().map(|x| [x[0], x[1], x[2]]).collect();
            Ok(crate::hull::hull_volume_3d(&p))
        }
        d => Err(Error::DimensionUnsupported { op: "hull volume", dim: d }),
    }
}

/// Mean volume deficits of random polytopes over a list of `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeficitCurve {
    pub n_values: Vec<usize>,
    /// `vol(K) − Ê`.
    pub mean_deficit: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Deficit scaled so that it tends to the theorem's limit.
    pub normalized: Vec<f64>,
    pub normalized_stderr: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
}

/// A deficit curve with its fitted asymptotics.
#[derive(Clone, Debug, PartialEq)]
pub struct RanPolEstimate {
    pub curve: DeficitCurve,
    /// Slope of `log deficit` against `log N` through the two largest `N`.
    pub slope: f64,
    /// Limit of the normalized deficit, extrapolated from the two largest `N`.
    pub limit: f64,
    pub limit_stderr: f64,
    /// The theorem's value of the limit.
    pub reference: f64,
}

/// `c_n` of the interior random polytope theorem:
/// `c_n · (vol(K) − E(K, N)) / (vol(K)/N)^{2/(n+1)} → as(K)`.
pub fn ranpol1_constant(n: usize) -> f64 {
    let nf = n as f64;
    let fact = gamma(nf + 2.0);
    2.0 * (ball_volume(n - 1) / (nf + 1.0)).powf(2.0 / (nf + 1.0)) * (nf + 3.0) * fact
        / ((nf * nf + nf + 2.0) * (nf * nf + 1.0) * gamma((nf * nf + 1.0) / (nf + 1.0)))
}

/// `c_n` of the boundary random polytope theorem, with
/// `vol_0(∂B¹) = 2` in the plane.
pub fn ranpol2_constant(n: usize) -> f64 {
    let nf = n as f64;
    let e = 2.0 / (nf - 1.0);
    (nf - 1.0).powf((nf + 1.0) / (nf - 1.0)) * gamma(nf + 1.0 + e) / (2.0 * gamma(nf + 2.0) * sphere_area(n - 1).powf(e))
}

/// Per-replicate hull volumes for each `N` (nested prefixes), in replicate
/// order.
fn replicate_volumes<G>(n_list: &[usize], replicates: usize, seed: u64, draw: G) -> Result<Vec<Vec<f64>>>
where
    G: Fn(&mut ChaCha8Rng, usize) -> Result<Vec<Vec<f64>>> + Sync + Send,
{
    let nmax = *n_list.iter().max().ok_or(Error::OutOfRange { what: "N list length", value: 0.0 })?;
    let rows = crate::par::map_indexed(replicates, |r| -> Result<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let pts = draw(&mut rng, nmax)?;
        n_list.iter().map(|&m| hull_volume(&pts[..m])).collect()
    });
    rows.into_iter().collect()
}

fn mean_and_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut s = CompensatedSum::new();
    let mut cnt = 0usize;
    for x in xs.clone() {
        s.add(x);
        cnt += 1;
    }
    let mean = s.value() / cnt as f64;
    let mut v = CompensatedSum::new();
    for x in xs {
        v.add((x - mean) * (x - mean));
    }
    let var = if cnt > 1 { v.value() / (cnt - 1) as f64 } else { 0.0 };
    (mean, (var / cnt as f64).sqrt())
}

fn build_curve(
    vol: f64,
    n_list: &[usize],
    volumes: &[Vec<f64>],
    seed: u64,
    scale: impl Fn(usize) -> f64,
) -> DeficitCurve {
    let reps = volumes.len();
    let mut curve = DeficitCurve {
        n_values: n_list.to_vec(),
        mean_deficit: Vec::new(),
        stderr: Vec::new(),
        normalized: Vec::new(),
        normalized_stderr: Vec::new(),
        replicates: reps,
        seed,
    };
    for (j, &m) in n_list.iter().enumerate() {
        let (mean, se) = mean_and_stderr(volumes.iter().map(|r| vol - r[j]));
        curve.mean_deficit.push(mean);
        curve.stderr.push(se);
        curve.normalized.push(scale(m) * mean);
        curve.normalized_stderr.push(scale(m) * se);
    }
    curve
}

/// Slope through the two largest `N` and the limit of `normalized` under an
/// `N^{-gamma}` correction.
fn fit(curve: &DeficitCurve, gamma: f64) -> (f64, f64, f64) {
    let mut idx: Vec<usize> = (0..curve.n_values.len()).collect();
    idx.sort_by_key(|&i| curve.n_values[i]);
    let k = idx.len();
    if k < 2 {
        let i = idx[0];
        return (f64::NAN, curve.normalized[i], curve.normalized_stderr[i]);
    }
    let (a, b) = (idx[k - 2], idx[k - 1]);
    let (n1, n2) = (curve.n_values[a] as f64, curve.n_values[b] as f64);
    let slope = (curve.mean_deficit[b].ln() - curve.mean_deficit[a].ln()) / (n2.ln() - n1.ln());
    let r = (n2 / n1).powf(gamma);
    let limit = (r * curve.normalized[b] - curve.normalized[a]) / (r - 1.0);
    let se = ((r * curve.normalized_stderr[b]).powi(2) + curve.normalized_stderr[a].powi(2)).sqrt() / (r - 1.0);
    (slope, limit, se)
}

fn check_n_list(n_list: &[usize], dim: usize) -> Result<()> {
    if n_list.is_empty() {
        return Err(Error::OutOfRange { what: "N list length", value: 0.0 });
    }
    for &m in n_list {
        if m < dim + 1 {
            return Err(Error::OutOfRange { what: "N", value: m as f64 });
        }
    }
    Ok(())
}

/// Random polytopes spanned by `N` uniform points in `K`.
///
/// The limit is extrapolated assuming the normalized deficit approaches its
/// limit like `N^{-2/(n+1)}`; the reference is `∫ κ^{1/(n+1)} dμ`
/// computed by quadrature.
pub fn ranpol1_estimate(k: &ConvexBody, n_list: &[usize], replicates: usize, seed: u64) -> Result<RanPolEstimate> {
    let n = k.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported { op: "random polytopes", dim: n });
    }
    check_n_list(n_list, n)?;
    if replicates < 2 {
        return Err(Error::OutOfRange { what: "replicates", value: replicates as f64 });
    }
    let vol = k.volume()?;
    let (lo, hi) = k.bounding_box()?;
    let volumes = replicate_volumes(n_list, replicates, seed, |rng, m| Ok(draw_interior(k, &lo, &hi, m, rng)?.0))?;
    let c = ranpol1_constant(n);
    let e = 2.0 / (n as f64 + 1.0);
    let curve = build_curve(vol, n_list, &volumes, seed, |m| c / (vol / m as f64).powf(e));
    let (slope, limit, limit_stderr) = fit(&curve, e);
    let reference = crate::asa::affine_surface_area(k, &SphereGrid::default_for(n))?.value;
    Ok(RanPolEstimate { curve, slope, limit, limit_stderr, reference })
}

/// Random polytopes spanned by `N` points on `∂K` drawn with density `f`.
///
/// Normalized deficit `(vol(K) − Ê) N^{2/(n−1)}`; the reference is
/// `c_n ∫ κ^{1/(n−1)} f^{−2/(n−1)} dμ` and the limit is extrapolated with
/// an `N^{-1}` correction.
pub fn ranpol2_estimate(
    k: &ConvexBody,
    f: &BoundaryDensity,
    n_list: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<RanPolEstimate> {
    let n = k.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::DimensionUnsupported { op: "random polytopes", dim: n });
    }
    let base = match k {
        ConvexBody::Smooth(b) => b,
        _ => return Err(Error::UnsupportedRepresentation("boundary random polytopes need a smooth body")),
    };
    check_n_list(n_list, n)?;
    if replicates < 2 {
        return Err(Error::OutOfRange { what: "replicates", value: replicates as f64 });
    }
    let sampler = BoundarySampler::new(k, f)?;
    let vol = k.volume()?;
    let volumes = replicate_volumes(n_list, replicates, seed, |rng, m| (0..m).map(|_| sampler.draw(rng)).collect())?;
    let e = 2.0 / (n as f64 - 1.0);
    let curve = build_curve(vol, n_list, &volumes, seed, |m| (m as f64).powf(e));
    let (slope, limit, limit_stderr) = fit(&curve, 1.0);
    let mut acc = CompensatedSum::new();
    for ((x, v), w) in f.points.iter().zip(&f.values).zip(&f.weights) {
        let kappa = base.curvature(x)?;
        acc.add(w * kappa.powf(1.0 / (n as f64 - 1.0)) * v.powf(-e));
    }
    let reference = ranpol2_constant(n) * acc.value();
    Ok(RanPolEstimate { curve, slope, limit, limit_stderr, reference })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestApprox {
    pub n: usize,
    /// `π − (N/2) sin(2π/N)`, the area missed by the inscribed regular N-gon.
    pub deficit: f64,
    /// `2 N² deficit / (2π)³`.
    pub del1_estimate: f64,
}

/// Best inscribed approximation of the unit disk by `N`-gons: the regular
/// polygon's deficit and the resulting estimate of `del₁`.
pub fn disk_best_approx(n_list: &[usize]) -> Result<Vec<BestApprox>> {
    n_list
        .iter()
        .map(|&m| {
            if m < 3 {
                return Err(Error::OutOfRange { what: "N", value: m as f64 });
            }
            let x = 2.0 * PI / m as f64;
            // x − sin x without cancellation for small x.
            let xs = if x < 0.1 {
                let x2 = x * x;
                x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
            } else {
                x - x.sin()
            };
            let deficit = 0.5 * m as f64 * xs;
            let del1 = 2.0 * (m * m) as f64 * deficit / (2.0 * PI).powi(3);
            Ok(BestApprox { n: m, deficit, del1_estimate: del1 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((ranpol1_constant(2) - 1.268).abs() < 1e-3, "{}", ranpol1_constant(2));
        assert!((ranpol2_constant(3) - 1.0 / PI).abs() < 1e-14);
        assert!((ranpol2_constant(2) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ranpol2_circle_constant_from_spacings() {
        // N uniform points on the circle: the deficit is Σ (θ_i − sin θ_i)/2
        // over the spacings, each distributed as 2π·Beta(1, N−1).
        let m = 2000usize;
        let rule = crate::quadrature::GaussLegendre::new(64);
        let nf = m as f64;
        let mut e = 0.0;
        let pieces = 200;
        for k in 0..pieces {
            let (a, b) = (k as f64 / pieces as f64 * 0.05, (k + 1) as f64 / pieces as f64 * 0.05);
            e += rule.integrate(a, b, |u| {
                let th = 2.0 * PI * u;
                (th - th.sin()) * (nf - 1.0) * (1.0 - u).powf(nf - 2.0)
            });
        }
        let deficit = 0.5 * nf * e;
        let lim = ranpol2_constant(2) * (2.0 * PI).powi(3);
        assert!((deficit * nf * nf / lim - 1.0).abs() < 5.0 / nf, "{}", deficit * nf * nf / lim);
    }

    #[test]
    fn hull_volumes() {
        let sq = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        assert!((hull_volume(&sq).unwrap() - 1.0).abs() < 1e-15);
        let s = vec![vec![0.0; 3], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!((hull_volume(&s).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let line = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(hull_volume(&line).unwrap(), 0.0);
    }

    #[test]
    fn best_approx() {
        let r = disk_best_approx(&[3, 10_000]).unwrap();
        assert!((r[0].deficit - (PI - 3.0 * 3f64.sqrt() / 4.0)).abs() < 1e-14);
        assert!((r[1].deficit * 1e8 - 2.0 * PI.powi(3) / 3.0).abs() < 1e-5);
        assert!((r[1].del1_estimate - 1.0 / 6.0).abs() < 1e-4);
    }

    #[test]
    fn interior_sampling() {
        let disk = ConvexBody::ball(2).unwrap();
        let s = sample_interior(&disk, 20000, 5).unwrap();
        assert!((s.acceptance - PI / 4.0).abs() < 0.02);
        let mean_r2: f64 = s.points.iter().map(|p| dot(p, p)).sum::<f64>() / 20000.0;
        assert!((mean_r2 - 0.5).abs() < 3.0 * (1.0 / 12f64).sqrt() / 20000f64.sqrt());
    }

    #[test]
    fn densities() {
        let c = ConvexBody::ball(2).unwrap();
        let u = BoundaryDensity::uniform(&c).unwrap();
        assert!((u.eval(&[1.0, 0.0]) - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!(BoundaryDensity::new(&c, |_| 1.0).is_err());
        let e = ConvexBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let f = asa_density(&e).unwrap();
        assert!((f.mass() - 1.0).abs() < 1e-12);
        assert!(f.eval(&[2.0, 0.0]) > f.eval(&[0.0, 1.0]));
        let a = asa_density(&c).unwrap();
        assert!((a.eval(&[0.6, 0.8]) - 1.0 / (2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn cosine_boundary_cdf() {
        let c = ConvexBody::ball(2).unwrap();
        let f = BoundaryDensity::normalized(&c, |x| 1.0 + x[0]).unwrap();
        let pts = sample_boundary(&c, &f, 20000, 9).unwrap();
        let mut th: Vec<f64> = pts.iter().map(|p| p[1].atan2(p[0]).rem_euclid(2.0 * PI)).collect();
        th.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let m = th.len() as f64;
        let ks = th
            .iter()
            .enumerate()
            .map(|(i, &t)| ((i as f64 + 0.5) / m - (t + t.sin()) / (2.0 * PI)).abs())
            .fold(0.0, f64::max);
        assert!(ks < 1.63 / m.sqrt(), "KS {ks}");
    }

    #[test]
    fn sphere_uniform_z() {
        let s = ConvexBody::ball(3).unwrap();
        let f = BoundaryDensity::uniform(&s).unwrap();
        let pts = sample_boundary(&s, &f, 20000, 2).unwrap();
        let mut z: Vec<f64> = pts.iter().map(|p| p[2]).collect();
        z.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let m = z.len() as f64;
        let ks = z.iter().enumerate().map(|(i, &v)| ((i as f64 + 0.5) / m - (v + 1.0) / 2.0).abs()).fold(0.0, f64::max);
        assert!(ks < 1.63 / m.sqrt());
    }
}
