use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::prelude::*;
use crate::sphere::SphereGrid;
use core::f64::consts::PI;

/// Star body with respect to the origin, given by radial values on a sphere
/// grid. On an equally spaced circle the radial function is interpolated
/// linearly in the angle; otherwise by a compactly supported kernel over
/// nearby grid directions.
#[derive(Clone, Debug, PartialEq)]
pub struct StarBody {
    grid: SphereGrid,
    rho: Vec<f64>,
    uniform_circle: bool,
    kernel_cos: f64,
}

impl StarBody {
    pub fn new(grid: SphereGrid, rho: Vec<f64>) -> Result<Self> {
        if rho.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: rho.len() });
        }
        if rho.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
            return Err(Error::InvalidBody("radial values must be positive".into()));
        }
        let m = grid.len();
        let uniform_circle = grid.dim() == 2
            && grid.directions().iter().enumerate().all(|(i, d)| {
                let t = 2.0 * PI * i as f64 / m as f64;
                (d[0] - t.cos()).abs() < 1e-12 && (d[1] - t.sin()).abs() < 1e-12
            });
        // Kernel radius: a few times the typical spacing of the grid.
        let spacing = (crate::special::sphere_area(grid.dim()) / m as f64).powf(1.0 / (grid.dim() as f64 - 1.0));
        let kernel_cos = (2.5 * spacing).min(PI / 2.0).cos();
        Ok(Self { grid, rho, uniform_circle, kernel_cos })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: SphereGrid, f: F) -> Result<Self> {
        let rho = grid.directions().iter().map(|d| f(d)).collect();
        Self::new(grid, rho)
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    pub fn radial(&self, xi: &[f64]) -> f64 {
        if self.uniform_circle {
            let m = self.rho.len();
            let mut t = xi[1].atan2(xi[0]) / (2.0 * PI) * m as f64;
            if t < 0.0 {
                t += m as f64;
            }
            let i = (t.floor() as usize) % m;
            let f = t - t.floor();
            return (1.0 - f) * self.rho[i] + f * self.rho[(i + 1) % m];
        }
        let mut num = 0.0;
        let mut den = 0.0;
        let mut nearest = (f64::NEG_INFINITY, 0usize);
        for (i, d) in self.grid.directions().iter().enumerate() {
            let c = dot(d, xi);
            if c > nearest.0 {
                nearest = (c, i);
            }
            if c > self.kernel_cos {
                let w = (c - self.kernel_cos).powi(2);
                num += w * self.rho[i];
                den += w;
            }
        }
        if den > 0.0 { num / den } else { self.rho[nearest.1] }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r = norm(x);
        if r == 0.0 {
            return true;
        }
        let xi: Vec<f64> = x.iter().map(|v| v / r).collect();
        r <= self.radial(&xi)
    }

    /// Support function of the convex hull of the sampled boundary points.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.grid
            .directions()
            .iter()
            .zip(&self.rho)
            .map(|(d, r)| r * dot(d, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(1/n) ∫ ρ^n dσ` by the grid rule.
    pub fn volume(&self) -> f64 {
        let n = self.dim() as i32;
        let mut i = 0;
        self.grid.integrate(|_| {
            let r = self.rho[i];
            i += 1;
            r.powi(n) / n as f64
        })
    }

    pub fn centroid(&self) -> Vec<f64> {
        let n = self.dim();
        let vol = self.volume();
        (0..n)
            .map(|k| {
                let mut i = 0;
                self.grid.integrate(|d| {
                    let r = self.rho[i];
                    i += 1;
                    r.powi(n as i32 + 1) / (n as f64 + 1.0) * d[k]
                }) / vol
            })
            .collect()
    }
}
