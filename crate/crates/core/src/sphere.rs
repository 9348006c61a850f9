//! Direction sets with quadrature weights on the unit sphere `S^{n-1}`.

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::GaussLegendre;
use crate::special::sphere_area;
use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Directions and positive weights summing to `vol_{n-1}(S^{n-1})`.
///
/// Every constructor lays the directions out so that `directions[i + m/2]`
/// is exactly `-directions[i]`, which makes the set closed under negation.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    dim: usize,
    directions: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SphereGrid {
    /// `m` equally spaced angles on the circle (`m` is rounded up to even).
    pub fn circle(m: usize) -> Self {
        let m = (m.max(2) + 1) & !1;
        let half = m / 2;
        let mut directions = Vec::with_capacity(m);
        for k in 0..half {
            let t = 2.0 * PI * k as f64 / m as f64;
            directions.push(vec![t.cos(), t.sin()]);
        }
        for k in 0..half {
            let d = &directions[k];
            directions.push(vec![-d[0], -d[1]]);
        }
        let weights = vec![2.0 * PI / m as f64; m];
        Self { dim: 2, directions, weights }
    }

    /// Fibonacci lattice on `S^2` with equal weights: `m/2` points on the
    /// upper hemisphere plus their antipodes.
    pub fn fibonacci(m: usize) -> Self {
        let m = (m.max(2) + 1) & !1;
        let half = m / 2;
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let mut directions = Vec::with_capacity(m);
        for i in 0..half {
            let z = 1.0 - (2 * i + 1) as f64 / m as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = 2.0 * PI * (i as f64 / golden).fract();
            directions.push(vec![r * phi.cos(), r * phi.sin(), z]);
        }
        for i in 0..half {
            let d = &directions[i];
            directions.push(vec![-d[0], -d[1], -d[2]]);
        }
        let weights = vec![4.0 * PI / m as f64; m];
        Self { dim: 3, directions, weights }
    }

    /// Product rule on `S^2`: Gauss–Legendre in `cos θ` (`n_theta` nodes, even)
    /// times the trapezoid rule in `φ` (`n_phi` nodes, even). Spectrally
    /// accurate for smooth integrands.
    pub fn gauss_product(n_theta: usize, n_phi: usize) -> Self {
        let n_theta = (n_theta.max(2) + 1) & !1;
        let n_phi = (n_phi.max(2) + 1) & !1;
        let gl = GaussLegendre::new(n_theta);
        let mut first = Vec::new();
        let mut wfirst = Vec::new();
        // Upper hemisphere nodes (z > 0) at every φ; antipodes are
        // (−z, φ + π), which are again product nodes.
        for i in 0..n_theta / 2 {
            let z = gl.nodes[n_theta - 1 - i];
            let wz = gl.weights[n_theta - 1 - i];
            let r = (1.0 - z * z).sqrt();
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                first.push(vec![r * phi.cos(), r * phi.sin(), z]);
                wfirst.push(wz * 2.0 * PI / n_phi as f64);
            }
        }
        let mut directions = first.clone();
        directions.extend(first.iter().map(|d| vec![-d[0], -d[1], -d[2]]));
        let mut weights = wfirst.clone();
        weights.extend(wfirst);
        Self { dim: 3, directions, weights }
    }

    /// Gaussian directions and their antipodes, equal weights. Used for
    /// `n > 3`, where only Monte Carlo accuracy is expected.
    pub fn random_symmetric(dim: usize, m: usize, seed: u64) -> Self {
        let half = m.max(2).div_ceil(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut directions = Vec::with_capacity(2 * half);
        while directions.len() < half {
            let v: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
            if let Some(u) = crate::linalg::normalized(&v) {
                directions.push(u);
            }
        }
        for i in 0..half {
            let d = directions[i].iter().map(|x| -x).collect();
            directions.push(d);
        }
        let w = sphere_area(dim) / (2 * half) as f64;
        Self { dim, weights: vec![w; 2 * half], directions }
    }

    /// Default grid: 4096 angles for `n = 2`, 8192 Fibonacci points for
    /// `n = 3`, 8192 random symmetric directions above.
    pub fn default_for(dim: usize) -> Self {
        match dim {
            2 => Self::circle(4096),
            3 => Self::fibonacci(8192),
            _ => Self::random_symmetric(dim, 8192, 0x5eed),
        }
    }

    /// Grid of the same family with roughly `m` points.
    pub fn with_size(dim: usize, m: usize) -> Self {
        match dim {
            2 => Self::circle(m),
            3 => Self::fibonacci(m),
            _ => Self::random_symmetric(dim, m, 0x5eed),
        }
    }

    pub fn from_parts(dim: usize, directions: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let g = Self { dim, directions, weights };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.directions.len();
        if m == 0 || m % 2 == 1 || self.weights.len() != m {
            return Err(Error::InvalidBody("sphere grid needs an even, nonzero number of weighted directions".into()));
        }
        if self.weights.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::InvalidBody("sphere grid weights must be positive".into()));
        }
        let total: f64 = crate::quadrature::compensated_sum(self.weights.iter().copied());
        if (total - sphere_area(self.dim)).abs() > 1e-9 * sphere_area(self.dim).max(1.0) {
            return Err(Error::InvalidBody(format!("sphere grid weights sum to {total}")));
        }
        let half = m / 2;
        for i in 0..half {
            let a = &self.directions[i];
            let b = &self.directions[i + half];
            if a.len() != self.dim || a.iter().zip(b).any(|(x, y)| *x != -*y) {
                return Err(Error::InvalidBody("sphere grid is not closed under negation".into()));
            }
            if (crate::linalg::norm(a) - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidBody("sphere grid direction is not a unit vector".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn antipode(&self, i: usize) -> usize {
        let half = self.directions.len() / 2;
        if i < half { i + half } else { i - half }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.directions.iter().map(|d| d.as_slice()).zip(self.weights.iter().copied())
    }

    /// `∫_{S^{n-1}} f dσ` by the grid rule, summed in grid order.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        crate::quadrature::compensated_sum(self.iter().map(|(d, w)| w * f(d)))
    }
}

pub(crate) fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box–Muller; one value per call keeps streams simple.
    loop {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        if u > 0.0 {
            return (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_valid() {
        SphereGrid::circle(4096).validate().unwrap();
        SphereGrid::fibonacci(8192).validate().unwrap();
        SphereGrid::gauss_product(32, 64).validate().unwrap();
        SphereGrid::random_symmetric(5, 100, 1).validate().unwrap();
        assert_eq!(SphereGrid::default_for(2).len(), 4096);
        assert_eq!(SphereGrid::default_for(3).len(), 8192);
    }

    #[test]
    fn product_rule_integrates_polynomials() {
        let g = SphereGrid::gauss_product(16, 32);
        // ∫ z^2 dσ = 4π/3, ∫ x^2 y^2 dσ = 4π/15
        let v = g.integrate(|d| d[2] * d[2]);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
        let v = g.integrate(|d| d[0] * d[0] * d[1] * d[1]);
        assert!((v - 4.0 * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn fibonacci_is_roughly_uniform() {
        let g = SphereGrid::fibonacci(8192);
        let v = g.integrate(|d| d[2] * d[2]);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-3);
    }
}
