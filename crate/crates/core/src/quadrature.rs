//! One-dimensional quadrature rules and compensated summation.

use crate::prelude::*;
use core::f64::consts::PI;

/// Neumaier's variant of Kahan summation. Order-dependent, so callers that
/// need reproducibility feed it in a fixed order.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = CompensatedSum::new();
    for x in it {
        s.add(x);
    }
    s.value()
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        let mf = m as f64;
        for i in 0..m.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_m.
            let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(m, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = CompensatedSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s.add(w * f(c + h * x));
        }
        h * s.value()
    }
}

fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if m == 0 { 1.0 } else { p1 };
    let d = m as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Tanh–sinh (double exponential) rule. Robust to algebraic endpoint
/// singularities, which is what curvature integrands of `B_p` balls have at
/// the coordinate hyperplanes.
#[derive(Clone, Debug)]
pub struct TanhSinh {
    /// (distance of node from the nearer endpoint in units of the half
    /// width, weight, even index) for one half of the symmetric rule.
    half: Vec<(f64, f64, bool)>,
    center_weight: f64,
    h: f64,
}

/// Result of a tanh–sinh integration: value and the difference to the rule
/// with twice the step.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

impl TanhSinh {
    pub fn new(level: u32) -> Self {
        let h = 1.0 / (1u64 << level) as f64;
        let mut half = Vec::new();
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            let u = 0.5 * PI * t.sinh();
            // 1 - tanh(u) = e^{-u} / cosh(u)
            let delta = (-u).exp() / u.cosh();
            let w = 0.5 * PI * h * t.cosh() / (u.cosh() * u.cosh());
            if delta < 1e-300 || w < 1e-300 || !w.is_finite() {
                break;
            }
            half.push((delta, w, k % 2 == 0));
            k += 1;
        }
        Self { half, center_weight: 0.5 * PI * h, h }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> QuadResult {
        let hw = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut fine = CompensatedSum::new();
        let mut coarse = CompensatedSum::new();
        let f0 = f(mid);
        fine.add(self.center_weight * f0);
        coarse.add(2.0 * self.center_weight * f0);
        let mut evals = 1;
        for &(delta, w, even) in &self.half {
            let d = hw * delta;
            // Nodes that collapse onto an endpoint are dropped; so are
            // non-finite values next to an integrable singularity.
            let xl = a + d;
            let xr = b - d;
            let fl = if xl != a { f(xl) } else { 0.0 };
            let fr = if xr != b { f(xr) } else { 0.0 };
            evals += 2;
            let fl = if fl.is_finite() { fl } else { 0.0 };
            let fr = if fr.is_finite() { fr } else { 0.0 };
            let s = w * (fl + fr);
            fine.add(s);
            if even {
                coarse.add(2.0 * s);
            }
        }
        let value = hw * fine.value();
        let error = (value - hw * coarse.value()).abs();
        QuadResult { value, error, evaluations: evals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_polynomials_exact() {
        let rule = GaussLegendre::new(10);
        let sw: f64 = rule.weights.iter().sum();
        assert!((sw - 2.0).abs() < 1e-14);
        // degree 19 is integrated exactly
        let v = rule.integrate(0.0, 1.0, |x| x.powi(19));
        assert!((v - 0.05).abs() < 1e-14);
        let v = rule.integrate(0.0, PI, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let rule = TanhSinh::new(6);
        // ∫_0^1 x^{-1/2} dx = 2
        let r = rule.integrate(0.0, 1.0, |x| x.powf(-0.5));
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
        // ∫_0^1 x^{1/3} dx = 3/4
        let r = rule.integrate(0.0, 1.0, |x| x.cbrt());
        assert!((r.value - 0.75).abs() < 1e-13);
        assert!(r.error < 1e-8);
    }

    #[test]
    fn compensated() {
        let v = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
