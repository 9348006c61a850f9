//! Gamma function and the volumes of Euclidean balls and spheres.

#[allow(unused_imports)]
use crate::prelude::*;
use core::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `vol_n(B_2^n)`; `ball_volume(0) = 1`.
pub fn ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    PI.powf(h) / gamma(h + 1.0)
}

/// `vol_{n-1}(∂B_2^n) = n · vol_n(B_2^n)`; for `n = 1` this is the counting
/// measure of `{-1, 1}`, i.e. 2.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// Volume of the unit `l_p` ball in `n` dimensions.
pub fn lp_ball_volume(p: f64, n: usize) -> f64 {
    (2.0 * gamma(1.0 + 1.0 / p)).powi(n as i32) / gamma(1.0 + n as f64 / p)
}

/// Volume of the cap `{x ∈ B_2^n : x_1 ≥ s}` of the unit ball, `s ∈ [-1, 1]`.
///
/// Closed forms in dimensions 2 and 3, Gauss–Legendre otherwise. The 2-D
/// form is written in terms of the cap height to keep relative accuracy for
/// very thin caps.
pub fn unit_ball_cap_volume(n: usize, s: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    match n {
        1 => 1.0 - s,
        2 => {
            let h = 1.0 - s;
            if h <= 1.0 {
                // arccos(s) - s sqrt(1 - s^2)
                let half = (h / 2.0).sqrt();
                let theta = 2.0 * half.asin();
                let root = (h * (2.0 - h)).sqrt();
                theta - s * root
            } else {
                PI - unit_ball_cap_volume(2, -s)
            }
        }
        3 => PI * (1.0 - s) * (1.0 - s) * (2.0 + s) / 3.0,
        _ => {
            // ω_{n-1} ∫_s^1 (1 - z^2)^{(n-1)/2} dz with z = cos φ.
            let w = ball_volume(n - 1);
            let phi_max = 2.0 * ((1.0 - s) / 2.0).sqrt().asin();
            let rule = crate::quadrature::GaussLegendre::new(64);
            w * rule.integrate(0.0, phi_max, |phi| phi.sin().powi(n as i32))
        }
    }
}

/// Derivative of the cap volume with respect to `s`, i.e. minus the
/// `(n-1)`-volume of the slice at height `s`.
pub fn unit_ball_slice_area(n: usize, s: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    ball_volume(n - 1) * (1.0 - s * s).max(0.0).powf((n as f64 - 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_and_sphere() {
        assert!((ball_volume(2) - PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((lp_ball_volume(2.0, 2) - PI).abs() < 1e-13);
        assert!((lp_ball_volume(1.0, 2) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cap_volumes() {
        for &s in &[-0.7, -0.1, 0.0, 0.3, 0.9, 0.999_999] {
            let direct = s.acos() - s * (1.0 - s * s).sqrt();
            assert!((unit_ball_cap_volume(2, s) - direct).abs() < 1e-12, "s={s}");
            let gl = {
                let rule = crate::quadrature::GaussLegendre::new(64);
                // z = cos φ removes the endpoint singularities.
                2.0 * rule.integrate(0.0, s.acos(), |phi| phi.sin() * phi.sin())
            };
            assert!((unit_ball_cap_volume(2, s) - gl).abs() < 1e-12, "s={s}");
        }
        assert!((unit_ball_cap_volume(3, 0.0) - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_cap_volume(4, -1.0) - ball_volume(4)).abs() < 1e-10);
        assert!((unit_ball_cap_volume(4, 0.0) - ball_volume(4) / 2.0).abs() < 1e-10);
    }
}
