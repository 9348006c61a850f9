use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::prelude::*;
use nalgebra::{DMatrix, DVector};

/// `x ↦ A x + b` with `|det A| > 1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
    translation: Vec<f64>,
    det: f64,
}

impl AffineMap {
    pub fn new(matrix: DMatrix<f64>, translation: Vec<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrix.ncols() });
        }
        if translation.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: translation.len() });
        }
        let det = matrix.determinant();
        if !(det.abs() > 1e-12) || !det.is_finite() {
            return Err(Error::SingularMap);
        }
        let inverse = matrix.clone().try_inverse().ok_or(Error::SingularMap)?;
        Ok(Self { matrix, inverse, translation, det })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n), vec![0.0; n]).unwrap()
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d)), vec![0.0; d.len()])
    }

    pub fn translation_by(t: &[f64]) -> Self {
        Self::new(DMatrix::identity(t.len(), t.len()), t.to_vec()).unwrap()
    }

    /// Planar rotation by `theta`.
    pub fn rotation2(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]), vec![0.0, 0.0]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = crate::linalg::mat_vec(&self.matrix, x);
        for (a, b) in y.iter_mut().zip(&self.translation) {
            *a += b;
        }
        y
    }

    pub fn apply_inverse(&self, y: &[f64]) -> Vec<f64> {
        let d = crate::linalg::sub(y, &self.translation);
        crate::linalg::mat_vec(&self.inverse, &d)
    }

    /// `A v`.
    pub fn linear(&self, v: &[f64]) -> Vec<f64> {
        crate::linalg::mat_vec(&self.matrix, v)
    }

    /// `A⁻¹ v`.
    pub fn linear_inverse(&self, v: &[f64]) -> Vec<f64> {
        crate::linalg::mat_vec(&self.inverse, v)
    }

    /// `Aᵀ v`.
    pub fn transpose(&self, v: &[f64]) -> Vec<f64> {
        crate::linalg::mat_t_vec(&self.matrix, v)
    }

    /// `A⁻ᵀ v`, the map on normals.
    pub fn inverse_transpose(&self, v: &[f64]) -> Vec<f64> {
        crate::linalg::mat_t_vec(&self.inverse, v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        let m = &self.matrix * &inner.matrix;
        let t = self.apply(&inner.translation);
        Self::new(m, t)
    }
}

/// Base shapes, centered at the origin and symmetric under every coordinate
/// reflection.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothShape {
    /// `Σ x_i² / a_i² ≤ 1`.
    Ellipsoid { axes: Vec<f64> },
    /// `Σ |x_i|^p ≤ 1` with `p > 1`. For `p < 2` the coordinate hyperplanes
    /// form the declared exception set (the Hessian blows up there).
    Lp { p: f64 },
}

/// Value, gradient and Hessian of the defining function.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothEval {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub hessian: DMatrix<f64>,
}

/// `{x : F(x) ≤ 0}` for `F = F_0 ∘ T⁻¹`, where `F_0` defines a base shape and
/// `T` an optional affine map.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothBody {
    dim: usize,
    shape: SmoothShape,
    map: Option<AffineMap>,
}

impl SmoothBody {
    pub fn new(dim: usize, shape: SmoothShape, map: Option<AffineMap>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionUnsupported { op: "smooth body", dim });
        }
        match &shape {
            SmoothShape::Ellipsoid { axes } => {
                if axes.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: axes.len() });
                }
                if axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
                    return Err(Error::InvalidBody("ellipsoid axes must be positive".into()));
                }
            }
            SmoothShape::Lp { p } => {
                if !(*p > 1.0) || !p.is_finite() {
                    return Err(Error::OutOfRange { what: "p", value: *p });
                }
            }
        }
        if let Some(m) = &map {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
        }
        Ok(Self { dim, shape, map })
    }

    /// Euclidean ball of radius `r` centered at the origin.
    pub fn ball(dim: usize, r: f64) -> Result<Self> {
        Self::new(dim, SmoothShape::Ellipsoid { axes: vec![r; dim] }, None)
    }

    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        Self::new(axes.len(), SmoothShape::Ellipsoid { axes: axes.to_vec() }, None)
    }

    /// Unit ball of `ℓ_p^n`.
    pub fn lp_ball(p: f64, dim: usize) -> Result<Self> {
        Self::new(dim, SmoothShape::Lp { p }, None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &SmoothShape {
        &self.shape
    }

    pub fn map(&self) -> Option<&AffineMap> {
        self.map.as_ref()
    }

    /// `T(self)`.
    pub fn transformed(&self, t: &AffineMap) -> Result<Self> {
        let map = match &self.map {
            Some(m) => t.compose(m)?,
            None => t.clone(),
        };
        Self::new(self.dim, self.shape.clone(), Some(map))
    }

    pub fn center(&self) -> Vec<f64> {
        match &self.map {
            Some(m) => m.translation().to_vec(),
            None => vec![0.0; self.dim],
        }
    }

    pub fn to_base(&self, x: &[f64]) -> Vec<f64> {
        match &self.map {
            Some(m) => m.apply_inverse(x),
            None => x.to_vec(),
        }
    }

    pub fn from_base(&self, z: &[f64]) -> Vec<f64> {
        match &self.map {
            Some(m) => m.apply(z),
            None => z.to_vec(),
        }
    }

    fn det(&self) -> f64 {
        self.map.as_ref().map_or(1.0, |m| m.det())
    }

    /// Value, gradient and diagonal Hessian of the base function.
    pub fn base_eval(&self, z: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        match &self.shape {
            SmoothShape::Ellipsoid { axes } => {
                let mut v = -1.0;
                let mut g = Vec::with_capacity(self.dim);
                let mut h = Vec::with_capacity(self.dim);
                for (x, a) in z.iter().zip(axes) {
                    let a2 = a * a;
                    v += x * x / a2;
                    g.push(2.0 * x / a2);
                    h.push(2.0 / a2);
                }
                (v, g, h)
            }
            SmoothShape::Lp { p } => {
                let p = *p;
                let mut v = -1.0;
                let mut g = Vec::with_capacity(self.dim);
                let mut h = Vec::with_capacity(self.dim);
                for &x in z {
                    let ax = x.abs();
                    v += ax.powf(p);
                    g.push(p * ax.powf(p - 1.0) * sgn(x));
                    h.push(p * (p - 1.0) * ax.powf(p - 2.0));
                }
                (v, g, h)
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.base_eval(&self.to_base(x)).0
    }

    pub fn eval(&self, x: &[f64]) -> SmoothEval {
        let z = self.to_base(x);
        let (value, g0, h0) = self.base_eval(&z);
        match &self.map {
            None => SmoothEval { value, gradient: g0, hessian: DMatrix::from_diagonal(&DVector::from_vec(h0)) },
            Some(m) => {
                let gradient = m.inverse_transpose(&g0);
                let ainv = m.inverse_matrix();
                let d = DMatrix::from_diagonal(&DVector::from_vec(h0));
                let hessian = ainv.transpose() * d * ainv;
                SmoothEval { value, gradient, hessian }
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.value(x) <= 0.0
    }

    /// Whether `x` lies on the declared exception set.
    pub fn is_exceptional(&self, x: &[f64]) -> bool {
        match &self.shape {
            SmoothShape::Lp { p } if *p < 2.0 => self.to_base(x).iter().any(|c| c.abs() < 1e-300),
            _ => false,
        }
    }

    fn base_support(&self, v: &[f64]) -> f64 {
        match &self.shape {
            SmoothShape::Ellipsoid { axes } => v.iter().zip(axes).map(|(x, a)| a * a * x * x).sum::<f64>().sqrt(),
            SmoothShape::Lp { p } => {
                let q = p / (p - 1.0);
                let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * v.iter().map(|x| (x.abs() / m).powf(q)).sum::<f64>().powf(1.0 / q)
            }
        }
    }

    fn base_support_point(&self, v: &[f64]) -> Vec<f64> {
        let h = self.base_support(v);
        match &self.shape {
            SmoothShape::Ellipsoid { axes } => v.iter().zip(axes).map(|(x, a)| a * a * x / h).collect(),
            SmoothShape::Lp { p } => {
                let q = p / (p - 1.0);
                v.iter().map(|x| sgn(*x) * (x.abs() / h).powf(q - 1.0)).collect()
            }
        }
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        match &self.map {
            None => self.base_support(u),
            Some(m) => self.base_support(&m.transpose(u)) + dot(m.translation(), u),
        }
    }

    /// A maximizer of `⟨x, u⟩` over the body.
    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        match &self.map {
            None => self.base_support_point(u),
            Some(m) => m.apply(&self.base_support_point(&m.transpose(u))),
        }
    }

    /// Smallest `λ > 0` with `F_0(z0 + λ w) = 0`, for `z0` strictly inside
    /// the base shape.
    pub fn base_ray_exit(&self, z0: &[f64], w: &[f64]) -> f64 {
        match &self.shape {
            SmoothShape::Ellipsoid { axes } => {
                let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
                for ((z, w), ax) in z0.iter().zip(w).zip(axes) {
                    let a2 = ax * ax;
                    a += w * w / a2;
                    b += 2.0 * z * w / a2;
                    c += z * z / a2;
                }
                let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
                if b >= 0.0 { -2.0 * c / (b + disc) } else { (-b + disc) / (2.0 * a) }
            }
            SmoothShape::Lp { p } => {
                let p = *p;
                if z0.iter().all(|&x| x == 0.0) {
                    let m = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    return 1.0 / (m * w.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p));
                }
                let g = |l: f64| -> (f64, f64) {
                    let mut v = -1.0;
                    let mut d = 0.0;
                    for (z, w) in z0.iter().zip(w) {
                        let x = z + l * w;
                        let ax = x.abs();
                        v += ax.powf(p);
                        if ax > 0.0 {
                            d += p * ax.powf(p - 1.0) * x.signum() * w;
                        }
                    }
                    (v, d)
                };
                let mut hi = 1.0 / w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                while g(hi).0 < 0.0 {
                    hi *= 2.0;
                }
                // g is convex and increasing past the root, so Newton from the
                // right converges monotonically.
                let mut l = hi;
                for _ in 0..100 {
                    let (v, d) = g(l);
                    if v <= 0.0 || !(d > 0.0) {
                        break;
                    }
                    let step = v / d;
                    l -= step;
                    if step <= 1e-15 * l {
                        break;
                    }
                }
                l
            }
        }
    }

    /// Distance from `p` (strictly inside) to the boundary along unit `xi`.
    pub fn ray_exit(&self, p: &[f64], xi: &[f64]) -> f64 {
        match &self.map {
            None => self.base_ray_exit(p, xi),
            Some(m) => self.base_ray_exit(&m.apply_inverse(p), &m.linear_inverse(xi)),
        }
    }

    /// Outward unit normal at a boundary point.
    pub fn normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        let z = self.to_base(x);
        let (_, g0, _) = self.base_eval(&z);
        let g = match &self.map {
            Some(m) => m.inverse_transpose(&g0),
            None => g0,
        };
        crate::linalg::normalized(&g).ok_or(Error::ZeroGradient)
    }

    pub fn volume(&self) -> f64 {
        let base = match &self.shape {
            SmoothShape::Ellipsoid { axes } => crate::special::ball_volume(self.dim) * axes.iter().product::<f64>(),
            SmoothShape::Lp { p } => crate::special::lp_ball_volume(*p, self.dim),
        };
        base * self.det().abs()
    }

    /// Gauss–Kronecker curvature at a boundary point from the implicit form.
    pub fn curvature(&self, x: &[f64]) -> Result<f64> {
        if self.is_exceptional(x) {
            return Err(Error::CoordinateZero);
        }
        let e = self.eval(x);
        crate::curvature::implicit_cofactor(&e.gradient, &e.hessian)
    }

    /// Largest distance from the center to the boundary (an upper bound for
    /// `Lp` bodies under a map).
    pub fn circumradius(&self) -> f64 {
        let c = self.center();
        let mut r: f64 = 0.0;
        for i in 0..self.dim {
            let e = crate::linalg::unit_vector(self.dim, i);
            let neg: Vec<f64> = e.iter().map(|x| -x).collect();
            r = r.max((self.support(&e) - dot(&c, &e)).abs()).max((self.support(&neg) - dot(&c, &neg)).abs());
        }
        r * (self.dim as f64).sqrt()
    }

    /// Distance estimate `|F| / |∇F|` used for boundary checks.
    pub fn boundary_residual(&self, x: &[f64]) -> f64 {
        let e = self.eval(x);
        let g = norm(&e.gradient);
        if g > 0.0 { e.value.abs() / g } else { e.value.abs() }
    }
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_support_and_exit() {
        let e = SmoothBody::ellipsoid(&[2.0, 1.0]).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((e.support(&[s, s]) - 2.5f64.sqrt()).abs() < 1e-14);
        let th = 0.7f64;
        let r = e.ray_exit(&[0.0, 0.0], &[th.cos(), th.sin()]);
        let expect = (th.cos().powi(2) / 4.0 + th.sin().powi(2)).powf(-0.5);
        assert!((r - expect).abs() < 1e-14);
        let q = e.support_point(&[s, s]);
        assert!(e.value(&q).abs() < 1e-14);
    }

    #[test]
    fn lp_exit_off_center() {
        let b = SmoothBody::lp_ball(3.0, 2).unwrap();
        let p = [0.2, -0.1];
        let xi = [0.6, 0.8];
        let l = b.ray_exit(&p, &xi);
        let x = [p[0] + l * xi[0], p[1] + l * xi[1]];
        assert!(b.value(&x).abs() < 1e-13);
        let l0 = b.ray_exit(&[0.0, 0.0], &xi);
        assert!((l0 - 1.0 / (0.6f64.powi(3) + 0.8f64.powi(3)).cbrt()).abs() < 1e-14);
    }

    #[test]
    fn mapped_body() {
        let t = AffineMap::new(DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 1.0]), vec![0.5, -1.0]).unwrap();
        let b = SmoothBody::ball(2, 1.0).unwrap().transformed(&t).unwrap();
        assert!((b.volume() - 2.0 * core::f64::consts::PI).abs() < 1e-13);
        let u = [0.6, 0.8];
        let q = b.support_point(&u);
        assert!(b.value(&q).abs() < 1e-13);
        assert!((dot(&q, &u) - b.support(&u)).abs() < 1e-13);
        let n = b.normal(&q).unwrap();
        assert!((n[0] - 0.6).abs() < 1e-12 && (n[1] - 0.8).abs() < 1e-12);
        assert!(AffineMap::diagonal(&[1.0, 0.0]).is_err());
    }
}
