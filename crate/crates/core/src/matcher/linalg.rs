//! Small complex linear algebra: pivoted dense solve and log-scaled 2×2 products.

use num_complex::Complex;

use crate::scalar::Scalar;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n × n`. Returns `None` when a pivot falls below
/// `n * eps * max|a|`.
pub fn solve_dense<T: Scalar>(a: &mut [Complex<T>], b: &mut [Complex<T>], n: usize) -> Option<Vec<Complex<T>>> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let scale = a.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    if scale == T::zero() || !scale.is_finite() {
        return None;
    }
    let tol = T::lit(n.max(1) as f64) * T::epsilon() * scale;
    for col in 0..n {
        let (pivot, best) = (col..n)
            .map(|r| (r, a[r * n + col].norm()))
            .fold((col, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if !(best > tol) {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let inv = a[col * n + col].inv();
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            if f.norm() == T::zero() {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[r * n + j] = a[r * n + j] - f * v;
            }
            let v = b[col];
            b[r] = b[r] - f * v;
        }
    }
    let mut x = vec![Complex::new(T::zero(), T::zero()); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for j in r + 1..n {
            acc = acc - a[r * n + j] * x[j];
        }
        x[r] = acc / a[r * n + r];
    }
    Some(x)
}

/// Complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[Complex<T>; 2]; 2]);

impl<T: Scalar> Mat2<T> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Mat2([[o, z], [z, o]])
    }

    /// Matrix whose columns are `c0`, `c1`.
    pub fn from_columns(c0: [Complex<T>; 2], c1: [Complex<T>; 2]) -> Self {
        Mat2([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    pub fn det(&self) -> Complex<T> {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == T::zero() || !d.norm().is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let mut r = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(r)
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }
}

/// `matrix * exp(log_scale)` with the matrix kept at unit max-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2<T> {
    pub matrix: Mat2<T>,
    pub log_scale: T,
}

impl<T: Scalar> ScaledMat2<T> {
    pub fn identity() -> Self {
        Self {
            matrix: Mat2::identity(),
            log_scale: T::zero(),
        }
    }

    /// Builds `diag(exp(-row_log)) * core * diag(exp(col_log))` without
    /// forming any of the exponentials separately.
    pub fn from_parts(core: Mat2<T>, row_log: [T; 2], col_log: [T; 2]) -> Self {
        let mut top = T::neg_infinity();
        for i in 0..2 {
            for j in 0..2 {
                if core.0[i][j].norm() > T::zero() {
                    top = top.max(col_log[j] - row_log[i]);
                }
            }
        }
        if !top.is_finite() {
            top = T::zero();
        }
        let mut m = core;
        for i in 0..2 {
            for j in 0..2 {
                let e = col_log[j] - row_log[i] - top;
                m.0[i][j] = m.0[i][j] * e.exp();
            }
        }
        Self {
            matrix: m,
            log_scale: top,
        }
        .normalized()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            matrix: self.matrix.mul(&o.matrix),
            log_scale: self.log_scale + o.log_scale,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        let s = self.matrix.max_abs();
        if s > T::zero() && s.is_finite() {
            let inv = s.recip();
            for row in self.matrix.0.iter_mut() {
                for z in row.iter_mut() {
                    *z = *z * inv;
                }
            }
            self.log_scale = self.log_scale + s.ln();
        }
        self
    }
}

/// Complex number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex<T> {
    pub mantissa: Complex<T>,
    pub log_scale: T,
}

impl<T: Scalar> ScaledComplex<T> {
    pub fn one() -> Self {
        Self {
            mantissa: Complex::new(T::one(), T::zero()),
            log_scale: T::zero(),
        }
    }

    pub fn mul(self, z: Complex<T>, log: T) -> Self {
        let m = self.mantissa * z;
        let n = m.norm();
        if n > T::zero() && n.is_finite() {
            Self {
                mantissa: m / n,
                log_scale: self.log_scale + log + n.ln(),
            }
        } else {
            Self {
                mantissa: m,
                log_scale: self.log_scale + log,
            }
        }
    }

    pub fn value(self) -> Complex<T> {
        self.mantissa * self.log_scale.exp()
    }
}
