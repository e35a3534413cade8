//! Massless Dirac particle in a smooth potential.
//!
//! With `m = 0` the component equations `φ' = i(E - V)χ`, `χ' = i(E - V)φ`
//! are solved by `χ = ±φ` and
//! `φ(x) = φ(a) exp(±i (E (x - a) - ∫ₐˣ V))`, so `|φ|` never changes.
//! [`integrate_dirac_components`] integrates the same equations directly and
//! serves as the reference.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Result, ScatterError};
use crate::scalar::{imag, Scalar};

/// Smooth potential `V(x)`.
#[derive(Clone)]
pub struct SmoothPotential<T = f64> {
    kind: Kind<T>,
    domain: Option<(T, T)>,
}

#[derive(Clone)]
enum Kind<T> {
    Polynomial(Vec<T>),
    Spline(Spline<T>),
    Function(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Scalar> fmt::Debug for SmoothPotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Polynomial(c) => format!("Polynomial({c:?})"),
            Kind::Spline(s) => format!("Spline({} knots)", s.x.len()),
            Kind::Function(_) => "Function".to_string(),
        };
        f.debug_struct("SmoothPotential")
            .field("kind", &kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Scalar> SmoothPotential<T> {
    /// `V(x) = slope * x + offset`.
    pub fn linear(slope: T, offset: T) -> Self {
        Self::polynomial(vec![offset, slope])
    }

    /// `V(x) = Σ c[i] xⁱ`.
    pub fn polynomial(coefficients: Vec<T>) -> Self {
        Self {
            kind: Kind::Polynomial(coefficients),
            domain: None,
        }
    }

    /// Arbitrary smooth function, valid on `[lo, hi]`.
    pub fn from_fn<F>(f: F, lo: T, hi: T) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Function(Arc::new(f)),
            domain: Some((lo, hi)),
        }
    }

    /// Natural cubic spline through `(xs[i], vs[i])`; `xs` strictly
    /// increasing, at least two points.
    pub fn sampled(xs: Vec<T>, vs: Vec<T>) -> Result<Self> {
        let spline = Spline::new(xs, vs)?;
        let domain = Some((spline.x[0], spline.x[spline.x.len() - 1]));
        Ok(Self {
            kind: Kind::Spline(spline),
            domain,
        })
    }

    pub fn domain(&self) -> Option<(T, T)> {
        self.domain
    }

    pub fn value(&self, x: T) -> T {
        match &self.kind {
            Kind::Polynomial(c) => c.iter().rev().fold(T::zero(), |acc, &ci| acc * x + ci),
            Kind::Spline(s) => s.eval(x),
            Kind::Function(f) => f(x),
        }
    }

    fn check_span(&self, a: T, b: T) -> Result<()> {
        if !a.is_finite() || !b.is_finite() {
            return Err(ScatterError::Precondition("integration span must be finite".into()));
        }
        if let Some((lo, hi)) = self.domain {
            let (l, r) = if a <= b { (a, b) } else { (b, a) };
            if l < lo || r > hi {
                return Err(ScatterError::Precondition(format!(
                    "span [{l}, {r}] leaves the potential domain [{lo}, {hi}]"
                )));
            }
        }
        for x in [a, b] {
            if !self.value(x).is_finite() {
                return Err(ScatterError::Precondition(format!("V({x}) is not finite")));
            }
        }
        Ok(())
    }

    /// `∫ₐᵇ V` by composite 5-point Gauss-Legendre, doubling the panel count
    /// until successive estimates differ by less than `1e-10 * max(1, |I|)`.
    pub fn integral(&self, a: T, b: T) -> Result<T> {
        self.check_span(a, b)?;
        if a == b {
            return Ok(T::zero());
        }
        let mut panels = 1usize;
        let mut prev = gauss_legendre(|x| self.value(x), a, b, panels);
        loop {
            panels *= 2;
            let next = gauss_legendre(|x| self.value(x), a, b, panels);
            if (next - prev).abs() < T::lit(1e-10) * next.abs().max(T::one()) {
                return Ok(next);
            }
            if panels >= 1 << 20 {
                return Err(ScatterError::Precondition(
                    "quadrature of V did not converge; potential not smooth enough".into(),
                ));
            }
            prev = next;
        }
    }
}

const GL5_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

fn gauss_legendre<T: Scalar>(f: impl Fn(T) -> T, a: T, b: T, panels: usize) -> T {
    let h = (b - a) / T::lit(panels as f64);
    let mut total = T::zero();
    for i in 0..panels {
        let mid = a + h * (T::lit(i as f64) + T::half());
        let mut s = T::zero();
        for (x, w) in GL5_NODES.iter().zip(GL5_WEIGHTS.iter()) {
            s = s + T::lit(*w) * f(mid + h * T::half() * T::lit(*x));
        }
        total = total + s * h * T::half();
    }
    total
}

#[derive(Debug, Clone)]
struct Spline<T> {
    x: Vec<T>,
    y: Vec<T>,
    /// second derivatives at the knots
    m: Vec<T>,
}

impl<T: Scalar> Spline<T> {
    fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(ScatterError::Precondition(format!(
                "spline needs matching samples, at least two ({} x, {} V)",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) || x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(ScatterError::Precondition(
                "spline abscissae must be finite and strictly increasing".into(),
            ));
        }
        // tridiagonal system for a natural spline (Thomas algorithm)
        let mut m = vec![T::zero(); n];
        if n > 2 {
            let mut c = vec![T::zero(); n];
            let mut d = vec![T::zero(); n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let rhs = T::lit(6.0) * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
                let diag = T::two() * (h0 + h1) - h0 * c[i - 1];
                c[i] = h1 / diag;
                d[i] = (rhs - h0 * d[i - 1]) / diag;
            }
            for i in (1..n - 1).rev() {
                m[i] = d[i] - c[i] * m[i + 1];
            }
        }
        Ok(Self { x, y, m })
    }

    fn eval(&self, t: T) -> T {
        let n = self.x.len();
        let i = match self.x.iter().position(|&xi| xi > t) {
            Some(0) => 0,
            Some(j) => j - 1,
            None => n - 2,
        }
        .min(n - 2);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (a, b) = ((x1 - t) / h, (t - x0) / h);
        let six = T::lit(6.0);
        a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / six
    }
}

/// Sign choice `χ = ±φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Sheet::Plus => T::one(),
            Sheet::Minus => -T::one(),
        }
    }
}

/// Components of the massless solution normalised to `φ(a_ref) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSolution<T = f64> {
    pub phi: Complex<T>,
    pub chi: Complex<T>,
    /// `E (x - a) - ∫ₐˣ V`
    pub phase: T,
}

/// `φ(x)` and `χ(x)` on the chosen sheet, with `φ(a_ref) = 1`.
pub fn massless_phase_solution<T: Scalar>(
    pot: &SmoothPotential<T>,
    energy: T,
    a_ref: T,
    x: T,
    sheet: Sheet,
) -> Result<PhaseSolution<T>> {
    if !energy.is_finite() {
        return Err(ScatterError::InvalidParticle(format!("energy {energy} is not finite")));
    }
    let phase = energy * (x - a_ref) - pot.integral(a_ref, x)?;
    let s: T = sheet.sign();
    let phi = imag(s * phase).exp();
    Ok(PhaseSolution {
        phi,
        chi: phi * s,
        phase,
    })
}

/// Integrates `φ' = i(E - V + m)χ`, `χ' = i(E - V - m)φ` from `a_ref` to `x`
/// with classical fourth-order Runge-Kutta, halving the step until two
/// successive results agree to `tol`.
pub fn integrate_dirac_components<T: Scalar>(
    pot: &SmoothPotential<T>,
    energy: T,
    mass_energy: T,
    a_ref: T,
    x: T,
    start: [Complex<T>; 2],
    tol: T,
) -> Result<[Complex<T>; 2]> {
    pot.check_span(a_ref, x)?;
    if a_ref == x {
        return Ok(start);
    }
    let rhs = |t: T, y: [Complex<T>; 2]| -> [Complex<T>; 2] {
        let w = energy - pot.value(t);
        [imag(w + mass_energy) * y[1], imag(w - mass_energy) * y[0]]
    };
    let run = |steps: usize| -> [Complex<T>; 2] {
        let h = (x - a_ref) / T::lit(steps as f64);
        let mut y = start;
        let half = T::half();
        let sixth = T::one() / T::lit(6.0);
        for i in 0..steps {
            let t = a_ref + h * T::lit(i as f64);
            let k1 = rhs(t, y);
            let y2 = [y[0] + k1[0] * (h * half), y[1] + k1[1] * (h * half)];
            let k2 = rhs(t + h * half, y2);
            let y3 = [y[0] + k2[0] * (h * half), y[1] + k2[1] * (h * half)];
            let k3 = rhs(t + h * half, y3);
            let y4 = [y[0] + k3[0] * h, y[1] + k3[1] * h];
            let k4 = rhs(t + h, y4);
            for c in 0..2 {
                y[c] = y[c] + (k1[c] + (k2[c] + k3[c]) * T::two() + k4[c]) * (h * sixth);
            }
        }
        y
    };
    let mut steps = 64usize;
    let mut prev = run(steps);
    loop {
        steps *= 2;
        let next = run(steps);
        let diff = (next[0] - prev[0]).norm().max((next[1] - prev[1]).norm());
        if diff < tol {
            return Ok(next);
        }
        if steps >= 1 << 22 {
            return Err(ScatterError::Precondition(format!(
                "integration did not reach tolerance {tol} (last change {diff})"
            )));
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_potential_phase() {
        let b = 0.35_f64;
        let pot = SmoothPotential::linear(b, 0.0_f64);
        let e = 2.0;
        for x in [0.0, 1.0, 4.5] {
            let sol = massless_phase_solution(&pot, e, 0.0, x, Sheet::Plus).unwrap();
            let expect = e * x - 0.5 * b * x * x;
            assert!((sol.phase - expect).abs() < 1e-12);
            assert!((sol.phi.norm() - 1.0).abs() < 1e-15);
            assert_eq!(sol.chi, sol.phi);
        }
        let minus = massless_phase_solution(&pot, e, 0.0, 3.0, Sheet::Minus).unwrap();
        assert_eq!(minus.chi, -minus.phi);
    }

    #[test]
    fn free_plane_wave() {
        let pot = SmoothPotential::polynomial(vec![]);
        let sol = massless_phase_solution(&pot, 1.5, 0.0, 2.0, Sheet::Plus).unwrap();
        assert!((sol.phi - Complex::new(0.0, 3.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn ode_agrees_with_phase_solution() {
        let pot = SmoothPotential::polynomial(vec![0.3, -0.8, 0.25, -0.02]);
        let (e, a, x) = (1.7, -1.0, 3.0);
        for sheet in [Sheet::Plus, Sheet::Minus] {
            let s: f64 = sheet.sign();
            let ps = massless_phase_solution(&pot, e, a, x, sheet).unwrap();
            let one = Complex::new(1.0, 0.0);
            let y = integrate_dirac_components(&pot, e, 0.0, a, x, [one, one * s], 1e-11).unwrap();
            assert!((y[0] - ps.phi).norm() < 1e-8);
            assert!((y[1] - ps.chi).norm() < 1e-8);
            assert!((y[1] - y[0] * s).norm() < 1e-10);
        }
    }

    #[test]
    fn massive_ode_conserves_current() {
        // constant V: plane wave with the positive-branch spinor
        let pot = SmoothPotential::polynomial(vec![0.2]);
        let (e, m) = (1.3, 1.0);
        let p = ((e - 0.2_f64).powi(2) - m * m).sqrt();
        let start = [Complex::new(p, 0.0), Complex::new(e - 0.2 - m, 0.0)];
        let y = integrate_dirac_components(&pot, e, m, 0.0, 2.0, start, 1e-12).unwrap();
        let exact = Complex::new(0.0, 2.0 * p).exp();
        assert!((y[0] - start[0] * exact).norm() < 1e-9);
        assert!((y[1] - start[1] * exact).norm() < 1e-9);
    }

    #[test]
    fn spline_and_function_potentials() {
        let xs: Vec<f64> = (0..41).map(|i| i as f64 * 0.1).collect();
        let vs: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let sp = SmoothPotential::sampled(xs, vs).unwrap();
        assert!((sp.value(1.234) - 1.234_f64.sin()).abs() < 1e-4);
        let i = sp.integral(0.0, 4.0).unwrap();
        assert!((i - (1.0 - 4.0_f64.cos())).abs() < 1e-4);
        assert!(sp.integral(0.0, 5.0).is_err());

        let f = SmoothPotential::from_fn(|x: f64| (-x * x).exp(), -10.0, 10.0);
        let i = f.integral(-10.0, 10.0).unwrap();
        assert!((i - std::f64::consts::PI.sqrt()).abs() < 1e-10);
        assert!(SmoothPotential::sampled(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }
}
