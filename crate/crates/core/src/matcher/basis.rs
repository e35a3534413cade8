//! Branch-selected basis solutions of one constant-potential region.

use num_complex::Complex;

use crate::kinematics::{ParticleSpec, Regime, RegimeClass, RegionKinematics, Wave};
use crate::profile::Segment;
use crate::scalar::{imag, real, Scalar};
use crate::solution::Model;

/// Two basis solutions of a region.
///
/// Column order follows the plane-wave convention `[e^{+ipx}, e^{-ipx}]` for
/// propagating regions and `[growing, decaying]` for evanescent ones. Dirac
/// columns are the spinors
///
/// | regime                | column 0                      | column 1                     |
/// |-----------------------|-------------------------------|------------------------------|
/// | `V < E - m`           | `(p, E-V-m)`                  | `(-p, E-V-m)`                |
/// | `E - m <= V <= E`     | `(-ik, E-V-m)`                | `(ik, E-V-m)`                |
/// | `E < V <= E + m`      | `(E-V+m, -ik)`                | `(E-V+m, ik)`                |
/// | `V > E + m`           | `(V-E+m, p)`                  | `(V-E+m, -p)`                |
///
/// and Klein-Gordon columns are `(psi, psi') = (1, ±ip)` or `(1, ±k)`.
///
/// Evanescent factors are anchored at the region edges, `e^{k(x - right)}`
/// and `e^{-k(x - left)}`, so they never exceed one inside the region.
///
/// A finite Klein-Gordon region with `k = 0` uses `(1, 0)` and the linear
/// solution `(x - left, 1)` instead, since the two exponentials coincide. A
/// massless Dirac region at `V = E` has constant solutions and uses `(1, 0)`
/// and `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBasis<T = f64> {
    model: Model,
    class: RegimeClass,
    kinematics: RegionKinematics<T>,
    segment: Segment<T>,
    energy: T,
    mass_energy: T,
    columns: [[Complex<T>; 2]; 2],
    linear: bool,
}

impl<T: Scalar> RegionBasis<T> {
    pub fn new(model: Model, spec: &ParticleSpec<T>, segment: Segment<T>) -> Self {
        let (e, m, v) = (spec.energy(), spec.mass_energy(), segment.height);
        let class = spec.classify(v);
        let kinematics = spec.kinematics(v);
        let u = e - v;
        let columns = match (model, kinematics.wave) {
            (Model::Dirac, Wave::Propagating(p)) => match class.regime {
                Regime::PropagatingPositive => [[real(p), real(u - m)], [real(-p), real(u - m)]],
                _ => {
                    let w = -u;
                    [[real(w + m), real(p)], [real(w + m), real(-p)]]
                }
            },
            (Model::Dirac, Wave::Evanescent(k)) => match class.regime {
                Regime::EvanescentBelowE => [[imag(-k), real(u - m)], [imag(k), real(u - m)]],
                _ => [[real(u + m), imag(-k)], [real(u + m), imag(k)]],
            },
            (Model::KleinGordon, Wave::Propagating(p)) => {
                [[real(T::one()), imag(p)], [real(T::one()), imag(-p)]]
            }
            (Model::KleinGordon, Wave::Evanescent(k)) => {
                [[real(T::one()), real(k)], [real(T::one()), real(-k)]]
            }
        };
        let linear = model == Model::KleinGordon
            && kinematics.wave == Wave::Evanescent(T::zero())
            && segment.left.is_finite()
            && segment.right.is_finite();
        let flat = model == Model::Dirac && m == T::zero() && kinematics.wave == Wave::Evanescent(T::zero());
        let columns = if linear || flat {
            [[real(T::one()), real(T::zero())], [real(T::zero()), real(T::one())]]
        } else {
            columns
        };
        Self {
            model,
            class,
            kinematics,
            segment,
            energy: e,
            mass_energy: m,
            columns,
            linear,
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn class(&self) -> RegimeClass {
        self.class
    }

    pub fn kinematics(&self) -> RegionKinematics<T> {
        self.kinematics
    }

    pub fn segment(&self) -> Segment<T> {
        self.segment
    }

    /// x-independent prefactors of the two columns.
    pub fn columns(&self) -> [[Complex<T>; 2]; 2] {
        self.columns
    }

    /// Semi-infinite region without a decaying solution (massless Dirac at
    /// `V = E`); such a region cannot close the interface system.
    pub(crate) fn is_degenerate_final(&self) -> bool {
        self.model == Model::Dirac
            && self.mass_energy == T::zero()
            && self.kinematics.wave == Wave::Evanescent(T::zero())
            && !(self.segment.left.is_finite() && self.segment.right.is_finite())
    }

    /// Column carrying flux away from the scatterer in a final region.
    pub fn outgoing_column(&self) -> usize {
        match self.kinematics.wave {
            Wave::Propagating(_) => 0,
            Wave::Evanescent(_) => 1,
        }
    }

    /// Complex exponent `s` such that column `col` varies as `e^{s}` at `x`.
    pub fn exponent(&self, col: usize, x: T) -> Complex<T> {
        match self.kinematics.wave {
            Wave::Propagating(p) => {
                let sign = if col == 0 { T::one() } else { -T::one() };
                imag(sign * p * x)
            }
            Wave::Evanescent(k) => {
                let (l, r) = (self.segment.left, self.segment.right);
                if col == 0 {
                    let anchor = if r.is_finite() {
                        r
                    } else if l.is_finite() {
                        l
                    } else {
                        T::zero()
                    };
                    real(k * (x - anchor))
                } else {
                    let anchor = if l.is_finite() {
                        l
                    } else if r.is_finite() {
                        r
                    } else {
                        T::zero()
                    };
                    real(-k * (x - anchor))
                }
            }
        }
    }

    /// Value of column `col` at `x`.
    pub fn value(&self, col: usize, x: T) -> [Complex<T>; 2] {
        if self.linear && col == 1 {
            return [real(x - self.segment.left), real(T::one())];
        }
        let f = self.exponent(col, x).exp();
        let c = self.columns[col];
        [c[0] * f, c[1] * f]
    }

    /// Value split as `(prefactor with phase, log of real magnitude)`, so that
    /// `value = prefactor * exp(log)`. Used where magnitudes may over- or
    /// underflow.
    pub fn scaled_value(&self, col: usize, x: T) -> ([Complex<T>; 2], T) {
        if self.linear {
            return (self.value(col, x), T::zero());
        }
        let s = self.exponent(col, x);
        let phase = imag::<T>(s.im).exp();
        let c = self.columns[col];
        ([c[0] * phase, c[1] * phase], s.re)
    }

    /// Exponent rate `λ` with column `col` proportional to `e^{λx}`.
    fn rate(&self, col: usize) -> Complex<T> {
        let sign = if col == 0 { T::one() } else { -T::one() };
        match self.kinematics.wave {
            Wave::Propagating(p) => imag(sign * p),
            Wave::Evanescent(k) => real(sign * k),
        }
    }

    /// Largest residual of the branch-selected wave equation over both
    /// columns, relative to the column scale.
    ///
    /// Dirac: `-i λ lower = (ε - m) upper`, `-i λ upper = (ε + m) lower` with
    /// `ε = E - V`, except in the Klein zone where the negative-branch spinor
    /// solves the same pair with `ε = V - E`. Klein-Gordon: `psi' = λ psi` and
    /// `λ² = m² - (E - V)²`.
    pub fn equation_residual(&self) -> T {
        let u = self.energy - self.segment.height;
        let m = self.mass_energy;
        let mut worst = T::zero();
        for col in 0..2 {
            let lam = self.rate(col);
            let c = self.columns[col];
            let scale = (c[0].norm() + c[1].norm()).max(T::one());
            let res = match self.model {
                Model::Dirac => {
                    let eps = if self.class.regime == Regime::PropagatingNegative { -u } else { u };
                    let mi = imag::<T>(-T::one());
                    let r1 = mi * lam * c[1] - c[0] * (eps - m);
                    let r2 = mi * lam * c[0] - c[1] * (eps + m);
                    (r1.norm() + r2.norm()) / (scale * (u.abs() + m).max(T::one()))
                }
                Model::KleinGordon => {
                    let r1 = (lam * c[0] - c[1]).norm();
                    let r2 = (lam * lam + real(u * u - m * m)).norm();
                    r1 / scale + r2 / (u * u + m * m).max(T::one())
                }
            };
            worst = worst.max(res);
        }
        worst
    }
}
