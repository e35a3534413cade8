//! Closed-form Dirac solutions: the infinite step and the square barrier.
//!
//! Amplitudes are expressed with the basis spinors of [`RegionBasis`]; in
//! particular the Klein zone `V > E + mc²` uses the negative-branch spinor
//! `(V - E + m, ±p)` together with `e^{±ipx}`, so the transmitted wave there is
//! `e^{+ipx}` with `p >= 0`.
//!
//! [`RegionBasis`]: crate::matcher::RegionBasis

use num_complex::Complex;

use crate::error::{Result, ScatterError};
use crate::kinematics::{GapBoundary, ParticleSpec, Regime, Wave};
use crate::matcher::closed_form_solution;
use crate::profile::PotentialProfile;
use crate::scalar::{imag, real, Scalar};
use crate::solution::{Model, ScatteringSolution};

/// The two components of the spinor at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorValue<T = f64> {
    pub upper: Complex<T>,
    pub lower: Complex<T>,
}

impl<T: Scalar> SpinorValue<T> {
    pub fn norm_sqr(&self) -> T {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }
}

/// Step of height `v0` at `x = 0`.
///
/// Propagating ranges use `B = (α - 1)/(α + 1)` with
/// `α = sqrt((E+m)(E-V0-m) / ((E-m)(E-V0+m)))` below the gap and
/// `B = (1 - β)/(1 + β)` with `β = sqrt((E-m)(V0-E+m) / ((E+m)(V0-E-m)))` in
/// the Klein zone. Inside the gap, on both sides of `E`,
/// `β = -i sqrt((E-m)(m+E-V0) / ((E+m)(m-E+V0)))` gives `|B| = 1` and `R` is
/// set to exactly `1`.
/// The gap edges return the limit `B = -1` and are flagged through
/// [`ScatteringSolution::limit_point`]; so is `V0 = E` for a massless particle
/// (`R = 0`).
pub fn dirac_step_solve<T: Scalar>(spec: &ParticleSpec<T>, v0: T) -> Result<ScatteringSolution<T>> {
    let profile = PotentialProfile::step(v0)?;
    let (e, m) = (spec.energy(), spec.mass_energy());
    let class = spec.classify(v0);
    let one = T::one();
    let zero = Complex::new(T::zero(), T::zero());

    if let Some(edge) = class.boundary {
        if spec.is_massless() {
            // constant spinor (E, E) beyond the step
            let c = real(e);
            return Ok(flagged(&profile, spec, zero, T::zero(), vec![[real(one), zero], [c, c]], edge));
        }
        if edge != GapBoundary::Midgap {
            return Ok(flagged(&profile, spec, real(-one), one, vec![[real(one), real(-one)], [zero, zero]], edge));
        }
    }

    let u = e - v0;
    let b = match class.regime {
        Regime::PropagatingPositive => {
            let alpha = ((e + m) * (u - m) / ((e - m) * (u + m))).sqrt();
            real((alpha - one) / (alpha + one))
        }
        Regime::PropagatingNegative => {
            let w = -u;
            let beta = ((e - m) * (w + m) / ((e + m) * (w - m))).sqrt();
            real((one - beta) / (one + beta))
        }
        Regime::EvanescentBelowE | Regime::EvanescentAboveE => {
            let beta = imag(-((e - m) * (m + u) / ((e + m) * (m - u))).sqrt());
            (real(one) - beta) / (real(one) + beta)
        }
    };
    let mut sol = closed_form_solution(&profile, spec, Model::Dirac, b);
    if class.regime.is_evanescent() {
        sol.reflection = one;
        sol.transmission = T::zero();
    }
    Ok(sol)
}

/// `R` of the step as `V0 → ∞`: `(mc² / (E + sqrt(E² - m²c⁴)))²`.
pub fn dirac_step_limit<T: Scalar>(spec: &ParticleSpec<T>) -> T {
    let r = spec.mass_energy() / (spec.energy() + spec.momentum());
    r * r
}

/// Square barrier of height `v0` on `(0, a]`.
///
/// With `ζ = sqrt(E² - m²)`, `s = sin(pa)`, `c = cos(pa)` and
/// `t = tanh(ka)`:
///
/// | range                 | `B`                                                   |
/// |-----------------------|-------------------------------------------------------|
/// | `V0 < E - m`          | `-V0 m s / ((ζ² - E V0) s + i p ζ c)`                 |
/// | `E - m < V0 < E + m`  | `-V0 m t / ((ζ² - E V0) t + i k ζ)`                   |
/// | `V0 > E + m`          | `(V0 - 2E) m s / ((E V0 - 2E² + ζ²) s + i p ζ c)`     |
///
/// The rational forms have no poles at `pa = nπ`. At `V0 = E` the value
/// `B = -E² t / ((m² - ζ²) t - 2 i m ζ)` is returned (the one-sided value from
/// below, see [`dirac_barrier_midgap`]); at `V0 = E ± m` the conventional
/// total reflection `R = 1`. Both are flagged limit points.
pub fn dirac_barrier_solve<T: Scalar>(spec: &ParticleSpec<T>, v0: T, a: T) -> Result<ScatteringSolution<T>> {
    let profile = PotentialProfile::barrier(v0, a)?;
    let (e, m) = (spec.energy(), spec.mass_energy());
    let zeta = spec.momentum();
    let class = spec.classify(v0);
    let kin = spec.kinematics(v0);
    let one = T::one();
    let zero = Complex::new(T::zero(), T::zero());

    if let Some(edge) = class.boundary {
        if spec.is_massless() {
            let g = imag(-zeta * a).exp();
            let c = real(e);
            let amps = vec![[real(one), zero], [c, c], [g, zero]];
            return Ok(flagged(&profile, spec, zero, T::zero(), amps, edge));
        }
        match edge {
            GapBoundary::Midgap => {
                let b = midgap_below_amplitude(spec, a);
                let mut sol = closed_form_solution(&profile, spec, Model::Dirac, b);
                sol.limit = Some(edge);
                return Ok(sol);
            }
            _ => {
                let amps = vec![[real(one), real(-one)], [zero, zero], [zero, zero]];
                return Ok(flagged(&profile, spec, real(-one), one, amps, edge));
            }
        }
    }

    let b = match kin.wave {
        Wave::Propagating(p) => {
            let (s, c) = ((p * a).sin(), (p * a).cos());
            if class.regime == Regime::PropagatingPositive {
                real(-v0 * m * s) / Complex::new((zeta * zeta - e * v0) * s, p * zeta * c)
            } else {
                real((v0 - e - e) * m * s) / Complex::new((e * v0 - e * e - e * e + zeta * zeta) * s, p * zeta * c)
            }
        }
        Wave::Evanescent(k) => {
            let t = (k * a).tanh();
            real(-v0 * m * t) / Complex::new((zeta * zeta - e * v0) * t, k * zeta)
        }
    };
    Ok(closed_form_solution(&profile, spec, Model::Dirac, b))
}

fn midgap_below_amplitude<T: Scalar>(spec: &ParticleSpec<T>, a: T) -> Complex<T> {
    let (e, m, zeta) = (spec.energy(), spec.mass_energy(), spec.momentum());
    let t = (m * a).tanh();
    real(-e * e * t) / Complex::new((m * m - zeta * zeta) * t, -T::two() * m * zeta)
}

/// The two one-sided reflection coefficients of the barrier at `V0 = E`:
/// `(below, above)` with `below = |E² t / ((m² - ζ²) t - 2imζ)|²` and
/// `above = |E / (m - iζ coth(ma))|²`, `t = tanh(ma)`.
///
/// `above` is the value of the continuous solution; `below` is what
/// [`dirac_barrier_solve`] reports at `V0 = E`. They differ for every finite
/// width and merge like `1 - tanh²(ma)`. Both vanish for `m = 0`.
pub fn dirac_barrier_midgap<T: Scalar>(spec: &ParticleSpec<T>, a: T) -> Result<(T, T)> {
    if !(a > T::zero()) {
        return Err(ScatterError::NonPositiveWidth(a.as_f64()));
    }
    if spec.is_massless() {
        return Ok((T::zero(), T::zero()));
    }
    let (e, m, zeta) = (spec.energy(), spec.mass_energy(), spec.momentum());
    let below = midgap_below_amplitude(spec, a).norm_sqr().min(T::one());
    let t = (m * a).tanh();
    let above = (real(e * t) / Complex::new(m * t, -zeta)).norm_sqr().min(T::one());
    Ok((below, above))
}

/// Large-`V0` limit of the barrier at fixed phase `pa`:
/// `m² / (E² + (E² - m²) cot²(pa))`, evaluated as
/// `m² sin² / (E² sin² + ζ² cos²)`.
///
/// Phases at a pole of `cot` (`pa = nπ`) are rejected.
pub fn dirac_barrier_limit<T: Scalar>(spec: &ParticleSpec<T>, phase: T) -> Result<T> {
    let (s, c) = (phase.sin(), phase.cos());
    let tol = T::lit(8.0) * T::epsilon() * phase.abs().max(T::one());
    if !phase.is_finite() || s.abs() <= tol {
        return Err(ScatterError::Precondition(format!(
            "cot(pa) has a pole at pa = {phase}"
        )));
    }
    let (e, m, zeta) = (spec.energy(), spec.mass_energy(), spec.momentum());
    Ok(m * m * s * s / (e * e * s * s + zeta * zeta * c * c))
}

/// Spinor of a solved Dirac state at `x`.
pub fn dirac_wavefunction<T: Scalar>(sol: &ScatteringSolution<T>, x: T) -> Result<SpinorValue<T>> {
    if sol.model() != Model::Dirac {
        return Err(ScatterError::ModelMismatch {
            expected: Model::Dirac.name(),
            found: sol.model().name(),
        });
    }
    let [upper, lower] = sol.components(x);
    Ok(SpinorValue { upper, lower })
}

/// Probability current `2 Re(upper* lower)`.
pub fn dirac_current<T: Scalar>(psi: &SpinorValue<T>) -> T {
    T::two() * (psi.upper.conj() * psi.lower).re
}

fn flagged<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    b: Complex<T>,
    r: T,
    amps: Vec<[Complex<T>; 2]>,
    edge: GapBoundary,
) -> ScatteringSolution<T> {
    let mut sol = closed_form_solution(profile, spec, Model::Dirac, b);
    for (state, amp) in sol.regions.iter_mut().zip(amps) {
        state.amplitudes = amp;
    }
    sol.reflection = r;
    sol.transmission = T::one() - r;
    sol.limit = Some(edge);
    sol
}
