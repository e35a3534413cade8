//! Total-transmission points, resonance amplitudes, the midgap jump and the
//! small-mass bound.

use num_complex::Complex;

use crate::dirac::dirac_barrier_midgap;
use crate::error::{Result, ScatterError};
use crate::kinematics::{ParticleSpec, Regime, Wave};
use crate::profile::Geometry;
use crate::scalar::{imag, real, Scalar};
use crate::solution::Model;

use super::sweep::{resonant_heights, solve_point, WidthRule};

/// Threshold below which a point counts as totally transmitting.
pub const TOTAL_TRANSMISSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TotalTransmissions<T = f64> {
    /// `V0 = 2E` if inside the window.
    pub alley: Option<T>,
    /// Resonant heights at the given width (barriers only).
    pub resonances: Vec<T>,
    /// Massless Dirac particles are transmitted at every height.
    pub all: bool,
    /// Largest `R` found at the reported points.
    pub max_reflection: T,
}

/// Heights in `window` with `R = 0`: the alley at `2E` and, for a barrier of
/// width `a`, the resonances `p a = nπ`. Every reported point is re-solved
/// and kept only if `R < 1e-12`.
pub fn find_total_transmissions<T: Scalar>(
    model: Model,
    geometry: Geometry,
    spec: &ParticleSpec<T>,
    width: Option<T>,
    window: (T, T),
) -> Result<TotalTransmissions<T>> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(ScatterError::Precondition(format!("empty window {lo}:{hi}")));
    }
    let rule = match (geometry, width) {
        (Geometry::Barrier, Some(a)) => Some(WidthRule::Fixed(a)),
        (Geometry::Barrier, None) => {
            return Err(ScatterError::Precondition("barrier search needs a width".into()))
        }
        _ => None,
    };
    let tol = T::lit(TOTAL_TRANSMISSION_TOL);
    let mut max_r = T::zero();
    let mut keep = |v: T| -> Result<bool> {
        let r = solve_point(model, geometry, spec, rule, v)?.reflection();
        if r < tol {
            max_r = max_r.max(r);
            Ok(true)
        } else {
            Ok(false)
        }
    };
    let e2 = spec.energy() + spec.energy();
    let alley = if e2 >= lo && e2 <= hi && keep(e2)? { Some(e2) } else { None };
    let mut resonances = Vec::new();
    if let Some(a) = width.filter(|_| geometry == Geometry::Barrier) {
        for v in resonant_heights(spec, a, lo, hi) {
            if keep(v)? {
                resonances.push(v);
            }
        }
    }
    Ok(TotalTransmissions {
        alley,
        resonances,
        all: model == Model::Dirac && spec.is_massless(),
        max_reflection: max_r,
    })
}

/// The first `count` resonant widths `a_n = nπ/p` of a barrier of height `v0`.
pub fn resonant_widths<T: Scalar>(spec: &ParticleSpec<T>, v0: T, count: usize) -> Result<Vec<T>> {
    match spec.kinematics(v0).wave {
        Wave::Propagating(p) if p > T::zero() => Ok((1..=count).map(|n| T::lit(n as f64) * T::PI() / p).collect()),
        _ => Err(ScatterError::Precondition(format!(
            "V0 = {v0} does not propagate inside the barrier"
        ))),
    }
}

/// Dirac amplitudes at resonance, in the basis of [`RegionBasis`].
///
/// [`RegionBasis`]: crate::matcher::RegionBasis
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceAmplitudes<T = f64> {
    pub b: Complex<T>,
    pub f1: Complex<T>,
    pub f2: Complex<T>,
    /// `(-1)^n e^{-iqa}`; `|G| = 1`.
    pub g: Complex<T>,
    pub order: usize,
}

/// Closed-form Dirac barrier amplitudes when `p a = nπ`.
///
/// Below the gap `F₁,₂ = ½((E - m)/(E - V0 - m) ± q/p)`; in the Klein zone
/// `F₁,₂ = ½(q/(V0 - E + m) ± (E - m)/p)`. `B = 0` in both.
pub fn resonance_amplitudes<T: Scalar>(spec: &ParticleSpec<T>, v0: T, a: T) -> Result<ResonanceAmplitudes<T>> {
    if !(a > T::zero()) {
        return Err(ScatterError::NonPositiveWidth(a.as_f64()));
    }
    let class = spec.classify(v0);
    let p = match spec.kinematics(v0).wave {
        Wave::Propagating(p) if class.boundary.is_none() => p,
        _ => {
            return Err(ScatterError::Precondition(format!(
                "V0 = {v0} is not in a propagating range"
            )))
        }
    };
    let phase = p * a / T::PI();
    let n = phase.round();
    if n < T::one() || (phase - n).abs() > T::lit(1e-9) * n {
        return Err(ScatterError::Precondition(format!("pa/π = {phase} is not a positive integer")));
    }
    let (e, m, q) = (spec.energy(), spec.mass_energy(), spec.momentum());
    let (first, second) = match class.regime {
        Regime::PropagatingPositive => ((e - m) / (e - v0 - m), q / p),
        _ => (q / (v0 - e + m), (e - m) / p),
    };
    let order = n.to_usize().unwrap_or(0);
    let sign = if order.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(ResonanceAmplitudes {
        b: real(T::zero()),
        f1: real(T::half() * (first + second)),
        f2: real(T::half() * (first - second)),
        g: imag(-q * a).exp() * sign,
        order,
    })
}

/// `|R(E⁻) - R(E⁺)|` of the Dirac barrier at `V0 = E`; zero for `m = 0`.
pub fn jump_gap<T: Scalar>(spec: &ParticleSpec<T>, a: T) -> Result<T> {
    let (below, above) = dirac_barrier_midgap(spec, a)?;
    Ok((below - above).abs())
}

/// `(mc²/E)²`, the bound on `R` for `V0 > 2E`.
pub fn small_mass_bound<T: Scalar>(spec: &ParticleSpec<T>) -> T {
    let r = spec.mass_energy() / spec.energy();
    r * r
}
