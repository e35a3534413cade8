//! Closed-form solutions of the decoupled Klein-Gordon equation.
//!
//! In each constant region the branch `E > V` or `E < V` is selected and the
//! scalar wave is `e^{±ipx}` or `e^{±kx}` with `p² = (E - V)² - m²` and
//! `k² = m² - (E - V)²`. Both `psi` and `psi'` are continuous at interfaces.
//! Every result depends on `V0` only through `|E - V0|`.

use num_complex::Complex;

use crate::error::{Result, ScatterError};
use crate::kinematics::{Branch, ParticleSpec, Wave};
use crate::matcher::closed_form_solution;
use crate::profile::PotentialProfile;
use crate::scalar::{real, Scalar};
use crate::solution::{Model, ScatteringSolution};

/// `psi` and `psi'` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarWaveValue<T = f64> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
}

/// Branch used for a region: positive where `E > V`, negative otherwise
/// (including `E = V`).
pub fn kg_branch<T: Scalar>(energy: T, potential: T, _mass_energy: T) -> Branch {
    if energy > potential {
        Branch::Positive
    } else {
        Branch::Negative
    }
}

/// Step of height `v0`: `B = (q - p)/(q + p)` where the far side propagates,
/// `B = (q - ik)/(q + ik)` with `R = 1` exactly inside the gap. At the gap
/// edges, and at `V0 = E` when `m = 0`, `k = 0` gives `B = 1`; those points
/// are flagged.
pub fn kg_step_solve<T: Scalar>(spec: &ParticleSpec<T>, v0: T) -> Result<ScatteringSolution<T>> {
    let profile = PotentialProfile::step(v0)?;
    let q = spec.momentum();
    let class = spec.classify(v0);
    let b = match spec.kinematics(v0).wave {
        Wave::Propagating(p) => real((q - p) / (q + p)),
        Wave::Evanescent(k) => Complex::new(q, -k) / Complex::new(q, k),
    };
    let mut sol = closed_form_solution(&profile, spec, Model::KleinGordon, b);
    if class.regime.is_evanescent() {
        sol.reflection = T::one();
        sol.transmission = T::zero();
    }
    sol.limit = class.boundary;
    Ok(sol)
}

/// Square barrier of height `v0` on `(0, a]`.
///
/// Propagating interior: `B = (q² - p²) s / ((p² + q²) s + 2ipq c)`, with
/// `s = sin(pa)`, `c = cos(pa)`. Gap interior: the continuation `p → ik`,
/// `B = (k² + q²) t / ((q² - k²) t + 2ikq)` with `t = tanh(ka)`, continuous
/// across `V0 = E`. Where `k = 0` (the gap edges, and `V0 = E` for `m = 0`) the
/// interior wave is linear and `B = qa/(qa + 2i)`; those points are flagged.
pub fn kg_barrier_solve<T: Scalar>(spec: &ParticleSpec<T>, v0: T, a: T) -> Result<ScatteringSolution<T>> {
    let profile = PotentialProfile::barrier(v0, a)?;
    let q = spec.momentum();
    let class = spec.classify(v0);
    if class.boundary.is_some() && spec.kinematics(v0).wave == Wave::Evanescent(T::zero()) {
        let b = real(q * a) / Complex::new(q * a, T::two());
        let mut sol = closed_form_solution(&profile, spec, Model::KleinGordon, b);
        sol.limit = class.boundary;
        return Ok(sol);
    }
    let b = match spec.kinematics(v0).wave {
        Wave::Propagating(p) => {
            let (s, c) = ((p * a).sin(), (p * a).cos());
            real((q * q - p * p) * s) / Complex::new((p * p + q * q) * s, T::two() * p * q * c)
        }
        Wave::Evanescent(k) => {
            let t = (k * a).tanh();
            real((k * k + q * q) * t) / Complex::new((q * q - k * k) * t, T::two() * k * q)
        }
    };
    Ok(closed_form_solution(&profile, spec, Model::KleinGordon, b))
}

/// Barrier reflection maximum at `pa = (n + ½)π`: `((p² - q²)/(p² + q²))²`.
pub fn kg_barrier_maximum<T: Scalar>(spec: &ParticleSpec<T>, v0: T) -> Result<T> {
    match spec.kinematics(v0).wave {
        Wave::Propagating(p) => {
            let q = spec.momentum();
            let r = (p * p - q * q) / (p * p + q * q);
            Ok(r * r)
        }
        Wave::Evanescent(_) => Err(ScatterError::Precondition(format!(
            "V0 = {v0} lies in the gap; no oscillating maxima"
        ))),
    }
}

/// `psi` and `psi'` of a solved Klein-Gordon state at `x`.
pub fn kg_wavefunction<T: Scalar>(sol: &ScatteringSolution<T>, x: T) -> Result<ScalarWaveValue<T>> {
    if sol.model() != Model::KleinGordon {
        return Err(ScatterError::ModelMismatch {
            expected: Model::KleinGordon.name(),
            found: sol.model().name(),
        });
    }
    let [value, derivative] = sol.components(x);
    Ok(ScalarWaveValue { value, derivative })
}

/// `Im(psi* psi')`.
pub fn kg_current<T: Scalar>(psi: &ScalarWaveValue<T>) -> T {
    (psi.value.conj() * psi.derivative).im
}
