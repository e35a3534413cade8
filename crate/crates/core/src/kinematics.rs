//! Particle parameters and the per-region regime/branch classification.
//!
//! Units: ħ = c = 1 throughout. Energies and the rest energy `mc²` share one
//! unit; lengths are measured in the inverse of that unit. With `mc²`-units
//! (`ParticleSpec::in_rest_units`) the rest energy is 1 and lengths are in
//! units of ħ/mc. The massless case has no natural scale and must be given
//! in raw units.

use crate::error::{Result, ScatterError};
use crate::scalar::Scalar;

/// Rest energy and total energy of the incident particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec<T = f64> {
    mass_energy: T,
    energy: T,
}

impl<T: Scalar> ParticleSpec<T> {
    /// Builds a particle from raw energies. The particle must propagate in a
    /// zero-potential region: `energy > mass_energy >= 0`.
    pub fn new(mass_energy: T, energy: T) -> Result<Self> {
        if !mass_energy.is_finite() || !energy.is_finite() {
            return Err(ScatterError::InvalidParticle(format!(
                "non-finite parameters (mc² = {mass_energy}, E = {energy})"
            )));
        }
        if mass_energy < T::zero() {
            return Err(ScatterError::InvalidParticle(format!(
                "rest energy must be non-negative, got {mass_energy}"
            )));
        }
        if energy <= mass_energy {
            if energy.abs() <= mass_energy || energy == T::zero() {
                return Err(ScatterError::IncidentInGap {
                    energy: energy.as_f64(),
                    mass_energy: mass_energy.as_f64(),
                });
            }
            return Err(ScatterError::InvalidParticle(format!(
                "incident particle must be on the positive branch, got E = {energy}"
            )));
        }
        Ok(Self {
            mass_energy,
            energy,
        })
    }

    /// Particle with `mc² = 1` and the given `E/mc²`.
    pub fn in_rest_units(energy_over_mc2: T) -> Result<Self> {
        Self::new(T::one(), energy_over_mc2)
    }

    #[inline]
    pub fn mass_energy(&self) -> T {
        self.mass_energy
    }

    #[inline]
    pub fn energy(&self) -> T {
        self.energy
    }

    /// Incident momentum `q` with `E² = q² + m²`.
    #[inline]
    pub fn momentum(&self) -> T {
        let (e, m) = (self.energy, self.mass_energy);
        ((e - m) * (e + m)).sqrt()
    }

    pub fn is_massless(&self) -> bool {
        self.mass_energy == T::zero()
    }

    pub fn classify(&self, potential: T) -> RegimeClass {
        classify_regime(self.energy, potential, self.mass_energy)
    }

    pub fn kinematics(&self, potential: T) -> RegionKinematics<T> {
        kinematics(self.energy, potential, self.mass_energy)
    }
}

/// Position of a potential height relative to the energy gap `[E - mc², E + mc²]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `V < E - mc²`
    PropagatingPositive,
    /// `E - mc² <= V <= E`
    EvanescentBelowE,
    /// `E < V <= E + mc²`
    EvanescentAboveE,
    /// `V > E + mc²` (the Klein zone)
    PropagatingNegative,
}

impl Regime {
    pub fn is_propagating(self) -> bool {
        matches!(self, Regime::PropagatingPositive | Regime::PropagatingNegative)
    }

    pub fn is_evanescent(self) -> bool {
        !self.is_propagating()
    }

    /// Stable lowercase name, used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Regime::PropagatingPositive => "propagating_positive",
            Regime::EvanescentBelowE => "evanescent_below_e",
            Regime::EvanescentAboveE => "evanescent_above_e",
            Regime::PropagatingNegative => "propagating_negative",
        }
    }
}

/// Exact hits on the gap edges or on `V = E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapBoundary {
    /// `V = E - mc²`
    LowerEdge,
    /// `V = E`
    Midgap,
    /// `V = E + mc²`
    UpperEdge,
}

impl GapBoundary {
    pub fn name(self) -> &'static str {
        match self {
            GapBoundary::LowerEdge => "gap_lower_edge",
            GapBoundary::Midgap => "midgap",
            GapBoundary::UpperEdge => "gap_upper_edge",
        }
    }
}

/// Regime plus the boundary flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegimeClass {
    pub regime: Regime,
    pub boundary: Option<GapBoundary>,
}

impl RegimeClass {
    pub fn is_boundary(&self) -> bool {
        self.boundary.is_some()
    }
}

/// Energy branch selected in a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Positive,
    Negative,
}

/// Propagating momentum `p` or evanescent decay constant `k`, both `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave<T> {
    Propagating(T),
    Evanescent(T),
}

impl<T: Scalar> Wave<T> {
    pub fn magnitude(&self) -> T {
        match *self {
            Wave::Propagating(p) | Wave::Evanescent(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionKinematics<T = f64> {
    pub branch: Branch,
    pub wave: Wave<T>,
}

/// Total classification of `V` against the gap of a particle with energy
/// `energy` and rest energy `mass_energy`.
///
/// Ties: `V = E` and `V = E - mc²` fall in `EvanescentBelowE`, `V = E + mc²`
/// in `EvanescentAboveE`; all three carry a boundary flag. For a massless
/// particle the three points coincide and report `Midgap`.
pub fn classify_regime<T: Scalar>(energy: T, potential: T, mass_energy: T) -> RegimeClass {
    let (lower, upper) = (energy - mass_energy, energy + mass_energy);
    let (regime, boundary) = if potential == energy {
        (Regime::EvanescentBelowE, Some(GapBoundary::Midgap))
    } else if potential == lower {
        (Regime::EvanescentBelowE, Some(GapBoundary::LowerEdge))
    } else if potential == upper {
        (Regime::EvanescentAboveE, Some(GapBoundary::UpperEdge))
    } else if potential < lower {
        (Regime::PropagatingPositive, None)
    } else if potential < energy {
        (Regime::EvanescentBelowE, None)
    } else if potential < upper {
        (Regime::EvanescentAboveE, None)
    } else {
        (Regime::PropagatingNegative, None)
    };
    RegimeClass { regime, boundary }
}

/// Branch and momentum (or decay constant) in a region of constant potential.
///
/// Principal non-negative roots; `(|E-V| - m)(|E-V| + m)` is used instead of a
/// difference of squares to keep accuracy near the gap edges. At the flagged
/// points `k` is exactly `0` (edges) or `mc²` (`V = E`).
pub fn kinematics<T: Scalar>(energy: T, potential: T, mass_energy: T) -> RegionKinematics<T> {
    let class = classify_regime(energy, potential, mass_energy);
    let kinetic = energy - potential;
    let branch = if kinetic >= T::zero() {
        Branch::Positive
    } else {
        Branch::Negative
    };
    let u = kinetic.abs();
    // flagged points are resolved exactly, independent of rounding in E - V
    let wave = if let Some(edge) = class.boundary {
        match edge {
            GapBoundary::Midgap => Wave::Evanescent(mass_energy),
            GapBoundary::LowerEdge | GapBoundary::UpperEdge => Wave::Evanescent(T::zero()),
        }
    } else if class.regime.is_propagating() {
        Wave::Propagating(((u - mass_energy) * (u + mass_energy)).max(T::zero()).sqrt())
    } else {
        Wave::Evanescent(((mass_energy - u) * (mass_energy + u)).max(T::zero()).sqrt())
    };
    RegionKinematics { branch, wave }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn classifies_examples() {
        let c = classify_regime(1.3, 0.2, 1.0);
        assert_eq!(c.regime, Regime::PropagatingPositive);
        assert!(c.boundary.is_none());

        let c = classify_regime(1.3, 1.3, 1.0);
        assert_eq!(c.regime, Regime::EvanescentBelowE);
        assert_eq!(c.boundary, Some(GapBoundary::Midgap));

        let c = classify_regime(1.3, 3.0, 1.0);
        assert_eq!(c.regime, Regime::PropagatingNegative);
    }

    #[test]
    fn gap_edges_are_flagged() {
        let (e, m) = (1.3_f64, 1.0);
        let lo = classify_regime(e, e - m, m);
        assert_eq!(lo.regime, Regime::EvanescentBelowE);
        assert_eq!(lo.boundary, Some(GapBoundary::LowerEdge));
        let hi = classify_regime(e, e + m, m);
        assert_eq!(hi.regime, Regime::EvanescentAboveE);
        assert_eq!(hi.boundary, Some(GapBoundary::UpperEdge));
    }

    #[test]
    fn kinematics_examples() {
        let k = kinematics(1.3, 0.0, 1.0);
        assert_eq!(k.branch, Branch::Positive);
        match k.wave {
            Wave::Propagating(p) => assert!((p - 0.69_f64.sqrt()).abs() < 1e-15),
            w => panic!("unexpected {w:?}"),
        }
        // alley: p at V = 2E equals q
        let alley = kinematics(1.3, 2.6, 1.0);
        assert_eq!(alley.branch, Branch::Negative);
        assert_eq!(alley.wave, k.wave);

        let mid = kinematics(1.3, 1.3, 1.0);
        assert_eq!(mid.wave, Wave::Evanescent(1.0));
    }

    #[test]
    fn massless_has_no_gap() {
        assert_eq!(classify_regime(2.0, 1.999, 0.0).regime, Regime::PropagatingPositive);
        assert_eq!(classify_regime(2.0, 2.001, 0.0).regime, Regime::PropagatingNegative);
    }

    #[test]
    fn rejects_incident_in_gap() {
        assert!(matches!(
            ParticleSpec::new(1.0, 0.5),
            Err(ScatterError::IncidentInGap { .. })
        ));
        assert!(ParticleSpec::new(-1.0, 2.0).is_err());
        assert!(ParticleSpec::new(0.0, 0.0).is_err());
        assert!(ParticleSpec::new(1.0, -3.0).is_err());
        assert!(ParticleSpec::new(0.0, 1e-9).is_ok());
    }

    #[test]
    fn works_in_single_precision() {
        let k = kinematics(1.3_f32, 0.0, 1.0);
        assert_eq!(k.branch, Branch::Positive);
        assert!((k.wave.magnitude() - 0.830_662_4).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn classification_is_total_and_consistent(
            m in 0.0f64..3.0, de in 0.01f64..10.0, v in -20.0f64..30.0
        ) {
            let e = m + de;
            let class = classify_regime(e, v, m);
            let kin = kinematics(e, v, m);
            prop_assert_eq!(class.regime.is_propagating(), matches!(kin.wave, Wave::Propagating(_)));
            let u = e - v;
            match kin.wave {
                Wave::Propagating(p) => {
                    let lhs = u * u;
                    let rhs = p * p + m * m;
                    prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
                }
                Wave::Evanescent(k) => {
                    let lhs = u * u + k * k;
                    prop_assert!((lhs - m * m).abs() <= 1e-12 * (m * m).max(1.0));
                }
            }
            // the evanescent interval is exactly [E - m, E + m]
            let inside = v >= e - m && v <= e + m;
            prop_assert_eq!(inside, class.regime.is_evanescent());
        }
    }
}
