//! Solved scattering states shared by every solver.

use num_complex::Complex;

use crate::kinematics::{GapBoundary, ParticleSpec, Regime, RegimeClass, RegionKinematics};
use crate::matcher::basis::RegionBasis;
use crate::profile::{Geometry, Segment};
use crate::scalar::Scalar;

/// Wave equation being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Two-component spinor, components continuous at interfaces.
    Dirac,
    /// Decoupled Klein-Gordon scalar, value and derivative continuous.
    KleinGordon,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Dirac => "dirac",
            Model::KleinGordon => "kg",
        }
    }
}

/// How a solution was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveMethod {
    ClosedForm,
    DenseMatching,
    TransferMatrix,
}

/// One region of a solved state.
///
/// `amplitudes` are the coefficients of the two basis columns of the region
/// (see [`RegionBasis`]). The incident region holds `[1, B]`; the last region
/// holds the transmitted amplitude in its outgoing column and zero in the
/// other.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionState<T = f64> {
    pub segment: Segment<T>,
    pub class: RegimeClass,
    pub kinematics: RegionKinematics<T>,
    pub amplitudes: [Complex<T>; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution<T = f64> {
    pub(crate) model: Model,
    pub(crate) geometry: Geometry,
    pub(crate) spec: ParticleSpec<T>,
    pub(crate) regions: Vec<RegionState<T>>,
    pub(crate) reflection: T,
    pub(crate) transmission: T,
    pub(crate) method: SolveMethod,
    pub(crate) limit: Option<GapBoundary>,
}

impl<T: Scalar> ScatteringSolution<T> {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn spec(&self) -> &ParticleSpec<T> {
        &self.spec
    }

    pub fn method(&self) -> SolveMethod {
        self.method
    }

    pub fn regions(&self) -> &[RegionState<T>] {
        &self.regions
    }

    /// Reflection coefficient `R = |B|²`.
    pub fn reflection(&self) -> T {
        self.reflection
    }

    /// Transmission coefficient.
    pub fn transmission(&self) -> T {
        self.transmission
    }

    /// Reflection amplitude `B`.
    pub fn reflection_amplitude(&self) -> Complex<T> {
        self.regions[0].amplitudes[1]
    }

    /// Amplitude of the outgoing wave in the last region (`F` for a step,
    /// `G` for a barrier).
    pub fn transmitted_amplitude(&self) -> Complex<T> {
        let last = self.regions.len() - 1;
        if last == 0 {
            return self.regions[0].amplitudes[0];
        }
        let basis = self.basis(last);
        self.regions[last].amplitudes[basis.outgoing_column()]
    }

    /// Amplitude pairs of the regions strictly between the first and last.
    pub fn interior_amplitudes(&self) -> Vec<[Complex<T>; 2]> {
        let n = self.regions.len();
        if n < 3 {
            return Vec::new();
        }
        self.regions[1..n - 1].iter().map(|r| r.amplitudes).collect()
    }

    /// Set when the values are the conventional limit at a boundary point
    /// (gap edge or `V0 = E`) rather than a solved continuous state.
    pub fn limit_point(&self) -> Option<GapBoundary> {
        self.limit
    }

    pub fn basis(&self, index: usize) -> RegionBasis<T> {
        let r = &self.regions[index];
        RegionBasis::new(self.model, &self.spec, r.segment)
    }

    /// Regions in the Klein zone, where the negative-branch wave is taken as
    /// `e^{+ipx}`. The sign of the charge-weighted current is reversed there.
    pub fn klein_zone_regions(&self) -> Vec<usize> {
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.class.regime == Regime::PropagatingNegative)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn region_index(&self, x: T) -> usize {
        self.regions
            .iter()
            .position(|r| x <= r.segment.right)
            .unwrap_or(self.regions.len() - 1)
    }

    /// Components of the state at `x` evaluated with the basis of region `index`
    /// (spinor `(upper, lower)` for Dirac, `(psi, psi')` for Klein-Gordon).
    pub fn components_in(&self, index: usize, x: T) -> [Complex<T>; 2] {
        let basis = self.basis(index);
        let amps = self.regions[index].amplitudes;
        let mut out = [Complex::new(T::zero(), T::zero()); 2];
        for (col, amp) in amps.iter().enumerate() {
            if *amp == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let v = basis.value(col, x);
            out[0] = out[0] + *amp * v[0];
            out[1] = out[1] + *amp * v[1];
        }
        out
    }

    pub fn components(&self, x: T) -> [Complex<T>; 2] {
        self.components_in(self.region_index(x), x)
    }

    /// Probability flux at `x`: `2 Re(upper* lower)` for Dirac,
    /// `Im(psi* psi')` for Klein-Gordon.
    pub fn current(&self, x: T) -> T {
        flux(self.model, self.components(x))
    }
}

pub(crate) fn flux<T: Scalar>(model: Model, v: [Complex<T>; 2]) -> T {
    match model {
        Model::Dirac => T::two() * (v[0].conj() * v[1]).re,
        Model::KleinGordon => (v[0].conj() * v[1]).im,
    }
}
