//! Piecewise-constant potential profiles.

use crate::error::{Result, ScatterError};
use crate::kinematics::{ParticleSpec, Regime};
use crate::scalar::Scalar;

/// Shape tag of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// `V = 0` for `x <= 0`, `V0` for `x > 0`.
    Step,
    /// `V0` on `0 < x <= a`, zero elsewhere.
    Barrier,
    General,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Step => "step",
            Geometry::Barrier => "barrier",
            Geometry::General => "general",
        }
    }
}

/// One constant piece. `left` may be `-inf`, `right` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T = f64> {
    pub left: T,
    pub right: T,
    pub height: T,
}

impl<T: Scalar> Segment<T> {
    pub fn width(&self) -> T {
        self.right - self.left
    }
}

/// Ordered, contiguous segments covering the whole line.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile<T = f64> {
    segments: Vec<Segment<T>>,
    geometry: Geometry,
}

impl<T: Scalar> PotentialProfile<T> {
    /// Infinite step of height `v0` at the origin.
    pub fn step(v0: T) -> Result<Self> {
        finite(v0, "step height")?;
        Ok(Self {
            segments: vec![
                Segment {
                    left: T::neg_infinity(),
                    right: T::zero(),
                    height: T::zero(),
                },
                Segment {
                    left: T::zero(),
                    right: T::infinity(),
                    height: v0,
                },
            ],
            geometry: Geometry::Step,
        })
    }

    /// Square barrier of height `v0` on `(0, a]`.
    pub fn barrier(v0: T, a: T) -> Result<Self> {
        finite(v0, "barrier height")?;
        if !(a > T::zero()) || !a.is_finite() {
            return Err(ScatterError::NonPositiveWidth(a.as_f64()));
        }
        Ok(Self {
            segments: vec![
                Segment {
                    left: T::neg_infinity(),
                    right: T::zero(),
                    height: T::zero(),
                },
                Segment {
                    left: T::zero(),
                    right: a,
                    height: v0,
                },
                Segment {
                    left: a,
                    right: T::infinity(),
                    height: T::zero(),
                },
            ],
            geometry: Geometry::Barrier,
        })
    }

    /// General profile: `heights.len() == interfaces.len() + 1`, interfaces
    /// strictly increasing and finite.
    pub fn from_interfaces(interfaces: &[T], heights: &[T]) -> Result<Self> {
        if heights.len() != interfaces.len() + 1 {
            return Err(ScatterError::InvalidProfile(format!(
                "{} heights for {} interfaces",
                heights.len(),
                interfaces.len()
            )));
        }
        for h in heights {
            finite(*h, "segment height")?;
        }
        for x in interfaces {
            if !x.is_finite() {
                return Err(ScatterError::InvalidProfile("non-finite interface".into()));
            }
        }
        if interfaces.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ScatterError::InvalidProfile(
                "interfaces must be strictly increasing".into(),
            ));
        }
        let n = heights.len();
        let segments = (0..n)
            .map(|i| Segment {
                left: if i == 0 { T::neg_infinity() } else { interfaces[i - 1] },
                right: if i + 1 == n { T::infinity() } else { interfaces[i] },
                height: heights[i],
            })
            .collect();
        Ok(Self {
            segments,
            geometry: Geometry::General,
        })
    }

    /// Single region of constant potential.
    pub fn uniform(v: T) -> Result<Self> {
        Self::from_interfaces(&[], &[v])
    }

    /// Evenly spaced alternating wells and barriers: `count` barriers of
    /// width `barrier_width` separated by `gap_width` of zero potential.
    pub fn superlattice(v0: T, barrier_width: T, gap_width: T, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(ScatterError::InvalidProfile("superlattice needs at least one barrier".into()));
        }
        if !(barrier_width > T::zero()) {
            return Err(ScatterError::NonPositiveWidth(barrier_width.as_f64()));
        }
        if !(gap_width > T::zero()) {
            return Err(ScatterError::NonPositiveWidth(gap_width.as_f64()));
        }
        let mut interfaces = Vec::with_capacity(2 * count);
        let mut heights = vec![T::zero()];
        let mut x = T::zero();
        for i in 0..count {
            interfaces.push(x);
            heights.push(v0);
            x = x + barrier_width;
            interfaces.push(x);
            heights.push(T::zero());
            if i + 1 < count {
                x = x + gap_width;
            }
        }
        Self::from_interfaces(&interfaces, &heights)
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn interfaces(&self) -> impl Iterator<Item = T> + '_ {
        self.segments[..self.segments.len() - 1].iter().map(|s| s.right)
    }

    /// Index of the segment containing `x`; an interface point belongs to the
    /// segment on its left.
    pub fn region_index(&self, x: T) -> usize {
        self.segments
            .iter()
            .position(|s| x <= s.right)
            .unwrap_or(self.segments.len() - 1)
    }

    pub fn height_at(&self, x: T) -> T {
        self.segments[self.region_index(x)].height
    }

    /// Scattering needs a propagating positive-branch incident region. The
    /// last region may be of any regime (an evanescent tail transmits nothing).
    pub fn check_asymptotics(&self, spec: &ParticleSpec<T>) -> Result<()> {
        let first = self.segments[0].height;
        let class = spec.classify(first);
        match class.regime {
            Regime::PropagatingPositive => Ok(()),
            Regime::EvanescentBelowE | Regime::EvanescentAboveE => Err(ScatterError::IncidentInGap {
                energy: (spec.energy() - first).as_f64(),
                mass_energy: spec.mass_energy().as_f64(),
            }),
            Regime::PropagatingNegative => Err(ScatterError::InvalidProfile(
                "incident region must lie below E - mc²".into(),
            )),
        }
    }
}

fn finite<T: Scalar>(v: T, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ScatterError::InvalidProfile(format!("{what} is not finite")))
    }
}
