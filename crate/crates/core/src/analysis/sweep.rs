//! Reflection curves `R(V0)` at fixed particle and width.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::dirac::{dirac_barrier_midgap, dirac_barrier_solve, dirac_step_solve};
use crate::error::{Result, ScatterError};
use crate::kinematics::{GapBoundary, ParticleSpec, Regime};
use crate::kleingordon::{kg_barrier_solve, kg_step_solve};
use crate::profile::Geometry;
use crate::scalar::Scalar;
use crate::solution::{Model, ScatteringSolution};

/// How the barrier width is chosen along a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WidthRule<T = f64> {
    Fixed(T),
    /// Two widths per curve: `coth(ka) = 2` with `k = mc²` for heights in the
    /// gap, `cot(pa) = 1/2` with `p = q` for propagating heights.
    FigureConvention,
}

impl<T: Scalar> WidthRule<T> {
    /// Width used at height `v0`.
    pub fn width_at(&self, spec: &ParticleSpec<T>, v0: T) -> Result<T> {
        match *self {
            WidthRule::Fixed(a) => {
                if a > T::zero() && a.is_finite() {
                    Ok(a)
                } else {
                    Err(ScatterError::NonPositiveWidth(a.as_f64()))
                }
            }
            WidthRule::FigureConvention => {
                if spec.classify(v0).regime.is_evanescent() && !spec.is_massless() {
                    Ok(figure_gap_width(spec))
                } else {
                    Ok(figure_propagating_width(spec))
                }
            }
        }
    }
}

/// `a` with `coth(mc² a) = 2`.
pub fn figure_gap_width<T: Scalar>(spec: &ParticleSpec<T>) -> T {
    T::half().atanh() / spec.mass_energy()
}

/// `a` with `cot(q a) = 1/2`.
pub fn figure_propagating_width<T: Scalar>(spec: &ParticleSpec<T>) -> T {
    T::two().atan() / spec.momentum()
}

/// One row of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample<T = f64> {
    pub v0: T,
    pub r: T,
    pub regime: Regime,
    /// `;`-separated tags (`alley`, `gap_lower_edge`, `midgap`,
    /// `gap_upper_edge`, `resonance`, `jump-`, `jump+`); empty if none.
    pub annotation: String,
}

/// Features of a curve computed from the parameters, not from the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveAnnotations<T = f64> {
    /// `V0 = 2E`.
    pub alleys: Vec<T>,
    /// `[E - mc², E + mc²]`.
    pub gap: (T, T),
    /// Heights inside the sampled range with `pa = nπ` (barriers only).
    pub resonances: Vec<T>,
    /// `|R(E⁻) - R(E⁺)|` for Dirac barriers.
    pub jump: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve<T = f64> {
    pub model: Model,
    pub geometry: Geometry,
    pub spec: ParticleSpec<T>,
    pub width: Option<WidthRule<T>>,
    pub samples: Vec<SweepSample<T>>,
    pub annotations: CurveAnnotations<T>,
}

pub const CSV_HEADER: &str = "V0,R,regime,annotation";

impl<T: Scalar> SweepCurve<T> {
    /// Writes `V0,R,regime,annotation` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for s in &self.samples {
            writeln!(w, "{:.16e},{:.16e},{},{}", s.v0, s.r, s.regime.name(), s.annotation)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn max_reflection(&self) -> T {
        self.samples.iter().fold(T::zero(), |acc, s| acc.max(s.r))
    }
}

/// `count` evenly spaced heights on `[min, max]`, optionally merged with
/// the special heights `E - mc²`, `E`, `E + mc²` and `2E` that fall inside.
pub fn v0_grid<T: Scalar>(spec: &ParticleSpec<T>, min: T, max: T, count: usize, special: bool) -> Result<Vec<T>> {
    if count < 2 {
        return Err(ScatterError::Precondition(format!("grid needs at least 2 points, got {count}")));
    }
    if !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(ScatterError::Precondition(format!("grid needs min < max, got {min}:{max}")));
    }
    let step = (max - min) / T::lit((count - 1) as f64);
    let mut grid: Vec<T> = (0..count).map(|i| min + step * T::lit(i as f64)).collect();
    grid[count - 1] = max;
    if special {
        let (e, m) = (spec.energy(), spec.mass_energy());
        for v in [e - m, e, e + m, e + e] {
            if v >= min && v <= max {
                grid.push(v);
            }
        }
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
        grid.dedup();
    }
    Ok(grid)
}

/// Solves one point with the closed form of the model and geometry.
pub fn solve_point<T: Scalar>(
    model: Model,
    geometry: Geometry,
    spec: &ParticleSpec<T>,
    width: Option<WidthRule<T>>,
    v0: T,
) -> Result<ScatteringSolution<T>> {
    match geometry {
        Geometry::Step => match model {
            Model::Dirac => dirac_step_solve(spec, v0),
            Model::KleinGordon => kg_step_solve(spec, v0),
        },
        Geometry::Barrier => {
            let rule = width.ok_or_else(|| ScatterError::Precondition("barrier sweep needs a width".into()))?;
            let a = rule.width_at(spec, v0)?;
            match model {
                Model::Dirac => dirac_barrier_solve(spec, v0, a),
                Model::KleinGordon => kg_barrier_solve(spec, v0, a),
            }
        }
        Geometry::General => Err(ScatterError::Precondition(
            "sweeps are defined for step and barrier geometries".into(),
        )),
    }
}

/// Rows produced at one grid height: two for a Dirac barrier at `V0 = E`
/// (`jump-` then `jump+`), one otherwise.
pub fn evaluate_point<T: Scalar>(
    model: Model,
    geometry: Geometry,
    spec: &ParticleSpec<T>,
    width: Option<WidthRule<T>>,
    v0: T,
) -> Result<Vec<SweepSample<T>>> {
    let class = spec.classify(v0);
    let mut tags = Vec::new();
    if v0 == spec.energy() + spec.energy() {
        tags.push("alley");
    }
    if let Some(b) = class.boundary {
        tags.push(b.name());
    }
    if geometry == Geometry::Barrier {
        if let Some(rule) = width {
            if is_resonant(spec, v0, rule.width_at(spec, v0)?) {
                tags.push("resonance");
            }
        }
    }
    let sol = solve_point(model, geometry, spec, width, v0)?;
    let split = model == Model::Dirac
        && geometry == Geometry::Barrier
        && class.boundary == Some(GapBoundary::Midgap)
        && !spec.is_massless();
    if split {
        let a = width.expect("checked by solve_point").width_at(spec, v0)?;
        let (below, above) = dirac_barrier_midgap(spec, a)?;
        let row = |r: T, tag: &str| {
            let mut t = tags.clone();
            t.push(tag);
            SweepSample {
                v0,
                r,
                regime: class.regime,
                annotation: t.join(";"),
            }
        };
        return Ok(vec![row(below, "jump-"), row(above, "jump+")]);
    }
    Ok(vec![SweepSample {
        v0,
        r: sol.reflection(),
        regime: class.regime,
        annotation: tags.join(";"),
    }])
}

fn is_resonant<T: Scalar>(spec: &ParticleSpec<T>, v0: T, a: T) -> bool {
    let kin = spec.kinematics(v0);
    if !spec.classify(v0).regime.is_propagating() {
        return false;
    }
    let n = kin.wave.magnitude() * a / T::PI();
    n >= T::half() && (n - n.round()).abs() < T::lit(1e-9)
}

/// Heights `V0` in `[min, max]` at which a barrier of width `a` is resonant,
/// `p(V0) a = nπ`, `n >= 1`; both sides of the gap, ascending.
pub fn resonant_heights<T: Scalar>(spec: &ParticleSpec<T>, a: T, min: T, max: T) -> Vec<T> {
    let (e, m) = (spec.energy(), spec.mass_energy());
    let mut out = Vec::new();
    let pmax = (e - min).abs().max((max - e).abs());
    let mut n = 1usize;
    loop {
        let p = T::lit(n as f64) * T::PI() / a;
        if p > pmax + T::one() {
            break;
        }
        let d = (p * p + m * m).sqrt();
        for v in [e - d, e + d] {
            if v >= min && v <= max {
                out.push(v);
            }
        }
        n += 1;
        if n > 1_000_000 {
            break;
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite heights"));
    out
}

/// Sweeps the closed-form `R(V0)` over `grid` (sorted on output). Rows are
/// computed in parallel and assembled in grid order.
pub fn sweep<T: Scalar>(
    model: Model,
    geometry: Geometry,
    spec: &ParticleSpec<T>,
    width: Option<WidthRule<T>>,
    grid: &[T],
) -> Result<SweepCurve<T>> {
    if grid.is_empty() {
        return Err(ScatterError::Precondition("empty grid".into()));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(ScatterError::Precondition("grid contains a non-finite height".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let rows: Vec<Vec<SweepSample<T>>> = grid
        .par_iter()
        .map(|&v| evaluate_point(model, geometry, spec, width, v))
        .collect::<Result<_>>()?;
    let samples: Vec<SweepSample<T>> = rows.into_iter().flatten().collect();

    let (e, m) = (spec.energy(), spec.mass_energy());
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let alleys = if e + e >= lo && e + e <= hi { vec![e + e] } else { Vec::new() };
    let (resonances, jump) = match (geometry, width) {
        (Geometry::Barrier, Some(rule)) => {
            let a_prop = match rule {
                WidthRule::Fixed(a) => a,
                WidthRule::FigureConvention => figure_propagating_width(spec),
            };
            let res = resonant_heights(spec, a_prop, lo, hi);
            let jump = if model == Model::Dirac {
                let a = rule.width_at(spec, e)?;
                let (below, above) = dirac_barrier_midgap(spec, a)?;
                Some((below - above).abs())
            } else {
                None
            };
            (res, jump)
        }
        _ => (Vec::new(), None),
    };
    Ok(SweepCurve {
        model,
        geometry,
        spec: *spec,
        width,
        samples,
        annotations: CurveAnnotations {
            alleys,
            gap: (e - m, e + m),
            resonances,
            jump,
        },
    })
}
