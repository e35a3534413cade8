//! Seeded randomized property suite.
//!
//! Each property is checked on `samples` random draws from a ChaCha stream,
//! so a `(seed, samples)` pair always reproduces the same report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::{dirac_barrier_solve, dirac_step_solve};
use crate::error::{Result, ScatterError};
use crate::kinematics::{ParticleSpec, Regime, Wave};
use crate::kleingordon::{kg_barrier_solve, kg_step_solve};
use crate::matcher::{continuity_residual, flux_conservation_error, solve_numeric, transfer_matrix_solve};
use crate::profile::PotentialProfile;
use crate::solution::{Model, ScatteringSolution};

/// Deliberate defects used to check that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flips the sign of the `E V0` term of the Dirac barrier amplitude below
    /// the gap.
    FlipEvSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub samples: usize,
    pub mutation: Option<Mutation>,
}

impl VerifyOptions {
    pub fn new(seed: u64, samples: usize) -> Self {
        Self {
            seed,
            samples,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// Parameters of the first failing draw.
    pub first_failure: Option<String>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed())
    }
}

/// Names of the checked properties, in report order.
pub const PROPERTIES: [&str; 10] = [
    "boundedness",
    "oracle-equivalence",
    "unitarity",
    "continuity",
    "exchange-symmetry",
    "gap-platform",
    "alley",
    "resonance",
    "transfer-consistency",
    "massless-transmission",
];

/// `|x - y| <= tol * max(|x|, floor)`.
pub fn close(x: f64, y: f64, tol: f64, floor: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(floor)
}

/// Reflection coefficients below this are compared absolutely.
pub const REFLECTION_FLOOR: f64 = 1e-12;

fn closed_form(model: Model, barrier: Option<f64>, spec: &ParticleSpec, v0: f64) -> Result<ScatteringSolution> {
    match (model, barrier) {
        (Model::Dirac, None) => dirac_step_solve(spec, v0),
        (Model::Dirac, Some(a)) => dirac_barrier_solve(spec, v0, a),
        (Model::KleinGordon, None) => kg_step_solve(spec, v0),
        (Model::KleinGordon, Some(a)) => kg_barrier_solve(spec, v0, a),
    }
}

fn mutated_reflection(spec: &ParticleSpec, v0: f64, a: f64) -> f64 {
    let (e, m, z) = (spec.energy(), spec.mass_energy(), spec.momentum());
    let p = spec.kinematics(v0).wave.magnitude();
    let (s, c) = ((p * a).sin(), (p * a).cos());
    let num = v0 * m * s;
    let re = (z * z + e * v0) * s;
    let im = p * z * c;
    num * num / (re * re + im * im)
}

struct Draw {
    model: Model,
    spec: ParticleSpec,
    v0: f64,
    a: f64,
}

impl Draw {
    fn describe(&self) -> String {
        format!(
            "model={} mc2={:.17e} E={:.17e} V0={:.17e} a={:.17e}",
            self.model.name(),
            self.spec.mass_energy(),
            self.spec.energy(),
            self.v0,
            self.a
        )
    }
}

fn draw(rng: &mut ChaCha8Rng) -> Draw {
    let model = if rng.gen_bool(0.5) { Model::Dirac } else { Model::KleinGordon };
    let m = if rng.gen_bool(0.05) { 0.0 } else { rng.gen_range(0.1..5.0) };
    let e = if m == 0.0 {
        rng.gen_range(0.1..20.0)
    } else {
        m * rng.gen_range(1.001..12.0)
    };
    let spec = ParticleSpec::new(m, e).expect("valid draw");
    let v0 = if rng.gen_bool(0.1) {
        [e - m, e, e + m, 2.0 * e][rng.gen_range(0..4)]
    } else {
        rng.gen_range(-5.0 * e..8.0 * e)
    };
    let a = 10f64.powf(rng.gen_range(-3.0..1.5));
    Draw { model, spec, v0, a }
}

/// Runs every property on `samples` draws.
pub fn run_verification(opts: VerifyOptions) -> Result<VerifyReport> {
    if opts.samples == 0 {
        return Err(ScatterError::Precondition("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut props: Vec<PropertyResult> = PROPERTIES.iter().map(|n| PropertyResult::new(n)).collect();
    let idx = |name: &str| PROPERTIES.iter().position(|n| *n == name).expect("known property");

    for _ in 0..opts.samples {
        let d = draw(&mut rng);
        let (e, m) = (d.spec.energy(), d.spec.mass_energy());
        let class = d.spec.classify(d.v0);
        for barrier in [None, Some(d.a)] {
            let sol = closed_form(d.model, barrier, &d.spec, d.v0)?;
            let (r, t) = (sol.reflection(), sol.transmission());
            props[idx("boundedness")].check(
                (0.0..=1.0).contains(&r) && (0.0..=1.0).contains(&t) && (r + t - 1.0).abs() < 1e-12,
                || format!("{} geometry={} R={r:e} T={t:e}", d.describe(), geom(barrier)),
            );
            if sol.limit_point().is_some() {
                continue;
            }
            let profile = match barrier {
                Some(a) => PotentialProfile::barrier(d.v0, a)?,
                None => PotentialProfile::step(d.v0)?,
            };
            let num = solve_numeric(&profile, &d.spec, d.model)?;
            let r_cf = match (opts.mutation, d.model, barrier) {
                (Some(Mutation::FlipEvSign), Model::Dirac, Some(a)) if class.regime == Regime::PropagatingPositive => {
                    mutated_reflection(&d.spec, d.v0, a)
                }
                _ => r,
            };
            props[idx("oracle-equivalence")].check(close(num.reflection(), r_cf, 1e-10, REFLECTION_FLOOR), || {
                format!(
                    "{} geometry={} closed={r_cf:.17e} oracle={:.17e}",
                    d.describe(),
                    geom(barrier),
                    num.reflection()
                )
            });
            let flux = flux_conservation_error(&sol).max(flux_conservation_error(&num));
            props[idx("unitarity")].check(flux < 1e-10, || {
                format!("{} geometry={} flux error={flux:e}", d.describe(), geom(barrier))
            });
            let res = continuity_residual(&sol);
            props[idx("continuity")].check(res < 1e-12 * (1.0 + e), || {
                format!("{} geometry={} residual={res:e}", d.describe(), geom(barrier))
            });
        }

        if m > 0.0 {
            // exchange pairs V0 <-> 2E - V0 below the gap
            let v = rng.gen_range(0.0..1.0) * (e - m);
            if v > 0.0 {
                for barrier in [None, Some(d.a)] {
                    let r1 = closed_form(d.model, barrier, &d.spec, v)?.reflection();
                    let r2 = closed_form(d.model, barrier, &d.spec, 2.0 * e - v)?.reflection();
                    props[idx("exchange-symmetry")].check((r1 - r2).abs() < 1e-12, || {
                        format!("{} geometry={} V0={v:e} R={r1:e} R'={r2:e}", d.describe(), geom(barrier))
                    });
                }
            }
            let g = (e - m) + rng.gen_range(0.0..=1.0) * 2.0 * m;
            let r = closed_form(d.model, None, &d.spec, g)?.reflection();
            props[idx("gap-platform")].check(r == 1.0, || format!("{} V0={g:e} R={r:e}", d.describe()));
        }

        for barrier in [None, Some(d.a)] {
            let r = closed_form(d.model, barrier, &d.spec, 2.0 * e)?.reflection();
            props[idx("alley")].check(r < 1e-12, || format!("{} geometry={} R={r:e}", d.describe(), geom(barrier)));
        }

        let vr = if rng.gen_bool(0.5) {
            e - m - rng.gen_range(0.01..5.0) * e
        } else {
            e + m + rng.gen_range(0.01..5.0) * e
        };
        if let Wave::Propagating(p) = d.spec.kinematics(vr).wave {
            let n = rng.gen_range(1..=5) as f64;
            let a = n * std::f64::consts::PI / p;
            let r = closed_form(d.model, Some(a), &d.spec, vr)?.reflection();
            props[idx("resonance")].check(r < 1e-12, || format!("{} V0={vr:e} a={a:e} R={r:e}", d.describe()));
        }

        let profile = random_profile(&mut rng, e);
        if let Ok(dense) = solve_numeric(&profile, &d.spec, d.model) {
            let tm = transfer_matrix_solve(&profile, &d.spec, d.model)?;
            let ok = close(dense.reflection(), tm.reflection(), 1e-10, REFLECTION_FLOOR)
                && (tm.reflection() + tm.transmission() - 1.0).abs() < 1e-10
                && (dense.reflection() + dense.transmission() - 1.0).abs() < 1e-10;
            props[idx("transfer-consistency")].check(ok, || {
                format!(
                    "{} profile={:?} dense R={:e} transfer R={:e} T={:e}",
                    d.describe(),
                    profile.segments(),
                    dense.reflection(),
                    tm.reflection(),
                    tm.transmission()
                )
            });
        }

        let massless = ParticleSpec::new(0.0, e).expect("positive energy");
        let tm = transfer_matrix_solve(&profile, &massless, Model::Dirac);
        if let Ok(tm) = tm {
            props[idx("massless-transmission")].check(tm.reflection() < 1e-12, || {
                format!("E={e:e} profile={:?} R={:e}", profile.segments(), tm.reflection())
            });
        }
    }

    Ok(VerifyReport {
        seed: opts.seed,
        samples: opts.samples,
        properties: props,
    })
}

fn geom(barrier: Option<f64>) -> &'static str {
    if barrier.is_some() {
        "barrier"
    } else {
        "step"
    }
}

/// Random profile with zero potential at both ends and 1 to 6 interior
/// segments.
pub fn random_profile(rng: &mut impl Rng, energy: f64) -> PotentialProfile {
    let inner = rng.gen_range(1..=6);
    let mut x = 0.0;
    let mut interfaces = vec![x];
    let mut heights = vec![0.0];
    for _ in 0..inner {
        heights.push(rng.gen_range(-3.0 * energy..6.0 * energy));
        x += 10f64.powf(rng.gen_range(-2.0..1.0));
        interfaces.push(x);
    }
    heights.push(0.0);
    PotentialProfile::from_interfaces(&interfaces, &heights).expect("increasing interfaces")
}
