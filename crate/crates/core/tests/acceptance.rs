//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

// `!(x < tol)` fails on NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Mutex;

use kleinscatter::analysis::{
    evaluate_point, integrate_dirac_components, jump_gap, massless_phase_solution, Sheet, SmoothPotential, WidthRule,
};
use kleinscatter::matcher::{flux_conservation_error, solve_numeric, transfer_matrix_solve};
use kleinscatter::verify::{close, random_profile, REFLECTION_FLOOR};
use kleinscatter::{
    dirac_barrier_midgap, dirac_barrier_solve, dirac_step_limit, dirac_step_solve, kg_barrier_maximum,
    kg_barrier_solve, kg_step_solve, Complex, GapBoundary, Geometry, Model, ParticleSpec, PotentialProfile,
    ScatteringSolution, Wave,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Spec = ParticleSpec<f64>;

/// Flux bookkeeping shared by every criterion that produces solutions.
#[derive(Default)]
struct FluxTally {
    checked: usize,
    worst: f64,
    first_failure: Option<String>,
    failures: usize,
    conventional: usize,
}

static FLUX: Mutex<FluxTally> = Mutex::new(FluxTally {
    checked: 0,
    worst: 0.0,
    first_failure: None,
    failures: 0,
    conventional: 0,
});

fn record_flux(sol: &ScatteringSolution<f64>, context: impl FnOnce() -> String) {
    // The Dirac barrier at V0 = E reports the lower-branch endpoint value,
    // which is not a matched state; only T = 1 - R is checked there.
    let conventional = sol.model() == Model::Dirac
        && sol.geometry() == Geometry::Barrier
        && sol.limit_point() == Some(GapBoundary::Midgap)
        && !sol.spec().is_massless();
    let err = if conventional {
        (sol.transmission() - (1.0 - sol.reflection())).abs()
    } else {
        flux_conservation_error(sol)
    };
    let mut t = FLUX.lock().unwrap();
    if conventional {
        t.conventional += 1;
    }
    t.checked += 1;
    t.worst = t.worst.max(err);
    if !(err < 1e-10) {
        t.failures += 1;
        if t.first_failure.is_none() {
            t.first_failure = Some(format!("{} flux error {err:e}", context()));
        }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            passed: true,
            detail: summary,
        }
    } else {
        Outcome {
            passed: false,
            detail: format!("{summary}; {} failures, first: {}", failures.len(), failures[0]),
        }
    }
}

fn closed(model: Model, spec: &Spec, v0: f64, a: Option<f64>) -> ScatteringSolution<f64> {
    match (model, a) {
        (Model::Dirac, None) => dirac_step_solve(spec, v0),
        (Model::Dirac, Some(a)) => dirac_barrier_solve(spec, v0, a),
        (Model::KleinGordon, None) => kg_step_solve(spec, v0),
        (Model::KleinGordon, Some(a)) => kg_barrier_solve(spec, v0, a),
    }
    .unwrap_or_else(|e| panic!("{} E={} V0={v0} a={a:?}: {e}", model.name(), spec.energy()))
}

fn tag(model: Model, spec: &Spec, v0: f64, a: Option<f64>) -> String {
    format!(
        "{} m={:e} E={:e} V0={v0:.17e} a={a:?}",
        model.name(),
        spec.mass_energy(),
        spec.energy()
    )
}

const MODELS: [Model; 2] = [Model::Dirac, Model::KleinGordon];

fn rest(e: f64) -> Spec {
    ParticleSpec::in_rest_units(e).unwrap()
}

fn boundedness() -> Outcome {
    const N: usize = 100_000;
    let failures: Vec<String> = (0..N)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + i as u64);
            let model = MODELS[rng.gen_range(0..2)];
            let m = if rng.gen_bool(0.05) { 0.0 } else { rng.gen_range(0.05..10.0) };
            let e = if m == 0.0 {
                rng.gen_range(0.05..50.0)
            } else {
                m * (1.0 + 10f64.powf(rng.gen_range(-4.0..1.5)))
            };
            let spec = ParticleSpec::new(m, e).unwrap();
            let v0 = if rng.gen_bool(0.05) {
                [e - m, e, e + m, 2.0 * e][rng.gen_range(0..4)]
            } else {
                rng.gen_range(-10.0 * e..20.0 * e)
            };
            let a = 10f64.powf(rng.gen_range(-4.0..2.0));
            let mut bad = None;
            for w in [None, Some(a)] {
                let sol = closed(model, &spec, v0, w);
                let r = sol.reflection();
                if !(0.0..=1.0).contains(&r) {
                    bad = Some(format!("{} R={r:e}", tag(model, &spec, v0, w)));
                }
                record_flux(&sol, || tag(model, &spec, v0, w));
            }
            bad
        })
        .collect();
    outcome(&failures, format!("{} tuples, step and barrier each", N))
}

fn oracle_equivalence() -> Outcome {
    let widths = [0.05, 0.3, 1.0, 2.7, 8.0];
    let mut failures = Vec::new();
    let mut compared = 0usize;
    let mut floored = 0usize;
    let mut worst = 0.0f64;
    for e in [1.05, 1.3, 2.0, 3.0, 10.0] {
        let spec = rest(e);
        let grid: Vec<f64> = (0..200).map(|i| -3.0 * e + 9.0 * e * (i as f64 + 0.5) / 200.0).collect();
        for &v0 in &grid {
            if spec.classify(v0).is_boundary() {
                continue;
            }
            for model in MODELS {
                let geoms: Vec<Option<f64>> = std::iter::once(None).chain(widths.iter().map(|&a| Some(a))).collect();
                for a in geoms {
                    let cf = closed(model, &spec, v0, a);
                    let profile = match a {
                        Some(a) => PotentialProfile::barrier(v0, a).unwrap(),
                        None => PotentialProfile::step(v0).unwrap(),
                    };
                    let num = solve_numeric(&profile, &spec, model).unwrap();
                    record_flux(&cf, || tag(model, &spec, v0, a));
                    record_flux(&num, || format!("oracle {}", tag(model, &spec, v0, a)));
                    let (x, y) = (cf.reflection(), num.reflection());
                    compared += 1;
                    if y.abs() < REFLECTION_FLOOR {
                        floored += 1;
                    }
                    worst = worst.max((x - y).abs() / y.abs().max(REFLECTION_FLOOR));
                    if !close(y, x, 1e-10, REFLECTION_FLOOR) {
                        failures.push(format!("{} closed={x:.17e} oracle={y:.17e}", tag(model, &spec, v0, a)));
                    }
                }
            }
        }
    }
    outcome(
        &failures,
        format!("{compared} points, worst relative {worst:.2e}, {floored} with R < {REFLECTION_FLOOR:e}"),
    )
}

fn gap_platform() -> Outcome {
    let mut failures = Vec::new();
    for e in [1.3, 3.0] {
        let spec = rest(e);
        for i in 0..50 {
            let v0 = (e - 1.0) + 2.0 * i as f64 / 49.0;
            for model in MODELS {
                let sol = closed(model, &spec, v0, None);
                record_flux(&sol, || tag(model, &spec, v0, None));
                if sol.reflection() != 1.0 {
                    failures.push(format!("{} R={:.17e}", tag(model, &spec, v0, None), sol.reflection()));
                }
            }
        }
    }
    outcome(&failures, "50 heights x 2 energies x 2 models".into())
}

fn alley() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for e in [1.3, 3.0] {
        let spec = rest(e);
        let v0 = 2.0 * e;
        match spec.kinematics(v0).wave {
            Wave::Propagating(p) if (p - spec.momentum()).abs() <= 1e-14 * p => {}
            w => failures.push(format!("E={e} p={w:?} q={}", spec.momentum())),
        }
        for model in MODELS {
            let mut geoms = vec![None];
            geoms.extend((1..=10).map(|i| Some(0.013 * 2.1f64.powi(i))));
            for a in geoms {
                let sol = closed(model, &spec, v0, a);
                record_flux(&sol, || tag(model, &spec, v0, a));
                worst = worst.max(sol.reflection());
                if !(sol.reflection() < 1e-12) {
                    failures.push(format!("{} R={:e}", tag(model, &spec, v0, a), sol.reflection()));
                }
            }
        }
    }
    outcome(&failures, format!("max R {worst:.2e}"))
}

fn dirac_asymptote() -> Outcome {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for (e, reference) in [(1.3, 0.220286), (3.0, 0.029437)] {
        let spec = rest(e);
        let v0 = 1e6;
        let sol = closed(Model::Dirac, &spec, v0, None);
        record_flux(&sol, || tag(Model::Dirac, &spec, v0, None));
        let r = sol.reflection();
        let lim = dirac_step_limit(&spec);
        detail.push(format!("E={e}: R={r:.6} limit={lim:.6}"));
        if (r - lim).abs() > 1e-5 || (r - reference).abs() > 1e-5 {
            failures.push(format!("E={e} R={r:.9} limit={lim:.9} reference={reference}"));
        }
    }
    outcome(&failures, detail.join(", "))
}

fn kg_asymptote() -> Outcome {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for e in [1.3, 3.0] {
        let spec = rest(e);
        let v0 = 1e6;
        let sol = closed(Model::KleinGordon, &spec, v0, None);
        record_flux(&sol, || tag(Model::KleinGordon, &spec, v0, None));
        detail.push(format!("E={e}: R={:.8}", sol.reflection()));
        if !(sol.reflection() > 0.999) {
            failures.push(format!("E={e} R={}", sol.reflection()));
        }
    }
    outcome(&failures, detail.join(", "))
}

fn resonances() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_res = 0.0f64;
    let mut worst_max = 0.0f64;
    for e in [1.3, 3.0] {
        let spec = rest(e);
        let q = spec.momentum();
        for v0 in [-4.0 * e, -0.5, 0.1 * (e - 1.0), 0.9 * (e - 1.0), e + 1.2, 2.0 * e + 0.5, 9.0 * e] {
            let Wave::Propagating(p) = spec.kinematics(v0).wave else {
                failures.push(format!("E={e} V0={v0} not propagating"));
                continue;
            };
            for n in 1..=5 {
                let a = n as f64 * PI / p;
                for model in MODELS {
                    let sol = closed(model, &spec, v0, Some(a));
                    record_flux(&sol, || tag(model, &spec, v0, Some(a)));
                    worst_res = worst_res.max(sol.reflection());
                    if !(sol.reflection() < 1e-12) {
                        failures.push(format!("{} n={n} R={:e}", tag(model, &spec, v0, Some(a)), sol.reflection()));
                    }
                }
                let a = (n as f64 + 0.5) * PI / p;
                let sol = closed(Model::KleinGordon, &spec, v0, Some(a));
                record_flux(&sol, || tag(Model::KleinGordon, &spec, v0, Some(a)));
                let expected = ((p * p - q * q) / (p * p + q * q)).powi(2);
                let reported = kg_barrier_maximum(&spec, v0).unwrap();
                let dev = (sol.reflection() - expected).abs().max((reported - expected).abs());
                worst_max = worst_max.max(dev);
                if !(dev < 1e-12) {
                    failures.push(format!(
                        "maximum {} R={:.17e} expected={expected:.17e}",
                        tag(Model::KleinGordon, &spec, v0, Some(a)),
                        sol.reflection()
                    ));
                }
            }
        }
    }
    outcome(&failures, format!("max R at resonance {worst_res:.2e}, max deviation at maxima {worst_max:.2e}"))
}

fn exchange_symmetry() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for e in [1.3, 3.0] {
        let spec = rest(e);
        for _ in 0..100 {
            let v0 = rng.gen_range(0.0..1.0) * (e - 1.0);
            if v0 == 0.0 {
                continue;
            }
            let a = 10f64.powf(rng.gen_range(-2.0..1.0));
            for model in MODELS {
                for w in [None, Some(a)] {
                    let s1 = closed(model, &spec, v0, w);
                    let s2 = closed(model, &spec, 2.0 * e - v0, w);
                    record_flux(&s1, || tag(model, &spec, v0, w));
                    record_flux(&s2, || tag(model, &spec, 2.0 * e - v0, w));
                    let d = (s1.reflection() - s2.reflection()).abs();
                    worst = worst.max(d);
                    if !(d < 1e-12) {
                        failures.push(format!("{} diff={d:e}", tag(model, &spec, v0, w)));
                    }
                }
            }
        }
    }
    outcome(&failures, format!("max |R(V0) - R(2E - V0)| {worst:.2e}"))
}

fn massless_transmission() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let e = 10f64.powf(rng.gen_range(-1.0..1.5));
        let spec = ParticleSpec::new(0.0, e).unwrap();
        let v0 = rng.gen_range(-10.0 * e..20.0 * e);
        let a = 10f64.powf(rng.gen_range(-3.0..1.5));
        let mut sols = vec![
            (closed(Model::Dirac, &spec, v0, None), "step".to_string()),
            (closed(Model::Dirac, &spec, v0, Some(a)), "barrier".to_string()),
        ];
        if i % 2 == 0 {
            let profile = random_profile(&mut rng, e);
            sols.push((
                transfer_matrix_solve(&profile, &spec, Model::Dirac).unwrap(),
                format!("profile {:?}", profile.segments().iter().map(|s| s.height).collect::<Vec<_>>()),
            ));
        }
        for (sol, what) in sols {
            record_flux(&sol, || format!("massless E={e} {what}"));
            worst = worst.max(sol.reflection());
            if !(sol.reflection() < 1e-12) {
                failures.push(format!("E={e} V0={v0} a={a} {what} R={:e}", sol.reflection()));
            }
        }
    }
    outcome(&failures, format!("1000 tuples, 500 multi-region profiles, max R {worst:.2e}"))
}

fn jump() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let ka0 = 0.5f64.atanh();
    for e in [1.3, 3.0] {
        let spec = rest(e);
        let k = spec.mass_energy();
        let (below, above) = dirac_barrier_midgap(&spec, ka0 / k).unwrap();
        if !((below - above).abs() > 1e-3) {
            failures.push(format!("E={e}: no jump at coth(ka) = 2: {below} vs {above}"));
        }
        let rows = evaluate_point(Model::Dirac, Geometry::Barrier, &spec, Some(WidthRule::FigureConvention), e).unwrap();
        if rows.len() != 2 || rows[0].r != below || rows[1].r != above {
            failures.push(format!("E={e}: curve rows at V0 = E: {rows:?}"));
        }
        // scan from the coth(ka) = 2 width out to ka = 20
        let steps = 4000;
        let kas: Vec<f64> = (0..=steps).map(|i| ka0 + (20.0 - ka0) * i as f64 / steps as f64).collect();
        let gaps: Vec<f64> = kas.iter().map(|ka| jump_gap(&spec, ka / k).unwrap()).collect();
        let peak = (0..gaps.len()).max_by(|&i, &j| gaps[i].total_cmp(&gaps[j])).unwrap();
        if !(kas[peak] < 1.0) {
            failures.push(format!("E={e}: gap peaks late, at ka={}", kas[peak]));
        }
        for i in peak + 1..gaps.len() {
            if gaps[i] > gaps[i - 1] + 1e-15 {
                failures.push(format!("E={e}: gap grows at ka={}: {:e} -> {:e}", kas[i], gaps[i - 1], gaps[i]));
                break;
            }
        }
        let last = *gaps.last().unwrap();
        if !(last < 1e-8) {
            failures.push(format!("E={e}: gap at ka=20 is {last:e}"));
        }
        notes.push(format!(
            "E={e}: R(E-)={below:.6} R(E+)={above:.6} at coth(ka)=2, gap {:.4} rising to {:.4} at ka={:.3} then decreasing to {last:.1e}",
            gaps[0], gaps[peak], kas[peak]
        ));
    }
    let mut kg_worst = 0.0f64;
    for e in [1.3, 3.0] {
        let spec = rest(e);
        for a in [0.2, ka0, 3.0] {
            let at = closed(Model::KleinGordon, &spec, e, Some(a));
            record_flux(&at, || tag(Model::KleinGordon, &spec, e, Some(a)));
            for d in [-1e-13, 1e-13] {
                let side = closed(Model::KleinGordon, &spec, e + d, Some(a));
                let diff = (side.reflection() - at.reflection()).abs();
                kg_worst = kg_worst.max(diff);
                if !(diff < 1e-12) {
                    failures.push(format!("KG E={e} a={a} side {d:e}: diff {diff:e}"));
                }
            }
        }
    }
    notes.push(format!("KG barrier across V0=E {kg_worst:.1e}"));
    outcome(&failures, notes.join("; "))
}

fn phase_integral() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_amp = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let coeffs: Vec<f64> = (0..5).map(|i| rng.gen_range(-1.0..1.0) / (1.0 + i as f64)).collect();
    let potentials = [
        ("bx", SmoothPotential::linear(0.7, 0.0)),
        ("polynomial", SmoothPotential::polynomial(coeffs.clone())),
    ];
    for (name, pot) in &potentials {
        for (energy, sheet) in [(2.0, Sheet::Plus), (0.6, Sheet::Minus)] {
            let s = if sheet == Sheet::Plus { 1.0 } else { -1.0 };
            let a_ref = -0.5;
            for j in 0..=8 {
                let x = a_ref + 4.0 * j as f64 / 8.0;
                let ph = massless_phase_solution(pot, energy, a_ref, x, sheet).unwrap();
                let start = [Complex::new(1.0, 0.0), Complex::new(s, 0.0)];
                let ode = integrate_dirac_components(pot, energy, 0.0, a_ref, x, start, 1e-11).unwrap();
                let d = (ph.phi - ode[0]).norm().max((ph.chi - ode[1]).norm());
                let amp = (ph.phi.norm_sqr() - 1.0).abs().max((ph.chi.norm_sqr() - 1.0).abs());
                worst = worst.max(d);
                worst_amp = worst_amp.max(amp);
                if !(d < 1e-8) {
                    failures.push(format!("{name} E={energy} x={x}: deviation {d:e}"));
                }
                if !(amp < 1e-12) {
                    failures.push(format!("{name} E={energy} x={x}: amplitude drift {amp:e}"));
                }
            }
        }
    }
    outcome(
        &failures,
        format!("polynomial {coeffs:.3?}, max deviation {worst:.2e}, amplitude drift {worst_amp:.2e}"),
    )
}

fn small_mass() -> Outcome {
    let spec = ParticleSpec::new(1.0, 100.0).unwrap();
    let e = spec.energy();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..2000 {
        let v0 = 2.0 * e + (98.0 * e) * (i as f64 + 0.5) / 2000.0;
        let a = 10f64.powf(rng.gen_range(-3.0..1.0));
        for w in [None, Some(a)] {
            let r = closed(Model::Dirac, &spec, v0, w).reflection();
            worst = worst.max(r);
            if !(r < 1e-4) {
                failures.push(format!("{} R={r:e}", tag(Model::Dirac, &spec, v0, w)));
            }
        }
    }
    outcome(&failures, format!("2000 heights, step and barrier, max R {worst:.3e}"))
}

fn flux() -> Outcome {
    let t = FLUX.lock().unwrap();
    let failures: Vec<String> = t.first_failure.iter().cloned().collect();
    let mut o = outcome(&failures, format!(
            "{} solved states, worst {:.2e}, {} Dirac V0 = E endpoint states checked for T = 1 - R only",
            t.checked, t.worst, t.conventional
        ));
    if t.failures > 0 {
        o.detail = format!("{}; {} states out of tolerance", o.detail, t.failures);
    }
    if t.checked == 0 {
        o.passed = false;
    }
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("1 boundedness", boundedness),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 gap platform", gap_platform),
        ("4 transmission alley", alley),
        ("5 Dirac step asymptote", dirac_asymptote),
        ("6 KG step asymptote", kg_asymptote),
        ("7 resonances and maxima", resonances),
        ("8 exchange symmetry", exchange_symmetry),
        ("9 massless transmission", massless_transmission),
        ("10 midgap jump", jump),
        ("11 phase-integral solution", phase_integral),
        ("13 small-mass bound", small_mass),
        ("12 flux conservation", flux),
    ];
    let mut results: Vec<(&str, Outcome)> = criteria.iter().map(|(name, f)| (*name, f())).collect();
    results.sort_by_key(|(name, _)| name.split(' ').next().unwrap().parse::<u32>().unwrap());
    let mut all = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        all &= o.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
