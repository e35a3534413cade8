//! Boundary-matching oracle.
//!
//! Builds the branch-selected basis of every region and imposes the interface
//! conditions numerically: spinor components for Dirac, value and derivative
//! for Klein-Gordon. Two independent routes are provided, a pivoted dense
//! solve of the full interface system and a product of per-interface 2×2
//! transfer matrices. Neither uses any closed-form amplitude.

pub mod basis;
pub mod linalg;

use num_complex::Complex;

use crate::error::{Result, ScatterError};
use crate::kinematics::ParticleSpec;
use crate::profile::{PotentialProfile, Segment};
use crate::scalar::{cross, Scalar};
use crate::solution::{flux, Model, RegionState, ScatteringSolution, SolveMethod};

pub use basis::RegionBasis;
use linalg::{solve_dense, Mat2, ScaledComplex, ScaledMat2};

/// Largest dense system solved directly; longer profiles go through transfer
/// matrices.
pub const MAX_DENSE_UNKNOWNS: usize = 64;

/// Basis of one region for the given model.
pub fn build_basis<T: Scalar>(segment: Segment<T>, spec: &ParticleSpec<T>, model: Model) -> RegionBasis<T> {
    RegionBasis::new(model, spec, segment)
}

fn bases_for<T: Scalar>(profile: &PotentialProfile<T>, spec: &ParticleSpec<T>, model: Model) -> Vec<RegionBasis<T>> {
    profile
        .segments()
        .iter()
        .map(|s| build_basis(*s, spec, model))
        .collect()
}

/// Solves the interface system of `profile` by dense Gaussian elimination.
///
/// `R = |B|²`; `T` is the ratio of transmitted to incident flux. Profiles that
/// need more than [`MAX_DENSE_UNKNOWNS`] unknowns are delegated to
/// [`transfer_matrix_solve`]. A degenerate basis (a region exactly at a gap
/// edge) makes the system singular and is reported as an error.
pub fn solve_numeric<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    model: Model,
) -> Result<ScatteringSolution<T>> {
    profile.check_asymptotics(spec)?;
    let bases = bases_for(profile, spec, model);
    if bases.len() > 1 && bases[bases.len() - 1].is_degenerate_final() {
        return Err(singular(profile, spec));
    }
    let n = bases.len();
    if n == 1 {
        return Ok(free_solution(profile, spec, model, &bases, SolveMethod::DenseMatching));
    }
    let unknowns = 2 * (n - 1);
    if unknowns > MAX_DENSE_UNKNOWNS {
        return transfer_matrix_solve(profile, spec, model);
    }
    let last_out = bases[n - 1].outgoing_column();

    // None: coefficient fixed (1 for the incident wave, 0 for an incoming
    // wave from the right).
    let index = |region: usize, col: usize| -> Option<usize> {
        if region == 0 {
            (col == 1).then_some(0)
        } else if region == n - 1 {
            (col == last_out).then_some(unknowns - 1)
        } else {
            Some(1 + 2 * (region - 1) + col)
        }
    };

    let zero = Complex::new(T::zero(), T::zero());
    let mut a = vec![zero; unknowns * unknowns];
    let mut rhs = vec![zero; unknowns];
    for (i, x) in profile.interfaces().enumerate() {
        for col in 0..2 {
            let left = bases[i].value(col, x);
            let right = bases[i + 1].value(col, x);
            for comp in 0..2 {
                let row = 2 * i + comp;
                match index(i, col) {
                    Some(j) => a[row * unknowns + j] = a[row * unknowns + j] + left[comp],
                    None if i == 0 && col == 0 => rhs[row] = rhs[row] - left[comp],
                    None => {}
                }
                if let Some(j) = index(i + 1, col) {
                    a[row * unknowns + j] = a[row * unknowns + j] - right[comp];
                }
            }
        }
    }
    let x = solve_dense(&mut a, &mut rhs, unknowns).ok_or_else(|| singular(profile, spec))?;

    let mut amplitudes = Vec::with_capacity(n);
    amplitudes.push([Complex::new(T::one(), T::zero()), x[0]]);
    for r in 1..n - 1 {
        amplitudes.push([x[1 + 2 * (r - 1)], x[2 + 2 * (r - 1)]]);
    }
    let mut last = [zero; 2];
    last[last_out] = x[unknowns - 1];
    amplitudes.push(last);
    Ok(assemble(profile, spec, model, &bases, amplitudes, SolveMethod::DenseMatching))
}

/// Solves `profile` by composing per-interface transfer matrices.
///
/// Matrices are kept as `mantissa * exp(log)` so arbitrarily thick evanescent
/// segments neither overflow nor underflow; `B` and `G` come from ratios of
/// the composed matrix. Interior amplitudes are recovered by a forward sweep
/// from `(1, B)` and lose relative accuracy inside thick evanescent segments;
/// use [`solve_numeric`] when the wavefunction itself is needed there.
pub fn transfer_matrix_solve<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    model: Model,
) -> Result<ScatteringSolution<T>> {
    profile.check_asymptotics(spec)?;
    let bases = bases_for(profile, spec, model);
    if bases.len() > 1 && bases[bases.len() - 1].is_degenerate_final() {
        return Err(singular(profile, spec));
    }
    let n = bases.len();
    if n == 1 {
        return Ok(free_solution(profile, spec, model, &bases, SolveMethod::TransferMatrix));
    }

    let mut total = ScaledMat2::identity();
    let mut det = ScaledComplex::one();
    let mut steps = Vec::with_capacity(n - 1);
    for (i, x) in profile.interfaces().enumerate() {
        let (l0, ll0) = bases[i].scaled_value(0, x);
        let (l1, ll1) = bases[i].scaled_value(1, x);
        let (r0, rl0) = bases[i + 1].scaled_value(0, x);
        let (r1, rl1) = bases[i + 1].scaled_value(1, x);
        let right_inv = Mat2::from_columns(r0, r1)
            .inverse()
            .ok_or_else(|| singular(profile, spec))?;
        let core = right_inv.mul(&Mat2::from_columns(l0, l1));
        if core.det().norm() == T::zero() {
            return Err(singular(profile, spec));
        }
        let step = ScaledMat2::from_parts(core, [rl0, rl1], [ll0, ll1]);
        det = det.mul(core.det(), ll0 + ll1 - rl0 - rl1);
        total = step.mul(&total);
        steps.push(step);
    }

    let out = bases[n - 1].outgoing_column();
    let inc = 1 - out;
    let m = total.matrix.0;
    if m[inc][1].norm() == T::zero() {
        return Err(singular(profile, spec));
    }
    let b = -m[inc][0] / m[inc][1];
    let sign = if out == 0 { T::one() } else { -T::one() };
    let g = (det.mantissa / m[inc][1]) * (det.log_scale - total.log_scale).exp() * sign;

    let zero = Complex::new(T::zero(), T::zero());
    let mut amplitudes = Vec::with_capacity(n);
    let mut c = [Complex::new(T::one(), T::zero()), b];
    amplitudes.push(c);
    for step in steps.iter().take(n - 2) {
        let v = step.matrix.apply(c);
        let s = step.log_scale.exp();
        c = [v[0] * s, v[1] * s];
        amplitudes.push(c);
    }
    let mut last = [zero; 2];
    last[out] = g;
    amplitudes.push(last);
    Ok(assemble(profile, spec, model, &bases, amplitudes, SolveMethod::TransferMatrix))
}

/// Largest mismatch of the matched quantities across all interfaces.
pub fn continuity_residual<T: Scalar>(sol: &ScatteringSolution<T>) -> T {
    let mut worst = T::zero();
    let regions = sol.regions();
    for i in 0..regions.len().saturating_sub(1) {
        let x = regions[i].segment.right;
        let l = sol.components_in(i, x);
        let r = sol.components_in(i + 1, x);
        worst = worst.max((l[0] - r[0]).norm()).max((l[1] - r[1]).norm());
    }
    worst
}

/// Flux of the unit incident wave.
pub fn incident_flux<T: Scalar>(sol: &ScatteringSolution<T>) -> T {
    let basis = sol.basis(0);
    flux(sol.model(), basis.columns()[0])
}

/// Sample positions covering every region: both edges and the middle of
/// finite regions, and a few points into the semi-infinite ones.
pub fn probe_points<T: Scalar>(sol: &ScatteringSolution<T>) -> Vec<(usize, T)> {
    let mut pts = Vec::new();
    for (i, r) in sol.regions().iter().enumerate() {
        let (l, rt) = (r.segment.left, r.segment.right);
        match (l.is_finite(), rt.is_finite()) {
            (true, true) => {
                for f in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    pts.push((i, l + (rt - l) * T::lit(f)));
                }
            }
            (false, true) => {
                for d in [0.0, 0.37, 1.9, 7.3] {
                    pts.push((i, rt - T::lit(d)));
                }
            }
            (true, false) => {
                for d in [0.0, 0.37, 1.9, 7.3] {
                    pts.push((i, l + T::lit(d)));
                }
            }
            (false, false) => {
                for d in [-3.0, 0.0, 2.1] {
                    pts.push((i, T::lit(d)));
                }
            }
        }
    }
    pts
}

/// Largest deviation of the normalized net flux `j(x) / j_in` from `1 - R`
/// over [`probe_points`], together with `|T - (1 - R)|`.
pub fn flux_conservation_error<T: Scalar>(sol: &ScatteringSolution<T>) -> T {
    let j_in = incident_flux(sol);
    let expected = T::one() - sol.reflection();
    let mut worst = (sol.transmission() - expected).abs();
    for (i, x) in probe_points(sol) {
        let j = flux(sol.model(), sol.components_in(i, x)) / j_in;
        worst = worst.max((j - expected).abs());
    }
    worst
}

/// Amplitudes of every region of a two- or three-region profile given the
/// reflection amplitude `b`.
///
/// Three regions with a propagating middle: the middle pair follows from the
/// left interface and the outgoing amplitude from the right one. With an
/// evanescent middle the decaying coefficient comes from the left interface
/// with the growing column projected out and the remaining pair from the
/// right interface, so only anchored (bounded) values enter. With the exact
/// `b` all interface conditions hold; with any other `b` they cannot.
pub(crate) fn amplitudes_from_reflection<T: Scalar>(bases: &[RegionBasis<T>], b: Complex<T>) -> Vec<[Complex<T>; 2]> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let x0 = bases[0].segment().right;
    let inc = bases[0].value(0, x0);
    let refl = bases[0].value(1, x0);
    let v0 = [inc[0] + b * refl[0], inc[1] + b * refl[1]];
    match bases.len() {
        2 => {
            let out = bases[1].outgoing_column();
            let s = bases[1].value(out, x0);
            let den = s[0].conj() * s[0] + s[1].conj() * s[1];
            let mut last = [zero; 2];
            if den.norm() > T::zero() {
                last[out] = (s[0].conj() * v0[0] + s[1].conj() * v0[1]) / den;
            }
            vec![[one, b], last]
        }
        3 => {
            let mid = &bases[1];
            let x1 = mid.segment().right;
            let out = bases[2].outgoing_column();
            let g = bases[2].value(out, x1);
            let mut last = [zero; 2];
            let (f1, f2) = if mid.class().regime.is_propagating() {
                // bounded columns: solve the left interface directly
                let s1 = mid.value(0, x0);
                let s2 = mid.value(1, x0);
                let det = cross(s1, s2);
                if det.norm() == T::zero() {
                    return vec![[one, b], [zero; 2], last];
                }
                (cross(v0, s2) / det, cross(s1, v0) / det)
            } else {
                let d1 = mid.columns()[0];
                let s2 = mid.value(1, x0);
                let den = cross(d1, s2);
                if den.norm() == T::zero() {
                    return vec![[one, b], [zero; 2], last];
                }
                let f2 = cross(d1, v0) / den;
                let s1 = mid.value(0, x1);
                let t2 = mid.value(1, x1);
                let ng = [-g[0], -g[1]];
                let r = [-f2 * t2[0], -f2 * t2[1]];
                let det = cross(s1, ng);
                if det.norm() == T::zero() {
                    return vec![[one, b], [zero, f2], last];
                }
                last[out] = cross(s1, r) / det;
                return vec![[one, b], [cross(r, ng) / det, f2], last];
            };
            let s1 = mid.value(0, x1);
            let s2 = mid.value(1, x1);
            let w = [f1 * s1[0] + f2 * s2[0], f1 * s1[1] + f2 * s2[1]];
            let den = g[0].conj() * g[0] + g[1].conj() * g[1];
            last[out] = (g[0].conj() * w[0] + g[1].conj() * w[1]) / den;
            vec![[one, b], [f1, f2], last]
        }
        n => panic!("closed-form amplitudes need 2 or 3 regions, got {n}"),
    }
}

/// Solution of a step or barrier built from a closed-form reflection
/// amplitude; `T = 1 - R`.
pub(crate) fn closed_form_solution<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    model: Model,
    b: Complex<T>,
) -> ScatteringSolution<T> {
    let bases = bases_for(profile, spec, model);
    let amps = amplitudes_from_reflection(&bases, b);
    let mut sol = assemble(profile, spec, model, &bases, amps, SolveMethod::ClosedForm);
    // |B| <= 1 analytically; keep the last-ulp rounding inside [0, 1]
    sol.reflection = sol.reflection.min(T::one());
    sol.transmission = T::one() - sol.reflection;
    sol
}

fn singular<T: Scalar>(profile: &PotentialProfile<T>, spec: &ParticleSpec<T>) -> ScatterError {
    let flagged: Vec<String> = profile
        .segments()
        .iter()
        .filter_map(|s| spec.classify(s.height).boundary.map(|b| format!("V = {} ({})", s.height, b.name())))
        .collect();
    if flagged.is_empty() {
        ScatterError::Singular("interface system is numerically singular".into())
    } else {
        ScatterError::Singular(format!("degenerate basis at {}", flagged.join(", ")))
    }
}

fn free_solution<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    model: Model,
    bases: &[RegionBasis<T>],
    method: SolveMethod,
) -> ScatteringSolution<T> {
    let amps = vec![[Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())]];
    let mut sol = assemble(profile, spec, model, bases, amps, method);
    sol.reflection = T::zero();
    sol.transmission = T::one();
    sol
}

/// Packs amplitudes into a solution with `R = |B|²` and flux-ratio `T`.
pub(crate) fn assemble<T: Scalar>(
    profile: &PotentialProfile<T>,
    spec: &ParticleSpec<T>,
    model: Model,
    bases: &[RegionBasis<T>],
    amplitudes: Vec<[Complex<T>; 2]>,
    method: SolveMethod,
) -> ScatteringSolution<T> {
    let n = bases.len();
    let b = amplitudes[0][1];
    let last = &bases[n - 1];
    let out = last.outgoing_column();
    let j_in = flux(model, bases[0].columns()[0]);
    let transmission = if n == 1 {
        T::one()
    } else {
        let g = amplitudes[n - 1][out];
        flux(model, last.columns()[out]) * g.norm_sqr() / j_in
    };
    let regions = bases
        .iter()
        .zip(amplitudes)
        .map(|(basis, amplitudes)| RegionState {
            segment: basis.segment(),
            class: basis.class(),
            kinematics: basis.kinematics(),
            amplitudes,
        })
        .collect();
    ScatteringSolution {
        model,
        geometry: profile.geometry(),
        spec: *spec,
        regions,
        reflection: b.norm_sqr(),
        transmission,
        method,
        limit: None,
    }
}
