//! One-dimensional relativistic scattering off piecewise-constant potentials.
//!
//! Spin-½ particles obey the two-component Dirac equation and spin-0 particles
//! the decoupled Klein-Gordon equation, with the energy branch in every region
//! chosen by the sign of `E - V`. Closed-form step and barrier solutions live
//! in [`dirac`] and [`kleingordon`]; [`matcher`] solves the interface
//! conditions numerically for arbitrary profiles and serves as the reference
//! the closed forms are tested against.
//!
//! Units: ħ = c = 1. See [`kinematics`] for details.

// `!(a < b)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dirac;
pub mod error;
pub mod kinematics;
pub mod kleingordon;
pub mod matcher;
pub mod profile;
pub mod scalar;
pub mod solution;
pub mod verify;

pub use analysis::{
    find_total_transmissions, jump_gap, massless_phase_solution, resonance_amplitudes, resonant_widths, small_mass_bound,
    sweep, v0_grid, SmoothPotential, SweepCurve, WidthRule,
};
pub use dirac::{
    dirac_barrier_limit, dirac_barrier_midgap, dirac_barrier_solve, dirac_current, dirac_step_limit, dirac_step_solve,
    dirac_wavefunction, SpinorValue,
};
pub use error::{Result, ScatterError};
pub use kinematics::{
    classify_regime, kinematics, Branch, GapBoundary, ParticleSpec, Regime, RegimeClass, RegionKinematics, Wave,
};
pub use kleingordon::{
    kg_barrier_maximum, kg_barrier_solve, kg_branch, kg_current, kg_step_solve, kg_wavefunction, ScalarWaveValue,
};
pub use matcher::{continuity_residual, solve_numeric, transfer_matrix_solve, RegionBasis};
pub use profile::{Geometry, PotentialProfile, Segment};
pub use scalar::{cplx, Scalar};
pub use solution::{Model, RegionState, ScatteringSolution, SolveMethod};
pub use verify::{run_verification, Mutation, VerifyOptions, VerifyReport};

pub use num_complex::Complex;

pub type Particle64 = ParticleSpec<f64>;
pub type Particle32 = ParticleSpec<f32>;
pub type Profile64 = PotentialProfile<f64>;
pub type Profile32 = PotentialProfile<f32>;
pub type Solution64 = ScatteringSolution<f64>;
pub type Solution32 = ScatteringSolution<f32>;
