//! Curves, structure finders and the massless smooth-potential solution.

pub mod massless;
pub mod structure;
pub mod sweep;

pub use massless::{integrate_dirac_components, massless_phase_solution, PhaseSolution, Sheet, SmoothPotential};
pub use structure::{
    find_total_transmissions, jump_gap, resonance_amplitudes, resonant_widths, small_mass_bound, ResonanceAmplitudes,
    TotalTransmissions,
};
pub use sweep::{
    evaluate_point, figure_gap_width, figure_propagating_width, resonant_heights, solve_point, sweep, v0_grid,
    CurveAnnotations, SweepCurve, SweepSample, WidthRule, CSV_HEADER,
};
