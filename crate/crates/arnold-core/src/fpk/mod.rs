//! Grid solver for the measure-corrected Fokker-Planck-Kramers equation:
//! conservative flux-form discretization, explicit time stepping, and the
//! half-plane stationary experiment.

mod grid;
mod halfplane;
mod solver;

pub use grid::{DensityField, Grid};
pub use halfplane::{
    halfplane_exact_stationary, stationary_distance_report, StationaryOptions, StationaryReport,
};
pub use solver::{
    fpk_evolve, fpk_evolve_steps, fpk_rhs, DriftMode, EvolveDiag, FpkSolver, MASS_DRIFT_TOL,
    STABILITY_FACTOR,
};
