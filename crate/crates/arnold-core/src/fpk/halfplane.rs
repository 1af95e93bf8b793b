//! The half-plane equilibrium experiment: the closed-form candidate density,
//! and the double-run stationary report with its distance diagnostics.

use statrs::function::erf::erf;

use crate::algebra::{InvariantMeasure, ModelSpec};
use crate::error::{Error, Result};
use crate::fpk::grid::{DensityField, Grid};
use crate::fpk::solver::{evolve_with, DriftMode, FpkSolver};
use crate::util::kahan_sum;

/// The closed-form stationary candidate for the half-plane with zero
/// Hamiltonian drift, as a density with respect to dv0 dv1:
///
///   (v1/rho^2) e^{-beta rho^2 / 2} [ 1 - e^{-beta rho^2/4} erf(sqrt(beta) rho / 2) / (sqrt(beta) rho) ]
///
/// The bracket is evaluated by series for sqrt(beta) rho < 1e-3. Note this
/// expression is an approximation: it is not an exact zero of the
/// measure-corrected FPK operator (see `StationaryReport`), and the grid
/// solver's double-run field is the authoritative equilibrium.
pub fn halfplane_exact_stationary(v0: f64, v1: f64, beta: f64) -> Result<f64> {
    if !(v1 > 0.0) {
        return Err(Error::InvalidArgument(
            "the closed form lives on v1 > 0".into(),
        ));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument("beta must be positive".into()));
    }
    let rho2 = v0 * v0 + v1 * v1;
    let rho = rho2.sqrt();
    Ok(v1 / rho2 * (-0.5 * beta * rho2).exp() * bracket(beta.sqrt() * rho))
}

/// 1 - e^{-s^2/4} erf(s/2) / s with s = sqrt(beta) rho.
fn bracket(s: f64) -> f64 {
    if s < 1e-3 {
        // e^{-x^2} erf(x)/(2x) = (1 - 4x^2/3 + 14x^4/15 - ...) / sqrt(pi), x = s/2.
        let x2 = 0.25 * s * s;
        1.0 - (1.0 - 4.0 / 3.0 * x2 + 14.0 / 15.0 * x2 * x2)
            / std::f64::consts::PI.sqrt()
    } else {
        1.0 - (-0.25 * s * s).exp() * erf(0.5 * s) / s
    }
}

/// Parameters of the stationary half-plane experiment.
#[derive(Debug, Clone)]
pub struct StationaryOptions {
    /// Isotropic dissipation strength; the noise is Einstein-matched,
    /// D = gamma / beta * I.
    pub gamma: f64,
    /// Drift entering the FPK; the default drops the Hamiltonian part.
    pub drift: DriftMode,
    /// Stationarity threshold: L1 change per unit time.
    pub rate_tol: f64,
    /// Time between stationarity checks.
    pub check_interval: f64,
    /// Abort (non-convergence) beyond this simulated time.
    pub max_time: f64,
    /// Step size; defaults to the solver's stability bound.
    pub dt: Option<f64>,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            drift: DriftMode::LinearOnly,
            rate_tol: 1e-8,
            check_interval: 1.0,
            max_time: 200.0,
            dt: None,
        }
    }
}

/// Outcome of the double-run stationary experiment.
#[derive(Debug, Clone)]
pub struct StationaryReport {
    /// L1 distance (dv-densities, both normalized) between the two runs.
    pub l1_double_run: f64,
    /// L1 distance of the run-1 field to the normalized closed form.
    pub l1_to_closed_form: f64,
    /// L1 distance of the run-1 field to the normalized restricted
    /// Boltzmann density e^{-beta E}, the exact zero-flux stationary state
    /// of the reflecting-boundary problem with dissipation-only drift.
    pub l1_to_boltzmann: f64,
    /// Largest raw (pre-renormalization) mass deviation over both runs.
    pub mass_drift: f64,
    /// Total clipped mass over both runs.
    pub clipped_mass: f64,
    /// Simulated time at which run 1 met the stationarity threshold.
    pub converged_time: f64,
    /// Location of the maximum of the v1-marginal of the dv-density.
    pub v1_marginal_mode: f64,
    /// Whether that mode sits strictly inside the grid (not in the first
    /// cell against the v1 = eps cut).
    pub v1_mode_interior: bool,
    /// Argmax cell center of the dv-density mu P.
    pub dv_density_mode: Vec<f64>,
    /// Argmax cell center of the measure-relative density P.
    pub p_mode: Vec<f64>,
    /// The authoritative stationary field (run 1, normalized).
    pub field: DensityField,
}

fn run_to_stationarity(
    solver: &mut FpkSolver,
    field: &mut DensityField,
    opts: &StationaryOptions,
    dt: f64,
) -> Result<(f64, f64, f64)> {
    let mut t = 0.0;
    let mut prev = field.clone();
    let mut max_drift = 0.0f64;
    let mut clipped = 0.0f64;
    while t < opts.max_time {
        let diag = evolve_with(solver, field, opts.check_interval, dt)?;
        max_drift = max_drift.max(diag.max_mass_drift);
        clipped += diag.clipped_mass;
        t += opts.check_interval;
        let rate = field.l1_distance(&prev)? / opts.check_interval;
        if rate < opts.rate_tol {
            return Ok((t, max_drift, clipped));
        }
        prev = field.clone();
    }
    Err(Error::NoConvergence {
        iters: (opts.max_time / opts.check_interval) as usize,
        residual: field.l1_distance(&prev)? / opts.check_interval,
    })
}

/// Run the half-plane FPK to stationarity from two different initial
/// conditions, require them to agree, and compare the result against the
/// closed-form candidate and the restricted Boltzmann density.
pub fn stationary_distance_report(
    model: &ModelSpec,
    grid: Grid,
    beta: f64,
    opts: &StationaryOptions,
) -> Result<StationaryReport> {
    if model.dim() != 2 || !matches!(model.measure, InvariantMeasure::HalfPlane) {
        return Err(Error::InvalidArgument(
            "the stationary report is defined for half-plane models".into(),
        ));
    }
    let experiment = model
        .clone()
        .with_isotropic_dissipation(opts.gamma)?
        .with_einstein_noise(beta)?;

    let mins = grid.mins().to_vec();
    let maxs = grid.maxs().to_vec();
    let center: Vec<f64> = mins
        .iter()
        .zip(&maxs)
        .map(|(lo, hi)| lo + 0.7 * (hi - lo))
        .collect();
    let sigma = (0..grid.ndim())
        .map(|a| maxs[a] - mins[a])
        .fold(f64::INFINITY, f64::min)
        / 8.0;

    let mut run1 = DensityField::uniform(grid.clone(), &experiment.measure)?;
    let mut run2 = DensityField::gaussian(grid.clone(), &experiment.measure, &center, sigma)?;

    let mut solver = FpkSolver::new(&experiment, &run1, opts.drift)?;
    let dt = match opts.dt {
        Some(dt) if dt <= solver.stability_bound() => dt,
        Some(dt) => {
            return Err(Error::UnstableStep {
                dt,
                bound: solver.stability_bound(),
            })
        }
        None => solver.stability_bound(),
    };

    let (t1, drift1, clip1) = run_to_stationarity(&mut solver, &mut run1, opts, dt)?;
    let (_t2, drift2, clip2) = run_to_stationarity(&mut solver, &mut run2, opts, dt)?;

    run1.normalize();
    run2.normalize();
    let l1_double_run = run1.l1_distance(&run2)?;

    let vol = run1.grid.cell_volume();
    let dv = run1.dv_density();

    // Closed-form candidate, normalized over the grid.
    let mut cf: Vec<f64> = (0..run1.grid.len())
        .map(|i| {
            let x = run1.grid.point(i);
            halfplane_exact_stationary(x[0], x[1], beta)
        })
        .collect::<Result<_>>()?;
    let cf_mass = kahan_sum(cf.iter().copied()) * vol;
    cf.iter_mut().for_each(|x| *x /= cf_mass);
    let l1_to_closed_form =
        kahan_sum(dv.iter().zip(&cf).map(|(a, b)| (a - b).abs())) * vol;

    // Restricted Boltzmann reference e^{-beta E}, normalized as a dv-density.
    let mut mb: Vec<f64> = (0..run1.grid.len())
        .map(|i| {
            let x = run1.grid.point(i);
            (-beta * experiment.energy_unchecked(&crate::algebra::VelocityState::from_row_slice(&x)))
                .exp()
                * run1.mu()[i]
        })
        .collect();
    let mb_mass = kahan_sum(mb.iter().copied()) * vol;
    mb.iter_mut().for_each(|x| *x /= mb_mass);
    let l1_to_boltzmann =
        kahan_sum(dv.iter().zip(&mb).map(|(a, b)| (a - b).abs())) * vol;

    let marginal = run1.marginal(1);
    let (mode_idx, _) = marginal
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| {
            if x > acc.1 {
                (i, x)
            } else {
                acc
            }
        });
    let argmax = |vals: &[f64]| -> Vec<f64> {
        let (idx, _) = vals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &x)| {
                if x > acc.1 {
                    (i, x)
                } else {
                    acc
                }
            });
        run1.grid.point(idx)
    };

    Ok(StationaryReport {
        l1_double_run,
        l1_to_closed_form,
        l1_to_boltzmann,
        mass_drift: drift1.max(drift2),
        clipped_mass: clip1 + clip2,
        converged_time: t1,
        v1_marginal_mode: run1.grid.center(1, mode_idx),
        v1_mode_interior: mode_idx > 0,
        dv_density_mode: argmax(&dv),
        p_mode: argmax(&run1.p),
        field: run1,
    })
}
