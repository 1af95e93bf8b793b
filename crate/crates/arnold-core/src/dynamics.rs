//! Deterministic integration of geodesic and dissipative flows, the
//! half-plane closed-form oracle, and rigid-body curvature/stability.

use nalgebra::DVector;

use crate::algebra::{ModelSpec, VelocityState};
use crate::error::{Error, Result};
use crate::util::{is_finite_and_bounded, rk4_step, split_duration, BLOWUP_LIMIT};

/// A time-discretized velocity path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<VelocityState>,
}

impl Trajectory {
    pub fn last(&self) -> &VelocityState {
        self.states.last().expect("trajectory is never empty")
    }
}

/// Fixed-step classical 4th-order integration of the geodesic
/// (`dissipative = false`) or dissipative flow, storing every step.
pub fn integrate(
    model: &ModelSpec,
    v0: &VelocityState,
    t_final: f64,
    dt: f64,
    dissipative: bool,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t_final >= dt) {
        return Err(Error::InvalidArgument(
            "need dt > 0 and T >= dt".into(),
        ));
    }
    if !is_finite_and_bounded(v0) {
        return Err(Error::InvalidArgument("initial state is not finite".into()));
    }
    model.energy(v0)?; // dimension check

    let field = |v: &DVector<f64>| -> DVector<f64> {
        if dissipative {
            model.dissipative_drift_unchecked(v)
        } else {
            model.geodesic_drift_unchecked(v)
        }
    };

    let (steps, rem) = split_duration(t_final, dt);
    let mut times = Vec::with_capacity(steps + 2);
    let mut states = Vec::with_capacity(steps + 2);
    times.push(0.0);
    states.push(v0.clone());
    let mut v = v0.clone();
    let mut t = 0.0;
    for k in 0..steps {
        v = rk4_step(&field, &v, dt);
        t = (k + 1) as f64 * dt;
        if !is_finite_and_bounded(&v) {
            return Err(Error::BlowUp {
                t: times.last().copied().unwrap_or(0.0),
                limit: BLOWUP_LIMIT,
            });
        }
        times.push(t);
        states.push(v.clone());
    }
    if rem > 0.0 {
        v = rk4_step(&field, &v, rem);
        if !is_finite_and_bounded(&v) {
            return Err(Error::BlowUp {
                t,
                limit: BLOWUP_LIMIT,
            });
        }
        times.push(t_final);
        states.push(v);
    }
    Ok(Trajectory { times, states })
}

/// Closed-form half-plane geodesic (-rho tanh(rho t), rho sech(rho t));
/// the semicircle v0^2 + v1^2 = rho^2 in momentum space.
pub fn halfplane_geodesic(rho: f64, t: f64) -> VelocityState {
    let s = rho * t;
    DVector::from_row_slice(&[-rho * s.tanh(), rho / s.cosh()])
}

/// Kinetic energy along a trajectory.
pub fn energy_series(model: &ModelSpec, traj: &Trajectory) -> Vec<f64> {
    traj.states
        .iter()
        .map(|v| model.energy_unchecked(v))
        .collect()
}

/// Sectional curvatures of the left-invariant metric in the three principal
/// planes of a 3-d diagonal metric.
///
/// The inputs are the metric coefficients (the moments of inertia for a rigid
/// body): this is the convention under which K12 changes sign exactly at the
/// cylinder threshold h = sqrt(3/2) r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub k12: f64,
    pub k23: f64,
    pub k31: f64,
}

fn k23_formula(g1: f64, g2: f64, g3: f64) -> f64 {
    ((g2 - g3).powi(2) + 2.0 * g1 * (g2 + g3) - 3.0 * g1 * g1) / (4.0 * g1 * g2 * g3)
}

/// Round-off scale of the K23 numerator relative to the denominator, used to
/// set the marginal-classification band.
fn k23_scale(g1: f64, g2: f64, g3: f64) -> f64 {
    ((g2 - g3).powi(2) + 2.0 * g1 * (g2 + g3) + 3.0 * g1 * g1) / (4.0 * g1 * g2 * g3)
}

pub fn sectional_curvature(g1: f64, g2: f64, g3: f64) -> Result<CurvatureReport> {
    if !(g1 > 0.0 && g2 > 0.0 && g3 > 0.0) {
        return Err(Error::InvalidArgument(
            "metric coefficients must be positive".into(),
        ));
    }
    Ok(CurvatureReport {
        k23: k23_formula(g1, g2, g3),
        k31: k23_formula(g2, g3, g1),
        k12: k23_formula(g3, g1, g2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    /// K12 < 0: rotation about an in-plane axis diverges from its neighbors.
    UnstableInPlane,
    Marginal,
    StableInPlane,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityClass::UnstableInPlane => "unstable_in_plane",
            StabilityClass::Marginal => "marginal",
            StabilityClass::StableInPlane => "stable_in_plane",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct CoinStability {
    pub class: StabilityClass,
    pub curvature: CurvatureReport,
    /// Transverse and axial moments of inertia of the cylinder.
    pub i_transverse: f64,
    pub i_axial: f64,
}

/// Stability of a spinning cylinder (radius r, height h, mass m) for rotation
/// axes in its symmetry plane, classified by the sign of the K12 section of
/// the metric diag(I1, I2, I3). The sign flips at h = sqrt(3/2) r.
pub fn coin_stability(r: f64, h: f64, m: f64) -> Result<CoinStability> {
    if !(r > 0.0 && h > 0.0 && m > 0.0) {
        return Err(Error::InvalidArgument(
            "cylinder parameters must be positive".into(),
        ));
    }
    let i1 = m * (3.0 * r * r + h * h) / 12.0;
    let i3 = m * r * r / 2.0;
    let curvature = sectional_curvature(i1, i1, i3)?;
    let band = 1e-12 * k23_scale(i3, i1, i1);
    let class = if curvature.k12 < -band {
        StabilityClass::UnstableInPlane
    } else if curvature.k12 > band {
        StabilityClass::StableInPlane
    } else {
        StabilityClass::Marginal
    };
    Ok(CoinStability {
        class,
        curvature,
        i_transverse: i1,
        i_axial: i3,
    })
}
