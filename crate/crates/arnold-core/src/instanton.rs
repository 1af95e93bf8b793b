//! WKB machinery for rare transitions: the effective Hamiltonian on doubled
//! phase space (v, w), instanton integration with accumulated action, and a
//! Newton shooting solver for two-point boundary problems.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::algebra::{ModelSpec, VelocityState};
use crate::error::{Error, Result};
use crate::util::{is_finite_and_bounded, split_duration, BLOWUP_LIMIT};

/// Doubled state: velocities v_a and their canonical conjugates w^a.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub v: VelocityState,
    pub w: DVector<f64>,
}

impl PhasePoint {
    pub fn new(v: VelocityState, w: DVector<f64>) -> Self {
        Self { v, w }
    }

    /// Zero-momentum point (the relaxation manifold).
    pub fn relaxing(v: VelocityState) -> Self {
        let w = DVector::zeros(v.len());
        Self { v, w }
    }
}

/// Effective Hamiltonian H = D_ab w^a w^b + A_a(v) w^a, with A the
/// dissipative drift. Zero on the w = 0 manifold.
pub fn wkb_hamiltonian(model: &ModelSpec, p: &PhasePoint) -> f64 {
    let quad = p.w.dot(&(model.noise.matrix() * &p.w));
    let drift = model.dissipative_drift_unchecked(&p.v);
    quad + drift.dot(&p.w)
}

/// Hamilton's equations dv_a/dt = dH/dw^a, dw^c/dt = -dH/dv_c, with the
/// v-derivative expanded analytically:
///
///   dv_a/dt = 2 D_ab w^b + A_a(v)
///   dw^c/dt = sum_a [ (Gamma G)_{ac} - f[a][b][c] (G v)_b
///                     - f[a][b][c'] G^{bc} v_{c'} ] w^a
pub fn hamilton_field(model: &ModelSpec, p: &PhasePoint) -> PhasePoint {
    let n = model.dim();
    let g = model.metric.matrix();
    let gv = g * &p.v;

    let mut dv = model.noise.matrix() * &p.w * 2.0;
    dv += model.dissipative_drift_unchecked(&p.v);

    // dw = (Gamma G)^T w  - [f . (Gv)]^T w  -  G m,
    // with m_b = sum_{a,c'} w_a f[a][b][c'] v_{c'}.
    let gamma_g = model.dissipation.matrix() * g;
    let mut dw = gamma_g.tr_mul(&p.w);
    let mut m = DVector::zeros(n);
    for a in 0..n {
        let wa = p.w[a];
        if wa == 0.0 {
            continue;
        }
        for b in 0..n {
            let mut fv = 0.0;
            for c in 0..n {
                let f = model.algebra.get(a, b, c);
                if f != 0.0 {
                    dw[c] -= f * gv[b] * wa;
                    fv += f * p.v[c];
                }
            }
            m[b] += wa * fv;
        }
    }
    dw -= g * m;
    PhasePoint { v: dv, w: dw }
}

/// A time-discretized instanton with its running action.
#[derive(Debug, Clone)]
pub struct InstantonPath {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    /// H at each stored point (conserved along exact trajectories).
    pub hamiltonian: Vec<f64>,
    /// Trapezoid partial action up to each stored time.
    pub partial_action: Vec<f64>,
    /// Total action Phi = int (w . dv/dt - H) dt.
    pub action: f64,
}

impl InstantonPath {
    pub fn last(&self) -> &PhasePoint {
        self.points.last().expect("path is never empty")
    }
}

fn pack(p: &PhasePoint) -> DVector<f64> {
    let n = p.v.len();
    let mut y = DVector::zeros(2 * n);
    y.rows_mut(0, n).copy_from(&p.v);
    y.rows_mut(n, n).copy_from(&p.w);
    y
}

fn unpack(y: &DVector<f64>, n: usize) -> PhasePoint {
    PhasePoint {
        v: y.rows(0, n).into_owned(),
        w: y.rows(n, n).into_owned(),
    }
}

fn packed_field(model: &ModelSpec, y: &DVector<f64>) -> DVector<f64> {
    let n = model.dim();
    let d = hamilton_field(model, &unpack(y, n));
    pack(&d)
}

/// Lagrangian integrand w . dv/dt - H; equals w^T D w along the flow.
fn lagrangian(model: &ModelSpec, p: &PhasePoint) -> f64 {
    let dv = hamilton_field(model, p).v;
    p.w.dot(&dv) - wkb_hamiltonian(model, p)
}

/// 4th-order integration of the Hamilton flow with trapezoid action
/// accumulation at the stored step points.
pub fn integrate_instanton(
    model: &ModelSpec,
    p0: &PhasePoint,
    t_final: f64,
    dt: f64,
) -> Result<InstantonPath> {
    if !(dt > 0.0) || !(t_final >= dt) {
        return Err(Error::InvalidArgument("need dt > 0 and T >= dt".into()));
    }
    if p0.v.len() != model.dim() || p0.w.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: p0.v.len().max(p0.w.len()),
        });
    }
    let field = |y: &DVector<f64>| packed_field(model, y);
    let (steps, rem) = split_duration(t_final, dt);
    let total = steps + usize::from(rem > 0.0);

    let mut times = Vec::with_capacity(total + 1);
    let mut points = Vec::with_capacity(total + 1);
    let mut hams = Vec::with_capacity(total + 1);
    let mut partial = Vec::with_capacity(total + 1);

    let mut y = pack(p0);
    let p = p0.clone();
    let mut ell_prev = lagrangian(model, &p);
    let mut action = 0.0;
    times.push(0.0);
    hams.push(wkb_hamiltonian(model, &p));
    partial.push(0.0);
    points.push(p);

    for k in 0..total {
        let h = if k < steps { dt } else { rem };
        y = crate::util::rk4_step(&field, &y, h);
        if !is_finite_and_bounded(&y) {
            return Err(Error::BlowUp {
                t: *times.last().unwrap(),
                limit: BLOWUP_LIMIT,
            });
        }
        let p = unpack(&y, model.dim());
        let ell = lagrangian(model, &p);
        action += 0.5 * h * (ell_prev + ell);
        ell_prev = ell;
        times.push(times.last().unwrap() + h);
        hams.push(wkb_hamiltonian(model, &p));
        partial.push(action);
        points.push(p);
    }
    Ok(InstantonPath {
        times,
        points,
        hamiltonian: hams,
        partial_action: partial,
        action,
    })
}

/// Final (v, w) of the Hamilton flow without storing the path.
fn propagate(
    model: &ModelSpec,
    v0: &VelocityState,
    w0: &DVector<f64>,
    t_final: f64,
    dt: f64,
) -> Result<PhasePoint> {
    let field = |y: &DVector<f64>| packed_field(model, y);
    let (steps, rem) = split_duration(t_final, dt);
    let mut y = pack(&PhasePoint::new(v0.clone(), w0.clone()));
    for k in 0..steps + usize::from(rem > 0.0) {
        let h = if k < steps { dt } else { rem };
        y = crate::util::rk4_step(&field, &y, h);
        if !is_finite_and_bounded(&y) {
            return Err(Error::BlowUp {
                t: k as f64 * dt,
                limit: BLOWUP_LIMIT,
            });
        }
    }
    Ok(unpack(&y, model.dim()))
}

/// Options for the shooting solver.
#[derive(Debug, Clone)]
pub struct ShootOptions {
    /// Convergence tolerance on |v(T) - v_end|.
    pub tol: f64,
    pub max_iters: usize,
    /// Additional starting guesses for w(0), tried alongside the default.
    pub extra_guesses: Vec<DVector<f64>>,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 60,
            extra_guesses: Vec::new(),
        }
    }
}

struct Candidate {
    start_index: usize,
    path: InstantonPath,
}

fn newton_from(
    model: &ModelSpec,
    v_start: &VelocityState,
    v_end: &VelocityState,
    t_final: f64,
    dt: f64,
    guess: &DVector<f64>,
    opts: &ShootOptions,
) -> std::result::Result<InstantonPath, f64> {
    let n = model.dim();
    let residual = |w: &DVector<f64>| -> Option<DVector<f64>> {
        propagate(model, v_start, w, t_final, dt)
            .ok()
            .map(|p| p.v - v_end)
    };
    let mut w = guess.clone();
    let mut best = f64::INFINITY;
    let Some(mut r) = residual(&w) else {
        return Err(best);
    };
    for _ in 0..opts.max_iters {
        let rn = r.norm();
        best = best.min(rn);
        if rn < opts.tol {
            let path = integrate_instanton(model, &PhasePoint::new(v_start.clone(), w), t_final, dt)
                .map_err(|_| best)?;
            return Ok(path);
        }
        // Forward-difference Jacobian of w(0) -> v(T).
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let h = 1e-6 * (1.0 + w[j].abs());
            let mut wp = w.clone();
            wp[j] += h;
            let Some(rp) = residual(&wp) else {
                return Err(best);
            };
            jac.set_column(j, &((rp - &r) / h));
        }
        let Some(step) = jac.lu().solve(&(-&r)) else {
            return Err(best);
        };
        // Backtracking: blow-ups and non-decreasing residuals shrink the step.
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-8 {
            let trial = &w + &step * lambda;
            if let Some(rt) = residual(&trial) {
                if rt.norm() < rn {
                    w = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(best);
        }
    }
    Err(best)
}

/// Solve the two-point boundary problem v(0) = v_start, v(T) = v_end by
/// Newton iteration on w(0), with a finite-difference Jacobian and
/// multistart over a guess list. Among converged starts the path of least
/// action wins; ties go to the lowest start index.
pub fn shoot(
    model: &ModelSpec,
    v_start: &VelocityState,
    v_end: &VelocityState,
    t_final: f64,
    dt: f64,
    w_guess: &DVector<f64>,
    opts: &ShootOptions,
) -> Result<InstantonPath> {
    if v_start.len() != model.dim() || v_end.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: v_start.len().max(v_end.len()),
        });
    }
    let mut guesses = vec![w_guess.clone()];
    guesses.extend(opts.extra_guesses.iter().cloned());

    let results: Vec<std::result::Result<Candidate, f64>> = guesses
        .par_iter()
        .enumerate()
        .map(|(start_index, guess)| {
            newton_from(model, v_start, v_end, t_final, dt, guess, opts)
                .map(|path| Candidate { start_index, path })
        })
        .collect();

    let mut best: Option<Candidate> = None;
    let mut best_residual = f64::INFINITY;
    for res in results {
        match res {
            Ok(cand) => {
                let replace = match &best {
                    None => true,
                    Some(cur) => {
                        cand.path.action < cur.path.action
                            || (cand.path.action == cur.path.action
                                && cand.start_index < cur.start_index)
                    }
                };
                if replace {
                    best = Some(cand);
                }
            }
            Err(resid) => best_residual = best_residual.min(resid),
        }
    }
    match best {
        Some(cand) => Ok(cand.path),
        None => Err(Error::NoConvergence {
            iters: opts.max_iters,
            residual: best_residual,
        }),
    }
}
