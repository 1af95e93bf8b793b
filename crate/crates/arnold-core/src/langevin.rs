//! Euler-Maruyama simulation of the randomly forced dissipative flow and
//! empirical equilibrium statistics.
//!
//! Convention: the per-step increment covariance is 2 D dt, so that the
//! sampler shares the stationary law e^{-beta E} of the FPK module with
//! beta D = Gamma. Sampling targets the uniform-measure (unimodular) theory;
//! models with a nontrivial invariant measure are refused unless explicitly
//! overridden, in which case the results describe the naive process, not the
//! measure-corrected FPK.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::{ModelSpec, NoiseCovariance, VelocityState};
use crate::error::{Error, Result};
use crate::util::{is_finite_and_bounded, BLOWUP_LIMIT};

/// Lower-triangular factor L with L L^T = 2 D.
#[derive(Debug, Clone)]
pub struct NoiseFactor {
    l: DMatrix<f64>,
}

impl NoiseFactor {
    /// Semidefinite Cholesky of 2 D. Pivot-free variant that zeroes columns
    /// whose remaining diagonal is at round-off scale, so degenerate D
    /// (including D = 0) factors cleanly.
    pub fn from_noise(noise: &NoiseCovariance) -> Result<Self> {
        let a = noise.matrix() * 2.0;
        let n = a.nrows();
        let scale = a.amax().max(1.0);
        let tol = 1e-14 * scale;
        let mut l = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if d > tol {
                let root = d.sqrt();
                l[(j, j)] = root;
                for i in (j + 1)..n {
                    let mut s = a[(i, j)];
                    for k in 0..j {
                        s -= l[(i, k)] * l[(j, k)];
                    }
                    l[(i, j)] = s / root;
                }
            }
            // else: leave the column zero (semidefinite direction)
        }
        let defect = (&l * l.transpose() - &a).amax();
        if defect > 1e-12 * scale {
            return Err(Error::InvalidModel(format!(
                "noise covariance is not positive semidefinite (factor defect {defect:e})"
            )));
        }
        Ok(Self { l })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn is_zero(&self) -> bool {
        self.l.iter().all(|&x| x == 0.0)
    }
}

/// One Euler-Maruyama step: v + A(v) dt + L xi sqrt(dt), xi ~ N(0, I).
pub fn langevin_step<R: Rng>(
    model: &ModelSpec,
    v: &VelocityState,
    dt: f64,
    rng: &mut R,
) -> Result<VelocityState> {
    let factor = NoiseFactor::from_noise(&model.noise)?;
    let mut out = v.clone();
    step_in_place(model, &factor, &mut out, dt, rng).map_err(|_| Error::BlowUp {
        t: dt,
        limit: BLOWUP_LIMIT,
    })?;
    Ok(out)
}

#[derive(Debug)]
struct StepBlowUp;

fn step_in_place<R: Rng>(
    model: &ModelSpec,
    factor: &NoiseFactor,
    v: &mut VelocityState,
    dt: f64,
    rng: &mut R,
) -> std::result::Result<(), StepBlowUp> {
    let n = v.len();
    let drift = model.dissipative_drift_unchecked(v);
    *v += drift * dt;
    if !factor.is_zero() {
        let xi = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        *v += factor.matrix() * xi * dt.sqrt();
    }
    if !is_finite_and_bounded(v) {
        return Err(StepBlowUp);
    }
    Ok(())
}

/// Empirical moments and an energy histogram of retained samples.
///
/// Internally keeps raw sums so that merging is associative and
/// order-independent; retained energies are kept for histogramming.
#[derive(Debug, Clone)]
pub struct EnsembleStats {
    pub count: u64,
    sum: DVector<f64>,
    sum_outer: DMatrix<f64>,
    energies: Vec<f64>,
    states: Vec<VelocityState>,
}

#[derive(Debug, Clone)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl EnsembleStats {
    fn empty(dim: usize) -> Self {
        Self {
            count: 0,
            sum: DVector::zeros(dim),
            sum_outer: DMatrix::zeros(dim, dim),
            energies: Vec::new(),
            states: Vec::new(),
        }
    }

    fn record(&mut self, v: &VelocityState, energy: f64, keep_state: bool) {
        self.count += 1;
        self.sum += v;
        self.sum_outer.syger(1.0, v, v, 1.0);
        self.energies.push(energy);
        if keep_state {
            self.states.push(v.clone());
        }
    }

    pub fn merge(mut self, other: EnsembleStats) -> EnsembleStats {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_outer += other.sum_outer;
        self.energies.extend(other.energies);
        self.states.extend(other.states);
        self
    }

    pub fn mean(&self) -> DVector<f64> {
        &self.sum / self.count as f64
    }

    /// Raw second moments <v_a v_b>.
    pub fn second_moments(&self) -> DMatrix<f64> {
        let mut m = &self.sum_outer / self.count as f64;
        // syger fills the lower triangle; mirror it.
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                m[(i, j)] = m[(j, i)];
            }
        }
        m
    }

    /// Histogram of retained energies on [0, max] with uniform bins.
    pub fn energy_histogram(&self, bins: usize) -> Histogram {
        let hi = self
            .energies
            .iter()
            .cloned()
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let edges: Vec<f64> = (0..=bins).map(|k| hi * k as f64 / bins as f64).collect();
        let mut counts = vec![0u64; bins];
        for &e in &self.energies {
            let idx = ((e / hi) * bins as f64).floor() as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Retained states; empty unless `keep_states` was requested.
    pub fn states(&self) -> &[VelocityState] {
        &self.states
    }
}

/// Parameters for equilibrium sampling.
#[derive(Debug, Clone)]
pub struct EnsembleOptions {
    pub v0: VelocityState,
    /// Discarded leading simulation time.
    pub burn_in: f64,
    /// Retained samples per chain.
    pub samples: usize,
    /// Steps between retained samples.
    pub thin: usize,
    pub dt: f64,
    pub chains: usize,
    /// Permit models with a nonuniform invariant measure (results then
    /// describe the naive process).
    pub allow_nonuniform_measure: bool,
    /// Keep the retained states (for sample output), not just their sums.
    pub keep_states: bool,
}

impl EnsembleOptions {
    pub fn new(v0: VelocityState) -> Self {
        Self {
            v0,
            burn_in: 10.0,
            samples: 10_000,
            thin: 10,
            dt: 1e-3,
            chains: 1,
            allow_nonuniform_measure: false,
            keep_states: false,
        }
    }
}

fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64);
    rng
}

fn run_chain(
    model: &ModelSpec,
    opts: &EnsembleOptions,
    seed: u64,
    chain: usize,
) -> Result<EnsembleStats> {
    let factor = NoiseFactor::from_noise(&model.noise)?;
    let mut rng = chain_rng(seed, chain);
    let mut v = opts.v0.clone();
    let mut step = 0usize;
    let blew_up = |step: usize| Error::BlowUp {
        t: step as f64 * opts.dt,
        limit: BLOWUP_LIMIT,
    };
    let burn_steps = (opts.burn_in / opts.dt).round() as usize;
    for _ in 0..burn_steps {
        step += 1;
        step_in_place(model, &factor, &mut v, opts.dt, &mut rng).map_err(|_| blew_up(step))?;
    }
    let mut stats = EnsembleStats::empty(model.dim());
    for _ in 0..opts.samples {
        for _ in 0..opts.thin {
            step += 1;
            step_in_place(model, &factor, &mut v, opts.dt, &mut rng)
                .map_err(|_| blew_up(step))?;
        }
        stats.record(&v, model.energy_unchecked(&v), opts.keep_states);
    }
    Ok(stats)
}

/// Sample the stationary law of the Langevin dynamics. Chains use one RNG
/// stream each, derived from (seed, chain index); chain results are merged
/// in index order, so the outcome is independent of scheduling.
pub fn sample_equilibrium(
    model: &ModelSpec,
    opts: &EnsembleOptions,
    seed: u64,
) -> Result<EnsembleStats> {
    if opts.samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    if opts.thin == 0 || !(opts.dt > 0.0) || opts.chains == 0 {
        return Err(Error::InvalidArgument(
            "thin, chains and dt must be positive".into(),
        ));
    }
    if opts.v0.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: opts.v0.len(),
        });
    }
    if !model.measure.is_uniform() && !opts.allow_nonuniform_measure {
        return Err(Error::InvalidArgument(
            "model has a nonuniform invariant measure; the Langevin sampler targets \
             the uniform-measure theory (use the FPK solver, or override to sample \
             the naive process)"
                .into(),
        ));
    }
    let per_chain: Vec<Result<EnsembleStats>> = (0..opts.chains)
        .into_par_iter()
        .map(|chain| run_chain(model, opts, seed, chain))
        .collect();
    let mut merged = EnsembleStats::empty(model.dim());
    for stats in per_chain {
        merged = merged.merge(stats?);
    }
    Ok(merged)
}

/// Max-norm violation of the Einstein relation beta D = Gamma; zero means
/// e^{-beta E} is the predicted equilibrium for unimodular algebras.
pub fn einstein_check(model: &ModelSpec, beta: f64) -> f64 {
    model.einstein_check(beta)
}
