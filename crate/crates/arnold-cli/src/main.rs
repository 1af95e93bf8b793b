mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use nalgebra::DVector;

use arnold_core::algebra::{resolve_model, ModelFile};
use arnold_core::dynamics;
use arnold_core::fpk::{self, DriftMode, Grid, StationaryOptions};
use arnold_core::instanton::{self, PhasePoint, ShootOptions};
use arnold_core::langevin::{self, EnsembleOptions};
use arnold_core::{InvariantMeasure, ModelSpec};

use io::{
    num, num_list, parse_cylinder, parse_floats, parse_grid_spec, parse_guesses, read_field_csv,
    Document, Summary,
};

#[derive(Parser)]
#[command(
    name = "arnold",
    version,
    about = "Finite-dimensional Euler-Arnold flows: deterministic, stochastic, FPK and instanton experiments"
)]
struct Cli {
    /// Worker threads for internal parallelism; the value never changes
    /// results, only wall time.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a model: antisymmetry, Jacobi identity, tensor definiteness,
    /// unimodularity and measure regularity.
    Check { model: String },

    /// Integrate the deterministic geodesic or dissipative flow to CSV.
    Simulate {
        model: String,
        /// Initial state, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        /// Final time.
        #[arg(long = "T")]
        t_final: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Include the dissipation term.
        #[arg(long)]
        dissipative: bool,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Sample the Langevin equilibrium; writes samples and a stats block.
    Ensemble {
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        #[arg(long)]
        dt: Option<f64>,
        /// Discarded leading time.
        #[arg(long)]
        burn_in: Option<f64>,
        /// Retained samples per chain.
        #[arg(long)]
        samples: Option<usize>,
        /// Steps between retained samples.
        #[arg(long)]
        thin: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        chains: Option<usize>,
        /// Sample a nonuniform-measure model anyway (naive process).
        #[arg(long)]
        allow_naive_measure: bool,
        /// Energy histogram bins.
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Evolve the measure-corrected FPK density, or run the double-run
    /// stationary report (--report).
    Fpk {
        model: String,
        /// Grid as min:max:cells per axis, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Inverse temperature; with --gamma this Einstein-matches the noise.
        #[arg(long)]
        beta: Option<f64>,
        /// Isotropic dissipation strength.
        #[arg(long)]
        gamma: Option<f64>,
        /// Lower cut of the last coordinate (singularity guard).
        #[arg(long)]
        eps: Option<f64>,
        /// Evolve for a fixed time instead of running the report.
        #[arg(long = "T")]
        t_final: Option<f64>,
        /// Cap on time steps (plain run) or simulated time units (report).
        #[arg(long)]
        budget: Option<usize>,
        /// Drift entering the flux: auto, linear (dissipation only) or full.
        #[arg(long)]
        drift: Option<String>,
        /// Restart from a previously written field CSV.
        #[arg(long)]
        init: Option<PathBuf>,
        /// Run to stationarity from two initial conditions and compare with
        /// the closed form.
        #[arg(long)]
        report: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Solve the instanton two-point boundary problem by Newton shooting.
    Instanton {
        model: String,
        /// Start velocity.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        /// Target velocity.
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(long = "T")]
        t_final: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        /// Guesses for w(0), semicolon separated; the first is the primary.
        #[arg(long, allow_hyphen_values = true)]
        guess: Option<String>,
        /// Boundary tolerance on |v(T) - v_end|.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Sectional curvatures of a diagonal 3-d metric, or cylinder stability.
    Curvature {
        /// Metric coefficients G1,G2,G3.
        #[arg(long)]
        metric: Option<String>,
        /// Cylinder spec r=..,h=..,m=..
        #[arg(long)]
        cylinder: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = classify(&err);
            eprintln!("error: kind={kind} message={:?}", err.to_string());
            ExitCode::from(code)
        }
    }
}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(core) = err.downcast_ref::<arnold_core::Error>() {
        if core.is_runtime() {
            return ("runtime", 3);
        }
    }
    ("config", 2)
}

fn load(reference: &str) -> Result<(ModelSpec, Option<ModelFile>)> {
    Ok(resolve_model(reference)?)
}

fn parse_state(text: &str, dim: usize, what: &str) -> Result<DVector<f64>> {
    let values = parse_floats(text)?;
    if values.len() != dim {
        bail!("{what} has {} components, model needs {dim}", values.len());
    }
    Ok(DVector::from_row_slice(&values))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Check { model } => check(&model),
        Command::Simulate {
            model,
            v0,
            t_final,
            dt,
            dissipative,
            out,
        } => simulate(&model, v0, t_final, dt, dissipative, out),
        Command::Ensemble {
            model,
            v0,
            dt,
            burn_in,
            samples,
            thin,
            seed,
            chains,
            allow_naive_measure,
            bins,
            out,
        } => ensemble(
            &model, v0, dt, burn_in, samples, thin, seed, chains, allow_naive_measure, bins, out,
        ),
        Command::Fpk {
            model,
            grid,
            beta,
            gamma,
            eps,
            t_final,
            budget,
            drift,
            init,
            report,
            out,
        } => run_fpk(
            &model, grid, beta, gamma, eps, t_final, budget, drift, init, report, out,
        ),
        Command::Instanton {
            model,
            from,
            to,
            t_final,
            dt,
            guess,
            tol,
            out,
        } => run_instanton(&model, from, to, t_final, dt, guess, tol, out),
        Command::Curvature { metric, cylinder } => curvature(metric, cylinder),
    }
}

fn check(reference: &str) -> Result<()> {
    let (model, _) = load(reference)?;
    let min_eig = |m: &nalgebra::DMatrix<f64>| -> f64 {
        m.clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    };
    let mut s = Summary::default();
    s.push("model", &model.name);
    s.push("dim", model.dim());
    s.push("jacobi_residual", num(model.algebra.jacobi_residual()));
    s.push("unimodular", model.algebra.is_unimodular(1e-12));
    s.push(
        "unimodularity_trace",
        num_list(model.algebra.unimodularity_trace()),
    );
    s.push("metric_min_eigenvalue", num(min_eig(model.metric.matrix())));
    s.push(
        "dissipation_min_eigenvalue",
        num(min_eig(model.dissipation.matrix())),
    );
    s.push("noise_min_eigenvalue", num(min_eig(model.noise.matrix())));
    s.push(
        "measure",
        match &model.measure {
            InvariantMeasure::Constant => "constant".to_string(),
            InvariantMeasure::HalfPlane => "halfplane".to_string(),
            InvariantMeasure::PowerLaw { powers, .. } => {
                format!("powerlaw({})", num_list(powers.iter().copied()))
            }
        },
    );
    s.push("einstein_violation_beta1", num(model.einstein_check(1.0)));
    s.push("valid", true);
    s.emit(false);
    Ok(())
}

fn simulate(
    reference: &str,
    v0: Option<String>,
    t_final: Option<f64>,
    dt: Option<f64>,
    dissipative: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let (model, file) = load(reference)?;
    let block = file.and_then(|f| f.simulate).unwrap_or_default();
    let v0_text = v0
        .or_else(|| block.v0.as_ref().map(|v| num_list(v.iter().copied())))
        .ok_or_else(|| anyhow!("--v0 is required (flag or [simulate] block)"))?;
    let v0 = parse_state(&v0_text, model.dim(), "--v0")?;
    let t_final = t_final
        .or(block.t_final)
        .ok_or_else(|| anyhow!("--T is required"))?;
    let dt = dt.or(block.dt).unwrap_or(1e-3);
    let dissipative = dissipative || block.dissipative.unwrap_or(false);

    let traj = dynamics::integrate(&model, &v0, t_final, dt, dissipative)?;
    let energies = dynamics::energy_series(&model, &traj);

    let mut doc = Document::new("simulate", &model.name);
    doc.meta("T", num(t_final))
        .meta("dt", num(dt))
        .meta("dissipative", dissipative)
        .meta("v0", num_list(v0.iter().copied()));
    let cols: Vec<String> = (0..model.dim()).map(|a| format!("v{a}")).collect();
    doc.line(format!("t,{},E", cols.join(",")));
    for ((t, state), e) in traj.times.iter().zip(&traj.states).zip(&energies) {
        doc.row(
            std::iter::once(*t)
                .chain(state.iter().copied())
                .chain(std::iter::once(*e)),
        );
    }
    doc.emit(out.as_ref())?;

    let mut s = Summary::default();
    s.push("steps", traj.times.len() - 1);
    s.push("final_state", num_list(traj.last().iter().copied()));
    s.push("final_energy", num(*energies.last().unwrap()));
    s.emit(out.is_none());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn ensemble(
    reference: &str,
    v0: Option<String>,
    dt: Option<f64>,
    burn_in: Option<f64>,
    samples: Option<usize>,
    thin: Option<usize>,
    seed: Option<u64>,
    chains: Option<usize>,
    allow_naive_measure: bool,
    bins: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let (model, file) = load(reference)?;
    let file_seed = file.as_ref().and_then(|f| f.seed);
    let block = file.and_then(|f| f.ensemble).unwrap_or_default();
    let v0 = match v0.or_else(|| block.v0.as_ref().map(|v| num_list(v.iter().copied()))) {
        Some(text) => parse_state(&text, model.dim(), "--v0")?,
        None => DVector::zeros(model.dim()),
    };
    let opts = EnsembleOptions {
        v0,
        burn_in: burn_in.or(block.burn_in).unwrap_or(10.0),
        samples: samples.or(block.samples).unwrap_or(10_000),
        thin: thin.or(block.thin).unwrap_or(10),
        dt: dt.or(block.dt).unwrap_or(1e-3),
        chains: chains.or(block.chains).unwrap_or(1),
        allow_nonuniform_measure: allow_naive_measure
            || block.allow_naive_measure.unwrap_or(false),
        keep_states: true,
    };
    let seed = seed.or(block.seed).or(file_seed).unwrap_or(0);
    let stats = langevin::sample_equilibrium(&model, &opts, seed)?;

    let mut doc = Document::new("ensemble", &model.name);
    doc.meta("dt", num(opts.dt))
        .meta("burn_in", num(opts.burn_in))
        .meta("samples", opts.samples)
        .meta("thin", opts.thin)
        .meta("chains", opts.chains)
        .meta("seed", seed);
    if !model.measure.is_uniform() {
        doc.meta("process", "naive (measure ignored)");
    }
    let cols: Vec<String> = (0..model.dim()).map(|a| format!("v{a}")).collect();
    doc.line(format!("sample_index,{},E", cols.join(",")));
    for (i, (state, e)) in stats.states().iter().zip(stats.energies()).enumerate() {
        doc.line(format!(
            "{i},{},{}",
            num_list(state.iter().copied()),
            num(*e)
        ));
    }
    doc.emit(out.as_ref())?;

    let mean = stats.mean();
    let moments = stats.second_moments();
    let hist = stats.energy_histogram(bins);
    let mut s = Summary::default();
    s.push("count", stats.count);
    s.push("mean", num_list(mean.iter().copied()));
    for a in 0..model.dim() {
        s.push(
            &format!("second_moment_row{a}"),
            num_list(moments.row(a).iter().copied()),
        );
    }
    s.push("einstein_violation_beta1", num(model.einstein_check(1.0)));
    s.push(
        "energy_histogram_edges",
        num_list(hist.edges.iter().copied()),
    );
    s.push(
        "energy_histogram_counts",
        hist.counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    s.emit(out.is_none());
    Ok(())
}

fn drift_mode(model: &ModelSpec, requested: Option<&str>) -> Result<DriftMode> {
    match requested.unwrap_or("auto") {
        "full" => Ok(DriftMode::Full),
        "linear" => Ok(DriftMode::LinearOnly),
        // The nonuniform-measure equilibrium experiment drops the
        // Hamiltonian drift by default.
        "auto" => Ok(if model.measure.is_uniform() {
            DriftMode::Full
        } else {
            DriftMode::LinearOnly
        }),
        other => bail!("unknown drift mode `{other}` (auto, linear, full)"),
    }
}

fn default_grid(model: &ModelSpec, eps: Option<f64>) -> Result<Vec<(f64, f64, usize)>> {
    let domain = model
        .domain
        .clone()
        .ok_or_else(|| anyhow!("model declares no domain; pass --grid"))?;
    let mut axes: Vec<(f64, f64, usize)> =
        domain.iter().map(|&(lo, hi)| (lo, hi, 128usize)).collect();
    let last = axes.len() - 1;
    if !model.measure.is_uniform() {
        // Keep the grid off the measure singularity at the lower edge.
        let cut = eps.unwrap_or(0.05 * axes[last].1);
        axes[last].0 = axes[last].0.max(cut);
    } else if let Some(eps) = eps {
        axes[last].0 = axes[last].0.max(eps);
    }
    Ok(axes)
}

#[allow(clippy::too_many_arguments)]
fn run_fpk(
    reference: &str,
    grid: Option<String>,
    beta: Option<f64>,
    gamma: Option<f64>,
    eps: Option<f64>,
    t_final: Option<f64>,
    budget: Option<usize>,
    drift: Option<String>,
    init: Option<PathBuf>,
    report: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let (model, file) = load(reference)?;
    let block = file.and_then(|f| f.fpk).unwrap_or_default();
    let beta = beta.or(block.beta);
    let gamma = gamma.or(block.gamma);
    let eps = eps.or(block.eps);
    let t_final = t_final.or(block.t_final);
    let budget = budget.or(block.budget);
    let drift = drift.or(block.drift);
    let axes = match grid.as_deref() {
        Some(text) => parse_grid_spec(text)?,
        None => match &block.grid {
            Some(axes) => axes.clone(),
            None => default_grid(&model, eps)?,
        },
    };
    let grid = Grid::new(&axes)?;
    let mode = drift_mode(&model, drift.as_deref())?;

    // Experiment tensors: isotropic gamma and Einstein-matched noise when
    // requested, the model's own tensors otherwise.
    let mut experiment = model.clone();
    if let Some(g) = gamma {
        experiment = experiment.with_isotropic_dissipation(g)?;
    }
    if let Some(b) = beta {
        experiment = experiment.with_einstein_noise(b)?;
    }

    if report {
        let beta = beta.ok_or_else(|| anyhow!("--report needs --beta"))?;
        let opts = StationaryOptions {
            gamma: gamma.unwrap_or(1.0),
            drift: mode,
            max_time: budget.map(|b| b as f64).unwrap_or(200.0),
            ..Default::default()
        };
        let rep = fpk::stationary_distance_report(&model, grid, beta, &opts)?;
        let meta = [
            ("beta", num(beta)),
            ("gamma", num(opts.gamma)),
            ("drift", format!("{:?}", opts.drift)),
        ];
        write_field(&rep.field, "fpk-report", &model.name, &meta, out.as_ref())?;
        let mut s = Summary::default();
        s.push("l1_double_run", num(rep.l1_double_run));
        s.push("l1_closed_form", num(rep.l1_to_closed_form));
        s.push("closed_form_within_target", rep.l1_to_closed_form <= 0.10);
        s.push("closed_form_archived", rep.l1_to_closed_form > 0.10);
        s.push("l1_boltzmann", num(rep.l1_to_boltzmann));
        s.push("mass_drift", num(rep.mass_drift));
        s.push("clipped_mass", num(rep.clipped_mass));
        s.push("converged_time", num(rep.converged_time));
        s.push("v1_marginal_mode", num(rep.v1_marginal_mode));
        s.push("v1_mode_interior", rep.v1_mode_interior);
        s.push("dv_density_mode", num_list(rep.dv_density_mode));
        s.push("p_mode", num_list(rep.p_mode));
        s.emit(out.is_none());
        return Ok(());
    }

    let t_final = t_final.ok_or_else(|| anyhow!("pass --T for plain evolution or --report"))?;
    let start = match init {
        Some(path) => read_field_csv(&path, grid, &experiment.measure)?,
        None => fpk::DensityField::uniform(grid, &experiment.measure)?,
    };
    let mut solver = fpk::FpkSolver::new(&experiment, &start, mode)?;
    let dt = solver.stability_bound();
    let mut steps = (t_final / dt).round() as usize;
    if let Some(cap) = budget {
        steps = steps.min(cap);
    }
    let mut field = start;
    let diag = fpk::fpk_evolve_steps(&mut solver, &mut field, steps, dt)?;
    let mut meta = vec![("T", num(t_final)), ("drift", format!("{mode:?}"))];
    if let Some(b) = beta {
        meta.push(("beta", num(b)));
    }
    if let Some(g) = gamma {
        meta.push(("gamma", num(g)));
    }
    write_field(&field, "fpk", &experiment.name, &meta, out.as_ref())?;
    let mut s = Summary::default();
    s.push("steps", diag.steps);
    s.push("dt", num(dt));
    s.push("mass", num(field.mass()));
    s.push("max_mass_drift", num(diag.max_mass_drift));
    s.push("clipped_mass", num(diag.clipped_mass));
    s.emit(out.is_none());
    Ok(())
}

fn write_field(
    field: &fpk::DensityField,
    command: &str,
    model_name: &str,
    meta: &[(&str, String)],
    out: Option<&PathBuf>,
) -> Result<()> {
    let grid = &field.grid;
    let mut doc = Document::new(command, model_name);
    let axes: Vec<String> = (0..grid.ndim())
        .map(|a| {
            format!(
                "{}:{}:{}",
                num(grid.mins()[a]),
                num(grid.maxs()[a]),
                grid.counts()[a]
            )
        })
        .collect();
    doc.meta("grid", axes.join(","));
    for (key, value) in meta {
        doc.meta(key, value);
    }
    let cols: Vec<String> = (0..grid.ndim()).map(|a| format!("v{a}")).collect();
    doc.line(format!("{},P,muP", cols.join(",")));
    for (i, p) in field.p.iter().enumerate() {
        let x = grid.point(i);
        doc.row(x.iter().copied().chain([*p, *p * field.mu()[i]]));
    }
    doc.emit(out)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_instanton(
    reference: &str,
    from: Option<String>,
    to: Option<String>,
    t_final: Option<f64>,
    dt: Option<f64>,
    guess: Option<String>,
    tol: f64,
    out: Option<PathBuf>,
) -> Result<()> {
    let (model, file) = load(reference)?;
    let block = file.and_then(|f| f.instanton).unwrap_or_default();
    let from_text = from
        .or_else(|| block.from.as_ref().map(|v| num_list(v.iter().copied())))
        .ok_or_else(|| anyhow!("--from is required"))?;
    let to_text = to
        .or_else(|| block.to.as_ref().map(|v| num_list(v.iter().copied())))
        .ok_or_else(|| anyhow!("--to is required"))?;
    let v_start = parse_state(&from_text, model.dim(), "--from")?;
    let v_end = parse_state(&to_text, model.dim(), "--to")?;
    let t_final = t_final
        .or(block.t_final)
        .ok_or_else(|| anyhow!("--T is required"))?;
    let dt = dt.or(block.dt).unwrap_or(1e-3);

    let mut guesses: Vec<Vec<f64>> = match guess.as_deref() {
        Some(text) => parse_guesses(text)?,
        None => block.guesses.clone().unwrap_or_default(),
    };
    if guesses.is_empty() {
        guesses.push(vec![0.0; model.dim()]);
    }
    for g in &guesses {
        if g.len() != model.dim() {
            bail!(
                "guess has {} components, model needs {}",
                g.len(),
                model.dim()
            );
        }
    }
    let primary = DVector::from_row_slice(&guesses[0]);
    let opts = ShootOptions {
        tol,
        extra_guesses: guesses[1..]
            .iter()
            .map(|g| DVector::from_row_slice(g))
            .collect(),
        ..Default::default()
    };
    let path = instanton::shoot(&model, &v_start, &v_end, t_final, dt, &primary, &opts)?;

    let mut doc = Document::new("instanton", &model.name);
    doc.meta("from", num_list(v_start.iter().copied()))
        .meta("to", num_list(v_end.iter().copied()))
        .meta("T", num(t_final))
        .meta("dt", num(dt));
    let vcols: Vec<String> = (0..model.dim()).map(|a| format!("v{a}")).collect();
    let wcols: Vec<String> = (0..model.dim()).map(|a| format!("w{a}")).collect();
    doc.line(format!(
        "t,{},{},H,partial_action",
        vcols.join(","),
        wcols.join(",")
    ));
    for (k, t) in path.times.iter().enumerate() {
        let PhasePoint { v, w } = &path.points[k];
        doc.row(
            std::iter::once(*t)
                .chain(v.iter().copied())
                .chain(w.iter().copied())
                .chain([path.hamiltonian[k], path.partial_action[k]]),
        );
    }
    doc.emit(out.as_ref())?;

    let end = path.last();
    let mut s = Summary::default();
    s.push("Phi", num(path.action));
    s.push("w0", num_list(path.points[0].w.iter().copied()));
    s.push("boundary_residual", num((end.v.clone() - &v_end).norm()));
    s.push(
        "hamiltonian_drift",
        num(path
            .hamiltonian
            .iter()
            .map(|h| (h - path.hamiltonian[0]).abs())
            .fold(0.0f64, f64::max)),
    );
    s.emit(out.is_none());
    Ok(())
}

fn curvature(metric: Option<String>, cylinder: Option<String>) -> Result<()> {
    let mut s = Summary::default();
    match (metric, cylinder) {
        (Some(_), Some(_)) => bail!("pass either --metric or --cylinder, not both"),
        (Some(text), None) => {
            let g = parse_floats(&text)?;
            if g.len() != 3 {
                bail!("--metric needs exactly G1,G2,G3");
            }
            let k =
                dynamics::sectional_curvature(g[0], g[1], g[2]).context("sectional curvature")?;
            s.push("K12", num(k.k12));
            s.push("K23", num(k.k23));
            s.push("K31", num(k.k31));
        }
        (None, Some(text)) => {
            let (r, h, m) = parse_cylinder(&text)?;
            let coin = dynamics::coin_stability(r, h, m)?;
            s.push("r", num(r));
            s.push("h", num(h));
            s.push("m", num(m));
            s.push("I_transverse", num(coin.i_transverse));
            s.push("I_axial", num(coin.i_axial));
            s.push("K12", num(coin.curvature.k12));
            s.push("K23", num(coin.curvature.k23));
            s.push("K31", num(coin.curvature.k31));
            s.push("classification", coin.class);
            s.push("threshold_h", num((1.5f64).sqrt() * r));
        }
        (None, None) => bail!("pass --metric G1,G2,G3 or --cylinder r=..,h=..,m=.."),
    }
    s.emit(false);
    Ok(())
}
