//! `qista` command line: generate instances, solve them, run success-rate
//! sweeps and convergence traces, and check layer-parameter files.
//!
//! Exit status: 0 on success, 2 on a usage error, 1 on a runtime failure.
//! Every output file is written to a temporary sibling and renamed into
//! place, so failures leave no partial files.

mod range;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qista::bench::{self, SweepSpec};
use qista::io;
use qista::solvers::{self, NoObserver};
use qista::{Config, Instance, Model, NoiseLevel, Preset, SolverKind};

pub use range::parse_k_values;

#[derive(Debug, Parser)]
#[command(
    name = "qista",
    version,
    about = "Sparse recovery with QISTA and ℓ1/ℓ0 baselines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded problem instance and write it in the text format.
    Generate(GenerateArgs),
    /// Run one solver on an instance file.
    Solve(SolveArgs),
    /// Success rate vs. sparsity over seeded trials; writes a CSV.
    Sweep(SweepArgs),
    /// Per-iteration convergence trace of one solver run; writes a CSV.
    Trace(TraceArgs),
    /// Check a layer-parameter file against the schema and dimensions.
    ValidateParams(ValidateArgs),
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: qista::Error| e.to_string())
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    s.parse().map_err(|e: qista::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Parameter preset: exact-1024 or bg-500.
    #[arg(long, default_value = "exact-1024", value_parser = parse_preset)]
    pub preset: Preset,
    /// Measurements (defaults to the preset's).
    #[arg(long)]
    pub m: Option<usize>,
    /// Signal length (defaults to the preset's).
    #[arg(long)]
    pub n: Option<usize>,
    /// Sparsity; expected support size for Bernoulli-Gaussian presets.
    #[arg(long)]
    pub k: Option<usize>,
    /// Measurement noise SNR in dB (noiseless when absent).
    #[arg(long = "snr-db")]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl InstanceArgs {
    fn build(&self) -> anyhow::Result<Instance> {
        let (m0, n0) = self.preset.dims();
        let spec = self.preset.instance_spec(
            self.m.unwrap_or(m0),
            self.n.unwrap_or(n0),
            self.k.unwrap_or(self.preset.default_k()),
            noise(self.snr_db),
            self.seed,
        );
        Ok(Instance::generate(&spec)?)
    }
}

fn noise(snr_db: Option<f64>) -> NoiseLevel {
    snr_db.map_or(NoiseLevel::None, NoiseLevel::SnrDb)
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub out: PathBuf,
}

/// Overrides applied on top of a preset's solver configuration.
#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_parser = parse_solver, default_value = "qista")]
    pub solver: SolverKind,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Uniform ε.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Layer-parameter file for `--solver unfolded`.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Depth of the default-filled model for `--solver unfolded` without `--params`.
    #[arg(long, default_value_t = 16)]
    pub depth: usize,
}

impl SolverArgs {
    fn config(&self, preset: Preset, inst: &Instance) -> anyhow::Result<Config> {
        let mut cfg = preset.solver_config(inst)?;
        if let Some(b) = self.beta {
            cfg.beta = b;
        }
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(q) = self.q {
            cfg.q = q;
        }
        if let Some(e) = self.eps {
            cfg.eps.fill(e);
        }
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(it) = self.max_iter {
            cfg.max_iter = it;
        }
        cfg.validate(inst.n())?;
        Ok(cfg)
    }

    fn model(&self, inst: &Instance, cfg: &Config) -> anyhow::Result<Option<Model>> {
        if self.solver != SolverKind::Unfolded {
            if self.params.is_some() {
                bail!("--params only applies to --solver unfolded");
            }
            return Ok(None);
        }
        match &self.params {
            Some(path) => {
                let loaded = io::load_layer_params::<f64>(path, inst.m(), inst.n())
                    .with_context(|| format!("loading {}", path.display()))?;
                if loaded.summary.clamped_total() > 0 {
                    eprintln!(
                        "note: raised {} eps_t entries to the 0.1 floor",
                        loaded.summary.clamped_total()
                    );
                }
                Ok(Some(loaded.model))
            }
            None => Ok(Some(Model::from_config(inst, cfg, self.depth)?)),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Preset supplying the default solver parameters.
    #[arg(long, default_value = "exact-1024", value_parser = parse_preset)]
    pub preset: Preset,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the recovered vector here, one value per line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_preset, default_value = "exact-1024")]
    pub preset: Preset,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Sparsity values: start:stop:step (inclusive), a,b,c, or one value.
    #[arg(long, required = true, value_parser = parse_k_values)]
    pub k: ::std::vec::Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_parser = parse_solver, default_value = "qista")]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "success-threshold", default_value_t = 1e-4)]
    pub success_threshold: f64,
    #[arg(long = "snr-db")]
    pub snr_db: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Depth of the default-filled model for `--solver unfolded`.
    #[arg(long, default_value_t = 16)]
    pub depth: usize,
    /// Worker threads (default: available cores). Results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Instance file; when absent an instance is generated from the preset flags.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub generate: InstanceArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub file: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version print to stdout and exit 0; real errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            1
        }
    }
}

// Library errors already embed their source text; skip causes that repeat it.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if msg.contains(&text) {
            continue;
        }
        if !msg.is_empty() {
            msg.push_str(": ");
        }
        msg.push_str(&text);
    }
    msg
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve(args),
        Command::Sweep(args) => sweep(args),
        Command::Trace(args) => trace(args),
        Command::ValidateParams(args) => validate_params(args),
    }
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let inst = args.instance.build()?;
    io::write_instance(&inst, &args.out)?;
    println!(
        "wrote {} (m={}, n={}, k={}, seed={})",
        args.out.display(),
        inst.m(),
        inst.n(),
        inst.k(),
        inst.seed()
    );
    Ok(())
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    io::read_instance(path).with_context(|| format!("reading instance {}", path.display()))
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let inst = read_instance(&args.instance)?;
    let cfg = args.solver.config(args.preset, &inst)?;
    let model = args.solver.model(&inst, &cfg)?;
    let rec = solvers::run_solver(
        args.solver.solver,
        &inst,
        &cfg,
        model.as_ref(),
        &mut NoObserver,
    )?;
    let r = &rec.report;
    let show = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"));
    println!("solver          {}", args.solver.solver);
    println!("iterations      {}", r.iterations);
    println!("converged       {}", r.converged);
    println!("relative_error  {}", show(r.relative_error));
    println!("snr_db          {}", show(r.snr_db));
    println!("wall_time_s     {:.6}", r.wall_time_s);
    if let Some(out) = &args.out {
        io::write_atomic(out, |w| {
            for v in r.x_star.iter() {
                writeln!(w, "{v:.16e}")?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let (m0, n0) = args.preset.dims();
    let spec = SweepSpec {
        n: args.n.unwrap_or(n0),
        m: args.m.unwrap_or(m0),
        k_values: args.k.clone(),
        trials: args.trials,
        solver: args.solver,
        preset: args.preset,
        master_seed: args.seed,
        success_threshold: args.success_threshold,
        noise: noise(args.snr_db),
        max_iter: args.max_iter,
        unfolded_depth: args.depth,
    };
    spec.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            bail!("--jobs must be positive");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().context("starting worker pool")?;
    let result = pool.install(|| bench::run_success_rate_sweep::<f64>(&spec))?;
    bench::write_sweep_csv(&result, &args.out)?;
    for row in &result.rows {
        println!(
            "k={:<4} success {}/{} (rate {:.2})  mean RE {:.3e}  mean iters {:.0}",
            row.k, row.successes, row.trials, row.success_rate, row.mean_re, row.mean_iterations
        );
    }
    Ok(())
}

fn trace(args: TraceArgs) -> anyhow::Result<()> {
    let inst = match &args.instance {
        Some(p) => read_instance(p)?,
        None => args.generate.build()?,
    };
    let cfg = args.solver.config(args.generate.preset, &inst)?;
    let model = args.solver.model(&inst, &cfg)?;
    let tr = bench::run_convergence_trace(&inst, args.solver.solver, &cfg, model.as_ref())?;
    bench::write_trace_csv(&tr, &args.out)?;
    println!("wrote {} rows to {}", tr.len(), args.out.display());
    Ok(())
}

fn validate_params(args: ValidateArgs) -> anyhow::Result<()> {
    let loaded = io::load_layer_params::<f64>(&args.file, args.m, args.n)
        .with_context(|| format!("validating {}", args.file.display()))?;
    println!(
        "ok: {} layers, gamma={}, q={}, {} eps_t entries below 0.1 (raised on load)",
        loaded.summary.layers,
        loaded.model.gamma,
        loaded.model.q,
        loaded.summary.clamped_total()
    );
    Ok(())
}
