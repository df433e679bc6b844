use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::preset::Preset;
use crate::problem::{NoiseLevel, ProblemInstance};
use crate::rng::trial_seed;
use crate::scalar::Real;
use crate::solvers::{
    run_solver, IterateTrace, NoObserver, SolverConfig, SolverKind, UnfoldedModel,
};

/// A success-rate experiment: for each `k`, `trials` fresh instances.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub n: usize,
    pub m: usize,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub solver: SolverKind,
    pub preset: Preset,
    pub master_seed: u64,
    /// Trial succeeds when `RE ≤ success_threshold`.
    pub success_threshold: f64,
    pub noise: NoiseLevel,
    /// Overrides the preset's iteration cap (layer count for the momentum
    /// variant).
    pub max_iter: Option<usize>,
    /// Depth of the default-filled model when `solver` is `Unfolded`.
    pub unfolded_depth: usize,
}

impl SweepSpec {
    /// The preset's dimensions, 20 trials, threshold `1e-4`, noiseless.
    pub fn new(preset: Preset, solver: SolverKind, k_values: Vec<usize>, master_seed: u64) -> Self {
        let (m, n) = preset.dims();
        SweepSpec {
            n,
            m,
            k_values,
            trials: 20,
            solver,
            preset,
            master_seed,
            success_threshold: 1e-4,
            noise: NoiseLevel::None,
            max_iter: None,
            unfolded_depth: 16,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= self.n {
            return Err(Error::invalid(format!(
                "need 0 < m < n, got m={}, n={}",
                self.m, self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.k_values.is_empty() {
            return Err(Error::invalid("k_values must be non-empty"));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k == 0 || k > self.n) {
            return Err(Error::invalid(format!("k={k} outside [1, {}]", self.n)));
        }
        if !(self.success_threshold >= 0.0) {
            return Err(Error::invalid("success threshold must be non-negative"));
        }
        if self.max_iter == Some(0) {
            return Err(Error::invalid("max_iter must be positive"));
        }
        if self.solver == SolverKind::Unfolded && self.unfolded_depth == 0 {
            return Err(Error::invalid("unfolded depth must be positive"));
        }
        Ok(())
    }
}

/// Result of a single trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub relative_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub wall_time_s: f64,
}

/// One aggregated row per `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_iterations: f64,
    pub mean_re: f64,
    pub mean_wall_time_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, k: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Generates trial `(k, trial)` of `spec` and runs the solver on it.
pub fn run_trial<T: Real>(spec: &SweepSpec, k: usize, trial: usize) -> Result<TrialOutcome> {
    let seed = trial_seed(spec.master_seed, k, trial);
    let inst_spec = spec
        .preset
        .instance_spec(spec.m, spec.n, k, spec.noise, seed);
    let inst = ProblemInstance::<T>::generate(&inst_spec)?;
    let mut cfg = spec.preset.solver_config(&inst)?;
    if let Some(cap) = spec.max_iter {
        cfg.max_iter = cap;
    }
    let model = if spec.solver == SolverKind::Unfolded {
        Some(UnfoldedModel::from_config(
            &inst,
            &cfg,
            spec.unfolded_depth,
        )?)
    } else {
        None
    };
    let rec = run_solver(spec.solver, &inst, &cfg, model.as_ref(), &mut NoObserver)?;
    Ok(TrialOutcome {
        k,
        trial,
        seed,
        relative_error: rec.report.relative_error.map_or(f64::NAN, |v| v.as_f64()),
        iterations: rec.report.iterations,
        converged: rec.report.converged,
        wall_time_s: rec.report.wall_time_s,
    })
}

/// Runs every `(k, trial)` cell, in parallel on the current rayon pool.
///
/// Per-trial seeds depend only on `(master_seed, k, trial)` and rows are
/// aggregated in trial order, so every column except the wall-time mean is
/// independent of scheduling and thread count.
pub fn run_success_rate_sweep<T: Real>(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let cells: Vec<(usize, usize)> = spec
        .k_values
        .iter()
        .flat_map(|&k| (0..spec.trials).map(move |t| (k, t)))
        .collect();
    let outcomes: Vec<TrialOutcome> = cells
        .par_iter()
        .map(|&(k, t)| run_trial::<T>(spec, k, t))
        .collect::<Result<_>>()?;

    let rows = outcomes
        .chunks(spec.trials)
        .map(|chunk| aggregate(chunk, spec.success_threshold))
        .collect();
    Ok(SweepResult { rows })
}

fn aggregate(chunk: &[TrialOutcome], threshold: f64) -> SweepRow {
    let trials = chunk.len();
    let successes = chunk
        .iter()
        .filter(|o| o.relative_error <= threshold)
        .count();
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| chunk.iter().map(f).sum::<f64>() / trials as f64;
    SweepRow {
        k: chunk[0].k,
        trials,
        successes,
        success_rate: successes as f64 / trials as f64,
        mean_iterations: mean(&|o| o.iterations as f64),
        mean_re: mean(&|o| o.relative_error),
        mean_wall_time_s: mean(&|o| o.wall_time_s),
    }
}

/// Full per-iteration trace of one solver run, with timestamps.
pub fn run_convergence_trace<T: Real>(
    inst: &ProblemInstance<T>,
    solver: SolverKind,
    cfg: &SolverConfig<T>,
    model: Option<&UnfoldedModel<T>>,
) -> Result<IterateTrace<T>> {
    let cfg = cfg.clone().with_trace(true);
    let rec = run_solver(solver, inst, &cfg, model, &mut NoObserver)?;
    Ok(rec.trace.expect("trace requested"))
}
