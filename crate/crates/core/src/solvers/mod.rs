//! Iterative recovery algorithms.
//!
//! Every solver here alternates a gradient step on `½‖y − Ax‖₂²`,
//! `r = x + (βAᵀ)(y − Ax)`, with a componentwise thresholding of `r`. They
//! differ only in the threshold (constant, magnitude-adaptive, keep-k) and
//! in how the step direction is accumulated (plain, Nesterov, decayed sum
//! of all previous directions).

mod baseline;
mod config;
mod momentum;
mod qista;
mod report;
mod unfolded;

use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView1};

pub use baseline::{
    solve_fista, solve_fista_observed, solve_iht, solve_iht_observed, solve_ista,
    solve_ista_observed,
};
pub use config::{lipschitz_step, SolverConfig, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use momentum::{solve_qista_momentum, solve_qista_momentum_observed, MomentumState};
pub use qista::{solve_qista, solve_qista_observed};
pub use report::{IterateTrace, Recovery, RecoveryReport};
pub use unfolded::{
    solve_unfolded, solve_unfolded_from, solve_unfolded_observed, LayerParams, UnfoldedModel,
    EPS_FLOOR,
};

use crate::error::{Error, Result};
use crate::linalg::{dist2, norm2};
use crate::problem::ProblemInstance;
use crate::scalar::Real;

/// `x + β·Aᵀ(y − Ax)`.
pub fn gradient_step<T: Real>(
    x: ArrayView1<'_, T>,
    inst: &ProblemInstance<T>,
    beta: T,
) -> Result<Array1<T>> {
    if !(beta > T::zero()) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    check_len(x, inst.n(), "x")?;
    let step = ScaledTranspose::new(inst, beta);
    Ok(step.step(inst, x).r)
}

fn check_len<T: Real>(v: ArrayView1<'_, T>, n: usize, what: &str) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what} has length {}, expected {n}",
            v.len()
        )))
    }
}

/// `βAᵀ` materialized once per solve.
///
/// All solvers (and default-filled unfolded layers) multiply by the same
/// precomputed matrix, so their iterates agree bit for bit when their
/// parameters coincide.
pub(crate) struct ScaledTranspose<T: Real> {
    matrix: Array2<T>,
}

pub(crate) struct GradStep<T: Real> {
    /// `x + D`
    pub r: Array1<T>,
    /// `D = (βAᵀ)(y − Ax)`
    pub direction: Array1<T>,
    /// `‖y − Ax‖₂` at the base point
    pub residual_norm: T,
}

impl<T: Real> ScaledTranspose<T> {
    pub(crate) fn new(inst: &ProblemInstance<T>, beta: T) -> Self {
        ScaledTranspose {
            matrix: inst.a_transpose().mapv(|v| beta * v),
        }
    }

    pub(crate) fn into_matrix(self) -> Array2<T> {
        self.matrix
    }

    pub(crate) fn step(&self, inst: &ProblemInstance<T>, x: ArrayView1<'_, T>) -> GradStep<T> {
        descend(&self.matrix, inst, x)
    }
}

/// Gradient-like step with an arbitrary `n × m` operator in place of `βAᵀ`.
pub(crate) fn descend<T: Real>(
    op: &Array2<T>,
    inst: &ProblemInstance<T>,
    x: ArrayView1<'_, T>,
) -> GradStep<T> {
    let resid = inst.y() - &inst.a().dot(&x);
    let direction = op.dot(&resid);
    GradStep {
        r: &x + &direction,
        residual_norm: norm2(resid.view()),
        direction,
    }
}

/// One completed iteration, as seen by an observer.
#[derive(Debug)]
pub struct IterationEvent<'a, T: Real> {
    /// 1-based iteration (layer) index.
    pub iteration: usize,
    /// `xᵗ⁻¹`.
    pub x_prev: ArrayView1<'a, T>,
    /// Point the gradient step was taken from (`xᵗ⁻¹`, or FISTA's
    /// extrapolated point).
    pub base: ArrayView1<'a, T>,
    /// `‖y − A·base‖₂`.
    pub base_residual_norm: T,
    /// Pre-threshold point `rᵗ`.
    pub r: ArrayView1<'a, T>,
    /// `xᵗ`.
    pub x: ArrayView1<'a, T>,
}

/// Callback invoked after every iteration.
pub trait IterationObserver<T: Real> {
    fn observe(&mut self, event: &IterationEvent<'_, T>);
}

impl<T: Real, F: FnMut(&IterationEvent<'_, T>)> IterationObserver<T> for F {
    fn observe(&mut self, event: &IterationEvent<'_, T>) {
        self(event)
    }
}

/// Observer that ignores everything.
pub struct NoObserver;

impl<T: Real> IterationObserver<T> for NoObserver {
    fn observe(&mut self, _event: &IterationEvent<'_, T>) {}
}

/// Bookkeeping shared by the solver loops: timing, trace recording and the
/// stopping rule.
pub(crate) struct Run<'a, T: Real> {
    inst: &'a ProblemInstance<T>,
    started: Instant,
    trace: Option<IterateTrace<T>>,
    tol: Option<T>,
    pub(crate) iterations: usize,
    pub(crate) converged: bool,
}

impl<'a, T: Real> Run<'a, T> {
    pub(crate) fn new(inst: &'a ProblemInstance<T>, record_trace: bool, tol: Option<T>) -> Self {
        Run {
            inst,
            started: Instant::now(),
            trace: record_trace.then(IterateTrace::default),
            tol,
            iterations: 0,
            converged: false,
        }
    }

    /// Records iteration `t` and returns true when the loop should stop.
    pub(crate) fn finish_iteration(
        &mut self,
        x_prev: ArrayView1<'_, T>,
        x: ArrayView1<'_, T>,
        objective: impl FnOnce(ArrayView1<'_, T>) -> T,
    ) -> bool {
        self.iterations += 1;
        if let Some(trace) = self.trace.as_mut() {
            let obj = objective(x);
            let elapsed = self.started.elapsed().as_secs_f64();
            trace.record(self.inst, x, obj, elapsed);
        }
        match self.tol {
            Some(tol) if dist2(x, x_prev) < tol => {
                self.converged = true;
                true
            }
            _ => false,
        }
    }

    pub(crate) fn into_recovery(self, x_star: Array1<T>) -> Recovery<T> {
        let wall = self.started.elapsed().as_secs_f64();
        Recovery {
            report: RecoveryReport::build(self.inst, x_star, self.iterations, self.converged, wall),
            trace: self.trace,
        }
    }
}

/// Which algorithm a benchmark or CLI call runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Ista,
    Fista,
    Iht,
    Qista,
    QistaMomentum,
    Unfolded,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Ista,
        SolverKind::Fista,
        SolverKind::Iht,
        SolverKind::Qista,
        SolverKind::QistaMomentum,
        SolverKind::Unfolded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Ista => "ista",
            SolverKind::Fista => "fista",
            SolverKind::Iht => "iht",
            SolverKind::Qista => "qista",
            SolverKind::QistaMomentum => "qista-momentum",
            SolverKind::Unfolded => "unfolded",
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown solver `{s}`")))
    }
}

/// Runs `kind` with the solver-specific extras filled in from the instance:
/// IHT keeps `inst.k()` entries, the momentum variant runs up to
/// `cfg.max_iter` layers, and `Unfolded` uses `model` (default-filled from
/// `cfg` with `cfg.max_iter` layers when absent).
pub fn run_solver<T: Real>(
    kind: SolverKind,
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    model: Option<&UnfoldedModel<T>>,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    match kind {
        SolverKind::Ista => solve_ista_observed(inst, cfg, observer),
        SolverKind::Fista => solve_fista_observed(inst, cfg, observer),
        SolverKind::Iht => solve_iht_observed(inst, cfg, inst.k(), observer),
        SolverKind::Qista => solve_qista_observed(inst, cfg, observer),
        SolverKind::QistaMomentum => {
            solve_qista_momentum_observed(inst, cfg, cfg.max_iter, observer)
        }
        SolverKind::Unfolded => match model {
            Some(m) => {
                solve_unfolded_observed(inst, m, cfg.x_init.as_ref(), cfg.record_trace, observer)
            }
            None => {
                let m = UnfoldedModel::from_config(inst, cfg, cfg.max_iter)?;
                solve_unfolded_observed(inst, &m, cfg.x_init.as_ref(), cfg.record_trace, observer)
            }
        },
    }
}
