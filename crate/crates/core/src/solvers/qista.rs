use ndarray::ArrayView1;

use super::{
    IterationEvent, IterationObserver, NoObserver, Recovery, Run, ScaledTranspose, SolverConfig,
};
use crate::error::Result;
use crate::objective::objective_approx;
use crate::problem::ProblemInstance;
use crate::prox::qista_threshold_unchecked;
use crate::scalar::Real;

/// ℓq-ISTA.
///
/// Each iteration takes the gradient step `rᵗ = xᵗ⁻¹ + βAᵀ(y − Axᵗ⁻¹)` and
/// soft-thresholds component `i` by `λ / (|rᵢᵗ| + εᵢ)^(1−q)`, i.e. the
/// weighted-LASSO subproblem is solved with its weights frozen at the
/// current pre-threshold point. Stops when `‖xᵗ − xᵗ⁻¹‖₂ < tol`.
///
/// The trace objective is the smoothed ℓq objective with weight `λ/β`,
/// which is what one such step minimizes in proximal form.
pub fn solve_qista<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
) -> Result<Recovery<T>> {
    solve_qista_observed(inst, cfg, &mut NoObserver)
}

pub fn solve_qista_observed<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    cfg.validate(inst.n())?;
    let grad = ScaledTranspose::new(inst, cfg.beta);
    let weight = cfg.lambda / cfg.beta;
    let objective = |x: ArrayView1<'_, T>| {
        objective_approx(x, inst, weight, cfg.q, cfg.eps.view()).unwrap_or(T::nan())
    };

    let mut run = Run::new(inst, cfg.record_trace, Some(cfg.tol));
    let mut x = cfg.start(inst.n());
    for t in 1..=cfg.max_iter {
        let step = grad.step(inst, x.view());
        let next = qista_threshold_unchecked(step.r.view(), cfg.lambda, cfg.eps.view(), cfg.q);
        observer.observe(&IterationEvent {
            iteration: t,
            x_prev: x.view(),
            base: x.view(),
            base_residual_norm: step.residual_norm,
            r: step.r.view(),
            x: next.view(),
        });
        let stop = run.finish_iteration(x.view(), next.view(), objective);
        x = next;
        if stop {
            break;
        }
    }
    Ok(run.into_recovery(x))
}
