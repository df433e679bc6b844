//! ℓ1 and ℓ0 baselines: ISTA, FISTA (plain Nesterov sequence, no restart)
//! and iterative hard thresholding.

use ndarray::ArrayView1;

use super::{
    check_len, IterationEvent, IterationObserver, NoObserver, Recovery, Run, ScaledTranspose,
    SolverConfig,
};
use crate::error::{Error, Result};
use crate::objective::{least_squares, objective_lasso};
use crate::problem::ProblemInstance;
use crate::prox::{hard_threshold_keep_k, shrink};
use crate::scalar::Real;

/// Proximal gradient on the LASSO objective, threshold `β·λ`.
pub fn solve_ista<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
) -> Result<Recovery<T>> {
    solve_ista_observed(inst, cfg, &mut NoObserver)
}

pub fn solve_ista_observed<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    cfg.validate(inst.n())?;
    let grad = ScaledTranspose::new(inst, cfg.beta);
    let theta = cfg.beta * cfg.lambda;
    let lasso = |x: ArrayView1<'_, T>| objective_lasso(x, inst, cfg.lambda).unwrap_or(T::nan());

    let mut run = Run::new(inst, cfg.record_trace, Some(cfg.tol));
    let mut x = cfg.start(inst.n());
    for t in 1..=cfg.max_iter {
        let step = grad.step(inst, x.view());
        let next = step.r.mapv(|v| shrink(v, theta));
        observer.observe(&IterationEvent {
            iteration: t,
            x_prev: x.view(),
            base: x.view(),
            base_residual_norm: step.residual_norm,
            r: step.r.view(),
            x: next.view(),
        });
        let stop = run.finish_iteration(x.view(), next.view(), lasso);
        x = next;
        if stop {
            break;
        }
    }
    Ok(run.into_recovery(x))
}

/// Accelerated proximal gradient on the LASSO objective.
///
/// `t₁ = 1`, `tₖ₊₁ = (1 + √(1 + 4tₖ²))/2`, extrapolation weight
/// `(tₖ − 1)/tₖ₊₁`. Same stopping rule as ISTA.
pub fn solve_fista<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
) -> Result<Recovery<T>> {
    solve_fista_observed(inst, cfg, &mut NoObserver)
}

pub fn solve_fista_observed<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    cfg.validate(inst.n())?;
    let grad = ScaledTranspose::new(inst, cfg.beta);
    let theta = cfg.beta * cfg.lambda;
    let lasso = |x: ArrayView1<'_, T>| objective_lasso(x, inst, cfg.lambda).unwrap_or(T::nan());
    let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));

    let mut run = Run::new(inst, cfg.record_trace, Some(cfg.tol));
    let mut x = cfg.start(inst.n());
    let mut z = x.clone();
    let mut tk = one;
    for t in 1..=cfg.max_iter {
        let step = grad.step(inst, z.view());
        let next = step.r.mapv(|v| shrink(v, theta));
        observer.observe(&IterationEvent {
            iteration: t,
            x_prev: x.view(),
            base: z.view(),
            base_residual_norm: step.residual_norm,
            r: step.r.view(),
            x: next.view(),
        });
        let stop = run.finish_iteration(x.view(), next.view(), lasso);
        let t_next = (one + (one + four * tk * tk).sqrt()) / two;
        let weight = (tk - one) / t_next;
        z = &next + &((&next - &x) * weight);
        tk = t_next;
        x = next;
        if stop {
            break;
        }
    }
    Ok(run.into_recovery(x))
}

/// Gradient step followed by keeping the `k` largest magnitudes.
pub fn solve_iht<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    k: usize,
) -> Result<Recovery<T>> {
    solve_iht_observed(inst, cfg, k, &mut NoObserver)
}

pub fn solve_iht_observed<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    k: usize,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    cfg.validate(inst.n())?;
    if k > inst.n() {
        return Err(Error::invalid(format!("k={k} exceeds n={}", inst.n())));
    }
    let grad = ScaledTranspose::new(inst, cfg.beta);
    let fidelity = |x: ArrayView1<'_, T>| least_squares(x, inst).unwrap_or(T::nan());

    let mut run = Run::new(inst, cfg.record_trace, Some(cfg.tol));
    let mut x = cfg.start(inst.n());
    check_len(x.view(), inst.n(), "x_init")?;
    for t in 1..=cfg.max_iter {
        let step = grad.step(inst, x.view());
        let next = hard_threshold_keep_k(step.r.view(), k)?;
        observer.observe(&IterationEvent {
            iteration: t,
            x_prev: x.view(),
            base: x.view(),
            base_residual_norm: step.residual_norm,
            r: step.r.view(),
            x: next.view(),
        });
        let stop = run.finish_iteration(x.view(), next.view(), fidelity);
        x = next;
        if stop {
            break;
        }
    }
    Ok(run.into_recovery(x))
}
