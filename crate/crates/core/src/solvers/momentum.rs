use ndarray::{Array1, ArrayView1};

use super::{
    IterationEvent, IterationObserver, NoObserver, Recovery, Run, ScaledTranspose, SolverConfig,
};
use crate::error::{Error, Result};
use crate::objective::objective_approx;
use crate::problem::ProblemInstance;
use crate::prox::qista_threshold_unchecked;
use crate::scalar::Real;

/// The descent directions of all completed layers, each already rescaled by
/// `γ/m` once per layer since it was produced.
///
/// Directions that have decayed to exactly zero contribute nothing to the
/// sum and are retired; [`MomentumState::len`] still counts them, so it
/// always equals the number of completed layers.
#[derive(Debug, Clone, Default)]
pub struct MomentumState<T: Real> {
    directions: Vec<Array1<T>>,
    retired: usize,
}

impl<T: Real> MomentumState<T> {
    pub fn new() -> Self {
        MomentumState {
            directions: Vec::new(),
            retired: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.directions.len() + self.retired
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Directions still carrying a nonzero entry, oldest first.
    pub fn directions(&self) -> &[Array1<T>] {
        &self.directions
    }

    /// One layer: stores `d`, returns `x + Σⱼ Dʲ` (oldest first, current
    /// direction at full weight), then rescales every stored direction by
    /// `decay`.
    pub fn advance(&mut self, x: ArrayView1<'_, T>, d: Array1<T>, decay: T) -> Array1<T> {
        self.directions.push(d);
        let mut total = Array1::zeros(x.len());
        for dj in &self.directions {
            total += dj;
        }
        let r = &x + &total;
        for dj in &mut self.directions {
            dj.mapv_inplace(|v| decay * v);
        }
        let before = self.directions.len();
        self.directions
            .retain(|dj| dj.iter().any(|&v| v != T::zero()));
        self.retired += before - self.directions.len();
        r
    }
}

/// QISTA with momentum from every previous layer, with the untrained
/// parameters `𝒜ᵗ = βAᵀ`, `λᵗ = λ`, `ℰᵗ = ε` at every layer.
///
/// Layer `t`: `Dᵗ = βAᵀ(y − Axᵗ⁻¹)`, `rᵗ = xᵗ⁻¹ + Σⱼ₌₁ᵗ Dʲ`, then every
/// stored `Dʲ ← (γ/m)·Dʲ`, then the adaptive soft threshold. Runs at most
/// `layers` layers and stops early on `‖xᵗ − xᵗ⁻¹‖₂ < tol`. With `γ = 0`
/// the iterates coincide with [`super::solve_qista`].
pub fn solve_qista_momentum<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    layers: usize,
) -> Result<Recovery<T>> {
    solve_qista_momentum_observed(inst, cfg, layers, &mut NoObserver)
}

pub fn solve_qista_momentum_observed<T: Real>(
    inst: &ProblemInstance<T>,
    cfg: &SolverConfig<T>,
    layers: usize,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    cfg.validate(inst.n())?;
    if layers == 0 {
        return Err(Error::invalid("layer count must be positive"));
    }
    let grad = ScaledTranspose::new(inst, cfg.beta);
    let decay = cfg.gamma / T::lit(inst.m() as f64);
    let weight = cfg.lambda / cfg.beta;
    let objective = |x: ArrayView1<'_, T>| {
        objective_approx(x, inst, weight, cfg.q, cfg.eps.view()).unwrap_or(T::nan())
    };

    let mut run = Run::new(inst, cfg.record_trace, Some(cfg.tol));
    let mut state = MomentumState::new();
    let mut x = cfg.start(inst.n());
    for t in 1..=layers {
        let step = grad.step(inst, x.view());
        let r = state.advance(x.view(), step.direction, decay);
        let next = qista_threshold_unchecked(r.view(), cfg.lambda, cfg.eps.view(), cfg.q);
        observer.observe(&IterationEvent {
            iteration: t,
            x_prev: x.view(),
            base: x.view(),
            base_residual_norm: step.residual_norm,
            r: r.view(),
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
