use ndarray::{Array1, Array2, ArrayView1};

use super::{
    descend, IterationEvent, IterationObserver, MomentumState, NoObserver, Recovery, Run,
    ScaledTranspose, SolverConfig,
};
use crate::error::{Error, Result};
use crate::objective::{check_eps, check_q, objective_approx};
use crate::problem::ProblemInstance;
use crate::prox::qista_threshold_unchecked;
use crate::scalar::Real;

/// Lower bound applied to every `ℰᵗ` component when parameters are loaded.
pub const EPS_FLOOR: f64 = 0.1;

/// Parameters of one unfolded layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams<T: Real> {
    /// `𝒜ᵗ`, `n × m` (the role of `βAᵀ`).
    pub a_t: Array2<T>,
    pub lambda_t: T,
    /// `ℰᵗ`, length `n`.
    pub eps_t: Array1<T>,
}

/// A fixed-depth network: `T` layers plus the shared momentum weight and `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedModel<T: Real> {
    pub layers: Vec<LayerParams<T>>,
    pub gamma: T,
    pub q: T,
}

impl<T: Real> UnfoldedModel<T> {
    /// `depth` identical layers `𝒜ᵗ = βAᵀ`, `λᵗ = λ`, `ℰᵗ = ε` taken from
    /// `cfg`, with `cfg.gamma` and `cfg.q`.
    pub fn from_config(
        inst: &ProblemInstance<T>,
        cfg: &SolverConfig<T>,
        depth: usize,
    ) -> Result<Self> {
        cfg.validate(inst.n())?;
        if depth == 0 {
            return Err(Error::invalid("model depth must be at least 1"));
        }
        let a_t = ScaledTranspose::new(inst, cfg.beta).into_matrix();
        let layer = LayerParams {
            a_t,
            lambda_t: cfg.lambda,
            eps_t: cfg.eps.clone(),
        };
        Ok(UnfoldedModel {
            layers: vec![layer; depth],
            gamma: cfg.gamma,
            q: cfg.q,
        })
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Checks depth, `γ`, `q`, and that every layer fits an `m × n` instance.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::invalid("model must have at least one layer"));
        }
        check_q(self.q)?;
        if !(self.gamma >= T::zero()) || !self.gamma.is_finite() {
            return Err(Error::invalid(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        for (t, layer) in self.layers.iter().enumerate() {
            if layer.a_t.dim() != (n, m) {
                let (r, c) = layer.a_t.dim();
                return Err(Error::invalid(format!(
                    "layer {}: A_t is {r}x{c}, expected {n}x{m}",
                    t + 1
                )));
            }
            if !layer.a_t.iter().all(|v| v.is_finite()) {
                return Err(Error::invalid(format!(
                    "layer {}: A_t has non-finite entries",
                    t + 1
                )));
            }
            if !(layer.lambda_t >= T::zero()) || !layer.lambda_t.is_finite() {
                return Err(Error::invalid(format!(
                    "layer {}: lambda_t must be >= 0",
                    t + 1
                )));
            }
            check_eps(layer.eps_t.view(), n)
                .map_err(|e| Error::invalid(format!("layer {}: {e}", t + 1)))?;
        }
        Ok(())
    }
}

/// Forward pass of the unfolded network from `x = 0`.
///
/// Runs exactly `T` layers, no stopping rule:
/// `Dᵗ = 𝒜ᵗ(y − Axᵗ⁻¹)`, `rᵗ = xᵗ⁻¹ + Σⱼ Dʲ`, `Dʲ ← (γ/m)·Dʲ`,
/// `xᵢᵗ = η(rᵢᵗ; λᵗ / (|rᵢᵗ| + ℰᵢᵗ)^(1−q))`.
/// `converged` is always false in the report.
pub fn solve_unfolded<T: Real>(
    inst: &ProblemInstance<T>,
    model: &UnfoldedModel<T>,
) -> Result<Recovery<T>> {
    solve_unfolded_observed(inst, model, None, false, &mut NoObserver)
}

/// [`solve_unfolded`] from an explicit starting point.
pub fn solve_unfolded_from<T: Real>(
    inst: &ProblemInstance<T>,
    model: &UnfoldedModel<T>,
    x_init: &Array1<T>,
) -> Result<Recovery<T>> {
    solve_unfolded_observed(inst, model, Some(x_init), false, &mut NoObserver)
}

pub fn solve_unfolded_observed<T: Real>(
    inst: &ProblemInstance<T>,
    model: &UnfoldedModel<T>,
    x_init: Option<&Array1<T>>,
    record_trace: bool,
    observer: &mut dyn IterationObserver<T>,
) -> Result<Recovery<T>> {
    model.validate(inst.m(), inst.n())?;
    let mut x = match x_init {
        Some(x) if x.len() != inst.n() => {
            return Err(Error::invalid(format!(
                "x_init has length {}, expected {}",
                x.len(),
                inst.n()
            )))
        }
        Some(x) => x.clone(),
        None => Array1::zeros(inst.n()),
    };
    let decay = model.gamma / T::lit(inst.m() as f64);

    let mut run = Run::new(inst, record_trace, None);
    let mut state = MomentumState::new();
    for (idx, layer) in model.layers.iter().enumerate() {
        let step = descend(&layer.a_t, inst, x.view());
        let r = state.advance(x.view(), step.direction, decay);
        let next = qista_threshold_unchecked(r.view(), layer.lambda_t, layer.eps_t.view(), model.q);
        observer.observe(&IterationEvent {
            iteration: idx + 1,
            x_prev: x.view(),
            base: x.view(),
            base_residual_norm: step.residual_norm,
            r: r.view(),
            x: next.view(),
        });
        // per-layer trace objective at threshold scale: no β is attached to a learned 𝒜ᵗ
        let objective = |z: ArrayView1<'_, T>| {
            objective_approx(z, inst, layer.lambda_t, model.q, layer.eps_t.view())
                .unwrap_or(T::nan())
        };
        run.finish_iteration(x.view(), next.view(), objective);
        x = next;
    }
    Ok(run.into_recovery(x))
}
