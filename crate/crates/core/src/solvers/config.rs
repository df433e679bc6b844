use ndarray::Array1;

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::objective::{check_eps, check_q};
use crate::problem::ProblemInstance;
use crate::scalar::Real;

/// Default stopping tolerance on `‖xᵗ − xᵗ⁻¹‖₂`.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 20_000;

/// Parameters shared by the iterative solvers.
///
/// `lambda` is interpreted per solver: ISTA/FISTA threshold with `β·λ`
/// (so `λ` weights the ℓ1 term of the LASSO objective), while the QISTA
/// family applies `λ / (|rᵢ| + εᵢ)^(1−q)` directly.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T: Real> {
    pub q: T,
    pub lambda: T,
    pub eps: Array1<T>,
    pub beta: T,
    pub tol: T,
    pub max_iter: usize,
    /// Momentum weight; directions decay by `γ/m` per layer.
    pub gamma: T,
    /// Starting point; `None` means the zero vector.
    pub x_init: Option<Array1<T>>,
    /// Record objective / error / residual per iteration.
    pub record_trace: bool,
}

impl<T: Real> SolverConfig<T> {
    /// `β = 1/‖A‖₂²`, `λ = 1e-4·β`, `q = 0.05`, `ε = 𝟙`, `γ = 0`,
    /// `tol = 1e-7`, `max_iter = 20000`.
    pub fn standard(inst: &ProblemInstance<T>) -> Result<Self> {
        let beta = lipschitz_step(inst)?;
        Ok(SolverConfig {
            q: T::lit(0.05),
            lambda: T::lit(1e-4) * beta,
            eps: Array1::from_elem(inst.n(), T::one()),
            beta,
            tol: T::lit(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
            gamma: T::zero(),
            x_init: None,
            record_trace: false,
        })
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        check_q(self.q)?;
        check_eps(self.eps.view(), n)?;
        let finite_pos = |v: T| v.is_finite() && v > T::zero();
        if !(self.lambda >= T::zero()) || !self.lambda.is_finite() {
            return Err(Error::invalid(format!(
                "lambda must be >= 0, got {}",
                self.lambda
            )));
        }
        if !finite_pos(self.beta) {
            return Err(Error::invalid(format!(
                "beta must be > 0, got {}",
                self.beta
            )));
        }
        if !finite_pos(self.tol) {
            return Err(Error::invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be positive"));
        }
        if !(self.gamma >= T::zero()) || !self.gamma.is_finite() {
            return Err(Error::invalid(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if let Some(x) = &self.x_init {
            if x.len() != n {
                return Err(Error::invalid(format!(
                    "x_init has length {}, expected {n}",
                    x.len()
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn start(&self, n: usize) -> Array1<T> {
        self.x_init.clone().unwrap_or_else(|| Array1::zeros(n))
    }
}

/// `1/‖A‖₂²`, the largest step for which the gradient step is non-expansive.
pub fn lipschitz_step<T: Real>(inst: &ProblemInstance<T>) -> Result<T> {
    let s = spectral_norm(inst.a().view())?;
    if s == T::zero() {
        return Err(Error::invalid("sensing matrix is zero"));
    }
    Ok(T::one() / (s * s))
}
