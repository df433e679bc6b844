use ndarray::{Array1, ArrayView1};

use crate::linalg::norm2;
use crate::metrics;
use crate::problem::ProblemInstance;
use crate::scalar::Real;

/// Outcome of one solver call.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryReport<T: Real> {
    pub x_star: Array1<T>,
    /// `None` when the instance carries no ground truth.
    pub relative_error: Option<T>,
    pub snr_db: Option<T>,
    pub iterations: usize,
    /// The stopping rule `‖xᵗ − xᵗ⁻¹‖₂ < tol` fired.
    pub converged: bool,
    pub wall_time_s: f64,
}

impl<T: Real> RecoveryReport<T> {
    pub(crate) fn build(
        inst: &ProblemInstance<T>,
        x_star: Array1<T>,
        iterations: usize,
        converged: bool,
        wall_time_s: f64,
    ) -> Self {
        let (relative_error, snr_db) = match inst.x0() {
            Some(x0) if norm2(x0.view()) > T::zero() => (
                metrics::relative_error(x_star.view(), x0.view()).ok(),
                metrics::snr_db(x_star.view(), x0.view()).ok(),
            ),
            _ => (None, None),
        };
        RecoveryReport {
            x_star,
            relative_error,
            snr_db,
            iterations,
            converged,
            wall_time_s,
        }
    }

    /// `relative_error ≤ threshold`; false without ground truth.
    pub fn succeeded(&self, threshold: T) -> bool {
        self.relative_error.is_some_and(|re| re <= threshold)
    }
}

/// Per-iteration diagnostics. All columns have one entry per iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterateTrace<T: Real> {
    pub objective: Vec<T>,
    /// NaN when the instance has no ground truth.
    pub rel_error: Vec<T>,
    /// `‖y − Axᵗ‖₂`.
    pub residual_norm: Vec<T>,
    /// Seconds since the solver started.
    pub elapsed_s: Vec<f64>,
}

impl<T: Real> IterateTrace<T> {
    pub fn len(&self) -> usize {
        self.objective.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objective.is_empty()
    }

    pub(crate) fn push(&mut self, objective: T, rel_error: T, residual_norm: T, elapsed_s: f64) {
        self.objective.push(objective);
        self.rel_error.push(rel_error);
        self.residual_norm.push(residual_norm);
        self.elapsed_s.push(elapsed_s);
    }

    pub(crate) fn record(
        &mut self,
        inst: &ProblemInstance<T>,
        x: ArrayView1<'_, T>,
        objective: T,
        elapsed_s: f64,
    ) {
        let resid = inst.y() - &inst.a().dot(&x);
        let re = inst
            .x0()
            .and_then(|x0| metrics::relative_error(x, x0.view()).ok())
            .unwrap_or(T::nan());
        self.push(objective, re, norm2(resid.view()), elapsed_s);
    }
}

/// A report plus the optional trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery<T: Real> {
    pub report: RecoveryReport<T>,
    pub trace: Option<IterateTrace<T>>,
}
