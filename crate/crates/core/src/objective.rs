//! Objective functions of the ℓ0 / LASSO / ℓq family and the two-argument
//! functional used by the alternating reformulation.

use ndarray::ArrayView1;

use crate::error::{Error, Result};
use crate::linalg::norm2_sq;
use crate::problem::ProblemInstance;
use crate::scalar::Real;

fn data_fidelity<T: Real>(x: ArrayView1<'_, T>, inst: &ProblemInstance<T>) -> Result<T> {
    if x.len() != inst.n() {
        return Err(Error::invalid(format!(
            "x has length {}, instance has n={}",
            x.len(),
            inst.n()
        )));
    }
    let resid = inst.y() - &inst.a().dot(&x);
    Ok(T::lit(0.5) * norm2_sq(resid.view()))
}

pub(crate) fn check_q<T: Real>(q: T) -> Result<()> {
    if q > T::zero() && q <= T::one() {
        Ok(())
    } else {
        Err(Error::invalid(format!("q must lie in (0, 1], got {q}")))
    }
}

pub(crate) fn check_eps<T: Real>(eps: ArrayView1<'_, T>, n: usize) -> Result<()> {
    if eps.len() != n {
        return Err(Error::invalid(format!(
            "eps has length {}, expected {n}",
            eps.len()
        )));
    }
    if let Some(bad) = eps.iter().find(|&&e| !(e > T::zero()) || !e.is_finite()) {
        return Err(Error::invalid(format!(
            "eps must be strictly positive, found {bad}"
        )));
    }
    Ok(())
}

/// `½‖y − Ax‖₂²`.
pub fn least_squares<T: Real>(x: ArrayView1<'_, T>, inst: &ProblemInstance<T>) -> Result<T> {
    data_fidelity(x, inst)
}

/// LASSO objective `½‖y − Ax‖₂² + λ‖x‖₁`.
pub fn objective_lasso<T: Real>(
    x: ArrayView1<'_, T>,
    inst: &ProblemInstance<T>,
    lambda: T,
) -> Result<T> {
    let f = data_fidelity(x, inst)?;
    Ok(f + lambda * x.iter().map(|v| v.abs()).sum::<T>())
}

/// `½‖y − Ax‖₂² + λ·Σ|xᵢ|^q`, with `0^q = 0`.
pub fn objective_lq<T: Real>(
    x: ArrayView1<'_, T>,
    inst: &ProblemInstance<T>,
    lambda: T,
    q: T,
) -> Result<T> {
    check_q(q)?;
    let f = data_fidelity(x, inst)?;
    let pen: T = x
        .iter()
        .map(|v| {
            if *v == T::zero() {
                T::zero()
            } else {
                v.abs().powf(q)
            }
        })
        .sum();
    Ok(f + lambda * pen)
}

/// Smoothed ℓq objective `F(x) = ½‖y − Ax‖₂² + λ·Σ |xᵢ| / (|xᵢ| + εᵢ)^(1−q)`.
pub fn objective_approx<T: Real>(
    x: ArrayView1<'_, T>,
    inst: &ProblemInstance<T>,
    lambda: T,
    q: T,
    eps: ArrayView1<'_, T>,
) -> Result<T> {
    functional_h(x, x, inst, lambda, q, eps)
}

/// `H(x, c) = ½‖y − Ax‖₂² + λ·Σ |xᵢ| / (|cᵢ| + εᵢ)^(1−q)`.
///
/// Convex in `x` for fixed `c`; `H(x, x)` is [`objective_approx`].
pub fn functional_h<T: Real>(
    x: ArrayView1<'_, T>,
    c: ArrayView1<'_, T>,
    inst: &ProblemInstance<T>,
    lambda: T,
    q: T,
    eps: ArrayView1<'_, T>,
) -> Result<T> {
    check_q(q)?;
    check_eps(eps, inst.n())?;
    if c.len() != inst.n() {
        return Err(Error::invalid(format!(
            "c has length {}, expected {}",
            c.len(),
            inst.n()
        )));
    }
    let f = data_fidelity(x, inst)?;
    Ok(f + lambda * weighted_penalty(x, c, q, eps))
}

pub(crate) fn weighted_penalty<T: Real>(
    x: ArrayView1<'_, T>,
    c: ArrayView1<'_, T>,
    q: T,
    eps: ArrayView1<'_, T>,
) -> T {
    let expo = T::one() - q;
    x.iter()
        .zip(c.iter())
        .zip(eps.iter())
        .map(|((&xi, &ci), &ei)| xi.abs() / (ci.abs() + ei).powf(expo))
        .sum()
}
