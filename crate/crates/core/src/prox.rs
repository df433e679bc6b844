//! Componentwise thresholding operators and the proximal operator of a
//! weighted ℓ1 penalty composed with a tight linear transform.

use ndarray::{Array1, ArrayView1, ArrayView2, Zip};

use crate::error::{Error, Result};
use crate::objective::{check_eps, check_q};
use crate::scalar::Real;

/// Max-abs deviation of `ψψᵀ` from `γI` accepted by [`generalized_prox`].
pub const TIGHT_FRAME_TOL: f64 = 1e-8;

/// Scalar soft threshold `sign(x)·max(0, |x| − θ)`.
#[inline]
pub fn shrink<T: Real>(x: T, theta: T) -> T {
    let mag = x.abs() - theta;
    if mag > T::zero() {
        x.signum() * mag
    } else {
        T::zero()
    }
}

/// Soft thresholding with one threshold for every component.
pub fn soft_threshold<T: Real>(x: ArrayView1<'_, T>, theta: T) -> Result<Array1<T>> {
    if !(theta >= T::zero()) {
        return Err(Error::invalid(format!(
            "threshold must be non-negative, got {theta}"
        )));
    }
    Ok(x.mapv(|v| shrink(v, theta)))
}

/// Soft thresholding with a per-component threshold vector.
pub fn soft_threshold_vec<T: Real>(
    x: ArrayView1<'_, T>,
    theta: ArrayView1<'_, T>,
) -> Result<Array1<T>> {
    if x.len() != theta.len() {
        return Err(Error::invalid(format!(
            "threshold has length {}, expected {}",
            theta.len(),
            x.len()
        )));
    }
    if let Some(bad) = theta.iter().find(|t| !(**t >= T::zero())) {
        return Err(Error::invalid(format!(
            "threshold must be non-negative, got {bad}"
        )));
    }
    Ok(Zip::from(&x).and(&theta).map_collect(|&v, &t| shrink(v, t)))
}

/// Adaptive threshold of a single component: `λ / (|r| + ε)^(1−q)`.
#[inline]
pub fn qista_theta<T: Real>(r: T, lambda: T, eps: T, q: T) -> T {
    lambda / (r.abs() + eps).powf(T::one() - q)
}

/// Threshold vector `θᵢ = λ / (|rᵢ| + εᵢ)^(1−q)`.
pub fn qista_thresholds<T: Real>(
    r: ArrayView1<'_, T>,
    lambda: T,
    eps: ArrayView1<'_, T>,
    q: T,
) -> Result<Array1<T>> {
    validate_qista(r.len(), lambda, eps, q)?;
    Ok(Zip::from(&r)
        .and(&eps)
        .map_collect(|&ri, &ei| qista_theta(ri, lambda, ei, q)))
}

/// Soft threshold of `r` with the magnitude-adaptive thresholds of
/// [`qista_thresholds`]: large `|rᵢ|` are barely shrunk, small ones strongly.
pub fn qista_threshold<T: Real>(
    r: ArrayView1<'_, T>,
    lambda: T,
    eps: ArrayView1<'_, T>,
    q: T,
) -> Result<Array1<T>> {
    validate_qista(r.len(), lambda, eps, q)?;
    Ok(qista_threshold_unchecked(r, lambda, eps, q))
}

pub(crate) fn qista_threshold_unchecked<T: Real>(
    r: ArrayView1<'_, T>,
    lambda: T,
    eps: ArrayView1<'_, T>,
    q: T,
) -> Array1<T> {
    Zip::from(&r)
        .and(&eps)
        .map_collect(|&ri, &ei| shrink(ri, qista_theta(ri, lambda, ei, q)))
}

fn validate_qista<T: Real>(n: usize, lambda: T, eps: ArrayView1<'_, T>, q: T) -> Result<()> {
    check_q(q)?;
    check_eps(eps, n)?;
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )));
    }
    Ok(())
}

/// Keeps the `k` largest-magnitude entries and zeros the rest. Among equal
/// magnitudes the lower index wins.
pub fn hard_threshold_keep_k<T: Real>(x: ArrayView1<'_, T>, k: usize) -> Result<Array1<T>> {
    let n = x.len();
    if k > n {
        return Err(Error::invalid(format!("k={k} exceeds vector length {n}")));
    }
    let mut out = Array1::zeros(n);
    if k == 0 {
        return Ok(out);
    }
    let mut order: Vec<usize> = (0..n).collect();
    let key = |i: &usize| x[*i].abs();
    // descending magnitude, ascending index on ties; NaN sorts last
    order.sort_by(|a, b| {
        key(b)
            .partial_cmp(&key(a))
            .unwrap_or_else(|| key(a).is_nan().cmp(&key(b).is_nan()))
            .then(a.cmp(b))
    });
    for &i in &order[..k] {
        out[i] = x[i];
    }
    Ok(out)
}

/// Which componentwise operator to apply after a gradient step.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdRule<T: Real> {
    /// Soft threshold with a fixed threshold (scalar broadcast when length 1).
    SoftConstant { theta: Array1<T> },
    /// Magnitude-adaptive soft threshold.
    QistaAdaptive { lambda: T, q: T, eps: Array1<T> },
    /// Keep the `k` largest magnitudes.
    HardKeepK { k: usize },
}

impl<T: Real> ThresholdRule<T> {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            ThresholdRule::SoftConstant { theta } => {
                if theta.len() != 1 && theta.len() != n {
                    return Err(Error::invalid(format!(
                        "threshold has length {}, expected 1 or {n}",
                        theta.len()
                    )));
                }
                if theta.iter().any(|t| !(*t >= T::zero())) {
                    return Err(Error::invalid("threshold must be non-negative"));
                }
                Ok(())
            }
            ThresholdRule::QistaAdaptive { lambda, q, eps } => {
                validate_qista(n, *lambda, eps.view(), *q)
            }
            ThresholdRule::HardKeepK { k } => {
                if *k > n {
                    Err(Error::invalid(format!("k={k} exceeds n={n}")))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn apply(&self, r: ArrayView1<'_, T>) -> Result<Array1<T>> {
        self.validate(r.len())?;
        match self {
            ThresholdRule::SoftConstant { theta } if theta.len() == 1 => {
                soft_threshold(r, theta[0])
            }
            ThresholdRule::SoftConstant { theta } => soft_threshold_vec(r, theta.view()),
            ThresholdRule::QistaAdaptive { lambda, q, eps } => {
                Ok(qista_threshold_unchecked(r, *lambda, eps.view(), *q))
            }
            ThresholdRule::HardKeepK { k } => hard_threshold_keep_k(r, *k),
        }
    }
}

/// Proximal point of `f(z) = Σᵢ wᵢ·|(ψz + b)ᵢ|` at `r`, valid when
/// `ψψᵀ = γI`:
///
/// `r + (1/γ)·ψᵀ(soft(ψr + b; γw) − (ψr + b))`.
///
/// The tight-frame condition is checked (max-abs deviation at most
/// [`TIGHT_FRAME_TOL`]); without it the formula is not the proximal point.
pub fn generalized_prox<T: Real>(
    r: ArrayView1<'_, T>,
    psi: ArrayView2<'_, T>,
    b: ArrayView1<'_, T>,
    w: ArrayView1<'_, T>,
    gamma: T,
) -> Result<Array1<T>> {
    let (rows, cols) = psi.dim();
    if cols != r.len() {
        return Err(Error::invalid(format!(
            "psi has {cols} columns, r has length {}",
            r.len()
        )));
    }
    if b.len() != rows || w.len() != rows {
        return Err(Error::invalid(format!(
            "b and w must have length {rows}, got {} and {}",
            b.len(),
            w.len()
        )));
    }
    if !(gamma > T::zero()) {
        return Err(Error::invalid(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    if w.iter().any(|v| !(*v >= T::zero())) {
        return Err(Error::invalid("weights must be non-negative"));
    }

    let gram = psi.dot(&psi.t());
    let tol = T::lit(TIGHT_FRAME_TOL);
    let mut worst = T::zero();
    for ((i, j), &g) in gram.indexed_iter() {
        let target = if i == j { gamma } else { T::zero() };
        worst = worst.max((g - target).abs());
    }
    if worst > tol {
        return Err(Error::Precondition(format!(
            "psi·psiᵀ deviates from {gamma}·I by {worst:e} (tolerance {TIGHT_FRAME_TOL:e})"
        )));
    }

    let u = psi.dot(&r) + b;
    let thresholds = w.mapv(|wi| gamma * wi);
    let shrunk = soft_threshold_vec(u.view(), thresholds.view())?;
    let correction = psi.t().dot(&(shrunk - &u));
    Ok(&r + &(correction / gamma))
}
