//! Small dense linear-algebra helpers.

use ndarray::{Array1, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Power-iteration step cap for [`spectral_norm`].
pub const POWER_MAX_STEPS: usize = 10_000;

pub fn norm2<T: Real>(v: ArrayView1<'_, T>) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

pub fn norm2_sq<T: Real>(v: ArrayView1<'_, T>) -> T {
    v.iter().map(|&x| x * x).sum::<T>()
}

pub fn dist2<T: Real>(a: ArrayView1<'_, T>, b: ArrayView1<'_, T>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

pub(crate) fn ensure_finite<T: Real>(a: ArrayView2<'_, T>, what: &str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} has non-finite entries")))
    }
}

/// Largest singular value of `a`.
///
/// Power iteration on `AᵀA` from the normalized all-ones vector. Stops once
/// the Rayleigh quotient changes by less than `1e-10` relative (or the
/// scalar type's attainable accuracy), or after [`POWER_MAX_STEPS`] steps.
pub fn spectral_norm<T: Real>(a: ArrayView2<'_, T>) -> Result<T> {
    spectral_norm_with_vector(a).map(|(s, _)| s)
}

/// [`spectral_norm`] together with the final unit iterate `v`, for which
/// `‖a·v‖₂` approaches the returned value.
pub fn spectral_norm_with_vector<T: Real>(a: ArrayView2<'_, T>) -> Result<(T, Array1<T>)> {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return Err(Error::invalid("spectral_norm of an empty matrix"));
    }
    ensure_finite(a, "matrix")?;

    let tol = T::power_tolerance();
    let mut v = Array1::from_elem(n, T::one() / T::lit(n as f64).sqrt());
    let mut estimate = T::zero();
    for _ in 0..POWER_MAX_STEPS {
        let av = a.dot(&v);
        let w = a.t().dot(&av);
        // Rayleigh quotient of AᵀA at unit v
        let next = av.dot(&av);
        let wn = norm2(w.view());
        if wn == T::zero() {
            // v is in the null space; the all-ones start only lands here for A = 0
            return Ok((T::zero(), v));
        }
        v = w / wn;
        let done = (next - estimate).abs() <= tol * next;
        estimate = next;
        if done {
            break;
        }
    }
    let av = a.dot(&v);
    Ok((norm2(av.view()), v))
}
