//! Reconstruction quality metrics.

use ndarray::ArrayView1;

use crate::error::{Error, Result};
use crate::linalg::{dist2, norm2};
use crate::scalar::Real;

/// Value reported by [`snr_db`] when the reconstruction is exact.
pub const SNR_CAP_DB: f64 = 300.0;

fn check<T: Real>(x_star: ArrayView1<'_, T>, x0: ArrayView1<'_, T>) -> Result<T> {
    if x_star.len() != x0.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            x_star.len(),
            x0.len()
        )));
    }
    let n0 = norm2(x0);
    if n0 == T::zero() {
        return Err(Error::invalid("reference signal is zero"));
    }
    Ok(n0)
}

/// `‖x* − x0‖₂ / ‖x0‖₂`.
pub fn relative_error<T: Real>(x_star: ArrayView1<'_, T>, x0: ArrayView1<'_, T>) -> Result<T> {
    let n0 = check(x_star, x0)?;
    Ok(dist2(x_star, x0) / n0)
}

/// `10·log₁₀(‖x0‖₂² / ‖x* − x0‖₂²)` in dB, capped at [`SNR_CAP_DB`].
pub fn snr_db<T: Real>(x_star: ArrayView1<'_, T>, x0: ArrayView1<'_, T>) -> Result<T> {
    let n0 = check(x_star, x0)?;
    let err = dist2(x_star, x0);
    if err == T::zero() {
        return Ok(T::lit(SNR_CAP_DB));
    }
    let db = T::lit(20.0) * (n0 / err).log10();
    Ok(db.min(T::lit(SNR_CAP_DB)))
}
