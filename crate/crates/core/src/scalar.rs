//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::LowerExp;
use std::iter::Sum;
use std::str::FromStr;

use ndarray::NdFloat;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar the solvers are generic over.
///
/// Implemented for `f32` and `f64`. Everything the algorithms need (sqrt,
/// powf, signum) comes from [`num_traits::Float`] through [`NdFloat`].
pub trait Real:
    NdFloat + FromPrimitive + ToPrimitive + LowerExp + FromStr + Sum + Default + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// Relative accuracy the power iteration can meaningfully reach.
    fn power_tolerance() -> Self;
}

impl Real for f32 {
    fn power_tolerance() -> Self {
        4.0 * f32::EPSILON
    }
}

impl Real for f64 {
    fn power_tolerance() -> Self {
        1e-10
    }
}
