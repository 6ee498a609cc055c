use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the planner.
///
/// Every geometric and optimization routine is written against this trait so
/// that the same code runs in `f64` (the default) or `f32`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts a count into the working scalar.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Sign function with a dead band: values within `tol` of zero map to zero.
#[inline]
pub fn sign_with_tol<T: Scalar>(x: T, tol: T) -> T {
    if x.abs() <= tol {
        T::zero()
    } else if x > T::zero() {
        T::one()
    } else {
        -T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_dead_band() {
        assert_eq!(sign_with_tol(1e-17_f64, 1e-12), 0.0);
        assert_eq!(sign_with_tol(-0.5_f64, 1e-12), -1.0);
        assert_eq!(sign_with_tol(2.0_f32, 1e-6), 1.0);
    }
}
