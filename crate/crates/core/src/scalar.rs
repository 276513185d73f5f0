//! Scalar abstraction shared by every numerical kernel in the crate.

use std::fmt::{Debug, Display};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Real number type the kernels are generic over.
///
/// Implemented for `f32`, `f64`, and any extended-precision type that provides
/// the `num-traits` float surface (a double-double type, for example).
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only for types that cannot represent
    /// finite `f64` values, which no supported type does.
    ///
    /// Goes through `NumCast` because some extended-precision types leave
    /// `FromPrimitive::from_f64` at its integer-truncating default.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Sum of a slice without requiring `std::iter::Sum` on the scalar.
pub fn sum<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &v| acc + v)
}

/// Relative difference `|a - b| / max(|b|, floor)`.
pub fn rel_diff<T: Real>(a: T, b: T, floor: T) -> T {
    (a - b).abs() / b.abs().max(floor)
}
