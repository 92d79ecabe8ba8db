//! Floating-point abstraction so every routine runs at `f32` or `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type for all numerics in this crate.
///
/// The `RealField` bound supplies elementary functions and constants,
/// `FromPrimitive`/`ToPrimitive` the conversions from literals and loop
/// indices. `f32` and `f64` satisfy it out of the box.
pub trait Scalar: RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T> Scalar for T where T: RealField + Copy + FromPrimitive + ToPrimitive {}

/// Shorthand for pulling an `f64` constant into the working precision.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// Index-to-scalar conversion; exact for every index this crate produces.
#[inline]
pub(crate) fn idx<T: Scalar>(i: usize) -> T {
    T::from_usize(i).expect("index representable in scalar type")
}
