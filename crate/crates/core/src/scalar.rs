//! Scalar abstractions shared by the exact and the floating-point halves.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as a coefficient of [`crate::Quad2`].
///
/// Arithmetic on [`crate::Quad2`] goes through the checked operations and
/// panics on overflow, so a fixed-width backing type can never silently
/// corrupt an orthogonality verdict.
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// floating point: f32 or f64
pub trait Real: nalgebra::RealField + Copy + FromPrimitive + Display {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into `F`.
#[inline]
pub fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("finite literal")
}
