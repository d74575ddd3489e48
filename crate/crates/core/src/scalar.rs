//! The numeric abstraction shared by every algorithm in the crate.
//!
//! All of the Gerschgorin machinery only needs ordered field arithmetic, so it
//! is written once against [`Scalar`] and instantiated for `f64`, `f32` and
//! exact rationals ([`crate::Exact`]). Sampling, golden-section search and
//! eigenvalue evaluation are floating-point only and take `f64` directly.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element usable by the interval and matrix code.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialOrd
        + Num
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` literal into `T`.
///
/// Panics only for non-finite input, which never reaches this from the crate.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

pub(crate) fn max<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Lossy view used for reporting and for the float-only routines.
pub(crate) fn to_f64<T: Scalar>(x: &T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
