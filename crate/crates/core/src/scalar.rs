//! Floating-point abstraction shared by the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used by centralities, concentration indices and tests.
///
/// Implemented for `f32` and `f64`. Kernels that need exact arithmetic
/// (see [`crate::nullmodels::analytic_coincidence`]) use a looser bound.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize is representable")
    }

    fn hundred() -> Self {
        Self::of(100.0)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}
