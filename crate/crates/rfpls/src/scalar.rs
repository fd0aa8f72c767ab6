//! Scalar abstraction for the numeric core.
//!
//! Everything numerical in this crate is written against [`Scalar`] rather
//! than a concrete float type. `f32` and `f64` both satisfy the bounds via
//! the blanket impl.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar usable by every algorithm in this crate.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant into this scalar type.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert")
    }

    /// Widen to `f64` (used at I/O and RNG boundaries).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must widen to f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssignOps
        + Sum<T>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
