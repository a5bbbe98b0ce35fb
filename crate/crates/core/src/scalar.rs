use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used throughout the solvers: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count.
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Absolute tolerance that matches a `1e-9`-scale check in `f64`.
    fn power_tolerance() -> Self;

    /// Default KKT residual tolerance for the iterative solvers.
    fn kkt_tolerance() -> Self;
}

impl Scalar for f32 {
    fn power_tolerance() -> Self {
        1e-5
    }

    fn kkt_tolerance() -> Self {
        1e-3
    }
}

impl Scalar for f64 {
    fn power_tolerance() -> Self {
        1e-9
    }

    fn kkt_tolerance() -> Self {
        1e-8
    }
}
