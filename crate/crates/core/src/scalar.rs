//! Scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar usable by the geometry kernels: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal is representable")
    }

    /// Lossy conversion to `f64`, used for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count or index.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable as a float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces `x` into `[0, period)`, mapping the rounding artefact `period` back to 0.
pub(crate) fn wrap<T: Real>(x: T, period: T) -> T {
    let mut y = x % period;
    if y < T::zero() {
        y = y + period;
    }
    if y >= period {
        y = T::zero();
    }
    y
}
