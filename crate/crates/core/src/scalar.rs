//! Scalar abstraction shared by the geometry and elasticity kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the closed forms and solvers are written against.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Below this value of `|alpha * s|` the trigonometric kernels switch to
    /// their Taylor expansions.
    fn series_cutoff() -> Self;

    /// Converts an `f64` literal. Every literal used by the crate is
    /// representable (possibly rounded) in the target type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal fits the scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn series_cutoff() -> Self {
        1e-4
    }
}

impl Real for f32 {
    fn series_cutoff() -> Self {
        1e-2
    }
}

/// Sign as -1, 0 or +1.
pub fn sign_of<T: Real>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}
