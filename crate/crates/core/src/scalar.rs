//! Floating-point scalar abstraction shared by the simulator and audits.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar backing every amplitude: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Tolerance used for normalization and equality checks when the caller
    /// does not supply one.
    const DEFAULT_TOLERANCE: f64;

    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }

    fn default_tolerance() -> Self {
        Self::lit(Self::DEFAULT_TOLERANCE)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {
    const DEFAULT_TOLERANCE: f64 = 1e-4;
}

impl Real for f64 {
    const DEFAULT_TOLERANCE: f64 = 1e-9;
}

pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub(crate) fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}
