//! Floating-point scalar abstraction.
//!
//! All spectral math is written against [`Real`] so that the same code runs
//! in `f32` and `f64`. The exact angular-momentum algebra lives in
//! [`crate::angular`] and only converts to `Real` at the boundary.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};

/// Floating point scalar usable by the lineshape, pumping and analysis code.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Signed + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `2π`.
    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Angular frequency (rad/s) corresponding to an ordinary frequency in MHz.
#[inline]
pub fn mhz_to_angular<T: Real>(mhz: T) -> T {
    mhz * T::two_pi() * T::lit(1e6)
}

/// Ordinary frequency in MHz corresponding to an angular frequency (rad/s).
#[inline]
pub fn angular_to_mhz<T: Real>(omega: T) -> T {
    omega / (T::two_pi() * T::lit(1e6))
}
