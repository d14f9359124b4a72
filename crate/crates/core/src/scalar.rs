//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// Matrix entries are `Complex<T>` for a `T: Real`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Absolute entrywise tolerance used when none is supplied.
    fn default_tolerance() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f32 {
    fn default_tolerance() -> Self {
        1e-4
    }
}

impl Real for f64 {
    fn default_tolerance() -> Self {
        1e-9
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cre<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::from_polar(T::one(), theta)
}

/// Integer power of a complex scalar, negative exponents invert.
pub fn cpowi<T: Real>(z: C<T>, e: i64) -> C<T> {
    let mut acc = C::new(T::one(), T::zero());
    let base = if e < 0 { z.inv() } else { z };
    for _ in 0..e.unsigned_abs() {
        acc = acc * base;
    }
    acc
}
