//! The scalar abstraction every kernel in this crate is written against.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an index or count into the working scalar type.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// `π^{-1/4}`, the normalisation of the ground-state Hermite function.
#[inline]
pub fn pi_quarter_inv<T: Real>() -> T {
    lit(0.751_125_544_464_942_5)
}

/// `π^{-1/2}`.
#[inline]
pub fn frac_1_sqrt_pi<T: Real>() -> T {
    lit(0.564_189_583_547_756_3)
}

/// `iⁿ` as an exact complex unit.
#[inline]
pub fn i_pow<T: Real>(n: usize) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match n % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

/// Multiplies a real value by `iⁿ` without rounding.
#[inline]
pub fn times_i_pow<T: Real>(x: T, n: usize) -> Complex<T> {
    let z = T::zero();
    match n % 4 {
        0 => Complex::new(x, z),
        1 => Complex::new(z, x),
        2 => Complex::new(-x, z),
        _ => Complex::new(z, -x),
    }
}
