//! Floating point abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar usable throughout the crate (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + rustfft::FftNum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable")
    }

    /// Lossy conversion from a count.
    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// Derivative of `sinc(x)`.
pub fn sinc_prime<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-3) {
        let x2 = x * x;
        -x / T::lit(3.0) + x * x2 / T::lit(30.0)
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

/// Trapezoidal rule for uniformly spaced samples.
pub fn trapezoid<T: Real>(values: &[T], h: T) -> T {
    match values.len() {
        0 | 1 => T::zero(),
        n => {
            let inner = values[1..n - 1].iter().fold(T::zero(), |a, &v| a + v);
            h * (inner + (values[0] + values[n - 1]) * T::lit(0.5))
        }
    }
}

/// Trapezoidal integral of `f(x_i) * y_i` for uniformly spaced samples.
pub fn trapezoid_weighted<T: Real>(values: &[T], h: T, f: impl Fn(usize) -> T) -> T {
    match values.len() {
        0 | 1 => T::zero(),
        n => {
            let mut acc = T::zero();
            for (i, &v) in values.iter().enumerate() {
                let w = if i == 0 || i == n - 1 {
                    T::lit(0.5)
                } else {
                    T::one()
                };
                acc = acc + w * f(i) * v;
            }
            h * acc
        }
    }
}
