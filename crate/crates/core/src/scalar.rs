//! Scalar abstractions shared by every numerical routine in the crate.
//!
//! Three layers:
//!
//! * [`Field`] is the bare arithmetic contract (ring operations plus division).
//!   Forward-mode duals and power series live here.
//! * [`Scalar`] adds ordering, absolute values and conversion to `f64`. Exact
//!   rationals ([`num_rational::BigRational`]) stop at this level, which is enough
//!   for moment matrices, determinants and the recurrence coefficients `a_n^2`, `b_n`.
//! * [`Real`] adds the transcendental functions needed by quadrature, square roots
//!   of `a_n^2` and the confluent series. Implemented by `f64` and [`crate::Mp`].

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub trait Field:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn int(v: i64) -> Self;

    /// Exact image of a finite `f64`.
    fn real(v: f64) -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

pub trait Scalar:
    Field + Num + Signed + PartialOrd + ToPrimitive + Display + Send + Sync + 'static
{
    /// Decimal digits carried by the representation; `None` for exact arithmetic.
    fn precision_digits() -> Option<f64>;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

pub trait Real: Scalar + FromPrimitive {
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: &Self) -> Self;
    fn floor(&self) -> Self;
    fn is_finite(&self) -> bool;
    fn pi() -> Self;
    fn gamma(&self) -> Self;
    /// Unit roundoff of the current representation.
    fn epsilon() -> Self;

    fn significand_bits() -> u32;
}

impl Field for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }
    fn real(v: f64) -> Self {
        v
    }
}

impl Scalar for f64 {
    fn precision_digits() -> Option<f64> {
        Some(f64::DIGITS as f64 + 0.95)
    }
}

impl Real for f64 {
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn floor(&self) -> Self {
        f64::floor(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn gamma(&self) -> Self {
        libm::tgamma(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn significand_bits() -> u32 {
        f64::MANTISSA_DIGITS
    }
}

impl Field for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn real(v: f64) -> Self {
        BigRational::from_float(v).expect("finite f64")
    }
}

impl Scalar for BigRational {
    fn precision_digits() -> Option<f64> {
        None
    }
}

/// `(n-1)!` as an exact value of the field, i.e. `Gamma(n)` for positive integers.
pub fn gamma_int<F: Field>(n: u32) -> F {
    assert!(n >= 1, "Gamma has poles at non-positive integers");
    (1..n).fold(F::one(), |acc, k| acc * F::int(k as i64))
}

pub fn factorial<F: Field>(n: u32) -> F {
    gamma_int(n + 1)
}

pub fn binomial<F: Field>(n: u32, k: u32) -> F {
    if k > n {
        return F::zero();
    }
    let mut acc = F::one();
    for i in 0..k {
        acc = acc * F::int((n - i) as i64) / F::int((i + 1) as i64);
    }
    acc
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn rel_diff<T: Scalar>(a: &T, b: &T) -> f64 {
    let d = (a.clone() - b.clone()).abs().to_f64_lossy();
    let scale = a.abs().to_f64_lossy().max(b.abs().to_f64_lossy());
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

pub(crate) fn is_integer(v: f64) -> bool {
    v.is_finite() && v.fract() == 0.0
}
