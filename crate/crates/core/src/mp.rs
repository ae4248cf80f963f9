//! Multiprecision reals backed by MPFR.
//!
//! Every freshly created [`Mp`] (constants, conversions, `zero()`, `one()`) uses the
//! thread's working precision, set through [`PrecisionGuard`]. Arithmetic keeps the
//! precision of the left operand, so values built under one guard stay consistent.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::scalar::{Field, Real, Scalar};

pub const DEFAULT_BITS: u32 = 256;

thread_local! {
    static WORKING_BITS: Cell<u32> = const { Cell::new(DEFAULT_BITS) };
}

pub fn working_bits() -> u32 {
    WORKING_BITS.with(|b| b.get())
}

/// Sets the working precision of the current thread until dropped.
#[must_use = "the previous precision is restored when the guard is dropped"]
pub struct PrecisionGuard {
    previous: u32,
}

impl PrecisionGuard {
    pub fn new(bits: u32) -> Self {
        let previous = WORKING_BITS.with(|b| b.replace(bits));
        Self { previous }
    }
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        WORKING_BITS.with(|b| b.set(self.previous));
    }
}

#[derive(Clone, PartialEq, PartialOrd)]
pub struct Mp(Float);

impl Mp {
    pub fn from_float(f: Float) -> Self {
        Mp(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn parse(s: &str) -> Result<Self, rug::float::ParseFloatError> {
        let parsed = Float::parse(s)?;
        Ok(Mp(Float::with_val(working_bits(), parsed)))
    }

    /// Decimal string with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    /// Number of decimal digits representable at `bits` of significand.
    pub fn decimal_digits(bits: u32) -> usize {
        (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    fn lift(v: impl Into<f64>) -> Self {
        Mp(Float::with_val(working_bits(), v.into()))
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp({})", self.to_decimal(24))
    }
}

impl fmt::Display for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_decimal(p)),
            None => write!(f, "{}", self.to_decimal(Mp::decimal_digits(self.prec()))),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Mp {
            type Output = Mp;
            fn $m(self, rhs: Mp) -> Mp {
                Mp(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            fn $m(self, rhs: &'a Mp) -> Mp {
                Mp(self.0.$m(&rhs.0))
            }
        }
        impl $atr for Mp {
            fn $am(&mut self, rhs: Mp) {
                self.0.$am(rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Rem for Mp {
    type Output = Mp;
    fn rem(self, rhs: Mp) -> Mp {
        Mp(self.0 % rhs.0)
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Zero for Mp {
    fn zero() -> Self {
        Mp(Float::with_val(working_bits(), 0))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Mp {
    fn one() -> Self {
        Mp(Float::with_val(working_bits(), 1))
    }
}

impl Num for Mp {
    type FromStrRadixErr = rug::float::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Mp(Float::with_val(working_bits(), parsed)))
    }
}

impl Signed for Mp {
    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }
    fn abs_sub(&self, other: &Self) -> Self {
        let d = self.clone() - other.clone();
        if d.0.is_sign_negative() {
            Mp::zero()
        } else {
            d
        }
    }
    fn signum(&self) -> Self {
        Mp(self.0.clone().signum())
    }
    fn is_positive(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Greater)
    }
    fn is_negative(&self) -> bool {
        self.0.cmp0() == Some(Ordering::Less)
    }
}

impl FromPrimitive for Mp {
    fn from_i64(n: i64) -> Option<Self> {
        Some(Mp(Float::with_val(working_bits(), n)))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Mp(Float::with_val(working_bits(), n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Mp::lift(n))
    }
}

impl ToPrimitive for Mp {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i32_saturating().map(i64::from)
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u32_saturating().map(u64::from)
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.0.to_f64())
    }
}

impl Field for Mp {
    fn int(v: i64) -> Self {
        Mp(Float::with_val(working_bits(), v))
    }
    fn real(v: f64) -> Self {
        Mp::lift(v)
    }
}

impl Scalar for Mp {
    fn precision_digits() -> Option<f64> {
        Some(working_bits() as f64 * std::f64::consts::LOG10_2)
    }
}

impl Real for Mp {
    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        Mp(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }
    fn powi(&self, n: i32) -> Self {
        Mp(self.0.clone().pow(n))
    }
    fn powf(&self, e: &Self) -> Self {
        Mp(self.0.clone().pow(&e.0))
    }
    fn floor(&self) -> Self {
        Mp(self.0.clone().floor())
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn pi() -> Self {
        Mp(Float::with_val(working_bits(), Constant::Pi))
    }
    fn gamma(&self) -> Self {
        Mp(self.0.clone().gamma())
    }
    fn epsilon() -> Self {
        let bits = working_bits();
        Mp(Float::with_val(bits, 1) >> (bits - 1))
    }
    fn significand_bits() -> u32 {
        working_bits()
    }
}
