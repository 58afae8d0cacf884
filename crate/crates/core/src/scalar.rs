//! Interchangeable coefficient scalars: exact big rationals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = num_rational::BigRational;

/// Arithmetic mode tag carried by every scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Approx,
}

/// Coefficient field used by series, pfaffians and symmetric-function evaluations.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn as_f64(&self) -> f64;
    fn magnitude(&self) -> Self;

    /// `exp(self)` when representable in this mode; exact mode only represents `exp(0)`.
    fn exp(&self) -> Option<Self>;

    /// Common denominator clearing all entries, when the mode has one.
    fn common_denominator(_values: &[Self]) -> Option<Self> {
        None
    }

    fn powi(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Approx;

    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> Self {
        f64::abs(*self)
    }
    fn exp(&self) -> Option<Self> {
        Some(f64::exp(*self))
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }
    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
    fn common_denominator(values: &[Self]) -> Option<Self> {
        let lcm = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        Some(Rational::from_integer(lcm))
    }
}

/// `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Converts an exact rational to `f64` (nearest).
pub fn rational_to_f64(r: &Rational) -> f64 {
    Scalar::as_f64(r)
}
