//! Coefficient rings.
//!
//! Everything symbolic in this crate is generic over a [`Scalar`]. The exact
//! computations use [`Rational`]; `f64` and `Ratio<i64>` are available for
//! quick numeric cross-checks.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Commutative ring with unit, usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    fn from_i64(n: i64) -> Self;

    /// `self / n`, only ever called with `n != 0`.
    fn div_i64(&self, n: i64) -> Self;

    fn render(&self) -> String;

    /// Whether the value is a negative number, for sign-aware rendering.
    fn is_negative_value(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn div_i64(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn div_i64(&self, n: i64) -> Self {
        self / Ratio::from_integer(n)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn div_i64(&self, n: i64) -> Self {
        self / n as f64
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn is_negative_value(&self) -> bool {
        *self < 0.0
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

pub(crate) fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
