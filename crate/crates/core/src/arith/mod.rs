//! Exact arithmetic: big integers, rationals, univariate polynomials over a
//! field, and the rational-function field ℚ(s).

mod poly;
mod ratfunc;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use poly::{Degree, Poly};
pub use ratfunc::RatFunc;

/// Arbitrary-precision signed integer.
pub type Int = BigInt;

/// Canonical rational number: positive denominator, coprime parts.
pub type Rat = BigRational;

/// A field of characteristic zero usable as polynomial coefficients.
///
/// Implemented for [`Rat`] and [`RatFunc`].
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rat(r: Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// Canonical square root, if the element is a square in the field.
    ///
    /// For ℚ the non-negative root; for ℚ(s) the root whose numerator has a
    /// positive leading coefficient.
    fn sqrt(&self) -> Option<Self>;

    /// Sign used for display: negative rationals, or rational functions
    /// whose numerator has a negative leading coefficient.
    fn is_negative(&self) -> bool;

    /// Total decimal digits across all numerators and denominators.
    fn digit_count(&self) -> usize;

    /// The element as a rational constant, when it is one.
    fn as_rat(&self) -> Option<Rat>;
}

impl Field for Rat {
    fn from_rat(r: Rat) -> Self {
        r
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let n = exact_sqrt(self.numer())?;
        let d = exact_sqrt(self.denom())?;
        Some(Rat::new(n, d))
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn digit_count(&self) -> usize {
        int_digits(self.numer()) + int_digits(self.denom())
    }

    fn as_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

/// Floor of the square root of a non-negative integer.
///
/// # Panics
/// Panics if `n` is negative.
pub fn isqrt(n: &Int) -> Int {
    assert!(!n.is_negative(), "isqrt of negative integer");
    n.sqrt()
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square(n: &Int) -> bool {
    exact_sqrt(n).is_some()
}

/// Division rounding toward −∞.
pub fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

/// Number of decimal digits of |n| (zero counts as one digit).
pub fn int_digits(n: &Int) -> usize {
    let s = n.magnitude().to_str_radix(10);
    s.len()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// `(-1)^k` as an integer.
pub fn sign_pow(k: usize) -> Int {
    if k.is_multiple_of(2) {
        Int::one()
    } else {
        -Int::one()
    }
}
