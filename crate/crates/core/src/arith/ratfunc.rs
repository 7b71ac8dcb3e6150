use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Field, Poly, Rat};
use crate::error::{Error, Result};

/// Element of ℚ(s) in canonical form: monic denominator, numerator and
/// denominator coprime, zero represented as `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly<Rat>,
    den: Poly<Rat>,
}

impl RatFunc {
    pub fn new(num: Poly<Rat>, den: Poly<Rat>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly<Rat>, den: Poly<Rat>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_constant() {
            Poly::one()
        } else {
            num.gcd(&den)
        };
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    /// The parameter `s` itself.
    pub fn var() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn from_poly(num: Poly<Rat>) -> Self {
        RatFunc {
            num,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly<Rat> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<Rat> {
        &self.den
    }

    /// Value at `s = value`; fails where the denominator vanishes.
    pub fn eval(&self, value: &Rat) -> Result<Rat> {
        let d = self.den.eval(value);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(value) / d)
    }

    /// Canonicalize an arbitrary fraction (same as [`RatFunc::new`]).
    pub fn simplify(num: Poly<Rat>, den: Poly<Rat>) -> Result<Self> {
        Self::new(num, den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.fmt_var("s");
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let den = self.den.fmt_var("s");
        let num = if num.contains(' ') || num.contains('/') {
            format!("({num})")
        } else {
            num
        };
        let den = if den.contains(' ') {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num}/{den}")
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl Add for RatFunc {
    type Output = RatFunc;

    fn add(self, rhs: RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return Self::canonical(&self.num + &rhs.num, self.den);
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self::canonical(num, &self.den * &rhs.den)
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;

    fn sub(self, rhs: RatFunc) -> RatFunc {
        self + (-rhs)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;

    fn mul(self, rhs: RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Field for RatFunc {
    fn from_rat(r: Rat) -> Self {
        Self::from_poly(Poly::constant(r))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::canonical(self.den.clone(), self.num.clone()))
        }
    }

    fn sqrt(&self) -> Option<Self> {
        let n = self.num.exact_sqrt()?;
        let d = self.den.exact_sqrt()?;
        Some(Self::canonical(n, d))
    }

    fn is_negative(&self) -> bool {
        self.num.leading().is_some_and(Signed::is_negative)
    }

    fn digit_count(&self) -> usize {
        self.num.digit_count() + self.den.digit_count()
    }

    fn as_rat(&self) -> Option<Rat> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }
}
