//! Words of partial quotients and their 2×2 matrix images.
//!
//! A word `a_0, …, a_h` corresponds to the product of the matrices
//! `[[a_i, 1], [1, 0]]`, whose columns are consecutive convergents
//! `(x_h, y_h)` and `(x_{h−1}, y_{h−1})`. The same code serves integer
//! words and words of polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{sign_pow, Int};
use crate::error::{Error, Result};

/// Commutative ring with identity; everything a word or matrix needs.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A finite sequence of partial quotients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CfWord<R>(pub Vec<R>);

impl<R: Ring> CfWord<R> {
    pub fn new(entries: Vec<R>) -> Self {
        CfWord(entries)
    }

    pub fn empty() -> Self {
        CfWord(Vec::new())
    }

    pub fn entries(&self) -> &[R] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Self {
        CfWord(self.0.iter().rev().cloned().collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        CfWord(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn push(&mut self, a: R) {
        self.0.push(a);
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(self)
    }
}

impl CfWord<Int> {
    pub fn from_i64s(entries: &[i64]) -> Self {
        CfWord(entries.iter().map(|&a| Int::from(a)).collect())
    }

    /// True when every entry is a positive integer.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }
}

impl<R: fmt::Display> fmt::Display for CfWord<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// 2×2 matrix `[[a, b], [c, d]]`.
///
/// As the image of a word, `a/c` is the last convergent and `b/d` the one
/// before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<R> {
    pub a: R,
    pub b: R,
    pub c: R,
    pub d: R,
}

impl<R: Ring> Mat2<R> {
    pub fn new(a: R, b: R, c: R, d: R) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(R::one(), R::zero(), R::zero(), R::one())
    }

    /// `[[q, 1], [1, 0]]`
    pub fn partial_quotient(q: R) -> Self {
        Mat2::new(q, R::one(), R::one(), R::zero())
    }

    /// `[[0, 1], [1, 0]]`
    pub fn swap() -> Self {
        Mat2::new(R::zero(), R::one(), R::one(), R::zero())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Mat2::new(
            self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        )
    }

    /// Right-multiply by `[[q, 1], [1, 0]]`.
    pub fn push_quotient(&self, q: &R) -> Self {
        Mat2::new(
            self.a.clone() * q.clone() + self.b.clone(),
            self.a.clone(),
            self.c.clone() * q.clone() + self.d.clone(),
            self.c.clone(),
        )
    }

    pub fn det(&self) -> R {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.c
    }
}

/// Ordered product of `[[a_i, 1], [1, 0]]`; the empty word maps to the
/// identity.
pub fn word_to_matrix<R: Ring>(w: &CfWord<R>) -> Mat2<R> {
    w.0.iter().fold(Mat2::identity(), |m, q| m.push_quotient(q))
}

/// Convergent pairs `(x_h, y_h)` for each nonempty prefix of `w`.
pub fn convergents<R: Ring>(w: &CfWord<R>) -> Vec<(R, R)> {
    let mut m = Mat2::<R>::identity();
    w.0.iter()
        .map(|q| {
            m = m.push_quotient(q);
            (m.a.clone(), m.c.clone())
        })
        .collect()
}

pub fn is_palindrome<R: PartialEq>(w: &CfWord<R>) -> bool {
    w.0.iter().eq(w.0.iter().rev())
}

/// Integer continued fraction of `x/y` by the Euclidean algorithm.
///
/// Requires `y > 0`. The last quotient is at least 2 unless the expansion
/// has a single term.
pub fn rational_cf(x: &Int, y: &Int) -> CfWord<Int> {
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut out = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_mod_floor(&b);
        out.push(q);
        a = b;
        b = r;
    }
    CfWord(out)
}

/// Decompose a unit `x − ωy` into a word `b_0, …, b_r` with
/// `[[x, −ny], [y, x−ty]] = M(b_0)⋯M(b_r)·[[0,1],[1,0]]`.
///
/// Then `ω = [b_0; (b_1, …, b_{r−1}, b_r + b_0) repeating]` is a root of
/// `X² − tX + n`. Entries `b_0 … b_{r−1}` are positive; `b_r = 0` occurs only
/// for the golden ratio's unit `(1, 1)` with `t = 1`.
pub fn unit_to_period(x: &Int, y: &Int, t: &Int, n: &Int) -> Result<CfWord<Int>> {
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::NoPositiveDecomposition(
            "x and y must be positive".into(),
        ));
    }
    let norm = x * x - t * x * y + n * y * y;
    if !norm.abs().is_one() {
        return Err(Error::NotAUnit(norm.to_string()));
    }
    // target = N·J = [[−ny, x], [x−ty, y]]
    let target = Mat2::new(-(n * y), x.clone(), x - t * y, y.clone());

    let standard = rational_cf(x, y);
    let mut candidates = vec![standard.clone()];
    if let Some(last) = standard.0.last() {
        if last > &Int::one() {
            let mut alt = standard.0.clone();
            *alt.last_mut().unwrap() -= 1;
            alt.push(Int::one());
            candidates.push(CfWord(alt));
        }
    }

    for head in candidates {
        if !head.is_positive() {
            continue;
        }
        let m = word_to_matrix(&head);
        // m = [[x, x'], [y, y']]; need b_r with b_r·y + y' = x − ty
        let (br, rem) = (&target.c - &m.d).div_mod_floor(y);
        if !rem.is_zero() || br.is_negative() {
            continue;
        }
        if m.push_quotient(&br) == target {
            let mut word = head;
            word.push(br);
            return Ok(word);
        }
    }
    Err(Error::NoPositiveDecomposition(format!(
        "no word realizes the unit ({x}, {y}) for t = {t}, n = {n}"
    )))
}

/// Split a decomposition `b_0, …, b_r` into `(b_0, period)` with period
/// `b_1, …, b_{r−1}, b_r + b_0`.
pub fn decomposition_period(word: &CfWord<Int>) -> Option<(Int, CfWord<Int>)> {
    let (b0, rest) = word.0.split_first()?;
    let (br, mid) = rest.split_last()?;
    let mut period: Vec<Int> = mid.to_vec();
    period.push(br + b0);
    Some((b0.clone(), CfWord(period)))
}

/// Trace and norm `(t, n)` of `γ = [period, period, …]`.
///
/// With the period's matrix `[[x, z], [y, w]]`, `γ` satisfies
/// `yγ² + (w − x)γ − z = 0`, so `t = (x − w)/y` and `n = −z/y`.
pub fn periodic_word_to_quadratic(period: &CfWord<Int>) -> Result<(Int, Int)> {
    if period.is_empty() {
        return Err(Error::DegenerateWord("empty period".into()));
    }
    let m = word_to_matrix(period);
    if m.c.is_zero() {
        return Err(Error::DegenerateWord("y = 0, the value is rational".into()));
    }
    let (t, rt) = (&m.a - &m.d).div_mod_floor(&m.c);
    let (nz, rn) = m.b.div_mod_floor(&m.c);
    if !rt.is_zero() || !rn.is_zero() {
        return Err(Error::NonIntegralQuadratic(format!(
            "matrix [[{}, {}], [{}, {}]]: y = {} must divide x − w = {} and z = {}",
            m.a,
            m.b,
            m.c,
            m.d,
            m.c,
            &m.a - &m.d,
            m.b
        )));
    }
    Ok((t, -nz))
}

/// `(−1)^{len}`, the determinant of any word of that length.
pub fn word_det_sign(len: usize) -> Int {
    sign_pow(len)
}
