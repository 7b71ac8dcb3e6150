//! Continued fraction expansion of quadratic integers over ℤ.
//!
//! `ω` is the larger root of `X² − tX + n`; its complete quotients are
//! `(ω + P_h)/Q_h` with integers `P_h`, `Q_h`. Every step is exact: the
//! floor of `(2P + t + √D)/(2Q)` comes from the integer square root of `D`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{floor_div, is_square, isqrt, sign_pow, Int};
use crate::error::{Error, Result};
use crate::words::{convergents, CfWord};

/// A quadratic integer given by trace and norm; `ω = (t + √D)/2` with
/// `D = t² − 4n` positive and not a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSpec {
    t: Int,
    n: Int,
    disc: Int,
    disc_isqrt: Int,
}

impl QuadraticSpec {
    pub fn new(t: Int, n: Int) -> Result<Self> {
        let disc = &t * &t - Int::from(4) * &n;
        if !disc.is_positive() {
            return Err(Error::InvalidQuadratic(format!(
                "discriminant {disc} is not positive"
            )));
        }
        if is_square(&disc) {
            return Err(Error::InvalidQuadratic(format!(
                "discriminant {disc} is a square"
            )));
        }
        let disc_isqrt = isqrt(&disc);
        Ok(QuadraticSpec {
            t,
            n,
            disc,
            disc_isqrt,
        })
    }

    pub fn from_i64(t: i64, n: i64) -> Result<Self> {
        Self::new(t.into(), n.into())
    }

    /// `ω = √d`, i.e. trace 0 and norm −d.
    pub fn sqrt_of(d: Int) -> Result<Self> {
        Self::new(Int::zero(), -d)
    }

    pub fn t(&self) -> &Int {
        &self.t
    }

    pub fn n(&self) -> &Int {
        &self.n
    }

    pub fn discriminant(&self) -> &Int {
        &self.disc
    }

    /// `10·⌊√D⌋ + 64`
    pub fn default_max_steps(&self) -> usize {
        self.disc_isqrt
            .to_usize()
            .and_then(|r| r.checked_mul(10))
            .and_then(|r| r.checked_add(64))
            .unwrap_or(usize::MAX)
    }

    /// `x² − t·x·y + n·y²`, the norm of `x − ωy`.
    pub fn norm_form(&self, x: &Int, y: &Int) -> Int {
        x * x - &self.t * x * y + &self.n * y * y
    }
}

impl fmt::Display for QuadraticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ω² − {}ω + {} = 0 (D = {})", self.t, self.n, self.disc)
    }
}

/// `(ω + P)/Q`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteQuotient {
    pub p: Int,
    pub q: Int,
}

impl CompleteQuotient {
    pub fn new(p: Int, q: Int) -> Self {
        CompleteQuotient { p, q }
    }

    /// `ω` itself: `P = 0`, `Q = 1`.
    pub fn initial() -> Self {
        CompleteQuotient {
            p: Int::zero(),
            q: Int::one(),
        }
    }
}

/// One step: `a = ⌊(ω + P)/Q⌋`, then `P + P' + t = aQ` and
/// `Q·Q' = −(n + tP' + P'²)`.
pub fn cq_step(state: &CompleteQuotient, spec: &QuadraticSpec) -> Result<(Int, CompleteQuotient)> {
    let CompleteQuotient { p, q } = state;
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    // floor((k + y)/d) = floor((k + floor y)/d) for d > 0; for Q < 0 flip
    // signs, using floor(−√D) = −⌊√D⌋ − 1.
    let mut numer = Int::from(2) * p + &spec.t + &spec.disc_isqrt;
    if q.is_negative() {
        numer += 1;
    }
    let a = floor_div(&numer, &(Int::from(2) * q));
    let p_next = &a * q - p - &spec.t;
    let rhs = -(&spec.n + &spec.t * &p_next + &p_next * &p_next);
    let (q_next, rem) = rhs.div_rem(q);
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!(
            "Q = {q} does not divide {rhs} at P = {p}"
        )));
    }
    Ok((a, CompleteQuotient::new(p_next, q_next)))
}

/// True iff `0 < 2P + t < √D` and `0 < Q < √D`, compared exactly.
pub fn is_reduced(state: &CompleteQuotient, spec: &QuadraticSpec) -> bool {
    let s = Int::from(2) * &state.p + &spec.t;
    s.is_positive()
        && &s * &s < spec.disc
        && state.q.is_positive()
        && &state.q * &state.q < spec.disc
}

/// A tableau line `ω_h = (ω + P_h)/Q_h` with partial quotient `a_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauRow {
    pub h: usize,
    pub p: Int,
    pub q: Int,
    pub a: Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MidpointKind {
    Odd,
    Even,
}

/// Centre of the period's symmetry.
///
/// Odd period: `Q_s = Q_{s+1}` (= `q`). Even period: `P_s = P_{s+1}`
/// (= `p`) and `Q_s` (= `q`) divides both `2P_s + t` and the discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Midpoint {
    pub kind: MidpointKind,
    pub index: usize,
    pub p: Int,
    pub q: Int,
    pub divides_trace: bool,
    pub divides_discriminant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicExpansion {
    spec: QuadraticSpec,
    a0: Int,
    period: CfWord<Int>,
    tableau: Vec<TableauRow>,
    midpoint: Midpoint,
}

impl PeriodicExpansion {
    pub fn spec(&self) -> &QuadraticSpec {
        &self.spec
    }

    /// `A = a_0 = ⌊ω⌋`
    pub fn a0(&self) -> &Int {
        &self.a0
    }

    pub fn preperiod(&self) -> CfWord<Int> {
        CfWord(vec![self.a0.clone()])
    }

    pub fn period(&self) -> &CfWord<Int> {
        &self.period
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Rows `h = 0..=r`.
    pub fn tableau(&self) -> &[TableauRow] {
        &self.tableau
    }

    pub fn midpoint(&self) -> &Midpoint {
        &self.midpoint
    }

    fn row(&self, h: usize) -> &TableauRow {
        let r = self.period.len();
        if h <= r {
            &self.tableau[h]
        } else {
            &self.tableau[1 + (h - 1) % r]
        }
    }

    /// `(P_h, Q_h)` for any `h ≥ 0`, continuing periodically.
    pub fn complete_quotient(&self, h: usize) -> CompleteQuotient {
        let row = self.row(h);
        CompleteQuotient::new(row.p.clone(), row.q.clone())
    }

    /// `a_h` for any `h ≥ 0`.
    pub fn partial_quotient(&self, h: usize) -> Int {
        self.row(h).a.clone()
    }

    /// `a_0, …, a_h`
    pub fn word_through(&self, h: usize) -> CfWord<Int> {
        CfWord((0..=h).map(|i| self.partial_quotient(i)).collect())
    }

    /// `(x_h, y_h)` with `x_h/y_h = [a_0; a_1, …, a_h]`.
    pub fn convergent(&self, h: usize) -> (Int, Int) {
        convergents(&self.word_through(h))
            .pop()
            .expect("nonempty word")
    }
}

/// Expand `ω` until the first repeated complete quotient closes the period.
///
/// Checks that the period starts at `h = 1` and ends with `2A − t`.
pub fn expand(spec: &QuadraticSpec, max_steps: usize) -> Result<PeriodicExpansion> {
    let mut rows: Vec<TableauRow> = Vec::new();
    let mut seen: HashMap<CompleteQuotient, usize> = HashMap::new();
    let mut state = CompleteQuotient::initial();
    let mut h = 0usize;
    let start = loop {
        if h >= 1 {
            if let Some(&j) = seen.get(&state) {
                break j;
            }
            seen.insert(state.clone(), h);
        }
        if h > max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        let (a, next) = cq_step(&state, spec)?;
        rows.push(TableauRow {
            h,
            p: state.p.clone(),
            q: state.q.clone(),
            a,
        });
        state = next;
        h += 1;
    };
    if start != 1 {
        return Err(Error::ShapeViolation(format!(
            "period starts at h = {start}, not 1"
        )));
    }
    let r = h - 1;
    let a0 = rows[0].a.clone();
    let period = CfWord(rows[1..=r].iter().map(|row| row.a.clone()).collect());
    let expected_last = Int::from(2) * &a0 - &spec.t;
    if period.0.last() != Some(&expected_last) {
        return Err(Error::ShapeViolation(format!(
            "period ends with {}, expected 2A − t = {expected_last}",
            period.0.last().expect("nonempty period")
        )));
    }
    let midpoint = find_midpoint(&rows, r, spec)?;
    Ok(PeriodicExpansion {
        spec: spec.clone(),
        a0,
        period,
        tableau: rows,
        midpoint,
    })
}

/// [`expand`] with the spec's default step budget.
pub fn expand_default(spec: &QuadraticSpec) -> Result<PeriodicExpansion> {
    expand(spec, spec.default_max_steps())
}

/// Checks `x_h² − t·x_h·y_h + n·y_h² = (−1)^{h+1} Q_{h+1}` for `0 ≤ h ≤ r`.
pub fn check_norm_identity(exp: &PeriodicExpansion, h: usize) -> Result<bool> {
    let r = exp.period_len();
    if h > r {
        return Err(Error::IndexOutOfRange { index: h, max: r });
    }
    let (x, y) = exp.convergent(h);
    let lhs = exp.spec.norm_form(&x, &y);
    let rhs = sign_pow(h + 1) * exp.complete_quotient(h + 1).q;
    Ok(lhs == rhs)
}

/// [`check_norm_identity`] for every `h` in `0..=r`, in one pass.
pub fn norm_identity_through_period(exp: &PeriodicExpansion) -> bool {
    let r = exp.period_len();
    convergents(&exp.word_through(r))
        .iter()
        .enumerate()
        .all(|(h, (x, y))| {
            exp.spec.norm_form(x, y) == sign_pow(h + 1) * exp.complete_quotient(h + 1).q
        })
}

fn find_midpoint(rows: &[TableauRow], r: usize, spec: &QuadraticSpec) -> Result<Midpoint> {
    // rows[r + 1] would equal rows[1]
    let at = |h: usize| {
        if h <= r {
            &rows[h]
        } else {
            &rows[1 + (h - 1) % r]
        }
    };
    let odd_at = |s: usize| {
        let (a, b) = (at(s), at(s + 1));
        (a.q == b.q).then(|| Midpoint {
            kind: MidpointKind::Odd,
            index: s,
            p: a.p.clone(),
            q: a.q.clone(),
            divides_trace: false,
            divides_discriminant: false,
        })
    };
    let even_at = |s: usize| {
        let (a, b) = (at(s), at(s + 1));
        (a.p == b.p).then(|| {
            let trace = Int::from(2) * &a.p + &spec.t;
            Midpoint {
                kind: MidpointKind::Even,
                index: s,
                p: a.p.clone(),
                q: a.q.clone(),
                divides_trace: trace.is_multiple_of(&a.q),
                divides_discriminant: spec.disc.is_multiple_of(&a.q),
            }
        })
    };
    let found = if r % 2 == 1 {
        odd_at((r - 1) / 2).or_else(|| (0..r).find_map(odd_at))
    } else {
        even_at(r / 2).or_else(|| (1..r).find_map(even_at))
    };
    found.ok_or_else(|| Error::ShapeViolation("no symmetry midpoint in the period".into()))
}

/// Locate the centre of symmetry of the period.
pub fn symmetry_midpoint(exp: &PeriodicExpansion) -> Result<Midpoint> {
    find_midpoint(&exp.tableau, exp.period_len(), &exp.spec)
}

/// The unit `x − ωy` from the convergent `x/y = [A; a_1, …, a_{r−1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub x: Int,
    pub y: Int,
    /// `(−1)^r`
    pub norm_sign: i32,
}

pub fn fundamental_unit(exp: &PeriodicExpansion) -> FundamentalUnit {
    let r = exp.period_len();
    let (x, y) = exp.convergent(r - 1);
    FundamentalUnit {
        x,
        y,
        norm_sign: if r.is_multiple_of(2) { 1 } else { -1 },
    }
}
