//! Continued fractions of `Y = √D(X)` in `F((1/X))` for `F = ℚ` or `ℚ(s)`.
//!
//! The integer part becomes the polynomial part. Complete quotients are
//! `(Y + P_h)/Q_h` with `P_h`, `Q_h ∈ F[X]`. Periodicity is not automatic
//! here: generic quartics over ℚ never repeat, so every expansion carries
//! a step limit and a coefficient-height bound.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::arith::{Degree, Field, Poly, Rat, RatFunc};
use crate::error::{Error, Result};
use crate::prescribe::{prefix_identities, PrefixData};
use crate::words::{convergents, CfWord};

pub const DEFAULT_MAX_STEPS: usize = 10_000;
pub const DEFAULT_HEIGHT_BOUND: usize = 10_000;

/// `D = A² + R` with `A` the polynomial part of `√D` and `deg R < deg A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFSpec<F> {
    d: Poly<F>,
    a: Poly<F>,
    r: Poly<F>,
}

impl<F: Field> FFSpec<F> {
    /// Fails when `deg D` is odd or zero, the leading coefficient is not a
    /// square, or `D` is itself a square.
    pub fn new(d: Poly<F>) -> Result<Self> {
        let a = d.sqrt_part()?;
        let r = &d - &(&a * &a);
        if r.is_zero() {
            return Err(Error::InvalidQuadratic(format!("{d} is a square")));
        }
        Ok(FFSpec { d, a, r })
    }

    pub fn d(&self) -> &Poly<F> {
        &self.d
    }

    pub fn a(&self) -> &Poly<F> {
        &self.a
    }

    pub fn r(&self) -> &Poly<F> {
        &self.r
    }
}

/// `(Y + P)/Q`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFCompleteQuotient<F> {
    pub p: Poly<F>,
    pub q: Poly<F>,
}

impl<F: Field> FFCompleteQuotient<F> {
    pub fn initial() -> Self {
        FFCompleteQuotient {
            p: Poly::zero(),
            q: Poly::one(),
        }
    }

    fn height(&self) -> usize {
        self.p.digit_count() + self.q.digit_count()
    }
}

/// One step: `a = ⌊(A + P)/Q⌋`, `P' = aQ − P`, `Q' = (D − P'²)/Q`.
///
/// An inexact division means the state was not a valid complete quotient.
pub fn ff_step<F: Field>(
    state: &FFCompleteQuotient<F>,
    spec: &FFSpec<F>,
) -> Result<(Poly<F>, FFCompleteQuotient<F>)> {
    let (a, _) = (&spec.a + &state.p).div_rem(&state.q)?;
    let p = &(&a * &state.q) - &state.p;
    let q = (&spec.d - &(&p * &p)).div_exact(&state.q)?;
    Ok((a, FFCompleteQuotient { p, q }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbortReason {
    StepLimit,
    HeightBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FFStatus<F> {
    /// `(P, Q)` recurred exactly; the period is `a_start, …, a_{end−1}`.
    Periodic {
        start: usize,
        end: usize,
    },
    /// `(P_end, Q_end) = (P_start, c·Q_start)` with `c ≠ 1` and no exact
    /// repetition can follow.
    QuasiPeriodic {
        start: usize,
        end: usize,
        factor: F,
    },
    Aborted(AbortReason),
}

impl<F> FFStatus<F> {
    pub fn tag(&self) -> &'static str {
        match self {
            FFStatus::Periodic { .. } => "periodic",
            FFStatus::QuasiPeriodic { .. } => "quasi_periodic",
            FFStatus::Aborted(AbortReason::StepLimit) => "aborted_step_limit",
            FFStatus::Aborted(AbortReason::HeightBound) => "aborted_height",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFExpansion<F> {
    spec: FFSpec<F>,
    quotients: Vec<Poly<F>>,
    states: Vec<FFCompleteQuotient<F>>,
    status: FFStatus<F>,
}

impl<F: Field> FFExpansion<F> {
    pub fn spec(&self) -> &FFSpec<F> {
        &self.spec
    }

    pub fn status(&self) -> &FFStatus<F> {
        &self.status
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.status, FFStatus::Periodic { .. })
    }

    /// `a_0, a_1, …` as far as computed.
    pub fn quotients(&self) -> &[Poly<F>] {
        &self.quotients
    }

    /// `(P_h, Q_h)` for `h = 0, 1, …`; one more entry than `quotients`.
    pub fn states(&self) -> &[FFCompleteQuotient<F>] {
        &self.states
    }

    pub fn period(&self) -> Option<&[Poly<F>]> {
        match self.status {
            FFStatus::Periodic { start, end } => Some(&self.quotients[start..end]),
            _ => None,
        }
    }

    pub fn period_start(&self) -> Option<usize> {
        match self.status {
            FFStatus::Periodic { start, .. } => Some(start),
            _ => None,
        }
    }
}

/// Expand from `(P_0, Q_0) = (0, 1)` until `(P, Q)` recurs, the step limit
/// is hit, or the total digit count of `(P, Q)` exceeds `height_bound`.
///
/// A recurrence up to a constant factor `c` keeps going when a later exact
/// repetition is still possible (odd quasi-period length, or `c = −1`).
pub fn ff_expand<F: Field>(
    spec: &FFSpec<F>,
    max_steps: usize,
    height_bound: usize,
) -> Result<FFExpansion<F>> {
    let mut states = vec![FFCompleteQuotient::initial()];
    let mut quotients = Vec::new();
    // keyed by (P, monic Q)
    let mut seen: HashMap<(Poly<F>, Poly<F>), usize> = HashMap::new();
    seen.insert((Poly::zero(), Poly::one()), 0);
    let minus_one = -F::one();
    let status = loop {
        let h = quotients.len();
        if h >= max_steps {
            break FFStatus::Aborted(AbortReason::StepLimit);
        }
        let (a, next) = ff_step(&states[h], spec)?;
        if h >= 1 && a.degree() < Degree::Finite(1) {
            return Err(Error::ShapeViolation(format!(
                "a_{h} = {a} has degree below 1"
            )));
        }
        quotients.push(a);
        let key = (next.p.clone(), next.q.monic());
        let height = next.height();
        states.push(next);
        let end = h + 1;
        if let Some(&start) = seen.get(&key) {
            let prev = states[start].q.leading().expect("Q is nonzero").clone();
            let cur = states[end].q.leading().expect("Q is nonzero").clone();
            let factor = cur * prev.inv().expect("nonzero leading coefficient");
            if factor.is_one() {
                break FFStatus::Periodic { start, end };
            }
            if (end - start) % 2 == 0 && factor != minus_one {
                break FFStatus::QuasiPeriodic { start, end, factor };
            }
        } else {
            seen.insert(key, end);
        }
        if height > height_bound {
            break FFStatus::Aborted(AbortReason::HeightBound);
        }
    };
    Ok(FFExpansion {
        spec: spec.clone(),
        quotients,
        states,
        status,
    })
}

pub fn ff_expand_default<F: Field>(spec: &FFSpec<F>) -> Result<FFExpansion<F>> {
    ff_expand(spec, DEFAULT_MAX_STEPS, DEFAULT_HEIGHT_BOUND)
}

/// Sum of the degrees of the partial quotients in one period.
pub fn regulator_of<F: Field>(exp: &FFExpansion<F>) -> Result<usize> {
    let period = exp.period().ok_or(Error::NotPeriodic)?;
    Ok(period.iter().filter_map(|a| a.degree().finite()).sum())
}

/// The unit `x + yY` from `x/y = [a_0; a_1, …, a_{r−1}]`, where
/// `x² − D y² = ±Q_r` is a nonzero constant and `deg x` is the regulator.
pub fn fundamental_unit_ff<F: Field>(exp: &FFExpansion<F>) -> Result<(Poly<F>, Poly<F>)> {
    let FFStatus::Periodic { end, .. } = exp.status else {
        return Err(Error::NotPeriodic);
    };
    let word = CfWord(exp.quotients[..end - 1].to_vec());
    Ok(convergents(&word).pop().expect("nonempty word"))
}

/// Both prescribed-prefix identities over `F[X]` with `t = 0`, `n = −D`.
///
/// `a`, `p`, `q` are `A`, `P_{h+1}`, `Q_{h+1}`; prefix entries must have
/// degree at least 1.
pub fn ff_prefix_identities_hold<F: Field>(
    a: &Poly<F>,
    p: &Poly<F>,
    q: &Poly<F>,
    spec: &FFSpec<F>,
    prefix: &CfWord<Poly<F>>,
) -> bool {
    if prefix
        .entries()
        .iter()
        .any(|e| e.degree() < Degree::Finite(1))
    {
        return false;
    }
    let data = PrefixData::new(prefix.clone());
    let ids = prefix_identities(a, p, q, &Poly::zero(), &-spec.d.clone(), &data);
    ids.first && ids.second
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    M5,
    M7,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::M5 => "m5",
            FamilyTag::M7 => "m7",
        }
    }
}

/// A monic quartic family with known period and regulator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticFamily<F> {
    pub tag: FamilyTag,
    pub s: F,
    pub spec: FFSpec<F>,
    pub predicted_period: Vec<Poly<F>>,
    pub predicted_regulator: usize,
    /// `k = 2s(s − 1)` and `k₁ = −ks` for m7.
    pub k: Option<F>,
    pub k1: Option<F>,
}

fn c<F: Field>(n: i64, d: i64) -> F {
    F::from_rat(Rat::new(n.into(), d.into()))
}

/// `X + c`
fn x_plus<F: Field>(c0: F) -> Poly<F> {
    Poly::linear(F::one(), c0)
}

fn family_spec<F: Field>(a: &Poly<F>, r: &Poly<F>) -> Result<FFSpec<F>> {
    let spec = FFSpec::new(&(a * a) + r)?;
    debug_assert_eq!((&spec.a, &spec.r), (a, r));
    Ok(spec)
}

/// `D = A² + R` with `A = X² − ¼(s² − 6s + 1)`, `R = 4s(X − ½(s − 1))`;
/// period `B, C, B, 2A` with `B = (X + ½(s − 1))/2s`, `C = 2(X − ½(s + 1))`.
pub fn family_m5<F: Field>(s: F) -> Result<QuarticFamily<F>> {
    let two_s_inv = (c::<F>(2, 1) * s.clone())
        .inv()
        .ok_or_else(|| Error::InadmissibleParameter("s = 0".into()))?;
    let half = c::<F>(1, 2);
    let one = F::one();
    let s2 = s.clone() * s.clone();
    let a = Poly::monomial(one.clone(), 2)
        + Poly::constant(-(c::<F>(1, 4) * (s2 - c::<F>(6, 1) * s.clone() + one.clone())));
    let r = x_plus(-(half.clone() * (s.clone() - one.clone()))).scale(&(c::<F>(4, 1) * s.clone()));
    let b = x_plus(half.clone() * (s.clone() - one.clone())).scale(&two_s_inv);
    let cc = x_plus(-(half * (s.clone() + one))).scale(&c(2, 1));
    let spec = family_spec(&a, &r)?;
    let two_a = a.scale(&c(2, 1));
    Ok(QuarticFamily {
        tag: FamilyTag::M5,
        s,
        spec,
        predicted_period: vec![b.clone(), cc, b, two_a],
        predicted_regulator: 5,
        k: None,
        k1: None,
    })
}

/// `A = X² − ¼(s⁴ − 6s³ + 3s² + 2s + 1)`, `R = 4s²(s − 1)(X − ½(s² − s − 1))`;
/// period `B, C, E, C, B, 2A` with
/// `B = (X + ½(s² − s − 1))/2s²(s − 1)`, `C = 2(X − ½(s² − s + 1))`,
/// `E = (X + ½(s² − 3s + 1))/2s(s − 1)`.
pub fn family_m7<F: Field>(s: F) -> Result<QuarticFamily<F>> {
    let one = F::one();
    let k = c::<F>(2, 1) * s.clone() * (s.clone() - one.clone());
    let k_inv = k
        .inv()
        .ok_or_else(|| Error::InadmissibleParameter(format!("s = {s} makes 2s(s - 1) vanish")))?;
    let s_inv = s.inv().expect("s nonzero when k is");
    let half = c::<F>(1, 2);
    let s2 = s.clone() * s.clone();
    let s3 = s2.clone() * s.clone();
    let s4 = s3.clone() * s.clone();
    let a_const = c::<F>(1, 4)
        * (s4 - c::<F>(6, 1) * s3
            + c::<F>(3, 1) * s2.clone()
            + c::<F>(2, 1) * s.clone()
            + one.clone());
    let a = Poly::monomial(one.clone(), 2) + Poly::constant(-a_const);
    let w = s2.clone() - s.clone() - one.clone();
    let r = x_plus(-(half.clone() * w.clone())).scale(&(c::<F>(2, 1) * s.clone() * k.clone()));
    let b = x_plus(half.clone() * w).scale(&(k_inv.clone() * s_inv));
    let cc = x_plus(-(half.clone() * (s2.clone() - s.clone() + one.clone()))).scale(&c(2, 1));
    let e = x_plus(half * (s2 - c::<F>(3, 1) * s.clone() + one)).scale(&k_inv);
    let spec = family_spec(&a, &r)?;
    let two_a = a.scale(&c(2, 1));
    let k1 = -(k.clone() * s.clone());
    Ok(QuarticFamily {
        tag: FamilyTag::M7,
        s,
        spec,
        predicted_period: vec![b.clone(), cc.clone(), e, cc, b, two_a],
        predicted_regulator: 7,
        k: Some(k),
        k1: Some(k1),
    })
}

pub fn family<F: Field>(tag: FamilyTag, s: F) -> Result<QuarticFamily<F>> {
    match tag {
        FamilyTag::M5 => family_m5(s),
        FamilyTag::M7 => family_m7(s),
    }
}

/// Outcome of re-expanding a family's `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport<F> {
    pub matches: bool,
    pub status: FFStatus<F>,
    pub observed_period: Option<Vec<Poly<F>>>,
    pub observed_regulator: Option<usize>,
}

pub fn ff_verify_family<F: Field>(
    fam: &QuarticFamily<F>,
    max_steps: usize,
    height_bound: usize,
) -> Result<FamilyReport<F>> {
    let exp = ff_expand(&fam.spec, max_steps, height_bound)?;
    let observed_period = exp.period().map(<[_]>::to_vec);
    let observed_regulator = regulator_of(&exp).ok();
    let matches = exp.period_start() == Some(1)
        && observed_period.as_deref() == Some(fam.predicted_period.as_slice())
        && observed_regulator == Some(fam.predicted_regulator);
    Ok(FamilyReport {
        matches,
        status: exp.status,
        observed_period,
        observed_regulator,
    })
}

/// Substitute `s ↦ value` in every coefficient.
pub fn specialize_poly(p: &Poly<RatFunc>, value: &Rat) -> Result<Poly<Rat>> {
    p.map_coeffs(|c| c.eval(value))
}

/// Why a symbolic expansion does not specialize cleanly at a value of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneration {
    /// A coefficient of some `P_h`, `Q_h` or `a_h` has a pole at `s`.
    Pole { h: usize },
    /// A leading coefficient of some `Q_h` or `a_h` vanishes at `s`.
    DegreeDrop { h: usize },
    /// `D` specializes to a square.
    SquareDiscriminant,
}

/// Check that specializing the symbolic tableau through one period keeps
/// every coefficient finite and every degree unchanged. When it does, the
/// specialized expansion is the specialization of the symbolic one.
pub fn detect_degeneration(symbolic: &FFExpansion<RatFunc>, value: &Rat) -> Option<Degeneration> {
    let square = specialize_poly(symbolic.spec().d(), value)
        .ok()
        .and_then(|d| FFSpec::new(d).ok())
        .is_none();
    if square {
        return Some(Degeneration::SquareDiscriminant);
    }
    let keeps_degree = |p: &Poly<RatFunc>| -> std::result::Result<bool, Degeneration> {
        Ok(specialize_poly(p, value)
            .map_err(|_| Degeneration::Pole { h: 0 })?
            .degree()
            == p.degree())
    };
    let states = symbolic.states().iter();
    for (h, st) in states.enumerate() {
        let with_h = |e: Degeneration| match e {
            Degeneration::Pole { .. } => Degeneration::Pole { h },
            other => other,
        };
        // P may lose degree; Q and a may not
        if let Err(e) = keeps_degree(&st.p) {
            return Some(with_h(e));
        }
        for p in std::iter::once(&st.q).chain(symbolic.quotients().get(h)) {
            match keeps_degree(p) {
                Ok(true) => {}
                Ok(false) => return Some(Degeneration::DegreeDrop { h }),
                Err(e) => return Some(with_h(e)),
            }
        }
    }
    None
}

/// Specialize a symbolic family at `s = value`.
pub fn specialize_family(fam: &QuarticFamily<RatFunc>, value: &Rat) -> Result<QuarticFamily<Rat>> {
    family(fam.tag, value.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn qp(cs: &[(i64, i64)]) -> Poly<Rat> {
        Poly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn x4_plus_1() {
        let spec = FFSpec::new(qp(&[(1, 1), (0, 1), (0, 1), (0, 1), (1, 1)])).unwrap();
        let (a, next) = ff_step(&FFCompleteQuotient::initial(), &spec).unwrap();
        assert_eq!(a, qp(&[(0, 1), (0, 1), (1, 1)]));
        assert_eq!(next.q, Poly::one());
        let (a1, next1) = ff_step(&next, &spec).unwrap();
        assert_eq!(a1, qp(&[(0, 1), (0, 1), (2, 1)]));
        assert_eq!(next1, next);

        let exp = ff_expand_default(&spec).unwrap();
        assert_eq!(exp.status(), &FFStatus::Periodic { start: 1, end: 2 });
        assert_eq!(exp.period().unwrap(), &[qp(&[(0, 1), (0, 1), (2, 1)])]);
        assert_eq!(regulator_of(&exp).unwrap(), 2);
        let (x, y) = fundamental_unit_ff(&exp).unwrap();
        assert_eq!(
            &(&x * &x) - &(&(spec.d() * &y) * &y),
            Poly::constant(rat(-1, 1))
        );
        assert_eq!(x.degree().finite(), Some(2));
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(FFSpec::new(qp(&[(1, 1), (2, 1), (1, 1)])).is_err());
        assert!(FFSpec::new(qp(&[(1, 1), (0, 1), (0, 1), (1, 1)])).is_err());
        assert!(FFSpec::new(qp(&[(1, 1), (0, 1), (0, 1), (0, 1), (2, 1)])).is_err());
    }

    #[test]
    fn m5_at_two() {
        let fam = family_m5(rat(2, 1)).unwrap();
        assert_eq!(
            fam.spec.d(),
            &qp(&[(49 - 64, 16), (8, 1), (7, 2), (0, 1), (1, 1)])
        );
        let expected = vec![
            qp(&[(1, 8), (1, 4)]),
            qp(&[(-3, 1), (2, 1)]),
            qp(&[(1, 8), (1, 4)]),
            qp(&[(7, 2), (0, 1), (2, 1)]),
        ];
        assert_eq!(fam.predicted_period, expected);
        let rep = ff_verify_family(&fam, 100, DEFAULT_HEIGHT_BOUND).unwrap();
        assert!(rep.matches, "{rep:?}");
        assert_eq!(rep.observed_regulator, Some(5));
    }

    #[test]
    fn m7_at_two() {
        let fam = family_m7(rat(2, 1)).unwrap();
        assert_eq!(fam.k, Some(rat(4, 1)));
        assert_eq!(fam.k1, Some(rat(-8, 1)));
        assert_eq!(fam.predicted_period[0], qp(&[(1, 16), (1, 8)]));
        assert_eq!(fam.predicted_period[1], qp(&[(-3, 1), (2, 1)]));
        assert_eq!(fam.predicted_period[2], qp(&[(-1, 8), (1, 4)]));
        let rep = ff_verify_family(&fam, 100, DEFAULT_HEIGHT_BOUND).unwrap();
        assert!(rep.matches, "{rep:?}");
        assert_eq!(rep.observed_regulator, Some(7));
    }

    #[test]
    fn excluded_parameters() {
        assert!(matches!(
            family_m5(rat(0, 1)),
            Err(Error::InadmissibleParameter(_))
        ));
        assert!(matches!(
            family_m7(rat(0, 1)),
            Err(Error::InadmissibleParameter(_))
        ));
        assert!(matches!(
            family_m7(rat(1, 1)),
            Err(Error::InadmissibleParameter(_))
        ));
    }

    #[test]
    fn generic_quartic_aborts_on_height() {
        let spec = FFSpec::new(qp(&[(1, 1), (1, 1), (0, 1), (0, 1), (1, 1)])).unwrap();
        let exp = ff_expand(&spec, DEFAULT_MAX_STEPS, 2_000).unwrap();
        assert_eq!(exp.status(), &FFStatus::Aborted(AbortReason::HeightBound));
        assert!(regulator_of(&exp).is_err());
        let exp = ff_expand(&spec, 5, DEFAULT_HEIGHT_BOUND).unwrap();
        assert_eq!(exp.status(), &FFStatus::Aborted(AbortReason::StepLimit));
    }

    #[test]
    fn m5_symbolic_first_step() {
        let fam = family_m5(RatFunc::var()).unwrap();
        let (a, next) = ff_step(&FFCompleteQuotient::initial(), &fam.spec).unwrap();
        assert_eq!(&a, fam.spec.a());
        assert_eq!(&next.p, fam.spec.a());
        assert_eq!(&next.q, fam.spec.r());
    }

    #[test]
    fn prefix_identities_on_m5() {
        let fam = family_m5(rat(3, 1)).unwrap();
        let exp = ff_expand_default(&fam.spec).unwrap();
        let prefix = CfWord(vec![exp.quotients()[1].clone()]);
        let st = &exp.states()[2];
        assert!(ff_prefix_identities_hold(
            fam.spec.a(),
            &st.p,
            &st.q,
            &fam.spec,
            &prefix
        ));
        let bumped = &st.p + &Poly::one();
        assert!(!ff_prefix_identities_hold(
            fam.spec.a(),
            &bumped,
            &st.q,
            &fam.spec,
            &prefix
        ));
    }

    #[test]
    fn odd_quasi_period_continues_to_exact_period() {
        // X² + 2: (P_2, Q_2) = (P_1, Q_1/2) first, then (P_3, Q_3) = (P_1, Q_1)
        let spec = FFSpec::new(qp(&[(2, 1), (0, 1), (1, 1)])).unwrap();
        let exp = ff_expand_default(&spec).unwrap();
        assert!(exp.is_periodic());
        assert_eq!(regulator_of(&exp).unwrap(), 2);
    }
}
