//! The inverse problem: quadratic integers whose expansion begins with a
//! prescribed word.
//!
//! Given `a_1, …, a_h` with matrix `[[p, p'], [q, q']]`, every quadratic
//! integer `ω = [A; a_1, …, a_h, (ω + P)/Q]` lies in a two-parameter family
//! indexed by integers `(K_1, L)`. When the word is the whole symmetric part
//! of the period the family collapses to one parameter `L` (the classical
//! case). Every candidate is checked by re-expanding it.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_square, sign_pow, Int};
use crate::error::{Error, Result};
use crate::quad::{expand_default, MidpointKind, PeriodicExpansion, QuadraticSpec};
use crate::words::{word_to_matrix, CfWord, Ring};

/// A prescribed word with its matrix `[[p, p'], [q, q']]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixData<R> {
    word: CfWord<R>,
    p: R,
    q: R,
    p_prime: R,
    q_prime: R,
}

impl<R: Ring> PrefixData<R> {
    /// # Panics
    /// Panics if `pq' − p'q ≠ (−1)^h`, which cannot happen for a matrix
    /// product of partial quotients.
    pub fn new(word: CfWord<R>) -> Self {
        let m = word_to_matrix(&word);
        let expected = if word.len().is_multiple_of(2) {
            R::one()
        } else {
            -R::one()
        };
        assert_eq!(m.det(), expected, "pq' − p'q must equal (−1)^h");
        PrefixData {
            word,
            p: m.a,
            q: m.c,
            p_prime: m.b,
            q_prime: m.d,
        }
    }

    /// Append a partial quotient: right-multiply by `[[a, 1], [1, 0]]`.
    pub fn push(&mut self, a: R) {
        let p = self.p.clone() * a.clone() + self.p_prime.clone();
        let q = self.q.clone() * a.clone() + self.q_prime.clone();
        self.p_prime = std::mem::replace(&mut self.p, p);
        self.q_prime = std::mem::replace(&mut self.q, q);
        self.word.push(a);
    }

    pub fn word(&self) -> &CfWord<R> {
        &self.word
    }

    pub fn h(&self) -> usize {
        self.word.len()
    }

    pub fn p(&self) -> &R {
        &self.p
    }

    pub fn q(&self) -> &R {
        &self.q
    }

    pub fn p_prime(&self) -> &R {
        &self.p_prime
    }

    pub fn q_prime(&self) -> &R {
        &self.q_prime
    }
}

/// Truth values of the two identities tying a prefix to its complete quotient, and
/// of the linear relation `p(A − t − P) − p'Q = −q` they come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrefixIdentities {
    pub first: bool,
    pub second: bool,
    pub linear: bool,
}

/// Evaluate
/// `p(P² + tP + n) + p'Q(A + P) = −q'Q`,
/// `p(A² − tA + n) + q(A + P) = −q'Q` and
/// `p(A − t − P) − p'Q = −q` over any ring.
pub fn prefix_identities<R: Ring>(
    a: &R,
    pp: &R,
    qq: &R,
    t: &R,
    n: &R,
    prefix: &PrefixData<R>,
) -> PrefixIdentities {
    let PrefixData {
        p,
        q,
        p_prime,
        q_prime,
        ..
    } = prefix;
    let rhs = -(q_prime.clone() * qq.clone());
    let a_plus_p = a.clone() + pp.clone();
    let first = p.clone() * (pp.clone() * pp.clone() + t.clone() * pp.clone() + n.clone())
        + p_prime.clone() * qq.clone() * a_plus_p.clone();
    let second = p.clone() * (a.clone() * a.clone() - t.clone() * a.clone() + n.clone())
        + q.clone() * a_plus_p;
    let linear = p.clone() * (a.clone() - t.clone() - pp.clone()) - p_prime.clone() * qq.clone();
    PrefixIdentities {
        first: first == rhs,
        second: second == rhs,
        linear: linear == -q.clone(),
    }
}

/// All three relations at once, over ℤ.
pub fn prefix_identities_hold(
    a: &Int,
    pp: &Int,
    qq: &Int,
    t: &Int,
    n: &Int,
    prefix: &PrefixData<Int>,
) -> bool {
    let ids = prefix_identities(a, pp, qq, t, n, prefix);
    ids.first && ids.second && ids.linear
}

/// How to pick the trace `t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum TPolicy {
    /// `t ∈ {0, 1}` with the parity forced by `2A = t − T`.
    #[default]
    Auto,
    Force(Int),
}

/// Why a parameter choice does not give the prescribed expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inadmissible {
    /// `t − T` is odd, so `A` is not an integer.
    Parity {
        t: Int,
        trace_shift: Int,
    },
    NonPositiveQ(Int),
    /// No integer `L` gives the requested `Q`.
    NoIntegralL {
        q: Int,
    },
    /// `Q ∤ 2P + t` in the `P = P'` case.
    Divisibility {
        q: Int,
        k1: Int,
    },
    NonPositiveDiscriminant(Int),
    SquareDiscriminant(Int),
    NonPositiveA(Int),
    IdentitiesFail,
    ExpansionMismatch {
        expected: String,
        observed: String,
    },
    MidpointNotConfirmed {
        kind: MidpointKind,
        index: usize,
    },
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissible::Parity { t, trace_shift } => {
                write!(f, "parity: t = {t} and T = {trace_shift} differ mod 2")
            }
            Inadmissible::NonPositiveQ(q) => write!(f, "Q = {q} is not positive"),
            Inadmissible::NoIntegralL { q } => write!(f, "no integral L gives Q = {q}"),
            Inadmissible::Divisibility { q, k1 } => {
                write!(f, "Q = {q} does not divide 2P + t at K1 = {k1}")
            }
            Inadmissible::NonPositiveDiscriminant(d) => {
                write!(f, "discriminant {d} is not positive")
            }
            Inadmissible::SquareDiscriminant(d) => write!(f, "discriminant {d} is a square"),
            Inadmissible::NonPositiveA(a) => write!(f, "A = {a} is less than 1"),
            Inadmissible::IdentitiesFail => f.write_str("prefix identities fail"),
            Inadmissible::ExpansionMismatch { expected, observed } => {
                write!(
                    f,
                    "expansion mismatch: expected {expected}, observed {observed}"
                )
            }
            Inadmissible::MidpointNotConfirmed { kind, index } => {
                write!(
                    f,
                    "{kind:?} midpoint at {index} not confirmed by the expansion"
                )
            }
        }
    }
}

impl Inadmissible {
    /// Short machine tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Inadmissible::Parity { .. } => "parity",
            Inadmissible::NonPositiveQ(_) => "non_positive_q",
            Inadmissible::NoIntegralL { .. } => "no_integral_l",
            Inadmissible::Divisibility { .. } => "divisibility",
            Inadmissible::NonPositiveDiscriminant(_) => "non_positive_discriminant",
            Inadmissible::SquareDiscriminant(_) => "square_discriminant",
            Inadmissible::NonPositiveA(_) => "non_positive_a",
            Inadmissible::IdentitiesFail => "identities_fail",
            Inadmissible::ExpansionMismatch { .. } => "expansion_mismatch",
            Inadmissible::MidpointNotConfirmed { .. } => "midpoint_not_confirmed",
        }
    }
}

/// Result of instantiating a family at particular parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<I> {
    Admissible(I),
    /// The prescribed period is a repetition of the true, shorter period.
    AdmissibleWithCollapse {
        instance: I,
        primitive_period: CfWord<Int>,
    },
    Inadmissible(Inadmissible),
}

impl<I> Outcome<I> {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Outcome::Admissible(_))
    }

    pub fn instance(&self) -> Option<&I> {
        match self {
            Outcome::Admissible(i) | Outcome::AdmissibleWithCollapse { instance: i, .. } => Some(i),
            Outcome::Inadmissible(_) => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Admissible(_) => "admissible",
            Outcome::AdmissibleWithCollapse { .. } => "admissible_with_collapse",
            Outcome::Inadmissible(_) => "inadmissible",
        }
    }
}

/// `c0 + c1·L`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Int,
    pub slope: Int,
}

impl AffineForm {
    pub fn eval(&self, l: &Int) -> Int {
        &self.constant + &self.slope * l
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope.is_zero(), self.constant.is_zero()) {
            (true, _) => write!(f, "{}", self.constant),
            (false, c_zero) => {
                match &self.slope {
                    s if s.is_one() => f.write_str("L")?,
                    s if (-s).is_one() => f.write_str("-L")?,
                    s => write!(f, "{s}L")?,
                }
                if !c_zero {
                    let sign = if self.constant.is_negative() {
                        '-'
                    } else {
                        '+'
                    };
                    write!(f, " {sign} {}", self.constant.abs())?;
                }
                Ok(())
            }
        }
    }
}

/// Parity data of a classical family: `t ≡ T(L) ≡ p'q' + Lp (mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityRule {
    pub p_prime_q_prime_odd: bool,
    pub p_odd: bool,
}

impl ParityRule {
    pub fn t_must_be_odd(&self, l: &Int) -> bool {
        self.p_prime_q_prime_odd ^ (self.p_odd && l.is_odd())
    }
}

/// One-parameter family realizing a complete symmetric part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalFamily {
    pub palindrome: CfWord<Int>,
    /// Period length `r = len + 1`.
    pub r: usize,
    pub prefix: PrefixData<Int>,
    /// `N(L) = (−1)^r (q'² − Lq)`, the norm of `ω − A`.
    pub norm_form: AffineForm,
    /// `T(L) = (−1)^r (p'q' − Lp)`, the trace of `ω − A`.
    pub trace_form: AffineForm,
    pub parity: ParityRule,
}

fn check_positive(word: &CfWord<Int>) -> Result<()> {
    if word.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveEntry(word.to_string()))
    }
}

pub fn classical_family(palindrome: &CfWord<Int>) -> Result<ClassicalFamily> {
    if !palindrome.is_palindrome() {
        return Err(Error::NotPalindrome);
    }
    check_positive(palindrome)?;
    let prefix = PrefixData::new(palindrome.clone());
    let r = palindrome.len() + 1;
    let sg = sign_pow(r);
    let (p, q, pp, qp) = (&prefix.p, &prefix.q, &prefix.p_prime, &prefix.q_prime);
    let norm_form = AffineForm {
        constant: &sg * qp * qp,
        slope: -(&sg * q),
    };
    let trace_form = AffineForm {
        constant: &sg * pp * qp,
        slope: -(&sg * p),
    };
    let parity = ParityRule {
        p_prime_q_prime_odd: (pp * qp).is_odd(),
        p_odd: p.is_odd(),
    };
    Ok(ClassicalFamily {
        palindrome: palindrome.clone(),
        r,
        prefix,
        norm_form,
        trace_form,
        parity,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalInstance {
    pub l: Int,
    pub t: Int,
    pub n: Int,
    pub a: Int,
    /// `T = t − 2A`
    pub trace_shift: Int,
    /// `N = n − tA + A²`
    pub norm_shift: Int,
    pub discriminant: Int,
}

impl ClassicalInstance {
    pub fn verify(&self, palindrome: &CfWord<Int>) -> bool {
        verify_instance(
            &self.t,
            &self.n,
            &self.a,
            palindrome,
            &VerifyMode::FullPalindrome,
        )
    }
}

/// Pick `t` so that `t − T` is even.
fn choose_t(trace_shift: &Int, policy: &TPolicy) -> std::result::Result<Int, Inadmissible> {
    match policy {
        TPolicy::Auto => Ok(trace_shift.mod_floor(&Int::from(2))),
        TPolicy::Force(t) => {
            if (t - trace_shift).is_even() {
                Ok(t.clone())
            } else {
                Err(Inadmissible::Parity {
                    t: t.clone(),
                    trace_shift: trace_shift.clone(),
                })
            }
        }
    }
}

/// Recover `(A, n, D)` from `t`, `T = t − 2A` and `N = n − tA + A²`.
fn bridge(t: &Int, trace_shift: &Int, norm_shift: &Int) -> (Int, Int, Int) {
    let a = (t - trace_shift) / Int::from(2);
    let n = norm_shift + t * &a - &a * &a;
    let d = trace_shift * trace_shift - Int::from(4) * norm_shift;
    (a, n, d)
}

fn discriminant_ok(d: &Int) -> std::result::Result<(), Inadmissible> {
    if !d.is_positive() {
        Err(Inadmissible::NonPositiveDiscriminant(d.clone()))
    } else if is_square(d) {
        Err(Inadmissible::SquareDiscriminant(d.clone()))
    } else {
        Ok(())
    }
}

fn expand_instance(t: &Int, n: &Int) -> PeriodicExpansion {
    let spec = QuadraticSpec::new(t.clone(), n.clone()).expect("discriminant already checked");
    expand_default(&spec).expect("quadratic integers have periodic expansions")
}

/// The shortest `u` with `word = u^k`.
fn primitive_root(word: &[Int]) -> &[Int] {
    let n = word.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && word.chunks(d).all(|c| c == &word[..d]))
        .map_or(word, |d| &word[..d])
}

pub fn classical_instantiate(
    fam: &ClassicalFamily,
    l: &Int,
    policy: &TPolicy,
) -> Outcome<ClassicalInstance> {
    let trace_shift = fam.trace_form.eval(l);
    let norm_shift = fam.norm_form.eval(l);
    let t = match choose_t(&trace_shift, policy) {
        Ok(t) => t,
        Err(e) => return Outcome::Inadmissible(e),
    };
    let (a, n, d) = bridge(&t, &trace_shift, &norm_shift);
    if let Err(e) = discriminant_ok(&d) {
        return Outcome::Inadmissible(e);
    }
    if a < Int::one() {
        return Outcome::Inadmissible(Inadmissible::NonPositiveA(a));
    }
    let exp = expand_instance(&t, &n);
    let mut expected = fam.palindrome.clone();
    expected.push(Int::from(2) * &a - &t);
    let instance = ClassicalInstance {
        l: l.clone(),
        t,
        n,
        a,
        trace_shift,
        norm_shift,
        discriminant: d,
    };
    if exp.a0() != &instance.a {
        return Outcome::Inadmissible(Inadmissible::ExpansionMismatch {
            expected: format!("a0 = {}", instance.a),
            observed: format!("a0 = {}", exp.a0()),
        });
    }
    if exp.period() == &expected {
        return Outcome::Admissible(instance);
    }
    let root = primitive_root(expected.entries());
    if root == exp.period().entries() {
        return Outcome::AdmissibleWithCollapse {
            instance,
            primitive_period: exp.period().clone(),
        };
    }
    Outcome::Inadmissible(Inadmissible::ExpansionMismatch {
        expected: format!("period {expected}"),
        observed: format!("period {}", exp.period()),
    })
}

/// A member of the general `(K_1, L)` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralInstance {
    pub k1: Int,
    pub l: Int,
    pub k: Int,
    pub k2: Int,
    pub t: Int,
    pub n: Int,
    pub a: Int,
    /// `P = P_{h+1}`
    pub p: Int,
    /// `Q = Q_{h+1}`
    pub q: Int,
    pub trace_shift: Int,
    pub norm_shift: Int,
    pub discriminant: Int,
    /// Set by the special-case solvers once the expansion confirms it.
    pub midpoint: Option<MidpointKind>,
}

impl GeneralInstance {
    pub fn verify(&self, prefix: &CfWord<Int>) -> bool {
        verify_instance(
            &self.t,
            &self.n,
            &self.a,
            prefix,
            &VerifyMode::Prefix {
                p: self.p.clone(),
                q: self.q.clone(),
            },
        )
    }
}

fn general_inner(
    data: &PrefixData<Int>,
    k1: &Int,
    l: &Int,
    policy: &TPolicy,
) -> std::result::Result<(GeneralInstance, PeriodicExpansion), Inadmissible> {
    let h = data.h();
    let (p, q, pp, qp) = (&data.p, &data.q, &data.p_prime, &data.q_prime);
    let s = sign_pow(h + 1);
    let sh = sign_pow(h);
    let k = &s * (q * qp - l * pp);
    let qq = &s * (q * q - l * p);
    let k2 = k1 + &k * qp;
    let trace_shift = &sh * (k1 * p - l * pp);
    let norm_shift = &sh * (k1 * q - l * qp);
    let a_plus_p = &sh * (q * qp - k1 * p);
    debug_assert_eq!(l, &(qp * &qq - &k * q));
    if !qq.is_positive() {
        return Err(Inadmissible::NonPositiveQ(qq));
    }
    let t = choose_t(&trace_shift, policy)?;
    let (a, n, d) = bridge(&t, &trace_shift, &norm_shift);
    let pcap = &a_plus_p - &a;
    debug_assert_eq!(&a - &t - &pcap, k);
    discriminant_ok(&d)?;
    if !prefix_identities_hold(&a, &pcap, &qq, &t, &n, data) {
        return Err(Inadmissible::IdentitiesFail);
    }
    let exp = expand_instance(&t, &n);
    let observed = exp.word_through(h);
    let mut expected = vec![a.clone()];
    expected.extend(data.word.entries().iter().cloned());
    let cq = exp.complete_quotient(h + 1);
    if observed.entries() != expected.as_slice() || cq.p != pcap || cq.q != qq {
        return Err(Inadmissible::ExpansionMismatch {
            expected: format!("{} then (P, Q) = ({pcap}, {qq})", CfWord(expected)),
            observed: format!("{observed} then (P, Q) = ({}, {})", cq.p, cq.q),
        });
    }
    let inst = GeneralInstance {
        k1: k1.clone(),
        l: l.clone(),
        k,
        k2,
        t,
        n,
        a,
        p: pcap,
        q: qq,
        trace_shift,
        norm_shift,
        discriminant: d,
        midpoint: None,
    };
    Ok((inst, exp))
}

fn into_outcome(r: std::result::Result<GeneralInstance, Inadmissible>) -> Outcome<GeneralInstance> {
    match r {
        Ok(i) => Outcome::Admissible(i),
        Err(e) => Outcome::Inadmissible(e),
    }
}

/// Solve for `(t, n, A, P, Q)` from the prefix and the parameters `K_1`, `L`.
pub fn general_solve(
    prefix: &CfWord<Int>,
    k1: &Int,
    l: &Int,
    policy: &TPolicy,
) -> Result<Outcome<GeneralInstance>> {
    check_positive(prefix)?;
    let data = PrefixData::new(prefix.clone());
    Ok(into_outcome(
        general_inner(&data, k1, l, policy).map(|(i, _)| i),
    ))
}

/// The `Q = Q'` case: `(−1)^{h+1} Q = K_1 p' − q'²` fixes `Q`, then `L`.
/// Admissible instances sit at the middle of an odd period.
pub fn special_q_eq_qprime(
    prefix: &CfWord<Int>,
    k1: &Int,
    policy: &TPolicy,
) -> Result<Outcome<GeneralInstance>> {
    check_positive(prefix)?;
    let data = PrefixData::new(prefix.clone());
    let h = data.h();
    let s = sign_pow(h + 1);
    let qq = &s * (k1 * &data.p_prime - &data.q_prime * &data.q_prime);
    if !qq.is_positive() {
        return Ok(Outcome::Inadmissible(Inadmissible::NonPositiveQ(qq)));
    }
    let Some(l) = l_for_q(&data, &qq) else {
        return Ok(Outcome::Inadmissible(Inadmissible::NoIntegralL { q: qq }));
    };
    let r = general_inner(&data, k1, &l, policy).and_then(|(mut inst, exp)| {
        if exp.complete_quotient(h).q == exp.complete_quotient(h + 1).q {
            inst.midpoint = Some(MidpointKind::Odd);
            Ok(inst)
        } else {
            Err(Inadmissible::MidpointNotConfirmed {
                kind: MidpointKind::Odd,
                index: h,
            })
        }
    });
    Ok(into_outcome(r))
}

/// `L = (q² − (−1)^{h+1} Q)/p` when integral.
fn l_for_q(data: &PrefixData<Int>, qq: &Int) -> Option<Int> {
    let s = sign_pow(data.h() + 1);
    let (l, rem) = (&data.q * &data.q - s * qq).div_mod_floor(&data.p);
    rem.is_zero().then_some(l)
}

/// Constraints of the `P = P'` case for a given prefix, all in terms of `Q`
/// and `K_1`:
///
/// * `A − t − P = k = (p'Q − q)/p`
/// * `Q ≡ (−1)^{h+1} q² (mod p)` so that `L` is integral
/// * `K_2 − K_1 = q'·k`
/// * `p²·K_1 ≡ q(2pq' − p'q) (mod Q)`, i.e. `Q | 2P + t`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PEqPPrimeConstraints {
    pub k_q_coeff: Int,
    pub k_constant: Int,
    pub k_denominator: Int,
    pub q_modulus: Int,
    pub q_residue: Int,
    pub k2_minus_k1_factor: Int,
    pub congruence_k1_coeff: Int,
    pub congruence_rhs: Int,
}

impl PEqPPrimeConstraints {
    /// Human-readable statements, one per constraint.
    pub fn describe(&self) -> Vec<String> {
        let k2 = match &self.k2_minus_k1_factor {
            f if f.is_zero() => "K2 = K1".to_string(),
            f if f.is_one() => "K2 = K1 + k".to_string(),
            f => format!("K2 = K1 + {f}*k"),
        };
        let q_term = match &self.k_q_coeff {
            c if c.is_one() => "Q".to_string(),
            c => format!("{c}*Q"),
        };
        let num = match &self.k_constant {
            c if c.is_zero() => q_term,
            c if c.is_negative() => format!("{q_term} - {}", c.abs()),
            c => format!("{q_term} + {c}"),
        };
        let k = if self.k_denominator.is_one() {
            format!("A - t - P = {num}")
        } else {
            format!("A - t - P = ({num})/{}", self.k_denominator)
        };
        let q = if self.q_modulus.is_one() {
            "Q arbitrary".to_string()
        } else if self.q_modulus == Int::from(2) && self.q_residue.is_one() {
            "Q odd".to_string()
        } else {
            format!("Q ≡ {} (mod {})", self.q_residue, self.q_modulus)
        };
        let coeff = match &self.congruence_k1_coeff {
            c if c.is_one() => "K1".to_string(),
            c => format!("{c}*K1"),
        };
        let cong = format!("{coeff} ≡ {} (mod Q)", self.congruence_rhs);
        vec![k2, k, q, cong]
    }
}

pub fn p_eq_pprime_constraints(prefix: &CfWord<Int>) -> Result<PEqPPrimeConstraints> {
    check_positive(prefix)?;
    let data = PrefixData::new(prefix.clone());
    let (p, q, pp, qp) = (&data.p, &data.q, &data.p_prime, &data.q_prime);
    let s = sign_pow(data.h() + 1);
    Ok(PEqPPrimeConstraints {
        k_q_coeff: pp.clone(),
        k_constant: -q.clone(),
        k_denominator: p.clone(),
        q_modulus: p.clone(),
        q_residue: (s * q * q).mod_floor(p),
        k2_minus_k1_factor: qp.clone(),
        congruence_k1_coeff: p * p,
        congruence_rhs: q * (Int::from(2) * p * qp - pp * q),
    })
}

/// The `P = P'` case at a given `(Q, K_1)`: even-period midpoint at
/// `s = h + 1`, confirmed by `P_{h+2} = P_{h+1}` in the expansion.
pub fn special_p_eq_pprime(
    prefix: &CfWord<Int>,
    qq: &Int,
    k1: &Int,
    policy: &TPolicy,
) -> Result<Outcome<GeneralInstance>> {
    let c = p_eq_pprime_constraints(prefix)?;
    let data = PrefixData::new(prefix.clone());
    let h = data.h();
    if !qq.is_positive() {
        return Ok(Outcome::Inadmissible(Inadmissible::NonPositiveQ(
            qq.clone(),
        )));
    }
    let Some(l) = l_for_q(&data, qq) else {
        return Ok(Outcome::Inadmissible(Inadmissible::NoIntegralL {
            q: qq.clone(),
        }));
    };
    if !(&c.congruence_k1_coeff * k1 - &c.congruence_rhs).is_multiple_of(qq) {
        return Ok(Outcome::Inadmissible(Inadmissible::Divisibility {
            q: qq.clone(),
            k1: k1.clone(),
        }));
    }
    let r = general_inner(&data, k1, &l, policy).and_then(|(mut inst, exp)| {
        if exp.complete_quotient(h + 2).p == inst.p {
            inst.midpoint = Some(MidpointKind::Even);
            Ok(inst)
        } else {
            Err(Inadmissible::MidpointNotConfirmed {
                kind: MidpointKind::Even,
                index: h + 1,
            })
        }
    });
    Ok(into_outcome(r))
}

/// All admissible `P = P'` instances with `Q` and `K_1` in the given ranges.
pub fn enumerate_p_eq_pprime(
    prefix: &CfWord<Int>,
    q_range: std::ops::RangeInclusive<i64>,
    k1_range: std::ops::RangeInclusive<i64>,
    policy: &TPolicy,
) -> Result<Vec<GeneralInstance>> {
    let mut out = Vec::new();
    for qq in q_range {
        for k1 in k1_range.clone() {
            if let Outcome::Admissible(i) =
                special_p_eq_pprime(prefix, &qq.into(), &k1.into(), policy)?
            {
                out.push(i);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// The word starts the period and `(P_{h+1}, Q_{h+1}) = (p, q)`.
    Prefix { p: Int, q: Int },
    /// The period is exactly `word, 2A − t`.
    FullPalindrome,
}

/// Re-expand `ω² − tω + n = 0` and check it against the prescription.
pub fn verify_instance(t: &Int, n: &Int, a: &Int, word: &CfWord<Int>, mode: &VerifyMode) -> bool {
    let Ok(spec) = QuadraticSpec::new(t.clone(), n.clone()) else {
        return false;
    };
    let Ok(exp) = expand_default(&spec) else {
        return false;
    };
    if exp.a0() != a {
        return false;
    }
    match mode {
        VerifyMode::Prefix { p, q } => {
            let h = word.len();
            (1..=h).all(|i| exp.partial_quotient(i) == word.entries()[i - 1])
                && &exp.complete_quotient(h + 1).p == p
                && &exp.complete_quotient(h + 1).q == q
        }
        VerifyMode::FullPalindrome => {
            let mut expected = word.clone();
            expected.push(Int::from(2) * a - t);
            exp.period() == &expected
        }
    }
}
