//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Exact arithmetic throughout, so the only tolerances are the
//! wall-clock budgets below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cfquad_core::arith::{rat, Poly, Rat, RatFunc};
use cfquad_core::funcfield::{
    detect_degeneration, family_m5, family_m7, ff_expand, ff_expand_default, ff_verify_family,
    specialize_family, specialize_poly, AbortReason, FFSpec, FFStatus, DEFAULT_HEIGHT_BOUND,
    DEFAULT_MAX_STEPS,
};
use cfquad_core::prescribe::{
    classical_family, classical_instantiate, general_solve, p_eq_pprime_constraints,
    prefix_identities, special_q_eq_qprime, verify_instance, Inadmissible, Outcome, PrefixData,
    TPolicy, VerifyMode,
};
use cfquad_core::words::decomposition_period;
use cfquad_core::{
    cq_step, expand_default, fundamental_unit, norm_identity_through_period, unit_to_period,
    CfWord, Int, MidpointKind, QuadraticSpec,
};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const GOLDEN_BUDGET: Duration = Duration::from_millis(100);
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const SYMBOLIC_BUDGET: Duration = Duration::from_secs(30);
const SWEEP_MAX_D: i64 = 20_000;
const UNIT_SAMPLES: usize = 200;
const UNIT_MAX_D: i64 = 5_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn int(n: i64) -> Int {
    Int::from(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn golden_expansions() -> Check {
    let mut worst = Duration::ZERO;
    for (t, n, a0, period) in [
        (0, -61, 7, vec![1, 4, 3, 1, 2, 2, 1, 3, 4, 1, 14]),
        (1, -15, 4, vec![2, 2, 7]),
    ] {
        let start = Instant::now();
        let exp = expand_default(&QuadraticSpec::from_i64(t, n).map_err(err)?).map_err(err)?;
        let took = start.elapsed();
        worst = worst.max(took);
        ensure(
            exp.a0() == &int(a0) && exp.period() == &CfWord::from_i64s(&period),
            || format!("t={t}, n={n}: got [{}; {}]", exp.a0(), exp.period()),
        )?;
        ensure(took < GOLDEN_BUDGET, || {
            format!("t={t}, n={n} took {took:?}")
        })?;
    }
    Ok(format!("slowest {worst:?}"))
}

fn tableau_reproduction() -> Check {
    let exp = expand_default(&QuadraticSpec::from_i64(0, -61).map_err(err)?).map_err(err)?;
    let expected = [(7, 12), (5, 3), (7, 4), (5, 9)];
    for (h, (p, q)) in (1..).zip(expected) {
        let cq = exp.complete_quotient(h);
        ensure(cq.p == int(p) && cq.q == int(q), || {
            format!("h={h}: ({}, {})", cq.p, cq.q)
        })?;
    }
    let m = exp.midpoint();
    ensure(
        m.kind == MidpointKind::Odd && m.index == 5 && m.q == int(5),
        || format!("midpoint {m:?}"),
    )?;
    ensure(
        exp.complete_quotient(5).q == int(5) && exp.complete_quotient(6).q == int(5),
        || "Q_5, Q_6".into(),
    )?;
    Ok("Q_5 = Q_6 = 5".into())
}

fn general_instance(
    out: Outcome<cfquad_core::GeneralInstance>,
) -> Result<cfquad_core::GeneralInstance, String> {
    match out {
        Outcome::Admissible(i) => Ok(i),
        other => Err(format!("not admissible: {other:?}")),
    }
}

fn prefix_1_4() -> Check {
    let prefix = CfWord::from_i64s(&[1, 4]);
    let i =
        general_instance(general_solve(&prefix, &int(-2), &int(4), &TPolicy::Auto).map_err(err)?)?;
    ensure(&i.a - &i.t == int(7), || format!("A - t = {}", &i.a - &i.t))?;
    ensure(i.k2 == int(-2), || format!("K2 = {}", i.k2))?;
    ensure(i.discriminant == int(4 * 61), || {
        format!("D = {}", i.discriminant)
    })?;
    ensure(i.verify(&prefix), || {
        "re-expansion does not confirm the prefix".into()
    })?;
    Ok(format!(
        "t = {}, n = {}, (P, Q) = ({}, {})",
        i.t, i.n, i.p, i.q
    ))
}

fn prefix_1_4_3_1_2() -> Check {
    let prefix = CfWord::from_i64s(&[1, 4, 3, 1, 2]);
    let i =
        general_instance(general_solve(&prefix, &int(14), &int(38), &TPolicy::Auto).map_err(err)?)?;
    let checks = [
        ("Q", i.q.clone(), 5),
        ("k", i.k.clone(), 1),
        ("K2", i.k2.clone(), 31),
        ("A+P", &i.a + &i.p, 13),
        ("2P+t", int(2) * &i.p + &i.t, 12),
        ("2A-t", int(2) * &i.a - &i.t, 14),
        ("D", i.discriminant.clone(), 244),
    ];
    for (name, got, want) in checks {
        ensure(got == int(want), || {
            format!("{name} = {got}, expected {want}")
        })?;
    }
    let j = general_instance(special_q_eq_qprime(&prefix, &int(14), &TPolicy::Auto).map_err(err)?)?;
    ensure(j.q == int(5) && j.l == int(38), || {
        format!("Q = Q' gives Q = {}, L = {}", j.q, j.l)
    })?;
    ensure(j.midpoint == Some(MidpointKind::Odd), || {
        "midpoint not confirmed".into()
    })?;
    Ok("Q = 5 both ways".into())
}

fn prefix_2_even_midpoint() -> Check {
    let c = p_eq_pprime_constraints(&CfWord::from_i64s(&[2])).map_err(err)?;
    let got = c.describe();
    let want = [
        "K2 = K1",
        "A - t - P = (Q - 1)/2",
        "Q odd",
        "4*K1 ≡ -1 (mod Q)",
    ];
    ensure(got == want, || format!("{got:?}"))?;
    Ok(got.join("; "))
}

fn sweep_specs() -> impl Iterator<Item = QuadraticSpec> {
    // D = t² − 4n ranges over 2..=SWEEP_MAX_D for t ∈ {0, 1}
    (0..=1i64).flat_map(|t| {
        (-(SWEEP_MAX_D / 4)..=0)
            .filter(move |n| (2..=SWEEP_MAX_D).contains(&(t * t - 4 * n)))
            .filter_map(move |n| QuadraticSpec::from_i64(t, n).ok())
    })
}

fn prefix_identity_sweep() -> Check {
    let start = Instant::now();
    let (mut specs, mut checks) = (0usize, 0usize);
    for spec in sweep_specs() {
        let exp = expand_default(&spec).map_err(err)?;
        let r = exp.period_len();
        let mut prefix = PrefixData::new(CfWord::empty());
        for h in 0..=r {
            if h > 0 {
                prefix.push(exp.partial_quotient(h));
            }
            let cq = exp.complete_quotient(h + 1);
            let ids = prefix_identities(exp.a0(), &cq.p, &cq.q, spec.t(), spec.n(), &prefix);
            ensure(ids.first && ids.second && ids.linear, || {
                format!("{spec:?} h={h}: {ids:?}")
            })?;
            checks += 1;
        }
        ensure(norm_identity_through_period(&exp), || {
            format!("norm identity fails for {spec:?}")
        })?;
        specs += 1;
    }
    let took = start.elapsed();
    ensure(took < SWEEP_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "{specs} discriminants, {checks} prefixes, {took:.2?}"
    ))
}

fn shape_sweep() -> Check {
    let mut specs = 0usize;
    for spec in sweep_specs() {
        let exp = expand_default(&spec).map_err(err)?;
        let r = exp.period_len();
        let period = exp.period().entries();
        let interior = CfWord(period[..r - 1].to_vec());
        ensure(interior.is_palindrome(), || {
            format!("{spec:?}: interior {interior}")
        })?;
        let last = int(2) * exp.a0() - spec.t();
        ensure(period[r - 1] == last, || {
            format!("{spec:?}: last {} != {last}", period[r - 1])
        })?;
        // stepping past the end lands back on h = 1
        let row = &exp.tableau()[r];
        let state = cfquad_core::CompleteQuotient::new(row.p.clone(), row.q.clone());
        let (_, next) = cq_step(&state, &spec).map_err(err)?;
        ensure(next == exp.complete_quotient(1), || {
            format!("{spec:?}: period does not start at h = 1")
        })?;
        specs += 1;
    }
    Ok(format!("{specs} discriminants"))
}

fn unit_round_trip() -> Check {
    let spec = QuadraticSpec::from_i64(0, -61).map_err(err)?;
    let exp = expand_default(&spec).map_err(err)?;
    let u = fundamental_unit(&exp);
    ensure(
        u.x == int(29718) && u.y == int(3805) && u.norm_sign == -1,
        || format!("{u:?}"),
    )?;
    let round = |spec: &QuadraticSpec| -> Result<(), String> {
        let exp = expand_default(spec).map_err(err)?;
        let u = fundamental_unit(&exp);
        let word = unit_to_period(&u.x, &u.y, spec.t(), spec.n()).map_err(err)?;
        let (a0, period) = decomposition_period(&word).ok_or("degenerate word")?;
        ensure(&a0 == exp.a0() && &period == exp.period(), || {
            format!("{spec:?}: {word}")
        })
    };
    round(&spec)?;
    let mut runner = TestRunner::deterministic();
    let strat = (0..=1i64, 2..UNIT_MAX_D);
    let mut done = 0;
    while done < UNIT_SAMPLES {
        let (t, d) = strat.new_tree(&mut runner).map_err(err)?.current();
        // D = t² − 4n forces D ≡ t (mod 4)
        if (d - t) % 4 != 0 {
            continue;
        }
        let Ok(spec) = QuadraticSpec::from_i64(t, (t * t - d) / 4) else {
            continue;
        };
        round(&spec)?;
        done += 1;
    }
    Ok(format!("sqrt 61 plus {done} random D < {UNIT_MAX_D}"))
}

fn palindromes(max_len: usize, max_entry: i64) -> Vec<CfWord<Int>> {
    let mut out = vec![CfWord::empty()];
    for len in 1..=max_len {
        let half = len.div_ceil(2);
        let total = (max_entry as usize).pow(half as u32);
        for mut code in 0..total {
            let mut h = Vec::with_capacity(half);
            for _ in 0..half {
                h.push(1 + (code % max_entry as usize) as i64);
                code /= max_entry as usize;
            }
            let mut w = h.clone();
            w.extend(h[..len / 2].iter().rev());
            out.push(CfWord::from_i64s(&w));
        }
    }
    out
}

fn classical_round_trip() -> Check {
    let pals = palindromes(5, 3);
    let (mut admissible, mut collapsed, mut empty) = (0usize, 0usize, Vec::new());
    let mut saw_2_2 = false;
    for pal in &pals {
        let fam = classical_family(pal).map_err(err)?;
        let mut any = false;
        let mut reasons = std::collections::BTreeSet::new();
        for l in -30..=30i64 {
            match classical_instantiate(&fam, &int(l), &TPolicy::Auto) {
                Outcome::Admissible(i) => {
                    ensure(
                        verify_instance(&i.t, &i.n, &i.a, pal, &VerifyMode::FullPalindrome),
                        || format!("{pal} L={l} fails re-expansion"),
                    )?;
                    if pal == &CfWord::from_i64s(&[2, 2])
                        && i.t == int(1)
                        && i.a == int(4)
                        && i.discriminant == int(61)
                    {
                        saw_2_2 = true;
                    }
                    admissible += 1;
                    any = true;
                }
                Outcome::AdmissibleWithCollapse { .. } => {
                    collapsed += 1;
                    reasons.insert("collapse");
                }
                Outcome::Inadmissible(Inadmissible::ExpansionMismatch { expected, observed }) => {
                    return Err(format!(
                        "{pal} L={l}: expected {expected}, observed {observed}"
                    ));
                }
                Outcome::Inadmissible(r) => {
                    reasons.insert(r.tag());
                }
            }
        }
        if !any {
            empty.push(format!("{pal}: {reasons:?}"));
        }
    }
    ensure(saw_2_2, || "[2, 2] -> (t=1, A=4, D=61) missing".into())?;
    let mut msg = format!(
        "{} palindromes, {admissible} admissible, {collapsed} collapsed",
        pals.len()
    );
    if !empty.is_empty() {
        msg += &format!("; none admissible for {}", empty.join(", "));
    }
    Ok(msg)
}

fn poly(cs: &[(i64, i64)]) -> Poly<Rat> {
    Poly::new(cs.iter().map(|&(n, d)| rat(n, d)).collect())
}

fn function_field_golden() -> Check {
    let start = Instant::now();
    let m5 = family_m5(RatFunc::var()).map_err(err)?;
    let m7 = family_m7(RatFunc::var()).map_err(err)?;
    for fam in [&m5, &m7] {
        let rep = ff_verify_family(fam, DEFAULT_MAX_STEPS, DEFAULT_HEIGHT_BOUND).map_err(err)?;
        ensure(rep.matches, || format!("{:?}: {rep:?}", fam.tag))?;
        ensure(
            rep.observed_regulator == Some(fam.predicted_regulator),
            || format!("{:?} regulator", fam.tag),
        )?;
    }
    ensure(
        m5.predicted_regulator == 5 && m7.predicted_regulator == 7,
        || "regulators".into(),
    )?;
    // the displayed periods at s = 2, computed independently
    let two = rat(2, 1);
    let at2 = |fam: &cfquad_core::QuarticFamily<RatFunc>| -> Result<Vec<Poly<Rat>>, String> {
        fam.predicted_period
            .iter()
            .map(|p| specialize_poly(p, &two).map_err(err))
            .collect()
    };
    let want5 = vec![
        poly(&[(1, 8), (1, 4)]),
        poly(&[(-3, 1), (2, 1)]),
        poly(&[(1, 8), (1, 4)]),
        poly(&[(7, 2), (0, 1), (2, 1)]),
    ];
    let want7 = vec![
        poly(&[(1, 16), (1, 8)]),
        poly(&[(-3, 1), (2, 1)]),
        poly(&[(-1, 8), (1, 4)]),
        poly(&[(-3, 1), (2, 1)]),
        poly(&[(1, 16), (1, 8)]),
        poly(&[(15, 2), (0, 1), (2, 1)]),
    ];
    ensure(at2(&m5)? == want5, || "m5 period at s = 2".into())?;
    ensure(at2(&m7)? == want7, || "m7 period at s = 2".into())?;
    let took = start.elapsed();
    ensure(took < SYMBOLIC_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("regulators 5 and 7 over Q(s), {took:.2?}"))
}

fn specialization_suite() -> Check {
    let fams = [
        family_m5(RatFunc::var()).map_err(err)?,
        family_m7(RatFunc::var()).map_err(err)?,
    ];
    let mut ran = Vec::new();
    for fam in &fams {
        let sym = ff_expand_default(&fam.spec).map_err(err)?;
        for s in [rat(2, 1), rat(3, 1), rat(5, 1), rat(-1, 1), rat(1, 2)] {
            if let Some(d) = detect_degeneration(&sym, &s) {
                ran.push(format!("{:?}@{s} skipped ({d:?})", fam.tag));
                continue;
            }
            let predicted: Vec<Poly<Rat>> = fam
                .predicted_period
                .iter()
                .map(|p| specialize_poly(p, &s))
                .collect::<Result<_, _>>()
                .map_err(err)?;
            let spec = FFSpec::new(specialize_poly(fam.spec.d(), &s).map_err(err)?).map_err(err)?;
            let exp = ff_expand(&spec, DEFAULT_MAX_STEPS, DEFAULT_HEIGHT_BOUND).map_err(err)?;
            ensure(exp.period() == Some(predicted.as_slice()), || {
                format!("{:?} at s = {s}", fam.tag)
            })?;
            let direct = specialize_family(fam, &s).map_err(err)?;
            ensure(direct.predicted_period == predicted, || {
                format!("{:?} at s = {s}: formulas", fam.tag)
            })?;
            ran.push(format!("{:?}@{s}", fam.tag));
        }
    }
    Ok(ran.join(" "))
}

fn negative_control() -> Check {
    let spec = FFSpec::new(poly(&[(1, 1), (1, 1), (0, 1), (0, 1), (1, 1)])).map_err(err)?;
    let exp = ff_expand(&spec, DEFAULT_MAX_STEPS, DEFAULT_HEIGHT_BOUND).map_err(err)?;
    ensure(
        exp.status() == &FFStatus::Aborted(AbortReason::HeightBound),
        || format!("status {:?}", exp.status()),
    )?;
    Ok(format!("aborted after {} steps", exp.quotients().len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("golden expansions", golden_expansions),
        ("tableau and odd midpoint of sqrt 61", tableau_reproduction),
        ("general solve, prefix [1, 4]", prefix_1_4),
        (
            "general solve and Q = Q', prefix [1, 4, 3, 1, 2]",
            prefix_1_4_3_1_2,
        ),
        ("P = P' constraints, prefix [2]", prefix_2_even_midpoint),
        (
            "prefix identities and norm identity sweep",
            prefix_identity_sweep,
        ),
        ("palindrome and period-shape sweep", shape_sweep),
        ("unit round trip", unit_round_trip),
        ("classical round trip", classical_round_trip),
        ("function-field families over Q(s)", function_field_golden),
        (
            "specializations commute with expansion",
            specialization_suite,
        ),
        ("generic quartic aborts on height", negative_control),
    ];
    let mut failed = 0;
    for (k, (name, check)) in (1..).zip(criteria) {
        match check() {
            Ok(detail) => println!("PASS {k:>2}  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {k:>2}  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
