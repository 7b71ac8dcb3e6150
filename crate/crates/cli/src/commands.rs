use std::ffi::OsString;
use std::fmt::Write as _;

use cfquad_core::arith::{Field, Rat, RatFunc};
use cfquad_core::funcfield::{
    detect_degeneration, family, ff_expand, ff_verify_family, regulator_of, FFExpansion, FFSpec,
    FamilyTag, DEFAULT_HEIGHT_BOUND, DEFAULT_MAX_STEPS,
};
use cfquad_core::prescribe::{
    classical_family, classical_instantiate, general_solve, p_eq_pprime_constraints,
    special_p_eq_pprime, special_q_eq_qprime, GeneralInstance, Outcome, TPolicy,
};
use cfquad_core::words::{decomposition_period, unit_to_period};
use cfquad_core::{expand, fundamental_unit, CfWord, Error, Int, MidpointKind, QuadraticSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::output::{OutputDoc, ToJson};
use crate::parse::{parse_poly, GRAMMAR};

const EXIT_OK: i32 = 0;
const EXIT_REJECTED: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "cfquad",
    version,
    about = "Exact continued fractions of quadratic integers and of square roots of polynomials",
    after_help = concat!(
        "Words are comma-separated integers, e.g. --palindrome 2,2.\n",
        "Polynomials are quoted expressions in X with optional parameter s:\n",
        "  expr   := term (('+' | '-') term)*\n",
        "  term   := unary (('*' | '/') unary)*\n",
        "  unary  := ('+' | '-') unary | power\n",
        "  power  := atom ('^' INTEGER)?\n",
        "  atom   := INTEGER | 'X' | 's' | '(' expr ')'\n",
        "Exit codes: 0 success, 1 inadmissible or mismatch, 2 usage error."
    )
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Shared {
    /// Step budget (default: 10·⌊√D⌋ + 64 over ℤ, 10000 over F[X])
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Abort function-field expansions when (P, Q) exceed this many digits
    #[arg(long, global = true, default_value_t = DEFAULT_HEIGHT_BOUND)]
    height_bound: usize,
    /// Emit a JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SpecialMode {
    /// Q = Q' (middle of an odd period)
    Qq,
    /// P = P' (middle of an even period)
    Pp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    M5,
    M7,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand the larger root of X² − tX + n
    Expand {
        #[arg(long, allow_negative_numbers = true)]
        trace: Int,
        #[arg(long, allow_negative_numbers = true)]
        norm: Int,
    },
    /// Expand √d
    ExpandSqrt {
        #[arg(long, allow_negative_numbers = true)]
        d: Int,
    },
    /// Recover the period word from a unit x − yω
    FromUnit {
        #[arg(long, allow_negative_numbers = true)]
        x: Int,
        #[arg(long, allow_negative_numbers = true)]
        y: Int,
        #[arg(long, allow_negative_numbers = true, default_value = "0")]
        trace: Int,
        #[arg(long, allow_negative_numbers = true)]
        norm: Int,
    },
    /// Quadratic integer whose period is a palindrome followed by 2A − t
    Classical {
        #[arg(long, value_parser = parse_word)]
        palindrome: CfWord<Int>,
        #[arg(long = "L", visible_alias = "l", allow_negative_numbers = true)]
        l: Int,
        /// Force the trace instead of choosing 0 or 1
        #[arg(long, allow_negative_numbers = true)]
        t: Option<Int>,
    },
    /// Quadratic integer whose period starts with a prefix, from (K1, L)
    General {
        #[arg(long, value_parser = parse_word)]
        prefix: CfWord<Int>,
        #[arg(long = "K1", visible_alias = "k1", allow_negative_numbers = true)]
        k1: Int,
        #[arg(long = "L", visible_alias = "l", allow_negative_numbers = true)]
        l: Int,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<Int>,
    },
    /// Prefix ending at the symmetry midpoint
    Special {
        #[arg(long, value_enum)]
        mode: SpecialMode,
        #[arg(long, value_parser = parse_word)]
        prefix: CfWord<Int>,
        #[arg(long = "K1", visible_alias = "k1", allow_negative_numbers = true)]
        k1: Option<Int>,
        /// Q for --mode pp; with neither Q nor K1 only the constraints are printed
        #[arg(long = "Q", visible_alias = "q", allow_negative_numbers = true)]
        q: Option<Int>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<Int>,
    },
    /// Expand √D for a polynomial D over ℚ or ℚ(s)
    FfExpand {
        /// Polynomial expression, e.g. "X^4+1"
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        /// Substitute a rational value for s
        #[arg(long, allow_negative_numbers = true, value_parser = parse_rat)]
        s: Option<Rat>,
    },
    /// Re-expand one of the quartic families and compare with its known period
    VerifyFamily {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// `symbolic` or a rational value
        #[arg(long, allow_negative_numbers = true, default_value = "symbolic")]
        s: String,
    },
}

/// What a single invocation produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub doc: Option<OutputDoc>,
}

fn parse_word(s: &str) -> Result<CfWord<Int>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(CfWord::empty());
    }
    s.split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(CfWord)
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: Int = n.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    let d: Int = d.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if d == Int::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rat::new(n, d))
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

struct Report {
    doc: OutputDoc,
    text: String,
    code: i32,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (text, String::new())
            } else {
                (String::new(), text)
            };
            return RunOutput {
                code,
                stdout,
                stderr,
                doc: None,
            };
        }
    };
    match dispatch(&cli) {
        Ok(Report { doc, text, code }) => {
            let stdout = if cli.shared.json { doc.to_json() + "\n" } else { text };
            RunOutput { code, stdout, stderr: String::new(), doc: Some(doc) }
        }
        Err(Failure::Usage(msg)) => RunOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n\nPolynomial grammar:\n{GRAMMAR}\n\nSee `cfquad --help` for flags.\n"),
            doc: None,
        },
        Err(Failure::Core(e)) => RunOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            doc: None,
        },
    }
}

fn policy(t: &Option<Int>) -> TPolicy {
    t.clone().map_or(TPolicy::Auto, TPolicy::Force)
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let sh = &cli.shared;
    match &cli.command {
        Command::Expand { trace, norm } => {
            let spec = QuadraticSpec::new(trace.clone(), norm.clone())?;
            expand_report(
                "expand",
                json!({"t": trace.to_json(), "n": norm.to_json()}),
                &spec,
                sh,
            )
        }
        Command::ExpandSqrt { d } => {
            let spec = QuadraticSpec::sqrt_of(d.clone())?;
            expand_report("expand-sqrt", json!({"d": d.to_json()}), &spec, sh)
        }
        Command::FromUnit { x, y, trace, norm } => from_unit(x, y, trace, norm),
        Command::Classical { palindrome, l, t } => classical(palindrome, l, t),
        Command::General { prefix, k1, l, t } => {
            let inputs = json!({
                "prefix": prefix.to_json(), "K1": k1.to_json(), "L": l.to_json(),
                "t": t.as_ref().map(ToJson::to_json),
            });
            let out = general_solve(prefix, k1, l, &policy(t))?;
            Ok(general_report("general", inputs, &out))
        }
        Command::Special {
            mode,
            prefix,
            k1,
            q,
            t,
        } => special(*mode, prefix, k1, q, t),
        Command::FfExpand { d, s } => ff_expand_cmd(d, s, sh),
        Command::VerifyFamily { family, s } => verify_family(*family, s, sh),
    }
}

fn fmt_expansion(a0: &impl std::fmt::Display, period: &[impl std::fmt::Display]) -> String {
    let rest: Vec<String> = period.iter().map(ToString::to_string).collect();
    format!("[{a0}; {}]", rest.join(", "))
}

/// Right-aligned columns.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header.iter().map(|s| s.to_string()).collect::<Vec<_>>())
        .chain(rows.iter().cloned())
    {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn kind_name(k: MidpointKind) -> &'static str {
    match k {
        MidpointKind::Odd => "odd",
        MidpointKind::Even => "even",
    }
}

fn expand_report(
    command: &str,
    inputs: Value,
    spec: &QuadraticSpec,
    sh: &Shared,
) -> Result<Report, Failure> {
    let steps = sh.max_steps.unwrap_or_else(|| spec.default_max_steps());
    let exp = expand(spec, steps)?;
    let unit = fundamental_unit(&exp);
    let mid = exp.midpoint();
    let rows: Vec<Value> = exp
        .tableau()
        .iter()
        .map(|r| json!({"h": r.h, "P": r.p.to_json(), "Q": r.q.to_json(), "a": r.a.to_json()}))
        .collect();
    let result = json!({
        "t": spec.t().to_json(),
        "n": spec.n().to_json(),
        "discriminant": spec.discriminant().to_json(),
        "a0": exp.a0().to_json(),
        "preperiod": exp.preperiod().to_json(),
        "period": exp.period().to_json(),
        "period_length": exp.period_len(),
        "tableau": rows,
        "midpoint": {
            "kind": kind_name(mid.kind), "index": mid.index,
            "P": mid.p.to_json(), "Q": mid.q.to_json(),
        },
        "unit": {"x": unit.x.to_json(), "y": unit.y.to_json(), "norm": unit.norm_sign},
    });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "t = {}, n = {}, D = {}",
        spec.t(),
        spec.n(),
        spec.discriminant()
    );
    let _ = writeln!(
        text,
        "expansion: {}",
        fmt_expansion(exp.a0(), exp.period().entries())
    );
    let _ = writeln!(text, "period length: {}", exp.period_len());
    let cells: Vec<Vec<String>> = exp
        .tableau()
        .iter()
        .map(|r| {
            vec![
                r.h.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.a.to_string(),
            ]
        })
        .collect();
    text.push_str(&table(&["h", "P_h", "Q_h", "a_h"], &cells));
    let _ = match mid.kind {
        MidpointKind::Odd => writeln!(
            text,
            "midpoint: odd, Q_{0} = Q_{1} = {2}",
            mid.index,
            mid.index + 1,
            mid.q
        ),
        MidpointKind::Even => writeln!(
            text,
            "midpoint: even, P_{0} = P_{1} = {2}, Q_{0} = {3}",
            mid.index,
            mid.index + 1,
            mid.p,
            mid.q
        ),
    };
    let _ = writeln!(
        text,
        "unit: x = {}, y = {}, norm {}",
        unit.x, unit.y, unit.norm_sign
    );
    Ok(Report {
        doc: OutputDoc::new(command, inputs, result, "ok"),
        text,
        code: EXIT_OK,
    })
}

fn from_unit(x: &Int, y: &Int, t: &Int, n: &Int) -> Result<Report, Failure> {
    let inputs = json!({"x": x.to_json(), "y": y.to_json(), "t": t.to_json(), "n": n.to_json()});
    let word = unit_to_period(x, y, t, n)?;
    let (a0, period) =
        decomposition_period(&word).ok_or_else(|| Error::DegenerateWord(word.to_string()))?;
    let result =
        json!({"decomposition": word.to_json(), "a0": a0.to_json(), "period": period.to_json()});
    let text = format!(
        "decomposition: {word}\nexpansion: {}\n",
        fmt_expansion(&a0, period.entries())
    );
    Ok(Report {
        doc: OutputDoc::new("from-unit", inputs, result, "ok"),
        text,
        code: EXIT_OK,
    })
}

fn reason_json<I>(out: &Outcome<I>) -> Value {
    match out {
        Outcome::Inadmissible(r) => json!({"tag": r.tag(), "message": r.to_string()}),
        _ => Value::Null,
    }
}

fn outcome_code<I>(out: &Outcome<I>) -> i32 {
    if out.instance().is_some() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn classical(pal: &CfWord<Int>, l: &Int, t: &Option<Int>) -> Result<Report, Failure> {
    let inputs = json!({"palindrome": pal.to_json(), "L": l.to_json(), "t": t.as_ref().map(ToJson::to_json)});
    let fam = classical_family(pal)?;
    let out = classical_instantiate(&fam, l, &policy(t));
    let instance = out.instance().map(|i| {
        json!({
            "L": i.l.to_json(), "t": i.t.to_json(), "n": i.n.to_json(), "A": i.a.to_json(),
            "T": i.trace_shift.to_json(), "N": i.norm_shift.to_json(), "D": i.discriminant.to_json(),
        })
    });
    let primitive = match &out {
        Outcome::AdmissibleWithCollapse {
            primitive_period, ..
        } => primitive_period.to_json(),
        _ => Value::Null,
    };
    let result = json!({
        "palindrome": pal.to_json(),
        "r": fam.r,
        "norm_form": {"constant": fam.norm_form.constant.to_json(), "slope": fam.norm_form.slope.to_json()},
        "trace_form": {"constant": fam.trace_form.constant.to_json(), "slope": fam.trace_form.slope.to_json()},
        "t_must_be_odd": fam.parity.t_must_be_odd(l),
        "instance": instance,
        "primitive_period": primitive,
        "reason": reason_json(&out),
    });
    let mut text = format!(
        "palindrome {pal}, r = {}\nN(L) = {}\nT(L) = {}\n",
        fam.r, fam.norm_form, fam.trace_form
    );
    match &out {
        Outcome::Inadmissible(r) => {
            let _ = writeln!(text, "L = {l}: inadmissible ({r})");
        }
        _ => {
            let i = out.instance().expect("admissible");
            let _ = writeln!(
                text,
                "L = {l}: t = {}, n = {}, A = {}, D = {}\nexpansion: {}",
                i.t,
                i.n,
                i.a,
                i.discriminant,
                fmt_expansion(
                    &i.a,
                    &[pal.entries(), &[Int::from(2) * &i.a - &i.t]].concat()
                )
            );
            if let Outcome::AdmissibleWithCollapse {
                primitive_period, ..
            } = &out
            {
                let _ = writeln!(text, "collapsed: true period is {primitive_period}");
            }
        }
    }
    let code = outcome_code(&out);
    Ok(Report {
        doc: OutputDoc::new("classical", inputs, result, out.status()),
        text,
        code,
    })
}

fn instance_json(i: &GeneralInstance) -> Value {
    json!({
        "K1": i.k1.to_json(), "L": i.l.to_json(), "k": i.k.to_json(), "K2": i.k2.to_json(),
        "t": i.t.to_json(), "n": i.n.to_json(), "A": i.a.to_json(), "P": i.p.to_json(), "Q": i.q.to_json(),
        "T": i.trace_shift.to_json(), "N": i.norm_shift.to_json(), "D": i.discriminant.to_json(),
        "midpoint": i.midpoint.map(kind_name),
    })
}

fn general_report(command: &str, inputs: Value, out: &Outcome<GeneralInstance>) -> Report {
    let result = json!({
        "instance": out.instance().map(instance_json),
        "reason": reason_json(out),
    });
    let text = match out.instance() {
        Some(i) => {
            let mut s = format!(
                "K1 = {}, L = {}, k = {}, K2 = {}\nt = {}, n = {}, D = {}\nA = {}, P = {}, Q = {}\n",
                i.k1, i.l, i.k, i.k2, i.t, i.n, i.discriminant, i.a, i.p, i.q
            );
            if let Some(k) = i.midpoint {
                let _ = writeln!(s, "midpoint: {}", kind_name(k));
            }
            s
        }
        None => format!(
            "inadmissible: {}\n",
            match out {
                Outcome::Inadmissible(r) => r.to_string(),
                _ => unreachable!(),
            }
        ),
    };
    Report {
        doc: OutputDoc::new(command, inputs, result, out.status()),
        text,
        code: outcome_code(out),
    }
}

fn special(
    mode: SpecialMode,
    prefix: &CfWord<Int>,
    k1: &Option<Int>,
    q: &Option<Int>,
    t: &Option<Int>,
) -> Result<Report, Failure> {
    let mode_name = match mode {
        SpecialMode::Qq => "qq",
        SpecialMode::Pp => "pp",
    };
    let inputs = json!({
        "mode": mode_name, "prefix": prefix.to_json(),
        "K1": k1.as_ref().map(ToJson::to_json), "Q": q.as_ref().map(ToJson::to_json),
        "t": t.as_ref().map(ToJson::to_json),
    });
    match (mode, k1, q) {
        (SpecialMode::Qq, Some(k1), None) => {
            let out = special_q_eq_qprime(prefix, k1, &policy(t))?;
            Ok(general_report("special", inputs, &out))
        }
        (SpecialMode::Qq, _, _) => Err(Failure::Usage("--mode qq takes --K1 and no --Q".into())),
        (SpecialMode::Pp, Some(k1), Some(q)) => {
            let out = special_p_eq_pprime(prefix, q, k1, &policy(t))?;
            Ok(general_report("special", inputs, &out))
        }
        (SpecialMode::Pp, None, None) => {
            let c = p_eq_pprime_constraints(prefix)?;
            let statements = c.describe();
            let result = json!({
                "constraints": {
                    "k_q_coeff": c.k_q_coeff.to_json(),
                    "k_constant": c.k_constant.to_json(),
                    "k_denominator": c.k_denominator.to_json(),
                    "q_modulus": c.q_modulus.to_json(),
                    "q_residue": c.q_residue.to_json(),
                    "k2_minus_k1_factor": c.k2_minus_k1_factor.to_json(),
                    "congruence_k1_coeff": c.congruence_k1_coeff.to_json(),
                    "congruence_rhs": c.congruence_rhs.to_json(),
                },
                "statements": statements,
            });
            let text = statements.iter().map(|s| format!("{s}\n")).collect();
            Ok(Report {
                doc: OutputDoc::new("special", inputs, result, "ok"),
                text,
                code: EXIT_OK,
            })
        }
        (SpecialMode::Pp, _, _) => Err(Failure::Usage(
            "--mode pp takes both --Q and --K1, or neither".into(),
        )),
    }
}

fn ff_result<F: Field + ToJson>(exp: &FFExpansion<F>, field: &str) -> (Value, String) {
    let spec = exp.spec();
    let rows: Vec<Value> = exp
        .quotients()
        .iter()
        .enumerate()
        .map(|(h, a)| {
            let st = &exp.states()[h];
            json!({"h": h, "P": st.p.to_json(), "Q": st.q.to_json(), "a": a.to_json()})
        })
        .collect();
    let regulator = regulator_of(exp).ok();
    let value = json!({
        "field": field,
        "D": spec.d().to_json(),
        "A": spec.a().to_json(),
        "R": spec.r().to_json(),
        "expansion_status": exp.status().tag(),
        "quotients": exp.quotients().to_json(),
        "tableau": rows,
        "period": exp.period().map(ToJson::to_json),
        "period_start": exp.period_start(),
        "regulator": regulator,
    });
    let mut text = format!(
        "D = {}\nA = {}\nR = {}\nstatus: {}\n",
        spec.d(),
        spec.a(),
        spec.r(),
        exp.status().tag()
    );
    if let Some(p) = exp.period() {
        let _ = writeln!(text, "expansion: {}", fmt_expansion(&exp.quotients()[0], p));
        let _ = writeln!(text, "regulator: {}", regulator.expect("periodic"));
    }
    let cells: Vec<Vec<String>> = rows_text(exp);
    text.push_str(&table(&["h", "P_h", "Q_h", "a_h"], &cells));
    (value, text)
}

fn rows_text<F: Field>(exp: &FFExpansion<F>) -> Vec<Vec<String>> {
    exp.quotients()
        .iter()
        .enumerate()
        .map(|(h, a)| {
            let st = &exp.states()[h];
            vec![
                h.to_string(),
                st.p.to_string(),
                st.q.to_string(),
                a.to_string(),
            ]
        })
        .collect()
}

fn ff_expand_cmd(d: &str, s: &Option<Rat>, sh: &Shared) -> Result<Report, Failure> {
    let expr = parse_poly(d).map_err(|e| Failure::Usage(format!("in --d: {e}")))?;
    let inputs = json!({"d": d, "s": s.as_ref().map(ToJson::to_json)});
    let steps = sh.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    let (value, text, status) = match (s, expr.to_rational()) {
        (Some(v), _) => {
            let exp = ff_expand(&FFSpec::new(expr.specialize(v)?)?, steps, sh.height_bound)?;
            let (val, txt) = ff_result(&exp, "Q");
            (val, txt, exp.status().tag())
        }
        (None, Some(p)) => {
            let exp = ff_expand(&FFSpec::new(p)?, steps, sh.height_bound)?;
            let (val, txt) = ff_result(&exp, "Q");
            (val, txt, exp.status().tag())
        }
        (None, None) => {
            let exp = ff_expand(&FFSpec::new(expr.poly.clone())?, steps, sh.height_bound)?;
            let (val, txt) = ff_result(&exp, "Q(s)");
            (val, txt, exp.status().tag())
        }
    };
    Ok(Report {
        doc: OutputDoc::new("ff-expand", inputs, value, status),
        text,
        code: EXIT_OK,
    })
}

fn verify_family(tag: FamilyArg, s: &str, sh: &Shared) -> Result<Report, Failure> {
    let tag = match tag {
        FamilyArg::M5 => FamilyTag::M5,
        FamilyArg::M7 => FamilyTag::M7,
    };
    let inputs = json!({"family": tag.name(), "s": s});
    let steps = sh.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
    if s == "symbolic" {
        return verify_with(tag, RatFunc::var(), None, inputs, steps, sh.height_bound);
    }
    let value = parse_rat(s).map_err(|e| Failure::Usage(format!("--s: {e}")))?;
    let degeneration = family(tag, RatFunc::var())
        .and_then(|fam| ff_expand(&fam.spec, steps, sh.height_bound))
        .ok()
        .and_then(|exp| detect_degeneration(&exp, &value))
        .map(|d| format!("{d:?}"));
    verify_with(tag, value, degeneration, inputs, steps, sh.height_bound)
}

fn verify_with<F: Field + ToJson>(
    tag: FamilyTag,
    s: F,
    degeneration: Option<String>,
    inputs: Value,
    steps: usize,
    height_bound: usize,
) -> Result<Report, Failure> {
    let fam = match family(tag, s) {
        Ok(f) => f,
        Err(e @ Error::InadmissibleParameter(_)) => {
            let result = json!({"reason": e.to_string()});
            let text = format!("inadmissible: {e}\n");
            return Ok(Report {
                doc: OutputDoc::new("verify-family", inputs, result, "inadmissible"),
                text,
                code: EXIT_REJECTED,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let rep = ff_verify_family(&fam, steps, height_bound)?;
    let result = json!({
        "family": tag.name(),
        "s": fam.s.to_json(),
        "D": fam.spec.d().to_json(),
        "predicted_period": fam.predicted_period.to_json(),
        "predicted_regulator": fam.predicted_regulator,
        "observed_period": rep.observed_period.as_deref().map(ToJson::to_json),
        "observed_regulator": rep.observed_regulator,
        "expansion_status": rep.status.tag(),
        "match": rep.matches,
        "degeneration": degeneration,
        "k": fam.k.as_ref().map(ToJson::to_json),
        "k1": fam.k1.as_ref().map(ToJson::to_json),
    });
    let mut text = format!(
        "family {} at s = {}\nD = {}\n",
        tag.name(),
        fam.s,
        fam.spec.d()
    );
    let a0 = fam.spec.a();
    let _ = writeln!(
        text,
        "predicted: {}",
        fmt_expansion(a0, &fam.predicted_period)
    );
    match &rep.observed_period {
        Some(p) => {
            let _ = writeln!(text, "observed:  {}", fmt_expansion(a0, p));
        }
        None => {
            let _ = writeln!(text, "observed:  {}", rep.status.tag());
        }
    }
    let reg = rep
        .observed_regulator
        .map_or("none".to_string(), |r| r.to_string());
    let _ = writeln!(
        text,
        "regulator: {reg} (predicted {})",
        fam.predicted_regulator
    );
    if let Some(d) = &degeneration {
        let _ = writeln!(text, "degeneration: {d}");
    }
    let _ = writeln!(text, "match: {}", rep.matches);
    let (status, code) = if rep.matches {
        ("match", EXIT_OK)
    } else {
        ("mismatch", EXIT_REJECTED)
    };
    Ok(Report {
        doc: OutputDoc::new("verify-family", inputs, result, status),
        text,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_rationals() {
        assert_eq!(parse_word("2, 2").unwrap(), CfWord::from_i64s(&[2, 2]));
        assert_eq!(parse_word("").unwrap(), CfWord::empty());
        assert!(parse_word("1,x").is_err());
        assert_eq!(parse_rat("-1/2").unwrap(), Rat::new((-1).into(), 2.into()));
        assert_eq!(parse_rat("3").unwrap(), Rat::from_integer(3.into()));
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn table_aligns_right() {
        let t = table(&["h", "P_h"], &[vec!["0".into(), "12".into()]]);
        assert_eq!(t, "h  P_h\n0   12\n");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
