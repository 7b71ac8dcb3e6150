use std::process::Command;

use cfquad_cli::{parse_poly, run, OutputDoc};
use cfquad_core::arith::{Poly, Rat, RatFunc};
use proptest::prelude::*;
use serde_json::json;

fn cfquad(args: &[&str]) -> cfquad_cli::RunOutput {
    run(std::iter::once("cfquad").chain(args.iter().copied()))
}

fn doc(args: &[&str]) -> OutputDoc {
    let mut full = args.to_vec();
    full.push("--json");
    let out = cfquad(&full);
    OutputDoc::from_json(&out.stdout).unwrap()
}

#[test]
fn expand_sqrt61() {
    let out = cfquad(&["expand", "--trace", "0", "--norm", "-61"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("[7; 1, 4, 3, 1, 2, 2, 1, 3, 4, 1, 14]"));
    assert!(out.stdout.contains(" h  P_h  Q_h  a_h"));
    let d = doc(&["expand", "--trace", "0", "--norm", "-61"]);
    assert_eq!(d.status, "ok");
    assert_eq!(
        d.result["period"],
        json!(["1", "4", "3", "1", "2", "2", "1", "3", "4", "1", "14"])
    );
    assert_eq!(
        d.result["tableau"][1],
        json!({"h": 1, "P": "7", "Q": "12", "a": "1"})
    );
    assert_eq!(
        d.result["unit"],
        json!({"x": "29718", "y": "3805", "norm": -1})
    );
}

#[test]
fn expand_sqrt_sugar_agrees() {
    let a = doc(&["expand", "--trace", "0", "--norm", "-61"]);
    let b = doc(&["expand-sqrt", "--d", "61"]);
    assert_eq!(a.result, b.result);
}

#[test]
fn json_is_stable_and_round_trips() {
    let args = ["verify-family", "--family", "m5", "--s", "2", "--json"];
    let first = cfquad(&args).stdout;
    assert_eq!(first, cfquad(&args).stdout);
    let d = OutputDoc::from_json(&first).unwrap();
    assert_eq!(d.to_json() + "\n", first);
}

#[test]
fn classical_2_2() {
    let d = doc(&["classical", "--palindrome", "2,2", "--L", "-1"]);
    assert_eq!(d.status, "admissible");
    let i = &d.result["instance"];
    assert_eq!(
        (&i["t"], &i["A"], &i["D"]),
        (&json!("1"), &json!("4"), &json!("61"))
    );
    let out = cfquad(&["classical", "--palindrome", "2,2", "--L", "1"]);
    assert_eq!(out.code, 1);
    let d = doc(&["classical", "--palindrome", "2,2", "--L", "0"]);
    assert_eq!(d.status, "admissible_with_collapse");
    assert_eq!(d.result["primitive_period"], json!(["2"]));
}

#[test]
fn general_and_special() {
    let d = doc(&["general", "--prefix", "1,4", "--K1", "-2", "--L", "4"]);
    assert_eq!(d.result["instance"]["K2"], json!("-2"));
    assert_eq!(d.result["instance"]["D"], json!("244"));

    let d = doc(&[
        "special",
        "--mode",
        "qq",
        "--prefix",
        "1,4,3,1,2",
        "--K1",
        "14",
    ]);
    assert_eq!(d.result["instance"]["Q"], json!("5"));
    assert_eq!(d.result["instance"]["midpoint"], json!("odd"));

    let out = cfquad(&["special", "--mode", "pp", "--prefix", "2"]);
    assert_eq!(
        out.stdout,
        "K2 = K1\nA - t - P = (Q - 1)/2\nQ odd\n4*K1 ≡ -1 (mod Q)\n"
    );

    let d = doc(&[
        "special", "--mode", "pp", "--prefix", "2", "--Q", "3", "--K1", "2",
    ]);
    assert_eq!(d.status, "admissible");
    let out = cfquad(&[
        "special", "--mode", "pp", "--prefix", "2", "--Q", "3", "--K1", "1",
    ]);
    assert_eq!(out.code, 1);
    let out = cfquad(&["special", "--mode", "pp", "--prefix", "2", "--Q", "3"]);
    assert_eq!(out.code, 2);
}

#[test]
fn from_unit_recovers_period() {
    let d = doc(&["from-unit", "--x", "29718", "--y", "3805", "--norm", "-61"]);
    assert_eq!(d.result["a0"], json!("7"));
    assert_eq!(
        d.result["period"],
        json!(["1", "4", "3", "1", "2", "2", "1", "3", "4", "1", "14"])
    );
}

#[test]
fn function_field_commands() {
    let d = doc(&["ff-expand", "--d", "X^4+1"]);
    assert_eq!(d.status, "periodic");
    assert_eq!(d.result["regulator"], json!(2));
    assert_eq!(d.result["period"], json!([["0/1", "0/1", "2/1"]]));

    let d = doc(&["ff-expand", "--d", "(X^2+7/4)^2+8*X-4"]);
    assert_eq!(d.result["regulator"], json!(5));

    let d = doc(&[
        "ff-expand",
        "--d",
        "(X^2 - (s^2-6*s+1)/4)^2 + 4*s*(X - (s-1)/2)",
        "--s",
        "3",
    ]);
    assert_eq!(
        (d.result["field"].as_str(), d.result["regulator"].as_u64()),
        (Some("Q"), Some(5))
    );

    let d = doc(&[
        "ff-expand",
        "--d",
        "(X^2 - (s^2-6*s+1)/4)^2 + 4*s*(X - (s-1)/2)",
    ]);
    assert_eq!(
        (d.result["field"].as_str(), d.result["regulator"].as_u64()),
        (Some("Q(s)"), Some(5))
    );

    let out = cfquad(&["ff-expand", "--d", "X^4+X+1", "--json"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        OutputDoc::from_json(&out.stdout).unwrap().status,
        "aborted_height"
    );
}

#[test]
fn verify_family() {
    let d = doc(&["verify-family", "--family", "m7", "--s", "symbolic"]);
    assert_eq!(d.status, "match");
    assert_eq!(
        (&d.result["match"], &d.result["observed_regulator"]),
        (&json!(true), &json!(7))
    );
    let d = doc(&["verify-family", "--family", "m5", "--s", "-1"]);
    assert_eq!(d.result["observed_regulator"], json!(5));
    assert_eq!(d.result["degeneration"], json!(null));
    let out = cfquad(&["verify-family", "--family", "m7", "--s", "1"]);
    assert_eq!(out.code, 1);
    assert_eq!(
        cfquad(&["verify-family", "--family", "m5", "--s", "0"]).code,
        1
    );
}

#[test]
fn usage_errors() {
    assert_eq!(cfquad(&["expand", "--trace", "0"]).code, 2);
    assert_eq!(cfquad(&["bogus"]).code, 2);
    let out = cfquad(&["ff-expand", "--d", "X^y"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1, column 3"));
    assert!(out.stderr.contains("atom   :="));
    assert_eq!(cfquad(&["expand", "--trace", "0", "--norm", "4"]).code, 2);
    assert_eq!(cfquad(&["--help"]).code, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cfquad");
    let ok = Command::new(bin)
        .args(["expand", "--trace", "1", "--norm", "-15"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("[4; 2, 2, 7]"));
    let rejected = Command::new(bin)
        .args(["classical", "--palindrome", "2,2", "--L", "1"])
        .output()
        .unwrap();
    assert_eq!(rejected.status.code(), Some(1));
    let usage = Command::new(bin).arg("expand").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

proptest! {
    #[test]
    fn display_parses_back(cs in prop::collection::vec(small_rat(), 0..6)) {
        let p = Poly::new(cs);
        let e = parse_poly(&p.to_string()).unwrap();
        prop_assert_eq!(e.to_rational().unwrap(), p);
    }

    #[test]
    fn display_parses_back_over_qs(
        num in prop::collection::vec(small_rat(), 1..4),
        den in prop::collection::vec(small_rat(), 1..3),
        k in 0usize..3,
    ) {
        prop_assume!(den.iter().any(|c| *c != Rat::from_integer(0.into())));
        let c = RatFunc::new(Poly::new(num), Poly::new(den)).unwrap();
        let p = Poly::monomial(c, k) + Poly::x();
        let e = parse_poly(&p.to_string()).unwrap();
        prop_assert_eq!(e.poly, p);
    }

    #[test]
    fn expand_docs_round_trip(t in 0i64..=1, n in -500i64..=-1) {
        let out = cfquad(&["expand", "--trace", &t.to_string(), "--norm", &n.to_string(), "--json"]);
        prop_assume!(out.code == 0);
        let d = OutputDoc::from_json(&out.stdout).unwrap();
        prop_assert_eq!(OutputDoc::from_json(&d.to_json()).unwrap(), d);
    }
}
