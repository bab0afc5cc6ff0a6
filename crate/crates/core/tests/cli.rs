//! End-to-end runs of the command-line binary.

use serde_json::Value;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_cyclocohom");

fn run(args: &[&str]) -> (i32, Value) {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("CYCLOCOHOM_PRECISION_CEILING");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let json = if text.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"))
    };
    (code, json)
}

fn check(report: &Value, name: &str) -> bool {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["pass"]
        .as_bool()
        .unwrap()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn top_level_schema() {
    let (code, r) = run(&["regular-check", "--p", "37"]);
    assert_eq!(code, 0);
    for key in ["input", "result", "checks", "timing_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["result"]["regular"], false);
    assert_eq!(r["result"]["indices"], serde_json::json!([32]));
}

#[test]
fn units_verify_passes() {
    let (code, r) = run(&["units", "verify", "--p", "5", "--n", "1", "--seed", "7"]);
    assert_eq!(code, 0);
    for name in ["xi_relation_1", "xi_minus_a", "galois_relation", "rank"] {
        assert!(check(&r, name));
    }
}

#[test]
fn same_seed_same_output() {
    let args = ["units", "verify", "--p", "7", "--seed", "3"];
    let (_, a) = run(&args);
    let (_, b) = run(&args);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn zero_pair_solves_to_zero() {
    let (code, r) = run(&["coboundary", "solve", "--p", "3", "--m", "1", "--group", "kummer2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["solvable"], true);
    assert_eq!(r["result"]["alpha_is_zero"], true);
}

#[test]
fn lift_reports_obstruction_and_lift() {
    let (code, r) = run(&["lift", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["liftable"], false);
    let (code, r) = run(&["lift", "--p", "3", "--kx", "1,0", "--ky", "2,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["liftable"], true);
    assert!(check(&r, "nonab_cocycle") && check(&r, "abelianizes"));
}

#[test]
fn cohomology_engines_agree() {
    let (code, r) = run(&["cohomology", "--p", "5", "--m", "2", "--group", "one-plus-p", "--module", "twist:2"]);
    assert_eq!(code, 0);
    assert!(check(&r, "engines_agree"));
    assert_eq!(r["result"]["cohomology"][0]["order"], "5");
    let (code, r) = run(&["cohomology", "--p", "3", "--group", "cyclic:3", "--module", "trivial", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cohomology"][0]["invariants"], serde_json::json!([3]));
}

#[test]
fn spectral_subcommands() {
    let (code, r) = run(&["spectral", "row0", "--p", "5", "--deg", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["order"], "1");
    let (code, r) = run(&["spectral", "one-plus-p", "--p", "7", "--n", "2", "--deg", "2"]);
    assert_eq!(code, 0);
    assert!(check(&r, "bounded_by_p") && check(&r, "brute_force_agrees"));
    let (code, r) = run(&["spectral", "e11", "--p", "3", "--primes", "3,7"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["result"]["generators"].as_array().unwrap().len(), 4);
}

#[test]
fn valuation_subcommands() {
    let (code, r) = run(&["valuation", "primes", "--p", "5", "--q", "11"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["count"], 4);
    let (code, r) = run(&["valuation", "vector", "--p", "5", "--primes", "11", "--x", "3,-1"]);
    assert_eq!(code, 0);
    let total: u64 = r["result"]["vector"].as_array().unwrap().iter().map(|e| e[1].as_u64().unwrap()).sum();
    assert_eq!(total, 2);
    let (code, r) = run(&["valuation", "generators", "--p", "5", "--primes", "5,11"]);
    assert_eq!(code, 0);
    assert!(check(&r, "all_found") && check(&r, "surjective") && check(&r, "units_map_to_zero"));
}

#[test]
fn units_arith_and_power_test() {
    let (code, r) = run(&["units", "arith", "--p", "3", "--x", "0,1", "--y", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["product"], run(&["units", "arith", "--p", "3", "--x", "-1,-1"]).1["result"]["x"]);
    let (_, r) = run(&["units", "arith", "--p", "5", "--x", "1,1", "--y", "2"]);
    assert_eq!(r["result"]["quotient"], Value::Null);
    let (code, r) = run(&["units", "power-test", "--p", "5", "--x", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["verdict"], "not_power");
}

#[test]
fn flag_errors_exit_2() {
    assert_eq!(run(&["units", "verify", "--p", "4"]).0, 2);
    assert_eq!(run(&["regular-check", "--p", "2"]).0, 2);
    assert_eq!(run(&["cohomology", "--p", "3", "--group", "nonsense"]).0, 2);
    assert_eq!(run(&["spectral", "row0"]).0, 2);
    let (code, r) = run(&["valuation", "primes", "--p", "5", "--q", "12"]);
    assert_eq!(code, 2);
    assert_eq!(r["error"]["kind"], "flag");
}

#[test]
fn computation_errors_exit_3() {
    let (code, r) = run(&["spectral", "e11", "--p", "5", "--n", "2", "--m", "1", "--primes", "5"]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "unsupported");
    let (code, r) = run(&["spectral", "e11", "--p", "37", "--primes", "37"]);
    assert_eq!(code, 3);
    assert_eq!(r["error"]["kind"], "irregular_prime");
}

#[test]
fn precision_ceiling_flag_beats_env() {
    // v_P(11^3) = 3 needs precision above 1
    let args = ["valuation", "vector", "--p", "5", "--primes", "11", "--x", "1331"];
    let (code, r) = run_env(&args, &[("CYCLOCOHOM_PRECISION_CEILING", "1")]);
    assert_eq!(code, 3, "{r}");
    assert_eq!(r["error"]["kind"], "precision_ceiling");
    let mut with_flag = args.to_vec();
    with_flag.extend(["--precision-ceiling", "64"]);
    let (code, _) = run_env(&with_flag, &[("CYCLOCOHOM_PRECISION_CEILING", "1")]);
    assert_eq!(code, 0);
}

#[test]
fn text_format_lists_checks() {
    let out = Command::new(BIN)
        .args(["regular-check", "--p", "5", "--format", "text"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS recurrence"));
    assert!(text.contains("regular: true"));
}
