use std::path::PathBuf;
use std::process::{Command, Output};

use clap::Parser;
use num_bigint::BigInt;
use quiverk::cli::{execute, Cli, Report, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, MAX_BINOMIAL_ENV};
use quiverk::FinGenAbGroup;
use serde_json::Value;

fn call(args: &[&str]) -> Report {
    call_env(args, None)
}

fn call_env(args: &[&str], limit: Option<&str>) -> Report {
    let cli = Cli::try_parse_from(std::iter::once("quiverk").chain(args.iter().copied())).unwrap();
    execute(&cli, limit)
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverk")).args(args).env_remove(MAX_BINOMIAL_ENV).output().unwrap()
}

fn suite() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/batch_suite.txt")
}

fn json(report: &Report) -> Value {
    serde_json::from_str(report.stdout.trim()).unwrap()
}

fn group(v: &Value) -> FinGenAbGroup {
    FinGenAbGroup::from_json(v).unwrap()
}

#[test]
fn rank_one_example() {
    let r = call(&["F=[3]; G=[4]"]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert_eq!(r.stdout, "K0 = Z/2\nK1 = Z/3\n");
}

#[test]
fn identity_pair_gives_free_groups() {
    let r = call(&["F=diag(1,1); G=diag(1,1)"]);
    assert_eq!(r.stdout, "K0 = Z^4\nK1 = Z^4\n");
}

#[test]
fn worked_example_with_every_section() {
    let r = call(&["--breakdown", "--check", "--closed-form", "F=diag(2,3); G=[[1,1],[0,1]]"]);
    assert_eq!(r.exit_code, EXIT_OK, "{}", r.stdout);
    assert!(r.stdout.starts_with("K0 = Z (+) Z/5\nK1 = Z (+) Z/2\n"));
    assert!(r.stdout.contains("levels:"));
    assert!(!r.stdout.contains("FAIL"));
    assert!(r.stdout.contains("PASS  det Ω(z_2) = ±x^(C_1 e_2)  (sign 1, exponent (0, 2))"));
}

#[test]
fn whitespace_and_newlines_are_insignificant() {
    let a = call(&["F = diag( 2 , 3 ) ;G=[[1, 1], [0,1]]"]);
    let b = call(&["F=diag(2,3)\nG=[[1,1],[0,1]]  # trailing comment"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.exit_code, EXIT_OK);
}

#[test]
fn input_from_file() {
    let dir = std::env::temp_dir().join(format!("quiverk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.txt");
    std::fs::write(&path, "F=diag(2,3)\nG=[[1,1],[0,1]]\n").unwrap();
    let r = call(&[path.to_str().unwrap()]);
    assert_eq!(r.stdout, call(&["F=diag(2,3); G=[[1,1],[0,1]]"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_schema_and_key_order() {
    let r = call(&["--json", "--breakdown", "F=diag(2,3); G=[[1,1],[0,1]]"]);
    let text = r.stdout.trim();
    let keys = ["\"d\"", "\"F\"", "\"G\"", "\"K0\"", "\"K1\"", "\"levels\"", "\"flags\"", "\"warnings\""];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    let v = json(&r);
    assert_eq!(v["d"], 2);
    assert_eq!(v["F"], serde_json::json!([[2, 0], [0, 3]]));
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    assert_eq!(v["levels"][1]["size"], 2);
    assert_eq!(v["flags"]["general_f"], false);
}

#[test]
fn json_round_trips_groups() {
    for input in [
        "F=[3]; G=[4]",
        "F=diag(2,3); G=[[1,1],[0,1]]",
        "F=diag(1,1,1); G=diag(-1,-1,-1)",
        "F=diag(4,4); G=diag(-6,-6)",
    ] {
        let text = call(&[input]);
        let v = json(&call(&["--json", input]));
        let k0 = group(&v["K0"]);
        let k1 = group(&v["K1"]);
        assert_eq!(text.stdout, format!("K0 = {k0}\nK1 = {k1}\n"));
        assert_eq!(k0.free_rank() as u64, v["K0"]["free_rank"].as_u64().unwrap());
        let torsion: Vec<BigInt> =
            v["K1"]["torsion"].as_array().unwrap().iter().map(|t| t.to_string().parse().unwrap()).collect();
        assert_eq!(k1.torsion(), torsion.as_slice());
    }
}

#[test]
fn big_torsion_survives_json() {
    let v = json(&call(&["--json", "F=[1]; G=[100000000000000000000001]"]));
    assert_eq!(v["K1"]["torsion"][0].to_string(), "100000000000000000000000");
    assert_eq!(group(&v["K1"]).to_string(), "Z (+) Z/100000000000000000000000");
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "--breakdown", "--check", "--closed-form", "--presentation", "F=diag(2,2); G=[[1,2],[3,1]]"];
    let a = binary(&args);
    let b = binary(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn presentation_rank_one() {
    let r = call(&["--presentation", "F=[2]; G=[3]"]);
    assert!(r.stdout.contains("isometries: S_0, S_1\n"));
    assert!(r.stdout.contains("unitaries: U\n"));
    assert!(r.stdout.contains("(3) U² S = S U³\n"));
    assert!(r.stdout.contains("(4) S_0 S_0* + S_1 S_1* = 1\n"));
}

#[test]
fn presentation_trivial_f_has_one_isometry() {
    for d in 1..=3 {
        let ones = vec!["1"; d].join(",");
        let v = json(&call(&["--json", "--presentation", &format!("F=diag({ones}); G=diag({ones})")]));
        assert_eq!(v["presentation"]["isometries"].as_array().unwrap().len(), 1);
        let rels = v["presentation"]["relations"].as_array().unwrap();
        let last = rels.last().unwrap()["relation"].as_str().unwrap();
        assert!(last.ends_with("* = 1") && !last.contains('+'), "{last}");
    }
}

#[test]
fn presentation_enumerates_index_set() {
    let v = json(&call(&["--json", "--presentation", "F=diag(2,2); G=diag(1,1)"]));
    let isos: Vec<&str> =
        v["presentation"]["isometries"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(isos, ["S_(0,0)", "S_(0,1)", "S_(1,0)", "S_(1,1)"]);
    let count = |id: u64| v["presentation"]["relations"].as_array().unwrap().iter().filter(|r| r["id"] == id).count();
    assert_eq!((count(1), count(2), count(3), count(4)), (5, 4, 2, 1));
}

#[test]
fn presentation_rejects_general_f() {
    let r = call(&["--general-f", "--presentation", "F=[[2,1],[0,3]]; G=diag(1,1)"]);
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR);
    assert!(r.stderr.contains("positive diagonal"));
}

#[test]
fn closed_form_difference_exits_one() {
    let r = call(&["--closed-form", "F=diag(1,1); G=diag(-1,-1)"]);
    assert_eq!(r.exit_code, EXIT_CHECK_FAILED);
    assert!(r.stdout.contains("DIFFER"));
}

#[test]
fn closed_form_agreement_exits_zero() {
    let r = call(&["--closed-form", "--json", "F=diag(2,2); G=diag(3,3)"]);
    assert_eq!(r.exit_code, EXIT_OK);
    let families = json(&r)["closed_form"].as_array().unwrap().clone();
    assert!(families.iter().any(|f| f["covered"] == true && f["agrees"] == true));
}

fn expect_error(args: &[&str], limit: Option<&str>, kind: &str) {
    let mut json_args = vec!["--json"];
    json_args.extend_from_slice(args);
    let r = call_env(&json_args, limit);
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR, "{args:?}");
    assert_eq!(json(&r)["error"]["kind"], kind, "{}", r.stdout);
    let t = call_env(args, limit);
    assert_eq!(t.exit_code, EXIT_INPUT_ERROR);
    assert!(t.stdout.is_empty() && t.stderr.starts_with("error: "), "{}", t.stderr);
}

#[test]
fn fault_injection_exit_codes() {
    expect_error(&["F=diag(2,3) G=diag(1,1)"], None, "ParseError");
    expect_error(&["F=diag(2,x); G=diag(1,1)"], None, "ParseError");
    expect_error(&["F=[1,2]; G=[3]"], None, "ParseError");
    expect_error(&["F=[2]"], None, "ParseError");
    expect_error(&["F=[2]; G=[3]; F=[4]"], None, "ParseError");
    expect_error(&["H=[2]; G=[3]"], None, "ParseError");
    expect_error(&["F=diag(0,2); G=diag(1,1)"], None, "SingularInput");
    expect_error(&["F=diag(1,2); G=[[1,2],[2,4]]"], None, "SingularInput");
    expect_error(&["F=diag(1,2); G=diag(1,1,1)"], None, "DimensionMismatch");
    expect_error(&["F=[[2,1],[0,3]]; G=diag(1,1)"], None, "NotPositiveDiagonal");
    expect_error(&["F=diag(-2,3); G=diag(1,1)"], None, "NotPositiveDiagonal");
    expect_error(&["F=diag(1,1,1); G=diag(2,2,2)"], Some("2"), "CapacityExceeded");
    expect_error(&["F=[2]; G=[3]"], Some("lots"), "ParseError");
    expect_error(&[], None, "ParseError");
}

#[test]
fn non_diagonal_f_rejection_mentions_flag() {
    let r = call(&["F=[[2,1],[0,3]]; G=diag(1,1)"]);
    assert!(r.stderr.contains("--general-f"), "{}", r.stderr);
}

#[test]
fn general_f_runs_with_warning() {
    let v = json(&call(&["--json", "--general-f", "F=[[2,1],[0,3]]; G=diag(1,1)"]));
    assert_eq!(v["flags"]["general_f"], true);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn capacity_override_from_environment() {
    let ok = Command::new(env!("CARGO_BIN_EXE_quiverk"))
        .arg("F=diag(1,1,1); G=diag(2,2,2)")
        .env(MAX_BINOMIAL_ENV, "3")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(env!("CARGO_BIN_EXE_quiverk"))
        .arg("F=diag(1,1,1); G=diag(2,2,2)")
        .env(MAX_BINOMIAL_ENV, "2")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT_ERROR));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("capacity"));
}

#[test]
fn binary_exit_codes() {
    assert_eq!(binary(&["F=[3]; G=[4]"]).status.code(), Some(EXIT_OK));
    assert_eq!(binary(&["--closed-form", "F=[3]; G=[4]"]).status.code(), Some(EXIT_OK));
    assert_eq!(binary(&["F=[0]; G=[4]"]).status.code(), Some(EXIT_INPUT_ERROR));
    assert_eq!(binary(&["--closed-form", "F=diag(1,1); G=diag(-1,-1)"]).status.code(), Some(EXIT_CHECK_FAILED));
}

#[test]
fn batch_lines_follow_input_order() {
    let r = call(&["--batch", suite().to_str().unwrap()]);
    let text = std::fs::read_to_string(suite()).unwrap();
    let jobs: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), jobs.len());
    for ((line, src), out) in jobs.iter().zip(&lines) {
        let single = call(&["--json", src]);
        let v: Value = serde_json::from_str(out).unwrap();
        if single.exit_code == EXIT_INPUT_ERROR {
            assert_eq!(v["line"], *line as u64);
            assert_eq!(v["error"], json(&single)["error"]);
        } else {
            assert_eq!(*out, single.stdout.trim());
        }
    }
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR);
}

#[test]
fn batch_missing_file() {
    let r = call(&["--batch", "/nonexistent/quiverk-batch.txt"]);
    assert_eq!(r.exit_code, EXIT_INPUT_ERROR);
}

#[test]
fn batch_conflicts_with_inline_input() {
    assert!(Cli::try_parse_from(["quiverk", "--batch", "x", "F=[2]; G=[3]"]).is_err());
}
