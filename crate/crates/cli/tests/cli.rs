use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use toric_newton_cli::{run_command, EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE, EXIT_VALIDATION};

fn body(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../bodies")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> toric_newton_cli::Outcome {
    let mut argv = vec!["toric-newton"];
    argv.extend_from_slice(args);
    run_command(argv)
}

#[test]
fn gauge_of_the_monomial_body() {
    let out = run(&["gauge", "--body", &body("monomial.nb"), "1", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("value 5/6"), "{}", out.stdout);
}

#[test]
fn cluster_values_with_progressions() {
    let out = run(&["cluster", "--body", &body("hyperbola.nb"), "--max", "3"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("values: 1, 2, 3"), "{}", out.stdout);
    assert_eq!(out.stdout.matches("progression").count(), 2);
}

#[test]
fn interior_membership_with_normal() {
    let out = run(&["member", "--kind", "int", "--body", &body("monomial.nb"), "--c", "1", "2", "0"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("\nfalse\n"));
    assert!(out.stdout.contains("separating normal"));
}

#[test]
fn attainment_and_closure() {
    let h = body("hyperbola.nb");
    let out = run(&["member", "--kind", "att", "--coords", "1", "--body", &h, "1"]);
    assert!(out.stdout.contains("\nfalse\n"), "{}", out.stdout);
    let out = run(&["member", "--kind", "cl", "--body", &h, "2", "2"]);
    assert!(out.stdout.contains("\ntrue\n"), "{}", out.stdout);
}

#[test]
fn ideal_footer() {
    let out = run(&["ideal", "--body", &body("monomial.nb"), "--c", "1", "--box", "6"]);
    assert!(out.stdout.contains("(0, 1)\n(1, 0)\ncomplete: true\n"), "{}", out.stdout);
}

#[test]
fn asymp_lists() {
    let out = run(&["asymp", "--body", &body("plane_and_lines.nb"), "--bound", "2"]);
    assert!(out.stdout.contains("asymp' {x1=1, x3=1}  attained false"));
    assert!(out.stdout.contains("asymp  {x1=1}"));
    assert!(!out.stdout.contains("asymp  {x1=1, x3=1}"));
}

#[test]
fn witness_and_non_cluster() {
    let h = body("hyperbola.nb");
    let out = run(&["witness", "--body", &h, "--m", "1", "--count", "3"]);
    assert!(out.stdout.contains("(0, 1)  jumping number 2/3"), "{}", out.stdout);
    let out = run(&["witness", "--body", &h, "--m", "3/2"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn json_reports_are_exact_and_deterministic() {
    let args = ["--format", "json", "jump", "--body", &body("monomial.nb"), "--max", "2", "--lattice", "8"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    let entries = doc["result"]["entries"].as_array().unwrap();
    let values: Vec<&str> = entries.iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["5/6", "7/6", "4/3", "3/2", "5/3", "11/6", "2"]);
    assert!(doc["body_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn exact_text_has_no_floats() {
    let out = run(&["gauge", "--body", &body("hyperbola.nb"), "2", "3"]);
    let exact: String = out.stdout.lines().filter(|l| !l.starts_with("body:") && !l.starts_with("command:")).collect();
    assert!(!exact.contains('.'), "{exact}");
    let out = run(&["gauge", "--oracle", "--body", &body("hyperbola.nb"), "2", "3"]);
    assert!(out.stdout.contains("oracle (float): 1.166666"), "{}", out.stdout);
}

#[test]
fn exit_codes() {
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "dim 2\npoint 1\n").unwrap();
    let path = bad.path().to_string_lossy().into_owned();
    let out = run(&["validate", "--body", &path]);
    assert_eq!(out.code, EXIT_VALIDATION);
    assert!(out.stderr.contains("line 2, column 1"), "{}", out.stderr);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["gauge", "--body", &body("monomial.nb")]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
    // a tail index cap too small to separate (101/100, 60) from the hyperbola
    let out = run(&["--max-j", "2", "member", "--kind", "int", "--body", &body("hyperbola.nb"), "101/100", "60"]);
    assert_eq!(out.code, EXIT_UNDECIDED, "{}", out.stderr);
    assert!(out.stdout.contains("undecided"));
}

#[test]
fn plot_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("h.svg");
    let out = run(&["plot", "--body", &body("hyperbola.nb"), "--out", &svg.to_string_lossy()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml") && text.contains("stroke-dasharray"));
    let out = run(&["plot", "--body", &body("plane_and_lines.nb"), "--fix", "3=1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("<!-- x = 1 -->"));
}

#[test]
fn binary_exit_status() {
    let status = Command::new(env!("CARGO_BIN_EXE_toric-newton"))
        .args(["validate", "--body", &body("shifted.nb")])
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(String::from_utf8_lossy(&status.stdout).contains("tail p 1/2 1  q 0 1  r 1 0"));
}
