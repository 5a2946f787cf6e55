use std::io::Write;
use std::process::{Command, Output, Stdio};

fn nonsep(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nonsep"))
        .args(args)
        .env_remove("NONSEP_BUDGET_NODES")
        .env_remove("NONSEP_BUDGET_SECONDS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = nonsep(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn wheel_is_a_wheel_subgraph() {
    let g = stdout(&["gen", "wheel", "10"], "");
    assert_eq!(stdout(&["check", "nonsep"], &g).trim(), "WheelSubgraph");
}

#[test]
fn prism_complement_contains_k3311() {
    let g = stdout(&["gen", "eprism", "2", "1", "1"], "");
    let out = stdout(&["check", "complement", "--then", "minor", "--target=K331_1"], &g);
    assert!(out.starts_with("minor found"), "{out}");
}

#[test]
fn small_polygon_complements_are_planar() {
    let gs = stdout(&["gen", "maxouterplanar", "7"], "");
    let out = stdout(&["check", "complement", "--then", "planar"], &gs);
    assert_eq!(out.lines().count(), gs.lines().count());
    assert!(out.lines().all(|l| l == "planar"), "{out}");
}

#[test]
fn json_round_trip() {
    let gs = stdout(&["gen", "nonsep", "9"], "");
    let json = stdout(&["to-json"], &gs);
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["order"], 9);
    }
    assert_eq!(stdout(&["from-json"], &json), gs);
}

#[test]
fn sparse6_input_is_accepted() {
    let out = stdout(&["to-json"], ":Fa@x^\n");
    assert_eq!(out.trim(), r#"{"order":7,"edges":[[0,1],[0,2],[1,2],[5,6]]}"#);
}

#[test]
fn parse_errors_name_line_and_byte() {
    let out = nonsep(&["check", "planar"], "Bw\nF?~\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("byte 3"), "{err}");
}

#[test]
fn deterministic_reports_are_byte_identical() {
    let args = ["verify-paper", "thm2", "--n", "7..8", "--deterministic", "--json"];
    let a = stdout(&args, "");
    let b = stdout(&args, "");
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["wall_seconds"].is_null()));
}

#[test]
fn closure_of_k6_has_seven_classes() {
    assert_eq!(stdout(&["closure", "K6"], "").lines().count(), 7);
}

#[test]
fn mu_and_klv() {
    let k7 = stdout(&["gen", "complete", "7"], "");
    assert!(stdout(&["check", "mu"], &k7).starts_with("mu in [6, 6]"));
    let out = stdout(&["check", "klv", "--json"], &k7);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verdict"], "holds");
}

#[test]
fn failing_suite_range_is_an_error() {
    let out = nonsep(&["verify-paper", "thm1", "--n", "9..7"], "");
    assert!(!out.status.success());
}
