use std::io::Write;
use std::process::{Command, Output, Stdio};

use pointed_obstructions::cochain::coboundary;
use pointed_obstructions::io::{parse_json, read_json, CochainFile, LoadedCochain};
use serde_json::{json, Value};

fn pobs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pobs"))
        .args(args)
        .output()
        .unwrap()
}

fn pobs_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pobs"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("pobs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cohomology_of_klein_four() {
    let o = pobs(&[
        "cohomology",
        r#"{"group":{"invariants":[2,2]},"module":{"invariants":[2]},"degree":2}"#,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["invariants"], json!([2, 2, 2]));
}

#[test]
fn reads_stdin() {
    let o = pobs_stdin(
        &["cohomology", "-"],
        r#"{"group":{"invariants":[3]},"module":{"invariants":[3]},"degree":2}"#,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(json_out(&o)["invariants"], json!([3]));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(
        pobs(&["cohomology", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pobs(&["cohomology", "{"]).status.code(), Some(2));
    assert_eq!(pobs(&["trivial"]).status.code(), Some(2));
    assert_eq!(pobs(&["frobnicate"]).status.code(), Some(2));
    let not_cocycle = r#"{"group":{"invariants":[2]},"module":{"kind":"qz"},"degree":3,"values":{"1|1|1":"1/3"}}"#;
    let o = pobs(&["trivial", not_cocycle]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a cocycle"));
}

#[test]
fn trivial_witness_round_trip() {
    let gen = r#"{"group":{"invariants":[2]},"module":{"kind":"qz"},"degree":3,"values":{"1|1|1":"1/2"}}"#;
    let o = pobs(&["trivial", gen, "--assert-nontrivial"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        pobs(&["trivial", gen, "--assert-trivial"]).status.code(),
        Some(1)
    );

    // ∂p on ℤ/4 for p(1) = 1/4
    let bounded = r#"{"group":{"invariants":[4]},"module":{"kind":"qz"},"degree":2,
        "values":{"1|1":"1/2","1|2":"1/4","1|3":"1/4","2|1":"1/4","2|3":"3/4","3|1":"1/4","3|2":"3/4"}}"#;
    let path = scratch("witness.json");
    let o = pobs(&[
        "trivial",
        bounded,
        "--assert-trivial",
        "--witness-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let witness: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(witness["degree"], json!(1));
    let w = read_json::<CochainFile>(&path).unwrap().load().unwrap();
    let f = parse_json::<CochainFile>(bounded).unwrap().load().unwrap();
    match (w, f) {
        (LoadedCochain::Qz(w), LoadedCochain::Qz(f)) => assert_eq!(coboundary(&w).unwrap(), f),
        _ => panic!("expected ℚ/ℤ cochains"),
    }
}

#[test]
fn scenario_inputs_round_trip() {
    let emitted = pobs(&["paper", "drinfeld", "--emit-inputs"]);
    assert_eq!(emitted.status.code(), Some(0));
    let path = scratch("drinfeld.json");
    std::fs::write(&path, &emitted.stdout).unwrap();
    let direct = json_out(&pobs(&["paper", "drinfeld"]));
    let via_file = json_out(&pobs(&[
        "paper",
        "drinfeld",
        "--inputs",
        path.to_str().unwrap(),
    ]));
    assert_eq!(direct, via_file);
    let mismatched = pobs(&["paper", "d8", "--inputs", path.to_str().unwrap()]);
    assert_eq!(mismatched.status.code(), Some(2));
}

#[test]
fn scenario_reports_are_deterministic_and_hashed() {
    let a = pobs(&["paper", "z2n", "--n", "4"]);
    let b = pobs(&["paper", "z2n", "--n", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json_out(&a);
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(
        pobs(&["paper", "z2n", "--n", "4", "--assert"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(pobs(&["paper", "odd_m", "--m", "4"]).status.code(), Some(2));
}

#[test]
fn failing_scenario_checks_make_assert_exit_with_one() {
    let o = pobs(&["paper", "odd_m", "--assert"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alt_value_matches_claim"));
}

#[test]
fn o4_strategies_from_the_command_line() {
    let emitted = json_out(&pobs(&["paper", "drinfeld", "--emit-inputs"]));
    let bundle = emitted["o4"].to_string();
    for strategy in ["dense", "filtration"] {
        let o = pobs(&["o4", &bundle, "--strategy", strategy, "--assert-nontrivial"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{strategy}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = pobs(&["o4", &bundle, "--strategy", "dense", "--dense-cap", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("filtration"));
    let human = pobs(&["--human", "o4", &bundle]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("status"));
}

#[test]
fn verify_action_and_o3_on_builtins() {
    let caso1 = r#"{"action":{"builtin":"caso1","k":"0"},"alpha":{}}"#;
    let o = pobs(&["verify-action", caso1, "--assert"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let caso2 = r#"{"action":{"builtin":"caso2","k":"1/8"},"alpha":{}}"#;
    assert_eq!(
        pobs(&["verify-action", caso2, "--assert"]).status.code(),
        Some(1)
    );
    let o3 = r#"{"action":{"builtin":"caso2","k":"1/8"},"alpha":{},"repair":true}"#;
    let o = pobs(&["o3", o3, "--assert-trivial"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn fermions_of_a_family() {
    let o = pobs(&[
        "fermions",
        r#"{"abelian":{"family":"kleinfour","k":"1/4"},"reading":"corrected"}"#,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json_out(&o);
    assert!(!v.as_array().unwrap().is_empty());
}
