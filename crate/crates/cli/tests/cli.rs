use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn origami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origami")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_two_rounds() {
    let o = origami(&["build", "--rounds", "2", "--bias", "1/3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["config"]["bias"], "1/3");
    assert_eq!(v["result"]["distribution"]["events"].as_array().unwrap().len(), 16);
    let grid = v["result"]["grid"].as_str().unwrap();
    for row in ["0 · · 1 4 · · 5", "· 0 1 · · · 7 6", "2 3 · · 6 7 · ·", "· · 3 2 · 4 5 ·"] {
        assert!(grid.contains(row), "{grid}");
    }
}

#[test]
fn structure_report_passes() {
    let o = origami(&["verify-structure", "--rounds", "5", "--bias", "1/3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["verdict"], "PASS");
    assert!(v["result"]["checks"].as_array().unwrap().len() >= 8);
}

#[test]
fn lopc_verdicts_and_exit_codes() {
    let o = origami(&["run-lopc", "--rounds", "3", "--bias", "1/2", "--target", "1/4", "--starter", "bob"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["result"]["strict"]["verdict"], "PASS");

    let strict = origami(&["run-lopc", "--rounds", "3", "--bias", "1/3"]);
    assert_eq!(code(&strict), 1);
    assert!(String::from_utf8_lossy(&strict.stdout).contains("key–Z dependence"));
    assert_eq!(code(&origami(&["run-lopc", "--rounds", "3", "--bias", "1/3", "--check", "blockwise"])), 0);
    assert_eq!(code(&origami(&["run-lopc", "--rounds", "3", "--bias", "1/3", "--extension"])), 0);
    // Forbidden starter at r = 3.
    assert_eq!(code(&origami(&["run-lopc", "--rounds", "3", "--bias", "1/2", "--starter", "alice"])), 1);
}

#[test]
fn protocol_file_roundtrip() {
    let path = scratch("protocol.json");
    let p = path.to_str().unwrap();
    let first = origami(&["run-lopc", "--rounds", "2", "--bias", "1/2", "--target", "1/4", "--emit-protocol", p]);
    assert_eq!(code(&first), 0);
    let again = origami(&["run-lopc", "--rounds", "2", "--bias", "1/2", "--target", "1/4", "--protocol", p]);
    assert_eq!(code(&again), 0);
    assert_eq!(json(&first)["result"], json(&again)["result"]);
}

#[test]
fn locc_runs() {
    let o = origami(&["run-locc", "--rounds", "3", "--bias", "1/2", "--target", "1/4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["rank_drop_events"], 0);
    let third = origami(&["run-locc", "--rounds", "1", "--bias", "1/3"]);
    assert_eq!(code(&third), 1);
    assert_eq!(json(&third)["result"]["min_fidelity"], "0.944444444444");
}

#[test]
fn rank_search_and_suites() {
    let o = origami(&["secrecy-rank", "--rounds", "2", "--bias", "1/3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["outcome"], serde_json::json!({"kind": "exact", "rank": 2}));
    // A cap below the true rank cannot decide.
    assert_eq!(code(&origami(&["secrecy-rank", "--rounds", "1", "--bias", "1/3", "--cap", "1"])), 2);

    let s = origami(&["search-one-round", "--bias", "1/3", "--starter", "alice"]);
    assert_eq!(code(&s), 0);
    assert_eq!(json(&s)["result"]["passing"].as_array().unwrap().len(), 0);
    let b = origami(&["search-one-round", "--bias", "1/2", "--starter", "bob"]);
    assert_eq!(json(&b)["result"]["passing"][0], serde_json::json!([0, 0, 1, 1]));

    assert_eq!(code(&origami(&["monotone-suite", "--trials", "20", "--msg-size", "4"])), 0);
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = ["prop4-search", "--trials", "200", "--seed", "9"];
    let a = origami(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, origami(&args).stdout);
    let m = ["monotone-suite", "--trials", "30", "--seed", "4"];
    assert_eq!(origami(&m).stdout, origami(&m).stdout);
}

#[test]
fn distribution_roundtrip() {
    let path = scratch("b3.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&origami(&["build", "--rounds", "3", "--bias", "1/3", "--emit-distribution", p])), 0);
    let o = origami(&["roundtrip", "--input", p]);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, std::fs::read(&path).unwrap());
    assert_eq!(code(&origami(&["secrecy-rank", "--input", p])), 0);
}

#[test]
fn bad_files_rejected() {
    let over = scratch("over.json");
    std::fs::write(
        &over,
        r#"{"x_size":1,"y_size":1,"z_size":2,"events":[{"x":0,"y":0,"z":0,"p":"1/2"},{"x":0,"y":0,"z":1,"p":"9/16"}]}"#,
    )
    .unwrap();
    let o = origami(&["roundtrip", "--input", over.to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("17/16"), "{}", stderr(&o));

    let zero = scratch("zero.json");
    std::fs::write(
        &zero,
        r#"{"x_size":1,"y_size":1,"z_size":2,"events":[{"x":0,"y":0,"z":0,"p":"1"},{"x":0,"y":0,"z":1,"p":"0"}]}"#,
    )
    .unwrap();
    let o = origami(&["roundtrip", "--input", zero.to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("zero event"), "{}", stderr(&o));

    let broken = scratch("broken.json");
    std::fs::write(&broken, "{\n  \"x_size\": 1,\n  oops\n}").unwrap();
    let o = origami(&["roundtrip", "--input", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 64);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&origami(&["build", "--rounds", "2", "--bias", "1/x"])), 64);
    assert_eq!(code(&origami(&["build", "--rounds", "2", "--bias", "2/3"])), 64);
    assert_eq!(code(&origami(&["build", "--rounds", "0", "--bias", "1/3"])), 64);
    assert_eq!(code(&origami(&["fold"])), 64);
    assert_eq!(code(&origami(&["roundtrip", "--input", "/no/such/file.json"])), 64);
    assert_eq!(code(&origami(&["search-one-round", "--bias", "1/2", "--starter", "eve"])), 64);
    assert_eq!(code(&origami(&["--help"])), 0);
    assert_eq!(code(&origami(&["--version"])), 0);
}

#[test]
fn ascii_grid_format() {
    let o = origami(&["build", "--rounds", "1", "--bias", "1/3", "--format", "ascii"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("0 · · 1") && text.contains("· · 3 2"), "{text}");
}
