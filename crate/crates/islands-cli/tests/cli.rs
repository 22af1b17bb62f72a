//! End-to-end command tests: exit codes, pipelines, and byte-stable output.

use assert_cmd::Command;
use predicates::prelude::*;

fn islands() -> Command {
    Command::cargo_bin("islands").unwrap()
}

fn output_of(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut cmd = islands();
    cmd.args(args);
    if let Some(text) = stdin {
        cmd.write_stdin(text.to_string());
    }
    let out = cmd.output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn formula_prints_the_value() {
    islands().args(["formula", "t", "3", "3"]).assert().success().stdout("4\n");
    islands().args(["formula", "f", "4", "4"]).assert().success().stdout("11\n");
    islands().args(["formula", "b", "4"]).assert().success().stdout("9\n");
}

#[test]
fn formula_rejects_bad_arguments() {
    islands().args(["formula", "nope", "3", "3"]).assert().code(2);
    islands().args(["formula", "b", "4", "4"]).assert().code(2);
    islands().args(["formula", "c1", "0", "3"]).assert().code(2);
}

#[test]
fn build_verify_pipeline_accepts_every_builder() {
    for board in [
        "rect:4x4",
        "rect:4x4;adj=rook",
        "cyl:3x4;shapes=c1",
        "cyl:3x4;shapes=c2",
        "torus:4x4",
        "cube:4",
    ] {
        let (code, json) = output_of(&["build", board], None);
        assert_eq!(code, 0, "build {board}");
        islands().arg("verify").write_stdin(json).assert().success();
    }
}

#[test]
fn verify_reports_touching_islands() {
    let system = r#"{
        "board": "rect:2x2",
        "islands": [
            {"kind": "whole"},
            {"kind": "rect", "origin": [0, 0], "size": [1, 1]},
            {"kind": "rect", "origin": [1, 1], "size": [1, 1]}
        ]
    }"#;
    islands()
        .arg("verify")
        .write_stdin(system)
        .assert()
        .code(1)
        .stdout(predicate::str::contains("valid: no"));
}

#[test]
fn search_max_reports_the_torus_optimum() {
    let (code, json) = output_of(&["search-max", "torus:2x2"], None);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["optimum"], 2);
    assert_eq!(value["feasible"], true);
    assert_eq!(value["proven_exact"], true);
}

#[test]
fn search_max_exhausted_budget_exits_three() {
    let (code, json) = output_of(&["search-max", "rect:4x4", "--budget-nodes", "1"], None);
    assert_eq!(code, 3);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["proven_exact"], false);
}

#[test]
fn search_blastfree_separates_feasible_and_infeasible() {
    let (code, json) = output_of(&["search-blastfree", "rect:1x3"], None);
    assert_eq!(code, 1);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["feasible"], false);
    assert_eq!(value["optimum"], serde_json::Value::Null);

    let (code, json) = output_of(&["search-blastfree", "rect:4x4"], None);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["feasible"], true);
    assert!(value["conjecture_delta"].is_i64());
}

#[test]
fn extract_synthesize_round_trip() {
    let heights = "1 1 0\n1 2 0\n0 0 0\n";
    let (code, json) = output_of(&["extract", "rect:3x3"], Some(heights));
    assert_eq!(code, 0);
    let (code, back) = output_of(&["synthesize"], Some(&json));
    assert_eq!(code, 0);
    let (code, again) = output_of(&["extract", "rect:3x3"], Some(&back));
    assert_eq!(code, 0);
    assert_eq!(again, json);
}

#[test]
fn render_marks_maximal_islands_uppercase() {
    let (code, json) = output_of(&["build", "rect:2x2"], None);
    assert_eq!(code, 0);
    let (code, picture) = output_of(&["render"], Some(&json));
    assert_eq!(code, 0);
    assert_eq!(picture, "~~\nAb\n");
}

#[test]
fn render_reads_heights_directly() {
    let (code, picture) = output_of(&["render", "--heights", "rect:2x3"], Some("5 1 1\n1 1 5\n"));
    assert_eq!(code, 0);
    assert_eq!(picture, "A~~\n~~B\n");
}

#[test]
fn check_levels_flags_the_peninsula_heights() {
    let (code, json) = output_of(&["build", "rect:3x3"], None);
    assert_eq!(code, 0);
    let (code, heights) = output_of(&["synthesize"], Some(&json));
    assert_eq!(code, 0);
    let (code, report) = output_of(&["check-levels", "rect:3x3"], Some(&heights));
    assert_eq!(code, 1);
    assert!(report.contains("all clear: no"));

    let (code, report) = output_of(&["check-levels", "rect:3x3"], Some("1 1 1\n1 1 1\n1 1 1\n"));
    assert_eq!(code, 0);
    assert!(report.contains("all clear: yes"));
}

#[test]
fn check_heuristic_prints_the_identity_table() {
    islands()
        .args(["check-heuristic", "5", "3"])
        .assert()
        .success()
        .stdout(predicate::str::contains("t(m,n)     = 7"));
}

#[test]
fn forest_emits_stats() {
    let (code, json) = output_of(&["build", "cube:3"], None);
    assert_eq!(code, 0);
    let (code, forest) = output_of(&["forest"], Some(&json));
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&forest).unwrap();
    assert_eq!(value["stats"]["islands"], 5);
}

#[test]
fn malformed_input_exits_two() {
    islands().args(["build", "rect:0x3"]).assert().code(2);
    islands().args(["build", "blob:3x3"]).assert().code(2);
    islands().arg("verify").write_stdin("not json").assert().code(2);
    islands().args(["extract", "rect:2x2"]).write_stdin("1 2\n3\n").assert().code(2);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["build", "torus:4x4"],
        vec!["search-max", "rect:3x3"],
        vec!["search-blastfree", "rect:4x4"],
        vec!["build", "cube:3"],
    ] {
        let (code_a, first) = output_of(&args, None);
        let (code_b, second) = output_of(&args, None);
        assert_eq!(code_a, code_b);
        assert_eq!(first, second, "{args:?} output drifted between runs");
    }
}

#[test]
fn emitted_json_round_trips_through_the_parsers() {
    for board in ["rect:3x3", "torus:3x3", "cube:3"] {
        let (code, json) = output_of(&["build", board], None);
        assert_eq!(code, 0);
        let system: islands::IslandSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string_pretty(&system).unwrap() + "\n", json);
    }
}
