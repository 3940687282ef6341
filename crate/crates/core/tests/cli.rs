use std::path::PathBuf;
use std::process::{Command, Output};

use adicomp::cli::report::RunReport;

fn adicomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adicomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_scenario(name: &str, text: &str) -> PathBuf {
    let path = scratch(name).join("scenario.txt");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn golden_z_at_2() {
    let out = adicomp(&["--gallery", "Z-at-2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("fixtures/z_at_2.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn gallery_list() {
    let out = adicomp(&["--gallery", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let names = String::from_utf8(out.stdout).unwrap();
    assert!(names.lines().any(|l| l == "basechange-gap"));
    assert_eq!(names.lines().count(), adicomp::cli::gallery::names().count());
}

#[test]
fn unknown_gallery_exits_1() {
    let out = adicomp(&["--gallery", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn strict_exits_2_on_failed_verdicts() {
    assert_eq!(adicomp(&["--gallery", "Z-at-2"]).status.code(), Some(0));
    assert_eq!(adicomp(&["--gallery", "Z-at-2", "--strict"]).status.code(), Some(2));
    assert_eq!(
        adicomp(&["--gallery", "koszul-duality", "--strict"]).status.code(),
        Some(0)
    );
}

#[test]
fn task_error_exits_1() {
    // a completeness profile needs a module, the ideal lives in another ring
    let path = write_scenario(
        "task-error",
        "ring Z = ZZ\nring Q = QQ\nideal I = (2) in Z\nmodule M = free(1) in Q\ntask completeness M I\n",
    );
    let out = adicomp(&["--scenario", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.tasks[0].error.is_some());
}

#[test]
fn parse_error_reports_position() {
    let path = write_scenario("parse-error", "ring Z = ZZ\nideal I = (2\n");
    let out = adicomp(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("scenario.txt:2:"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_identifier_is_reported() {
    let path = write_scenario("unknown-ident", "ring Z = ZZ\ntask completeness M I\n");
    let out = adicomp(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains(":2:"));
}

#[test]
fn empty_scenario_gives_empty_task_list() {
    let path = write_scenario("empty", "# nothing here\n");
    let out = adicomp(&["--scenario", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.tasks.is_empty());
    assert!(!report.discrepancy);
    assert_eq!(report.schema_version, 1);
}

#[test]
fn minimal_scenario_text_output() {
    let path = write_scenario(
        "minimal",
        "ring Z = ZZ\nideal I = (3)\nmodule M = coker([[9]])\ntask completeness M I depth=3\n",
    );
    let out = adicomp(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("adically complete"), "{text}");
    assert!(text.contains("holds"));
}

#[test]
fn depth_flag_overrides_scenario() {
    let out = adicomp(&["--gallery", "wpr", "--depth", "3", "--format", "json"]);
    let report = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.tasks.iter().all(|t| t.depth == 3));
    assert_ne!(adicomp(&["--gallery", "wpr", "--depth", "0"]).status.code(), Some(0));
}

#[test]
fn timings_only_on_request() {
    let plain = String::from_utf8(adicomp(&["--gallery", "wpr", "--format", "json"]).stdout).unwrap();
    assert!(!plain.contains("elapsed_ms"));
    let timed = String::from_utf8(adicomp(&["--gallery", "wpr", "--format", "json", "--timings"]).stdout).unwrap();
    let report = RunReport::from_json(&timed).unwrap();
    assert!(report.tasks.iter().all(|t| t.elapsed_ms.is_some()));
}

#[test]
fn out_file_is_written_whole() {
    let dir = scratch("out");
    let path = dir.join("report.json");
    std::fs::write(&path, "stale").unwrap();
    let out = adicomp(&[
        "--gallery",
        "basechange-gap",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    let report = RunReport::from_json(&written).unwrap();
    assert!(report.discrepancy);
    let leftovers: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn discrepancy_banner_in_text() {
    let text = String::from_utf8(adicomp(&["--gallery", "basechange-gap"]).stdout).unwrap();
    assert!(text.contains("DISCREPANCY"));
    let text = String::from_utf8(adicomp(&["--gallery", "basechange-pos"]).stdout).unwrap();
    assert!(!text.contains("DISCREPANCY"));
}
