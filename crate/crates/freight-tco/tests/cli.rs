use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_freight-tco"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn success_exits_zero() {
    let o = run(&["system-tco", "--variant", "BEV700"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("0.22"), "{}", stdout(&o));
}

#[test]
fn missing_dataset_exits_two() {
    let o = run(&["--dataset", "/nonexistent/data.toml", "variants"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn broken_dataset_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "schema_version = 99\n").unwrap();
    let o = run(&["--dataset", path.to_str().unwrap(), "variants"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_fleet_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fleet.json");
    std::fs::write(&path, r#"{"vehicles":[{"id":"x","arrival_h":1.0,"dwell_h":0.1,"daily_miles":600.0}]}"#).unwrap();
    let o = run(&["system-tco", "--variant", "BEV700", "--fleet", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_variant_is_a_request_error() {
    let o = run(&["system-tco", "--variant", "BEV9000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("variant"));
}

#[test]
fn usage_errors_do_not_collide_with_dataset_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn projection_matches_golden_file() {
    let o = run(&["project", "--years", "2025,2030,2035,2040", "--format", "delimited"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/project.csv");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn delimited_output_is_lf_with_header() {
    let o = run(&["sensitivity", "--variant", "D-ICE", "--format", "delimited"]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().next().unwrap(), "variant,factor,baseline_usd_per_mile,perturbed_usd_per_mile,pct_change");
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 5));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["system-tco", "--variant", "FCEV200", "--format", "structured"][..],
        &["sensitivity", "--variant", "NZEV-H2", "--format", "structured"],
        &["fleet", "--fleet-size", "17", "--seed", "9"],
        &["schedule", "--variant", "BEV1000", "--format", "delimited"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn schedules_an_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("depot.csv");
    std::fs::write(&path, "id,arrival_h,dwell_h,required_h\na,0,4,2\nb,0,4,2\nc,1,4,2\n").unwrap();
    let o = run(&["schedule", "--instance", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stations"], 2);
    assert_eq!(v["assignments"].as_array().unwrap().len(), 3);
}

#[test]
fn empty_instance_needs_no_stations() {
    let o = run(&["schedule", "--instance", "empty", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stations"], 0);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = run(&["variants", "--format", "structured", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["variants"].as_array().unwrap().len(), 12);
}

#[test]
fn dataset_hash_is_printed() {
    let o = run(&["dataset", "hash"]);
    assert_eq!(stdout(&o).trim(), freight_tco::dataset::dataset_hash(&freight_tco::dataset::load_default().dataset));
}
