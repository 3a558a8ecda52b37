//! End-to-end runs of the `wallspace` binary against the shipped fixtures:
//! exit codes, table shapes, and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wallspace"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_good_spec_exits_zero() {
    let o = run(&["validate", &fixture("z2-amalgam.json")]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn validate_rho_mismatch_exits_two_with_fundom() {
    let o = run(&["validate", &fixture("z2-rho-mismatch.json")]);
    assert_eq!(o.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["code"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"E_FUNDOM"), "failed checks: {failed:?}");
}

#[test]
fn missing_file_is_usage_error() {
    let o = run(&["validate", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = run(&["validate", &fixture("z2-amalgam.json"), "--bogus"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn tolerance_out_of_range_is_usage_error() {
    let o = run(&["validate", &fixture("z2-amalgam.json"), "--tol", "0.5"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn properness_radius_six_table() {
    let o = run(&["properness", &fixture("z2-amalgam.json"), "--radius", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,min_hash,argmin_word"));
    let rows: Vec<(u32, f64)> = lines
        .map(|l| {
            let mut cols = l.split(',');
            (
                cols.next().unwrap().parse().unwrap(),
                cols.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0], (0, 0.0));
    for pair in rows.windows(2) {
        assert!(pair[0].1 <= pair[1].1 + 1e-9, "minima dip at n = {}", pair[1].0);
    }
}

#[test]
fn properness_radius_zero_single_row() {
    let o = run(&["properness", &fixture("z2-amalgam.json"), "--radius", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,min_hash,argmin_word\n0,0,e\n");
}

#[test]
fn properness_is_deterministic() {
    let args = ["properness", &fixture("z2-amalgam.json"), "--radius", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn dispersal_z2_profile() {
    let o = run(&["dispersal", &fixture("z2-dispersal.json"), "--radius", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("d,n_of_d\n"));
    assert!(text.contains("\n3,5\n"), "profile:\n{text}");
    assert!(text.ends_with("# stable: true\n"));
}

#[test]
fn dispersal_f2_profile_monotone() {
    let o = run(&["dispersal", &fixture("f2-dispersal.json"), "--radius", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let ns: Vec<u64> = stdout(&o)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(!ns.is_empty());
    assert!(ns.windows(2).all(|p| p[0] <= p[1]), "profile not monotone: {ns:?}");
}

#[test]
fn dispersal_without_section_is_usage_error() {
    let o = run(&["dispersal", &fixture("z2-amalgam.json")]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn modular_classifies_triangle_cycles() {
    let o = run(&["modular", &fixture("triangle-cycle1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["image_trivial"], true);
    assert!(r["rescale"]["lambdas"].is_array());

    let o = run(&["modular", &fixture("triangle-cycle2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["image_trivial"], false);
    assert!(r["rescale"]["error"].is_string());
}

#[test]
fn hyp_report_passes_and_is_deterministic() {
    let o = run(&["hyp", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["pass"], true);
    assert_eq!(r["crofton"].as_array().unwrap().len(), 20);
    assert_eq!(r["bound_trials"].as_array().unwrap().len(), 50);
    let again = run(&["hyp", "--seed", "5"]);
    assert_eq!(o.stdout, again.stdout);
}
