use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_runge-kit")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn groups_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../groups")
}

#[test]
fn cusps_of_pm_identity_level_5() {
    let path = groups_dir().join("pm-identity-5.json");
    let o = bin(&["cusps", "--level", "5", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["cusps"].as_array().unwrap().len(), 12);
    assert!(v["cusps"].as_array().unwrap().iter().all(|c| c["width"] == 5));
}

#[test]
fn sample_groups_load() {
    for entry in std::fs::read_dir(groups_dir()).unwrap() {
        let path = entry.unwrap().path();
        let o = bin(&["orbits", "--group", path.to_str().unwrap(), "--s", "1"]);
        assert_eq!(o.status.code(), Some(0), "{}", path.display());
        assert_eq!(json(&o)["runge_condition"]["holds"], true, "{}", path.display());
    }
}

#[test]
fn level_mismatch_is_input_error() {
    let o = bin(&["cusps", "--level", "7", "--split-cartan", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "input");
}

#[test]
fn malformed_json_reports_position() {
    let o = bin(&["cusps", "--group", "{\"level\": 5,\n \"generators\": [[[1,0],[0,1]]]\n \"galois\": \"full\"}"]);
    assert_eq!(o.status.code(), Some(2));
    let e = &json(&o)["error"];
    assert_eq!(e["kind"], "input");
    assert_eq!(e["line"], 3);
    assert!(e["column"].as_u64().unwrap() > 0);
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, "{\"level\": 5, \"generators\": [[[1,0],[0]]]}").unwrap();
    let o = bin(&["cusps", "--group", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = &json(&o)["error"];
    assert_eq!(e["line"], 1);
    assert!(e["message"].as_str().unwrap().contains("g.json"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(bin(&["cusps"]).status.code(), Some(2));
    assert_eq!(bin(&["cusps", "--split-cartan", "9"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "--check", "siegel-d"]).status.code(), Some(2));
    assert_eq!(bin(&["bound", "--theorem", "refined", "--level", "5", "--gprime-order", "8", "--b", "x"]).status.code(), Some(2));
}

#[test]
fn improper_sigma_is_rejected() {
    let o = bin(&["runge-unit", "--split-cartan", "5", "--sigma", "0,1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runge_unit_reports_verification() {
    let o = bin(&["runge-unit", "--split-cartan", "5", "--sigma", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verification"]["pass"], true);
    assert_eq!(v["split_cartan"]["case"], "6.6");
    assert!(v["bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn informational_report_exits_0() {
    let o = bin(&["verify", "--check", "siegel-d", "--level", "2", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["informational"], true);
    assert!(v["worst_value"].as_f64().unwrap() < 0.0);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = bin(&["bound", "--theorem", "split-cartan", "--p", "3", "--case", "two-rational", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 72.0 * 9f64.ln()).abs() < 1e-9);
}

#[test]
fn bound_from_group_matches_explicit_orders() {
    let a = json(&bin(&["bound", "--theorem", "thm-1.2", "--split-cartan", "7", "--s", "2"]));
    let b = json(&bin(&["bound", "--theorem", "thm-1.2", "--level", "7", "--group-order", "36", "--s", "2"]));
    assert_eq!(a["value"], b["value"]);
    let c = bin(&["bound", "--theorem", "thm-1.2", "--split-cartan", "7", "--group-order", "30", "--s", "2"]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn floats_round_trip() {
    let v = json(&bin(&["bound", "--theorem", "x0-chain", "--p", "37"]));
    let text = serde_json::to_string(&v["value"]).unwrap();
    let back: f64 = text.parse().unwrap();
    assert_eq!(back, v["value"].as_f64().unwrap());
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        vec!["divisors", "--split-cartan", "7"],
        vec!["verify", "--check", "siegel-d", "--level", "5", "--samples", "300", "--seed", "3"],
    ] {
        assert_eq!(bin(&args).stdout, bin(&args).stdout);
    }
}
