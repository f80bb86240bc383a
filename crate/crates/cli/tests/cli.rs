use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn s3d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s3d")).args(args).output().expect("s3d runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn census_counts() {
    let o = s3d(&["census"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("ground=8"), "{text}");
    assert!(text.contains("excited=28"), "{text}");
    assert!(!text.contains("flux C2"), "{text}");
    let j = json(&s3d(&["census", "--format", "json"]));
    assert_eq!(j["flux_excited"][1]["states"], 0);
}

#[test]
fn verify_gates_passes() {
    let o = s3d(&["verify", "gates", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json(&o)["failures"], 0);
}

#[test]
fn verify_unknown_suite_is_input_error() {
    assert_eq!(s3d(&["verify", "optics"]).status.code(), Some(2));
}

#[test]
fn mc_flux_c3_reports_quarter() {
    let o = s3d(&["mc", "flux_c3", "--trials", "4000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let s = &json(&o)["reports"][0]["statistics"][0];
    assert_eq!(s["analytic"], 0.25);
    assert!(s["z"].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn mc_unknown_protocol_is_input_error() {
    let o = s3d(&["mc", "flux_c4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown protocol"));
}

#[test]
fn closed_direct_loop_leaves_ground_state_unchanged() {
    let o = s3d(&["ribbon", &data("closed_direct_loop.rbn"), "--label", "e,e", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert!(j["distance_from_input"].as_f64().unwrap() < 1e-12);
    assert_eq!(j["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_ribbon_reports_line() {
    let o = s3d(&["ribbon", &data("malformed.rbn"), "--label", "e,e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn strip_ribbons_prepare_logical_zero() {
    let o = s3d(&[
        "ribbon",
        &data("strip_t2.rbn"),
        &data("strip_t1.rbn"),
        "--lattice",
        "3x1",
        "--open",
        "--anyon",
        "C2:0:s:0:*:0",
        "--readout",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let amps = &json(&o)["readout"]["amplitudes"];
    assert!((amps[0][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(amps[1][0].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn state_dump_round_trips_through_files() {
    let first = tmp("after_loop.dump");
    let second = tmp("after_loop_again.dump");
    let loop_file = data("closed_direct_loop.rbn");
    let a = s3d(&["ribbon", &loop_file, "--label", "e,e", "--state-out", first.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let b = s3d(&[
        "ribbon",
        &loop_file,
        "--label",
        "e,e",
        "--state-in",
        first.to_str().unwrap(),
        "--state-out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn hssh_circuit_maps_zero_to_one() {
    let j = json(&s3d(&["circuit", &data("hssh.json"), "--format", "json"]));
    let amps = j["amplitudes"].as_array().unwrap();
    let weight = |k: usize| amps[k][0].as_f64().unwrap().powi(2) + amps[k][1].as_f64().unwrap().powi(2);
    assert!((weight(1) - 1.0).abs() < 1e-9);
    assert!(weight(0) < 1e-9);
}

#[test]
fn same_seed_gives_identical_files() {
    let paths = [tmp("run_a.json"), tmp("run_b.json")];
    for p in &paths {
        let o = s3d(&[
            "circuit",
            &data("ccz_11plus.json"),
            "--mode",
            "sampled",
            "--seed",
            "11",
            "--format",
            "json",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn cap_exhaustion_exit_code() {
    let o = s3d(&["circuit", &data("hssh.json"), "--mode", "sampled", "--seed", "1", "--cap-prepare", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_tolerance_is_input_error() {
    assert_eq!(s3d(&["census", "--tolerance", "0"]).status.code(), Some(2));
}
