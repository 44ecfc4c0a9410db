use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use moving_wells_cli::formats::{read_samples, write_samples, PotentialCell};
use moving_wells_cli::manifest::RunManifest;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_moving-wells"));
    c.env_remove("MOVING_WELLS_OUT");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn metrics(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sample_box_reference_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sample", "--family", "box", "--n", "1,2,3", "--times", "0.25,0.5,0.75,1", "--L", "1"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("sample_box.csv")).unwrap();
    assert!(text.starts_with("t,state,x,re,im,density,potential\n"));
    assert!(!text.contains("NaN") && !text.contains("inf"));
    let records = read_samples(&dir.path().join("sample_box.csv")).unwrap();
    assert_eq!(records.len(), 3 * 4 * 801);
    let peak = records.iter().find(|r| r.t == 0.25 && r.state == "phi1" && r.x == 1.0).unwrap();
    assert!((peak.density - 1.0).abs() < 1e-12);
    let walls = records.iter().filter(|r| r.potential == PotentialCell::Wall).count();
    assert_eq!(walls, 2 * 3 * 4);
    assert!(dir.path().join("sample_box.manifest.json").exists());
}

#[test]
fn sample_normalizes_partner_states() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sample", "--family", "confluent", "--m", "2", "--omega", "0.4", "--n", "1,eps,3"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let records = read_samples(&dir.path().join("sample_confluent.csv")).unwrap();
    for state in ["xi1", "xi_eps", "xi3"] {
        let curve: Vec<_> = records.iter().filter(|r| r.t == 0.5 && r.state == state).collect();
        let integral: f64 =
            curve.windows(2).map(|p| 0.5 * (p[1].x - p[0].x) * (p[1].density + p[0].density)).sum();
        assert!((integral - 1.0).abs() < 1e-6, "{state}: {integral}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sample", "--family", "pt", "--n", "1"][..],
        &["sample", "--family", "confluent", "--n", "2"],
        &["sample", "--family", "confluent", "--omega", "-0.5", "--n", "1"],
        &["sample", "--family", "confluent", "--omega", "0", "--n", "eps"],
        &["sample", "--family", "box", "--n", "x"],
        &["sample", "--family", "box", "--n", "1", "--times", "-0.25"],
        &["propagate", "--dt", "0.1"],
        &["frobnicate"],
    ] {
        let o = run(args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_family_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--family", "box", "--times", "0.5"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = fs::read_to_string(dir.path().join("verify.txt")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS box")));
    assert!(!text.contains("FAIL"));
    let json = metrics(&dir.path().join("verify.json"));
    assert!(json.as_array().map(|a| !a.is_empty()).unwrap_or(false));
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--all"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_inadmissible_omega_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--family", "confluent", "--omega", "-0.5", "--m", "1"], dir.path());
    assert_eq!(code(&o), 1);
    let text = fs::read_to_string(dir.path().join("verify.txt")).unwrap();
    assert!(text.contains("FAIL") && text.contains("regularity"));
}

#[test]
fn negative_controls_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--negative-controls"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(dir.path().join("verify_controls.txt").exists());
    assert!(!dir.path().join("verify.txt").exists());
}

#[test]
fn propagate_box_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["propagate", "--family", "box", "--n", "1", "--from", "0.25", "--to", "1", "--nx", "2000", "--dt", "1e-4"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = metrics(&dir.path().join("propagate_box.json"));
    assert!(m["relative_l2_error"].as_f64().unwrap() <= 1e-3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("l2_error="));
    let records = read_samples(&dir.path().join("propagate_box.csv")).unwrap();
    assert_eq!(records.len(), 2001);
    assert_eq!(records.last().unwrap().x, 5.0);
}

#[test]
fn propagate_zero_duration_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["propagate", "--from", "0.25", "--to", "0.25"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(metrics(&dir.path().join("propagate_box.json"))["l2_distance"].as_f64().unwrap(), 0.0);
}

#[test]
fn propagate_confluent_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["propagate", "--family", "confluent", "--m", "2", "--omega", "0.4", "--n", "1", "--from", "0.25", "--to", "0.5"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = metrics(&dir.path().join("propagate_confluent.json"));
    assert!(m["relative_l2_error"].as_f64().unwrap() <= 5e-3);
}

#[test]
fn figures_emit_caption_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figures"], dir.path());
    assert_eq!(code(&o), 0);
    let fig4 = read_samples(&dir.path().join("fig4.csv")).unwrap();
    assert!(fig4.iter().all(|r| r.state != "xi_eps"));
    let fig1 = read_samples(&dir.path().join("fig1.csv")).unwrap();
    let last = fig1.iter().filter(|r| r.t == 1.0).map(|r| r.x).fold(0.0, f64::max);
    assert_eq!(last, 5.0);
    let manifest = RunManifest::read(&dir.path().join("figures.manifest.json")).unwrap();
    let fig5 = &manifest.parameters["figures"][4];
    assert_eq!(fig5["omega"].as_f64(), Some(0.0));
    assert_eq!(fig5["m"].as_u64(), Some(2));
    assert_eq!(manifest.outputs.len(), 5);
}

#[test]
fn emitted_datasets_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["figures", "--points", "101"], dir.path())), 0);
    for k in 1..=5 {
        let path = dir.path().join(format!("fig{k}.csv"));
        let records = read_samples(&path).unwrap();
        let copy = dir.path().join("copy.csv");
        write_samples(&copy, &records).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&copy).unwrap());
        assert_eq!(read_samples(&copy).unwrap(), records);
    }
}

#[test]
fn replay_reproduces_outputs() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let o = run(&["sample", "--family", "pt", "--n", "2,3", "--times", "0.3,0.9", "--points", "201"], first.path());
    assert_eq!(code(&o), 0);
    let manifest = first.path().join("sample_pt.manifest.json");
    let o = bin().args(["replay", "--manifest"]).arg(&manifest).arg("--out").arg(second.path()).output().unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        fs::read(first.path().join("sample_pt.csv")).unwrap(),
        fs::read(second.path().join("sample_pt.csv")).unwrap()
    );
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["sample", "--family", "box", "--n", "1", "--times", "0.5", "--points", "11"])
        .env("MOVING_WELLS_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("sample_box.csv").exists());
}
