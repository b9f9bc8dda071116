use std::path::Path;
use std::process::{Command, Output};

use forge_core::{FieldId, Grid};
use forge_mpc::{violation_count, RegionOfInterest};

fn forgectl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forgectl")).args(args).output().expect("runs")
}

fn ok(args: &[&str]) -> String {
    let out = forgectl(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn read(p: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

fn err_json(out: &Output) -> serde_json::Value {
    assert!(!out.status.success());
    serde_json::from_slice(out.stderr.trim_ascii()).expect("machine-parsable error")
}

#[test]
fn nominal_simulation_writes_eight_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let summary: serde_json::Value = serde_json::from_str(&ok(&["simulate", "--out", out.to_str().unwrap()])).unwrap();
    let snaps = summary["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 8);
    assert_eq!(snaps[0]["core_mean_grain_um"], 70.0);
    for k in 0..8 {
        assert!(out.join(format!("snapshot_{k}.csv")).exists());
    }
    assert_eq!(read(out.join("snapshots.bin")).len(), 8 * 1386 * 4);
    let first = std::fs::read_to_string(out.join("snapshot_0.csv")).unwrap();
    assert!(first.lines().skip(1).all(|l| l.ends_with(",70")));
}

#[test]
fn simulation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let flags = ["--t-oven", "1150", "--wait", "5,20,40", "--upsetting", "0.05,0.1,0.15"];
    for d in [&a, &b] {
        let mut args = vec!["simulate", "--out", d.to_str().unwrap()];
        args.extend(flags);
        ok(&args);
    }
    for f in ["snapshots.bin", "summary.json", "stamp.json", "snapshot_4.csv"] {
        assert_eq!(read(a.join(f)), read(b.join(f)), "{f}");
    }
}

#[test]
fn bound_violations_are_all_listed() {
    let dir = tempfile::tempdir().unwrap();
    let out = forgectl(&["simulate", "--t-oven", "1350", "--upsetting", "0.2,0.1,0.01", "--out", dir.path().join("x").to_str().unwrap()]);
    let e = err_json(&out);
    assert_eq!(e["kind"], "bounds");
    let details: Vec<String> = e["details"].as_array().unwrap().iter().map(|d| d.as_str().unwrap().to_string()).collect();
    assert_eq!(details.len(), 3);
    assert!(details[0].contains("t_oven = 1350") && details[0].contains("1300"));
    assert!(!dir.path().join("x").exists());
}

#[test]
fn outputs_are_not_overwritten_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let o = out.to_str().unwrap();
    ok(&["simulate", "--out", o]);
    assert_eq!(err_json(&forgectl(&["simulate", "--out", o]))["kind"], "output_exists");
    ok(&["simulate", "--out", o, "--force"]);
}

#[test]
fn render_overlay_matches_violation_count() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&["simulate", "--t-oven", "1100", "--wait", "60,60,60", "--out", sim.to_str().unwrap()]);
    let img = dir.path().join("grain.pgm");
    let summary: serde_json::Value = serde_json::from_str(&ok(&[
        "render", "--run", sim.to_str().unwrap(), "--snapshot", "7", "--field", "grain",
        "--threshold", "35", "--region", "--out", img.to_str().unwrap(),
    ]))
    .unwrap();
    let grid = Grid::default();
    let text = std::fs::read_to_string(sim.join("snapshot_7.csv")).unwrap();
    let stack = forge_cli::render::parse_state_csv(&grid, &text).unwrap();
    let expected = violation_count(stack.field(FieldId::Grain), &RegionOfInterest::default().mask(&grid), 35.0);
    assert_eq!(summary["overlay_nodes"].as_u64().unwrap() as usize, expected);
    assert!(expected > 0);
    let overlay = std::fs::read_to_string(dir.path().join("grain.overlay.pgm")).unwrap();
    let marked = overlay.lines().skip(3).flat_map(|l| l.split(' ')).filter(|p| *p == "255").count();
    assert_eq!(marked, expected);
    assert!(dir.path().join("grain.csv").exists());
}

#[test]
fn unknown_field_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let sim = dir.path().join("sim");
    ok(&["simulate", "--out", sim.to_str().unwrap()]);
    let out = forgectl(&["render", "--run", sim.to_str().unwrap(), "--field", "hardness", "--out", dir.path().join("h.pgm").to_str().unwrap()]);
    assert_eq!(err_json(&out)["kind"], "core");
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("forge.toml");
    std::fs::write(&cfg, "[simulate]\nt_oven = 1150.0\nwait = [20.0, 20.0, 20.0]\n").unwrap();
    let a = dir.path().join("a");
    let s: serde_json::Value = serde_json::from_str(&ok(&[
        "--config", cfg.to_str().unwrap(), "simulate", "--wait", "5,5,5", "--out", a.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(s["strategy"]["t_oven"], 1150.0);
    assert_eq!(s["strategy"]["wait"][0], 5.0);
}

#[test]
fn train_with_zero_epochs_writes_model_and_empty_curve() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let m = dir.path().join("m");
    ok(&["gen-dataset", "--runs", "10", "--seed", "3", "--out", ds.to_str().unwrap()]);
    ok(&["train", "--dataset", ds.to_str().unwrap(), "--epochs", "0", "--out", m.to_str().unwrap()]);
    assert!(m.join("model.bin").exists());
    let curve: serde_json::Value = serde_json::from_slice(&read(m.join("loss.json"))).unwrap();
    assert_eq!(curve["epochs"].as_array().unwrap().len(), 0);
    let stamp: serde_json::Value = serde_json::from_slice(&read(m.join("stamp.json"))).unwrap();
    assert_eq!(stamp["seed"], 0);
    assert_eq!(stamp["config_sha256"].as_str().unwrap().len(), 64);

    let report = ok(&["eval", "--dataset", ds.to_str().unwrap(), "--model", m.join("model.bin").to_str().unwrap()]);
    assert!(report.contains("grain") && report.contains("% of range"));
    let csv = ok(&["predict", "--model", m.join("model.bin").to_str().unwrap(), "--dataset", ds.to_str().unwrap(), "--pair", "3"]);
    assert_eq!(csv.lines().count(), 232);
}

#[test]
fn missing_model_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("s.toml");
    std::fs::write(&scen, forge_mpc::Scenario::disturbed_oven().to_toml()).unwrap();
    let out = forgectl(&[
        "mpc-run", "--scenario", scen.to_str().unwrap(), "--model", "/nonexistent/model.bin",
        "--out", dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(err_json(&out)["kind"], "model");
}
