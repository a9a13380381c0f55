use std::path::Path;
use std::process::Command;

use hdicv_core::experiment::{EsdEstimator, ExperimentConfig, ExperimentKind, MpCurveParams};
use hdicv_core::sim::{ClockSpec, GammaSpec, MuFn, NoiseSpec};

fn hdicv(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hdicv")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn small_esd() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ExperimentKind::EsdCompare, 10, 40);
    cfg.clock = ClockSpec::shifted_poisson(2.0);
    cfg.esd.estimator = EsdEstimator::AAtva;
    cfg
}

#[test]
fn esd_compare_writes_outputs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &small_esd());
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = hdicv(&["esd-compare", "--config", &config, "--out", out.to_str().unwrap(), "--reps", "3", "--seed", "9"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(summary["reps"], 3);
    }
    for file in ["replications.csv", "grid.csv", "summary.json"] {
        let a = std::fs::read(out_a.join(file)).unwrap();
        assert_eq!(a, std::fs::read(out_b.join(file)).unwrap(), "{file}");
    }
}

#[test]
fn simulate_writes_panel_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::Simulate, 3, 6);
    cfg.clock = ClockSpec::constant(2);
    let config = write_config(dir.path(), &cfg);
    let out = dir.path().join("sim");
    let o = hdicv(&["simulate", "--config", &config, "--out", out.to_str().unwrap(), "--reps", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["panel_0000.csv", "panel_0000.json", "panel_0001.csv", "icv_0001_001.csv", "targets_0000.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let panel = std::fs::read_to_string(out.join("panel_0000.csv")).unwrap();
    assert!(panel.starts_with("day,stamp,stock,txn_index,price"));
    assert_eq!(panel.lines().count(), 1 + 3 * 6 * 2);
}

#[test]
fn mp_curve_preset_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::MpCurve, 4, 10);
    cfg.mp_curve = MpCurveParams { support: Some(vec![1.0]), grid_points: 32, ..MpCurveParams::default() };
    let config = write_config(dir.path(), &cfg);
    let out = dir.path().join("mp");
    let o = hdicv(&["mp-curve", "--config", &config, "--out", out.to_str().unwrap(), "--threads", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("curve.csv")).unwrap();
    assert_eq!(csv.lines().count(), 33);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"kind\": \"esd-compare\", \"p\": 0}").unwrap();
    let o = hdicv(&["esd-compare", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let config = write_config(dir.path(), &small_esd());
    let o = hdicv(&["mc-rfl", "--config", &config]);
    assert_eq!(o.status.code(), Some(2), "kind mismatch");

    let o = hdicv(&["esd-compare", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = hdicv(&["esd-compare", "--reps", "0", "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_esd();
    cfg.noise = NoiseSpec::None;
    cfg.gamma = GammaSpec { rho: 1.0, sigma: 0.0, mu: MuFn::Constant { level: 0.0 }, gamma0: None };
    let config = write_config(dir.path(), &cfg);
    let o = hdicv(&["esd-compare", "--config", &config, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
