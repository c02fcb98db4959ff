use std::path::Path;
use std::process::{Command, Output};

fn gdnls(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdnls"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("GDNLS_OUT_DIR")
        .output()
        .expect("binary runs")
}

const SMALL: [&str; 6] = ["--set", "t_end=0.01", "--set", "grid.max_mode=16", "--set", "epsilon=0.125"];

fn run_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["run"];
    v.extend_from_slice(&SMALL);
    v.extend_from_slice(extra);
    v
}

#[test]
fn run_is_deterministic_and_writes_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = run_args(&["--seed", "17"]);
    assert_eq!(gdnls(a.path(), &args).status.code(), Some(0));
    assert_eq!(gdnls(b.path(), &args).status.code(), Some(0));
    for f in ["diagnostics.csv", "final_field.json", "run_config.toml", "run_summary.json"] {
        assert!(a.path().join(f).exists(), "{f}");
    }
    let csv_a = std::fs::read(a.path().join("diagnostics.csv")).unwrap();
    let csv_b = std::fs::read(b.path().join("diagnostics.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
}

#[test]
fn zero_datum_gives_zero_diagnostics() {
    let d = tempfile::tempdir().unwrap();
    let args = run_args(&["--set", "initial_data.kind=\"plane_wave\"", "--set", "initial_data.amplitude=0.0", "--set", "initial_data.n=1"]);
    let o = gdnls(d.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.path().join("diagnostics.csv")).unwrap();
    for line in text.lines().skip(1) {
        assert!(line.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }
}

#[test]
fn plane_wave_l2_column_is_constant() {
    let d = tempfile::tempdir().unwrap();
    let args = run_args(&["--set", "initial_data.kind=\"plane_wave\"", "--set", "initial_data.amplitude=0.7", "--set", "initial_data.n=2"]);
    assert_eq!(gdnls(d.path(), &args).status.code(), Some(0));
    let text = std::fs::read_to_string(d.path().join("diagnostics.csv")).unwrap();
    let l2: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(l2.len() > 2);
    assert!(l2.iter().all(|v| (v - 0.7).abs() < 1e-12), "{l2:?}");
}

#[test]
fn unknown_probe_and_bad_config_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(gdnls(d.path(), &["probe", "nonsense"]).status.code(), Some(2));
    assert_eq!(gdnls(d.path(), &run_args(&["--set", "dt=-1"])).status.code(), Some(2));
    assert_eq!(gdnls(d.path(), &run_args(&["--set", "no_such_key=1"])).status.code(), Some(2));
}

#[test]
fn cancellation_probe_fails_without_corrections() {
    let d = tempfile::tempdir().unwrap();
    let o = gdnls(d.path(), &["probe", "cancellation", "--set", "alpha=0.0", "--set", "beta=0.0"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(d.path().join("probe_cancellation.json")).unwrap()).unwrap();
    assert_eq!(json["probe_id"], "cancellation");
    assert_eq!(json["verdict"], "fail");
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let d = tempfile::tempdir().unwrap();
    let mut args = vec!["sweep"];
    args.extend_from_slice(&SMALL);
    args.extend_from_slice(&["--set", "sweep.sigma=[1.5, 2.0]", "--set", "sweep.amplitude=[0.1, 0.2, 0.3]"]);
    let o = gdnls(d.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("sigma,amplitude,frequency,termination"));
    assert_eq!(lines.len(), 1 + 6);
}
