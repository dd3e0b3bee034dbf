use std::path::Path;
use std::process::Command;

fn lrp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lrp")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

const CONTINUOUS: &str = r#"{
    "model": "continuous",
    "connection": {"family": "F", "alpha": 3.0},
    "d": 1,
    "n_grid": [10, 30],
    "replicates": 40,
    "r_grid": [0.5, 1.0, 2.0],
    "padding": {"ceiling": 0.001},
    "seed": 11
}"#;

#[test]
fn unknown_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &CONTINUOUS.replace("\"seed\": 11", "\"seed\": 11, \"sede\": 1"));
    let (code, _, err) = lrp(&["simulate", "--config", &cfg]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("sede"));
}

#[test]
fn zero_replicates_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &CONTINUOUS.replace("\"replicates\": 40", "\"replicates\": 0"));
    assert_eq!(lrp(&["simulate", "--config", &cfg]).0, 1);
    assert_eq!(lrp(&["simulate"]).0, 1);
    assert_eq!(lrp(&["frobnicate"]).0, 1);
}

#[test]
fn simulate_is_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", CONTINUOUS);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(lrp(&["simulate", "--config", &cfg, "--workers", "1", "--out", a.to_str().unwrap()]).0, 0);
    assert_eq!(lrp(&["simulate", "--config", &cfg, "--workers", "4", "--out", b.to_str().unwrap()]).0, 0);
    let ca = std::fs::read(a.join("simulate.csv")).unwrap();
    assert_eq!(ca, std::fs::read(b.join("simulate.csv")).unwrap());
    // a different seed changes the records
    let c = dir.path().join("c");
    lrp(&["simulate", "--config", &cfg, "--seed", "12", "--out", c.to_str().unwrap()]);
    assert_ne!(ca, std::fs::read(c.join("simulate.csv")).unwrap());

    let text = String::from_utf8(ca).unwrap();
    let cert: f64 = text.lines().nth(1).unwrap().split(',').nth(7).unwrap().parse().unwrap();
    assert!(cert > 0.0 && cert <= 1e-3);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["rows"].as_array().unwrap().len(), 2);
    assert_eq!(summary["config"]["seed"], 11);
}

#[test]
fn directed_runs_report_zero_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"model": "dlrpq", "connection": {"family": "F", "alpha": 2.0}, "d": 1,
                   "n_grid": [20], "replicates": 10, "seed": 1}"#;
    let cfg = write_config(dir.path(), "c.json", body);
    let out = dir.path().join("o");
    assert_eq!(lrp(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]).0, 0);
    let text = std::fs::read_to_string(out.join("simulate.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn exact_tables() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"model": "continuous", "connection": {"family": "W", "m": 1.0, "alpha": 1.0}, "d": 2,
                   "norm": "two_norm", "n_grid": [10], "r_grid": [0.5, 1.0, 1.5], "exact": "typical"}"#;
    let cfg = write_config(dir.path(), "w.json", body);
    let (code, out, _) = lrp(&["exact", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<f64>> =
        out.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows[0][1] < 1.0);
    assert_eq!(rows[1][1], 1.0);
    assert_eq!(rows[2][1], 1.0);

    let body = r#"{"model": "discrete", "connection": {"family": "F", "alpha": 2.0}, "d": 1,
                   "n_grid": [10], "r_grid": [1.0, 4.0], "exact": "dichotomy"}"#;
    let cfg = write_config(dir.path(), "d.json", body);
    let (code, out, _) = lrp(&["exact", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("r,inv_r,mu,gap"));
    let last: Vec<f64> = out.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[2] - 0.25).abs() < 1e-4 && last[3].abs() < 1e-4);

    let body = r#"{"model": "continuous", "connection": {"family": "F", "alpha": 3.0}, "d": 1,
                   "n_grid": [100], "r_grid": [1.0], "exact": "poisson_bounds"}"#;
    let cfg = write_config(dir.path(), "p.json", body);
    let (code, out, _) = lrp(&["exact", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,r,threshold,beta_n,dtv_bound,dw_bound"));
}

#[test]
fn norming_tables() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"model": "dlrpq", "connection": {"family": "G1", "lambda": 1.0}, "d": 1, "n_grid": [10, 1000]}"#;
    let cfg = write_config(dir.path(), "g1.json", body);
    let (code, out, _) = lrp(&["norming", "--config", &cfg]);
    assert_eq!(code, 0);
    for line in out.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - 1.0).abs() < 1e-12);
        assert!((v[3] - (v[0].ln() + v[4])).abs() < 1e-9);
    }

    let body = r#"{"model": "continuous", "connection": {"family": "G1", "lambda": 1.5}, "d": 2,
                   "norm": "two_norm", "n_grid": [10, 1000, 1000000]}"#;
    let cfg = write_config(dir.path(), "g2d.json", body);
    let (code, out, _) = lrp(&["norming", "--config", &cfg]);
    assert_eq!(code, 0);
    let header: Vec<&str> = out.lines().next().unwrap().split(',').collect();
    let gap = header.iter().position(|h| *h == "route_gap").unwrap();
    for line in out.lines().skip(1) {
        let v: f64 = line.split(',').nth(gap).unwrap().parse().unwrap();
        assert!(v <= 1e-8);
    }
}

#[test]
fn sweep_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"{"model": "continuous", "connection": {"family": "F", "alpha": 3.0}, "d": 1,
                   "n_grid": [100, 1000, 10000, 100000]}"#;
    let cfg = write_config(dir.path(), "s.json", body);
    let out = dir.path().join("o");
    let (code, text, _) = lrp(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("slope -1.0"));
    assert!(std::fs::read_to_string(out.join("sweep.csv")).unwrap().starts_with("n,value,fitted"));

    assert_eq!(lrp(&["verify", "--suite", "geometry"]).0, 0);
    let (code, _, err) = lrp(&["verify", "--suite", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("typical-edge"));
}
