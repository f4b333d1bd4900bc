use std::path::PathBuf;
use std::process::{Command, Output};

fn gbspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbspec")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gbspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn symbol_grid_has_one_row_per_point() {
    let o = gbspec(&["symbol", "--kind", "f", "--p", "3", "--family", "hyperbolic", "--alpha", "10", "--grid", "512"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,value"));
    assert_eq!(lines.count(), 512);
}

#[test]
fn assembled_csv_and_binary_agree() {
    let cfg = scratch("problem.json");
    std::fs::write(
        &cfg,
        r#"{"d":1,"kappa":"1+x","family":"hyperbolic","alpha":10,"mode":"nonnested","p":3}"#,
    )
    .unwrap();
    let bin = scratch("a.bin");
    let csv = scratch("a.csv");
    let c = cfg.to_str().unwrap();
    assert_eq!(gbspec(&["assemble", "--config", c, "--n", "16", "--format", "bin", "-o", bin.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(gbspec(&["assemble", "--config", c, "--n", "16", "-o", csv.to_str().unwrap()]).status.code(), Some(0));
    let a = gbspec::cli::read_matrix(&bin).unwrap();
    let b = gbspec::cli::read_matrix(&csv).unwrap();
    assert_eq!((a.nrows(), a.ncols()), (17, 17));
    assert_eq!(a, b);

    let o = gbspec(&["eig", "--matrix", bin.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 18);
}

#[test]
fn distribution_report_is_json() {
    let o = gbspec(&["distribution", "--n", "16,32"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    assert!(v["reports"][1]["mean_abs_discrepancy"].as_f64().unwrap() >= 0.0);
}

#[test]
fn bounds_report_lists_status() {
    let o = gbspec(&["bounds", "--p", "4", "--family", "trigonometric", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["upper_violations"], 0);
    assert!(v["lower_status"].is_string());
}

#[test]
fn bad_input_exits_with_one() {
    let cfg = scratch("bad.json");
    std::fs::write(&cfg, r#"{"d":1,"kappa":"x-1","family":"polynomial","p":3}"#).unwrap();
    let o = gbspec(&["assemble", "--config", cfg.to_str().unwrap(), "--n", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
    assert_eq!(gbspec(&["cardinal", "--p", "0"]).status.code(), Some(1));
    assert_eq!(gbspec(&["eig", "--matrix", "/nonexistent/matrix.csv"]).status.code(), Some(1));
    assert_eq!(gbspec(&["decay", "--pmin", "5", "--pmax", "3"]).status.code(), Some(1));
}

#[test]
fn toeplitz_of_g_is_skew() {
    let o = gbspec(&["toeplitz", "--symbol", "g", "--p", "3", "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let a = gbspec::cli::parse_matrix_csv(&stdout(&o)).unwrap();
    assert_eq!(&a + a.transpose(), nalgebra::DMatrix::zeros(4, 4));
}
