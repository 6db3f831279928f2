use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn steklov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn spectrum_annulus_json() {
    let out = steklov(&["spectrum-annulus", "--n", "2", "--inner", "1", "--outer", "5", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let eig = v["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 5);
    assert_eq!(eig[0].as_f64(), Some(0.0));
    assert!((eig[1].as_f64().unwrap() - 0.1783).abs() < 5e-5);
    assert_eq!(eig[1], eig[2]);
    assert_eq!(v["lines"][1]["multiplicity"], 2);
}

#[test]
fn spectrum_annulus_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let out = steklov(&[
        "spectrum-annulus",
        "--problem",
        "steklov-neumann",
        "--k",
        "3",
        "--csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,branch,value,multiplicity"));
    assert_eq!(lines.nth(1), Some("1,single,0.184615,2"));
}

#[test]
fn invalid_radii_exit_with_usage_code() {
    let out = steklov(&["spectrum-annulus", "--inner", "5", "--outer", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("inner"));
}

#[test]
fn unknown_table_is_rejected() {
    assert_eq!(steklov(&["reproduce-table", "--id", "9"]).status.code(), Some(2));
}

#[test]
fn missing_spec_file_is_an_input_error() {
    let out = steklov(&["fem-solve", "--spec", "/nonexistent/domain.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fem_solve_annulus() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("annulus.txt");
    fs::write(&spec, "# concentric\nouter = disk 5\nhole_center = 0 0\nhole_radius = 1\n").unwrap();
    let out = steklov(&["fem-solve", "--spec", spec.to_str().unwrap(), "--h", "0.5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sigma1 = v["eigenvalues"][1].as_f64().unwrap();
    assert!((sigma1 / 0.178301 - 1.0).abs() < 0.02, "{sigma1}");
    assert!(v["mesh"]["vertices"].as_u64().unwrap() > 100);
}

#[test]
fn fem_solve_accepts_json_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("rect.json");
    fs::write(
        &spec,
        r#"{"outer": {"shape": "rectangle", "width": 8, "height": 6}, "hole_center": [1, 0], "hole_radius": 1}"#,
    )
    .unwrap();
    let out = steklov(&["fem-solve", "--spec", spec.to_str().unwrap(), "--h", "0.5", "--k", "3", "--csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,eigenvalue\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn verify_lemmas_default_grid_passes() {
    let out = steklov(&["verify-lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_pass"], true);
}

#[test]
fn verify_lemmas_bad_grid_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    fs::write(&grid, "n_values = 2, 3\nbogus = 1\n").unwrap();
    let out = steklov(&["verify-lemmas", "--grid", grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_integrals_on_square() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("square.txt");
    let side = (25.0 * std::f64::consts::PI).sqrt();
    fs::write(&spec, format!("outer = rectangle {side} {side}\nhole_center = 0 0\nhole_radius = 1\n")).unwrap();
    let out = steklov(&["verify-integrals", "--spec", spec.to_str().unwrap(), "--h", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_pass"], true);
}

#[test]
fn verify_integrals_needs_centered_hole() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("off.txt");
    fs::write(&spec, "outer = disk 5\nhole_center = 1 0\nhole_radius = 1\n").unwrap();
    let out = steklov(&["verify-integrals", "--spec", spec.to_str().unwrap(), "--h", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("sweep.txt");
    fs::write(&spec, "outer = disk 5\nhole_radius = 1\npath = x\ncenters = 0 0; 1 0; 2 0\nh = 0.5\nk = 4\n").unwrap();
    let out = steklov(&["sweep", "--spec", spec.to_str().unwrap(), "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t1,t2,distance,sigma1,sigma2,mu1,mu2");
    assert_eq!(rows.len(), 4);
}
