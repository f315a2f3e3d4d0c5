use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn torsion(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsion")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn efficiency_of_unit_interval() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"domain":{"type":"interval","a":0,"b":1}}"#);
    let out = dir.path().join("eff.csv");
    let o = torsion(&["efficiency", "--input", &input, "--output", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let phi: f64 = row[row.len() - 3].parse().unwrap();
    assert!((phi - 2.0 / 3.0).abs() < 1e-6, "phi {phi}");
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("eff.json")).unwrap()).unwrap();
    assert!((summary["phi"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
}

#[test]
fn kappa_scan_classifies_well_family() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.json", r#"{"type":"well","alpha_exp":0.6666666666666666,"c":1}"#);
    let out = dir.path().join("k.csv");
    let o = torsion(
        &["kappa-scan", "--input", &input, "--n-values", "100,1000,10000", "--output", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 4);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("k.json")).unwrap()).unwrap();
    assert!((summary["kappa_hat"].as_f64().unwrap() - 0.25).abs() < 0.01);
    assert_eq!(summary["classification"], "kappa");
}

#[test]
fn non_increasing_n_values_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "f.json", r#"{"type":"well","alpha_exp":0.5,"c":1}"#);
    let o = torsion(&["kappa-scan", "--input", &input, "--n-values", "100,100"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", r#"{"domain":"#);
    assert_eq!(torsion(&["solve", "--input", &input], dir.path()).status.code(), Some(2));
    let input = write(dir.path(), "neg.json", r#"{"domain":{"type":"ball","dim":2,"radius":-1}}"#);
    assert_eq!(torsion(&["solve", "--input", &input], dir.path()).status.code(), Some(2));
    let input = write(dir.path(), "extra.json", r#"{"domain":{"type":"interval","a":0,"b":1,"c":2}}"#);
    assert_eq!(torsion(&["efficiency", "--input", &input], dir.path()).status.code(), Some(2));
}

#[test]
fn battery_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = torsion(&["bounds", "--output", a.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = torsion(&["bounds", "--sequential", "--output", b.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&a).unwrap();
    assert_eq!(csv, fs::read_to_string(&b).unwrap());
    assert!(csv.starts_with("bound_name,context,lhs,rhs,slack,satisfied"));
    assert!(csv.lines().count() > 100);
}

#[test]
fn negative_tolerance_fails_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"domain":{"type":"ball","dim":3,"radius":1}}"#);
    let o = torsion(&["bounds", "--input", &input, "--tol", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = torsion(&["bounds", "--input", &input], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn solve_writes_grid_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "p.json",
        r#"{"domain":{"type":"interval","a":0,"b":1},"potential":{"type":"constant","c":1}}"#,
    );
    let out = dir.path().join("s.csv");
    let o = torsion(&["solve", "--input", &input, "--grid-nodes", "64", "--output", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().next(), Some("x,torsion,eigenfunction"));
    assert_eq!(csv.lines().count(), 65);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    let lambda = summary["lambda1"].as_f64().unwrap();
    assert!((lambda - (std::f64::consts::PI.powi(2) + 1.0)).abs() < 1e-2, "lambda {lambda}");
}

#[test]
fn grid_floor_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"domain":{"type":"interval","a":0,"b":1}}"#);
    assert_eq!(torsion(&["solve", "--input", &input, "--grid-nodes", "8"], dir.path()).status.code(), Some(2));
}

#[test]
fn obstacle_curve_has_closed_form_column() {
    let dir = tempfile::tempdir().unwrap();
    let o = torsion(&["obstacle-curve", "--dims", "3", "--points", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    assert_eq!(out.lines().count(), 6);
    for line in out.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((cols[4] - cols[5]).abs() < 1e-6 * cols[5]);
    }
}
