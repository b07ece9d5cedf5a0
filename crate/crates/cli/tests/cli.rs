use std::process::{Command, Output};

use serde_json::Value;

fn qosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qosc"))
        .args(args)
        .env_remove("QOSC_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = qosc(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn ok_csv(args: &[&str]) -> Vec<Vec<String>> {
    let out = qosc(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn energies(v: &Value) -> Vec<f64> {
    v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["energy"].as_f64().unwrap())
        .collect()
}

#[test]
fn golden_spectrum_matches_recursion() {
    let v = ok_json(&["spectrum", "--model", "golden", "--n-max", "5"]);
    assert_eq!(energies(&v), [0.5, 1.0, 1.5, 2.5, 4.0, 6.5]);
    assert_eq!(v["config"]["hbar_omega"], 1.0);
    assert_eq!(v["model"], "golden");
}

#[test]
fn sym_q_harmonic_limit() {
    let v = ok_json(&[
        "spectrum", "--model", "sym_q", "--lambda", "0", "--n-max", "3",
    ]);
    assert_eq!(energies(&v), [0.5, 1.5, 2.5, 3.5]);
}

#[test]
fn semirel_ground_state() {
    let v = ok_json(&[
        "spectrum", "--model", "semirel", "--m", "1", "--c", "1", "--omega0", "1", "--n-max", "0",
    ]);
    let e = energies(&v);
    assert_eq!(e.len(), 1);
    assert!((e[0] - 0.5 * (1.0 + 3f64.sqrt())).abs() < 1e-14);
}

#[test]
fn annulus_levels_echo_window() {
    let v = ok_json(&["spectrum", "--model", "annulus_bs", "--r2", "6"]);
    assert_eq!(v["config"]["n_min"], 1);
    assert_eq!(v["config"]["n_max"], 35);
    let rows = ok_csv(&["spectrum", "--model", "annulus_f", "--format", "csv"]);
    assert_eq!(rows[0], ["n", "energy"]);
    assert!(rows.len() > 1);
}

#[test]
fn qpoly_h2_terms() {
    let v = ok_json(&["qpoly", "--n", "2", "--lambda", "0.7", "--check-residual"]);
    let terms: Vec<(u64, u64)> = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t["i"].as_u64().unwrap(), t["j"].as_u64().unwrap()))
        .collect();
    assert_eq!(terms, [(0, 1), (2, 0)]);
    assert_eq!(v["max_residual"], 0.0);
}

#[test]
fn qpoly_roots_csv_has_n_rows_per_time() {
    let dir = std::env::temp_dir().join(format!("qosc-roots-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("roots.csv");
    let p = path.to_str().unwrap();
    let out = qosc(&[
        "qpoly",
        "--n",
        "5",
        "--lambda",
        "0.3",
        "--times",
        "0,0.5,-1",
        "--roots-output",
        p,
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,k,re,im");
    assert_eq!(lines.len(), 1 + 3 * 5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn qpoly_csv_times_need_roots_file() {
    let out = qosc(&["qpoly", "--n", "3", "--times", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wedge_and_annulus_residuals() {
    let v = ok_json(&["flow", "--domain", "wedge", "--n", "2"]);
    assert!(v["max_stddev_imF"].as_f64().unwrap() < 1e-10);
    let v = ok_json(&[
        "flow",
        "--domain",
        "annulus",
        "--r1",
        "1",
        "--r2",
        "2",
        "--truncation",
        "16",
    ]);
    for r in v["residuals"].as_array().unwrap() {
        assert!(r["stddev_imF"].as_f64().unwrap() < 1e-6);
        assert_eq!(r["truncation_M"], 16);
    }
}

#[test]
fn masked_rows_are_kept() {
    // the grid passes exactly through the vortex at 1+1i
    let rows = ok_csv(&[
        "flow", "--domain", "circle", "--z0", "1,1", "--re-min", "-1", "--re-max", "3", "--im-min",
        "-1", "--im-max", "3", "--nx", "5", "--ny", "5", "--format", "csv",
    ]);
    assert_eq!(rows.len(), 1 + 25);
    assert_eq!(rows[0].last().unwrap(), "masked");
    let masked: Vec<_> = rows[1..].iter().filter(|r| r[6] == "1").collect();
    assert!(!masked.is_empty());
    assert!(masked.iter().all(|r| r[2] == "NaN"));
}

#[test]
fn flow_source_outside_domain() {
    let out = qosc(&["flow", "--domain", "wedge", "--n", "3", "--z0", "-1,0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn vortex_conservation_report() {
    let v = ok_json(&["vortex-sim", "--z0", "1.5,0.2", "--steps", "2000"]);
    assert!(v["radius_drift"].as_f64().unwrap() < 1e-8);
    assert!(v["period_mismatch"].as_f64().unwrap() < 1e-3);
    assert!(v["config"]["dt"].as_f64().unwrap() > 0.0);
    let rows = ok_csv(&[
        "vortex-sim",
        "--steps",
        "100",
        "--stride",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(rows[0], ["t", "re_z", "im_z", "J", "H"]);
    assert_eq!(rows.len(), 1 + 11);
}

#[test]
fn vortex_outside_annulus_is_domain_error() {
    let out = qosc(&["vortex-sim", "--z0", "3,0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn nls_checks_pass() {
    let v = ok_json(&["nls-check", "--test", "soliton"]);
    assert!(v["metrics"]["residual"].as_f64().unwrap() < 1e-7);
    let v = ok_json(&["nls-check", "--test", "flows", "--N", "3"]);
    assert!(v["metrics"]["max_abs_error"].as_f64().unwrap() < 1e-7);
    assert_eq!(v["pass"], true);
    let v = ok_json(&["nls-check", "--test", "qnls", "--lambda", "0"]);
    assert_eq!(v["metrics"]["deviation_from_n2_flow"], 0.0);
    assert_eq!(v["config"]["points"], 768);
    let v = ok_json(&["nls-check", "--test", "zero_curvature", "--n", "2"]);
    assert_eq!(v["pass"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        qosc(&["spectrum", "--model", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(qosc(&["spectrum"]).status.code(), Some(2));
    assert_eq!(
        qosc(&["spectrum", "--model", "golden", "--n-min", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qosc(&["nls-check", "--test", "soliton", "--field", "gaussian"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn max_terms_override_exits_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_qosc"))
        .args(["spectrum", "--model", "annulus_f"])
        .env("QOSC_MAX_TERMS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "qpoly", "--n", "6", "--lambda", "0.4", "--times", "0.3,1.7", "--seed", "7",
    ];
    assert_eq!(qosc(&args).stdout, qosc(&args).stdout);
    let args = [
        "flow",
        "--domain",
        "double_wedge",
        "--n",
        "3",
        "--format",
        "csv",
    ];
    assert_eq!(qosc(&args).stdout, qosc(&args).stdout);
}
