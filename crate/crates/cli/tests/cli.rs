use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use itersing_cli::commands::{EvalRow, SolveReport, VerifyReport};

fn spec_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn itersing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itersing"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("spec.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const LAPLACE: &str = "p = 2.0\nn = 3\n\n[[factors]]\nalphas = [0.0, 0.0, 0.0]\nlambda = 0.0\nk = 1\n";

#[test]
fn roots_laplace_row() {
    let o = itersing(&["roots", spec_path("laplace3.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "factor 0: φ=0.5 disc=0.25 I1 roots 0, -1\n");
}

#[test]
fn roots_rejects_invalid_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = itersing(&["roots", &write_spec(&dir, &LAPLACE.replace("k = 1", "k = 0"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 7: factors[0].k"), "{}", stderr(&o));

    let o = itersing(&["roots", &write_spec(&dir, &LAPLACE.replace("[0.0, 0.0, 0.0]", "[0.0]"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("factors[0].alphas"), "{}", stderr(&o));

    let o = itersing(&["roots", "/nonexistent/spec.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_listings() {
    let o = itersing(&["solve", spec_path("euler_double.toml").to_str().unwrap()]);
    assert_eq!(stdout(&o), "1\nln x\n(ln x)^2\n(ln x)^3\nterms: 4\n");
    let o = itersing(&["solve", spec_path("laplace3.toml").to_str().unwrap()]);
    assert_eq!(stdout(&o), "1\nr^(-1)\nterms: 2\n");
    let o = itersing(&["solve", spec_path("euler_oscillatory.toml").to_str().unwrap()]);
    assert_eq!(stdout(&o), "cos(2 ln x)\nsin(2 ln x)\nterms: 2\n");
}

#[test]
fn solve_json_round_trips_through_eval() {
    let file = spec_path("mixed.toml");
    let file = file.to_str().unwrap();
    let solved: SolveReport = serde_json::from_slice(&itersing(&["solve", file, "--json"]).stdout).unwrap();
    assert_eq!(solved.count, 12);
    let coeffs = [
        "0.5", "-1.25", "2", "0.75", "1", "-3", "0.1", "4", "-0.5", "1.5", "2.5", "-2",
    ];
    let points = ["0.6,1.1,1.9,0.8", "1.5,1.5,0.7,1.2", "2,0.5,1,1.75"];
    let mut args = vec!["eval", file, "--json", "--coeffs"];
    let joined = coeffs.join(",");
    args.push(&joined);
    for p in &points {
        args.push("--at");
        args.push(p);
    }
    let rows: Vec<EvalRow> = serde_json::from_slice(&itersing(&args).stdout).unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let c: Vec<f64> = coeffs.iter().map(|c| c.parse().unwrap()).collect();
        let mine: f64 = solved
            .terms
            .iter()
            .zip(&c)
            .map(|(t, c)| c * t.to_term().eval_at_radius(row.r))
            .sum();
        assert!(
            (mine - row.value).abs() <= 1e-12 * row.value.abs().max(1.0),
            "{mine} vs {}",
            row.value
        );
    }
}

#[test]
fn verify_laplace_passes() {
    let o = itersing(&["verify", spec_path("laplace3.toml").to_str().unwrap(), "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("result: PASS\n"));
}

#[test]
fn verify_injected_term_fails() {
    let o = itersing(&[
        "verify",
        spec_path("laplace3.toml").to_str().unwrap(),
        "--inject-exponent",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAILED: term 2 (r^(5))"), "{out}");
    assert!(out.ends_with("result: FAIL\n"));
}

#[test]
fn verify_without_points_is_symbolic_only() {
    let o = itersing(&[
        "verify",
        spec_path("euler_double.toml").to_str().unwrap(),
        "--points",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("numeric check skipped"));
    let o = itersing(&[
        "verify",
        spec_path("euler_double.toml").to_str().unwrap(),
        "--points",
        "0",
        "--json",
    ]);
    let report: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.numeric_skipped && report.passed);
    assert!(report.terms.iter().all(|t| t.numeric.is_none()));
}

#[test]
fn verify_combined_mode_flag() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{LAPLACE}\n[[factors]]\nalphas = [-3.0, 0.0, 0.0]\nlambda = 0.0\nk = 1\n");
    let file = write_spec(&dir, &text);
    let o = itersing(&["solve", &file, "--mode", "combined"]);
    assert_eq!(stdout(&o), "1\nln r\nr^(-1)\nr^(2)\nterms: 4\n");
    let o = itersing(&["verify", &file, "--mode", "combined", "--points", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = itersing(&["verify", &file, "--mode", "fancy"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let file = spec_path("mixed.toml");
    let a = itersing(&[
        "verify",
        file.to_str().unwrap(),
        "--json",
        "--points",
        "10",
        "--seed",
        "3",
    ]);
    let b = itersing(&[
        "verify",
        file.to_str().unwrap(),
        "--json",
        "--points",
        "10",
        "--seed",
        "3",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = itersing(&[
        "verify",
        file.to_str().unwrap(),
        "--json",
        "--points",
        "10",
        "--seed",
        "4",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn eval_values() {
    let laplace = spec_path("laplace3.toml");
    let o = itersing(&["eval", laplace.to_str().unwrap(), "--at", "1,2,2", "--coeffs", "0,1"]);
    let v: f64 = stdout(&o).trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-15);

    let o = itersing(&[
        "eval",
        laplace.to_str().unwrap(),
        "--at",
        "1,2,2",
        "--at",
        "0.5,0.5,3",
        "--coeffs",
        "0,0",
    ]);
    assert_eq!(stdout(&o), "u(1, 2, 2) = 0\nu(0.5, 0.5, 3) = 0\n");

    let dir = tempfile::tempdir().unwrap();
    let euler = write_spec(&dir, "p = 1\nn = 1\n[[factors]]\nalphas = [1]\nlambda = 0\nk = 1\n");
    let e = std::f64::consts::E.to_string();
    let o = itersing(&["eval", &euler, "--at", &e, "--coeffs", "1,1"]);
    let v: f64 = stdout(&o).trim().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((v - 2.0).abs() < 1e-15);
    // coefficients default to one
    let o = itersing(&["eval", &euler, "--at", &e]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eval_errors() {
    let laplace = spec_path("laplace3.toml");
    let o = itersing(&["eval", laplace.to_str().unwrap(), "--at", "1,-2,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("domain error") && stderr(&o).contains("-2"),
        "{}",
        stderr(&o)
    );
    let o = itersing(&["eval", laplace.to_str().unwrap(), "--at", "1,2,2", "--coeffs", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parameter error"), "{}", stderr(&o));
    let o = itersing(&["eval", laplace.to_str().unwrap(), "--at", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = itersing(&[
        "solve",
        spec_path("laplace3.toml").to_str().unwrap(),
        "--json",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let report: SolveReport = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report.count, 2);
}
