//! End-to-end CLI tests. Golden files live in `tests/golden`; run with
//! `UPDATE_GOLDEN=1` to rewrite them after an intentional schema change.

use std::path::PathBuf;
use std::process::{Command, Output};

const ELLIPSE: &str = r#"{"type":"ellipsoid","center":[0,0],"semi_axes":[2,1]}"#;
const P4: &str = r#"{"type":"pnorm_ball","center":[0,0],"radius":1,"p":4}"#;

fn fhgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str, args: &[&str]) {
    let out = fhgeom(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want =
        std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert_eq!(stdout(&out), want, "output of {args:?} differs from {name}");
}

#[test]
fn golden_outputs() {
    golden(
        "dist_funk.json",
        &["dist", "--metric", "funk", "--from", "0,0", "--to", "0.5,0"],
    );
    golden(
        "dist_hilbert_ellipse.csv",
        &[
            "dist", "--domain", ELLIPSE, "--from", "0.3,0.2", "--to", "-0.5,0.4", "--format", "csv",
        ],
    );
    golden(
        "wricci_funk.json",
        &[
            "wricci", "--point", "0.2,-0.1", "--vector", "1,1", "--N", "3,4,inf",
        ],
    );
    golden(
        "domain_info_ellipse.json",
        &["domain-info", "--domain", ELLIPSE],
    );
    golden(
        "ballvol_hilbert.json",
        &[
            "ballvol",
            "--metric",
            "hilbert",
            "--center",
            "0,0",
            "--r",
            "0.5,1,2",
            "--samples",
            "20000",
            "--seed",
            "3",
        ],
    );
    golden(
        "verify_ellipse.json",
        &[
            "verify",
            "--domain",
            ELLIPSE,
            "--samples",
            "4",
            "--seed",
            "7",
        ],
    );
}

#[test]
fn distance_examples() {
    let v = json(&fhgeom(&[
        "dist", "--metric", "funk", "--from", "0,0", "--to", "0.5,0",
    ]));
    assert!((v["d_xy"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-15);
    assert!((v["d_yx"].as_f64().unwrap() - 1.5f64.ln()).abs() < 1e-15);
    let v = json(&fhgeom(&[
        "dist", "--metric", "hilbert", "--from", "0,0", "--to", "0,0",
    ]));
    assert_eq!(v["d_xy"].as_f64().unwrap(), 0.0);
}

#[test]
fn exit_codes() {
    let outside = fhgeom(&["dist", "--from", "2,0", "--to", "0,0"]);
    assert_eq!(outside.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&outside.stderr).contains("E_OUTSIDE"));

    let bad_n = fhgeom(&["wricci", "--point", "0,0", "--vector", "1,0", "--N", "1"]);
    assert_eq!(bad_n.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_n.stderr).contains("E_BAD_N"));

    let bad_k = fhgeom(&["bgcheck", "--K", "0.5", "--samples", "100"]);
    assert_eq!(bad_k.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_k.stderr).contains("E_BAD_K"));

    let bad_spec = fhgeom(&[
        "domain-info",
        "--domain",
        r#"{"type":"ellipsoid","center":[0,0],"semi_axes":[1,-1]}"#,
    ]);
    assert_eq!(bad_spec.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_spec.stderr).contains("E_BAD_SPEC"));

    assert_eq!(fhgeom(&["dist", "--from", "0,0"]).status.code(), Some(2));
    assert_eq!(fhgeom(&["nonsense"]).status.code(), Some(2));
    assert_eq!(fhgeom(&["--help"]).status.code(), Some(0));
}

#[test]
fn strict_mode_fails_on_large_deviation() {
    let args = [
        "wricci", "--point", "0.1,0", "--vector", "1,0", "--tol", "1e-30",
    ];
    assert_eq!(fhgeom(&args).status.code(), Some(0));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let out = fhgeom(&strict);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&out)["within_tol"], false);
}

#[test]
fn wricci_reports_theorem_values() {
    let v = json(&fhgeom(&[
        "wricci", "--point", "0.3,0.1", "--vector", "0,2", "--N", "4",
    ]));
    assert!((v["ric_N"][0]["value"].as_f64().unwrap() + 1.375).abs() < 2e-3);
    assert_eq!(v["ric_n"], "-inf");
    let v = json(&fhgeom(&[
        "wricci", "--metric", "hilbert", "--point", "0,0", "--vector", "1,0", "--N", "inf",
    ]));
    assert!((v["ric_inf"].as_f64().unwrap() - 2.0).abs() < 2e-3);
}

#[test]
fn verify_statuses() {
    let out = fhgeom(&[
        "verify",
        "--domain",
        ELLIPSE,
        "--metric",
        "funk",
        "--samples",
        "10",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "PASS");
    let out = fhgeom(&[
        "verify",
        "--domain",
        P4,
        "--metric",
        "hilbert",
        "--samples",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "PASS-with-warning");
    assert!(v["strong_convexity_margin"].as_f64().unwrap() < 1e-3);
    let out = fhgeom(&[
        "verify",
        "--domain",
        ELLIPSE,
        "--samples",
        "3",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn volume_and_bishop_gromov() {
    let v = json(&fhgeom(&[
        "ballvol",
        "--metric",
        "funk",
        "--center",
        "0,0",
        "--r",
        "1",
        "--samples",
        "50000",
    ]));
    let row = &v["rows"][0];
    let err = row["abs_error"].as_f64().unwrap();
    assert!(err <= 3.0 * row["std_error"].as_f64().unwrap());
    let out = fhgeom(&[
        "bgcheck",
        "--metric",
        "hilbert",
        "--domain",
        ELLIPSE,
        "--point",
        "0.3,0.2",
        "--N",
        "4",
        "--samples",
        "50000",
        "--strict",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"], "0 violations");
    assert_eq!(v["K"].as_f64().unwrap(), -5.5);
}

#[test]
fn csv_matches_json() {
    let args = ["tensor", "--point", "0.1,0.2", "--vector", "1,0.5"];
    let j = stdout(&fhgeom(&args));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let c = stdout(&fhgeom(&csv_args));
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    let line = c.lines().find(|l| l.starts_with("F,")).unwrap();
    let from_csv: f64 = line[2..].parse().unwrap();
    assert_eq!(from_csv, v["F"].as_f64().unwrap());
    // the JSON text carries the same digits as the CSV cell
    assert!(j.contains(&format!("\"F\":{}", &line[2..])));
}

#[test]
fn output_file_and_domain_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ellipse.json");
    std::fs::write(&spec, ELLIPSE).unwrap();
    let report = dir.path().join("out.json");
    let out = fhgeom(&[
        "ricci",
        "--metric",
        "hilbert",
        "--domain",
        spec.to_str().unwrap(),
        "--point",
        "0.5,-0.2",
        "--vector",
        "0.3,1",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(v["deviation"].as_f64().unwrap() < 1e-3 * v["F"].as_f64().unwrap().powi(2));
}
