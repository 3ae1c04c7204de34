use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bjnear::ortho::validate_certificate;
use bjnear::{ComplexMatrix, Field, SubspaceBasis, ToleranceConfig};
use bjnear_cli::io::{parse_matrix, MatrixDoc};
use serde_json::Value;
use tempfile::TempDir;

const A1: &str = r#"{"n":3,"real_entries":[0,1,0,1,0,1,0,1,0]}"#;
const A1_PLUS_A2: &str = r#"{"n":3,"real_entries":[0,1,1,1,0,1,1,1,0]}"#;
const SCALAR_SPAN: &str = r#"{"n":3,"field":"complex","span":"scalars"}"#;
const SCALARS: &str = r#"{"n":3,"scalars":true}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn bjnear(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjnear"))
        .args(args)
        .env_remove("BJNEAR_SEED")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn matrix_field(v: &Value) -> ComplexMatrix {
    let doc: MatrixDoc = serde_json::from_value(v.clone()).unwrap();
    doc.to_matrix("report").unwrap()
}

#[test]
fn orthogonal_with_reusable_certificate() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a1.json", A1);
    let w = write(&dir, "ci.json", SCALAR_SPAN);
    let out = bjnear(&["ortho-check", s(&a), s(&w)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("orthogonal"));

    let out = bjnear(&["--json", "ortho-check", s(&a), s(&w)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "orthogonal");
    // Re-validate the emitted density independently of the CLI.
    let p = matrix_field(&v["certificate"]["p"]);
    let a = parse_matrix(A1).unwrap();
    let w =
        SubspaceBasis::orthonormalize(&[bjnear::numkit::identity(3)], Field::Complex, 3).unwrap();
    let report = validate_certificate(&a, &w, &p, &ToleranceConfig::default()).unwrap();
    assert!(report.pass, "{:?}", report.reasons);
}

#[test]
fn sum_is_not_orthogonal() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "sum.json", A1_PLUS_A2);
    let w = write(&dir, "ci.json", SCALAR_SPAN);
    let out = bjnear(&["--json", "ortho-check", s(&a), s(&w)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "not_orthogonal");
    let wit = matrix_field(&v["witness"]["w"]);
    let a = parse_matrix(A1_PLUS_A2).unwrap();
    let after = bjnear::numkit::operator_norm(&(&a + &wit)).unwrap();
    assert!(after <= 1.5 + 1e-6, "{after}");
}

#[test]
fn distance_to_scalars() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "sum.json", A1_PLUS_A2);
    let alg = write(&dir, "scalars.json", SCALARS);
    let out = bjnear(&["--json", "distance", s(&a), s(&alg)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((v["dist"].as_f64().unwrap() - 1.5).abs() < 1e-6);
    assert!(v["gap"].as_f64().unwrap().abs() <= 1e-6);
    assert_eq!(v["certified"], true);
    let b0 = matrix_field(&v["b0"]);
    assert!((b0[(0, 0)].re - 0.5).abs() < 1e-6);
}

#[test]
fn norm_and_variance() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "sum.json", A1_PLUS_A2);
    let alg = write(&dir, "scalars.json", SCALARS);
    let out = bjnear(&["--json", "norm", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json_of(&out)["norm"].as_f64().unwrap() - 2.0).abs() < 1e-10);

    let p = write(
        &dir,
        "p.json",
        r#"{"n":3,"real_entries":[0.5,0,0,0,0,0,0,0,0.5]}"#,
    );
    let out = bjnear(&["--json", "variance", s(&a), s(&alg), "--density", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out)["value"].as_f64().unwrap();
    // tr(A²P) = 2 and tr(AP) = 0.
    assert!((v - 2.0).abs() <= 1e-12, "{v}");
}

#[test]
fn single_direction_and_minimality() {
    let dir = TempDir::new().unwrap();
    let i2 = write(&dir, "i.json", r#"{"n":2,"real_entries":[1,0,0,1]}"#);
    let flip = write(&dir, "f.json", r#"{"n":2,"real_entries":[1,0,0,-1]}"#);
    let out = bjnear(&["--json", "bs-check", s(&i2), s(&flip)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "orthogonal");

    let swap = write(&dir, "s.json", r#"{"n":2,"real_entries":[0,1,1,0]}"#);
    let out = bjnear(&["--json", "minimal", s(&swap)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["minimal"], true);

    let not_herm = write(&dir, "n.json", r#"{"n":2,"real_entries":[0,1,0,0]}"#);
    assert_eq!(bjnear(&["minimal", s(&not_herm)]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"n":2,"real_entries":[1,2,3]}"#);
    let out = bjnear(&["norm", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 4"));

    assert_eq!(
        bjnear(&["norm", "/nonexistent/a.json"]).status.code(),
        Some(1)
    );
    assert_eq!(bjnear(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bjnear(&["--tol=-1", "demo"]).status.code(), Some(1));
    assert_eq!(bjnear(&["--max-iter=0", "demo"]).status.code(), Some(1));

    let a = write(&dir, "a1.json", A1);
    let alg = write(&dir, "two.json", r#"{"n":2,"scalars":true}"#);
    assert_eq!(bjnear(&["distance", s(&a), s(&alg)]).status.code(), Some(1));
    assert_eq!(bjnear(&["--help"]).status.code(), Some(0));
}

#[test]
fn uncertified_distance_exits_two() {
    let dir = TempDir::new().unwrap();
    let entries: Vec<[f64; 2]> = (0..36)
        .map(|k| {
            let (i, j) = (k / 6, k % 6);
            [
                ((i * 7 + j * 3) % 11) as f64 / 5.0 - 1.0,
                ((i + 2 * j) % 5) as f64 / 3.0 - 2.0 / 3.0,
            ]
        })
        .collect();
    let doc = serde_json::json!({"n": 6, "entries": entries});
    let a = write(&dir, "a.json", &doc.to_string());
    let alg = write(&dir, "alg.json", r#"{"n":6,"blocks":[2,2,2]}"#);
    // One iteration is far too few for this instance.
    let out = bjnear(&["--json", "--max-iter=1", "distance", s(&a), s(&alg)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["certified"], false);
}

#[test]
fn quiet_prints_nothing() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a1.json", A1);
    let out = bjnear(&["--quiet", "norm", s(&a)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn demo_passes_and_is_deterministic() {
    let first = bjnear(&["--json", "--seed", "7", "demo"]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    let second = Command::new(env!("CARGO_BIN_EXE_bjnear"))
        .args(["--json", "demo"])
        .env("BJNEAR_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    let v = json_of(&first);
    assert_eq!(v["passed"], v["total"]);
}
