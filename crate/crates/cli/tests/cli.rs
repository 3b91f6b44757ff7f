use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypersigma"))
}

fn curve_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypersigma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn x5() -> PathBuf {
    curve_file(
        "x5.json",
        r#"{"lambda4":[0,0],"lambda6":[0,0],"lambda8":[0,0],"lambda10":[-1,0]}"#,
    )
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = bin().args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, out)
}

#[test]
fn verify_symbolic_passes() {
    let (code, v, _) = run(&["verify-symbolic"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "v1");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn mutated_table_fails_with_witness() {
    let (code, v, _) = run(&["verify-symbolic", "--mutate-table"]);
    assert_eq!(code, 1);
    assert!(!v["reports"][0]["witness"].is_null());
}

#[test]
fn text_format() {
    let (code, _, out) = run(&["verify-symbolic", "--format", "text"]);
    assert_eq!(code, 0);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("verify-symbolic: PASS"));
    assert_eq!(s.matches(": PASS").count(), 5);
}

#[test]
fn verify_numeric_on_x5() {
    let c = x5();
    let (code, v, _) = run(&["verify-numeric", "--curve", c.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn singular_curve_exits_2() {
    let c = curve_file(
        "zero.json",
        r#"{"lambda4":[0,0],"lambda6":[0,0],"lambda8":[0,0],"lambda10":[0,0]}"#,
    );
    let (code, v, _) = run(&["verify-numeric", "--curve", c.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "curve_singular");
}

#[test]
fn unreachable_tolerance_exits_3() {
    let c = x5();
    let (code, v, _) = run(&["verify-numeric", "--curve", c.to_str().unwrap(), "--tol", "1e-30"]);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["error"]["kind"], "precision");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["verify-numeric"]).0, 64);
    assert_eq!(run(&["no-such-command"]).0, 64);
    assert_eq!(run(&["verify-symbolic", "--tol", "-1"]).0, 64);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn tables_dump() {
    let (code, v, _) = run(&["eval", "tables"]);
    assert_eq!(code, 0);
    let entry = v["tables"]
        .as_object()
        .unwrap()
        .values()
        .find_map(|t| t.get("a_{0030}"))
        .or_else(|| v["tables"].get("a_{0030}"))
        .expect("a_{0030} entry");
    assert_eq!(entry["expr"], "-3*x^2 - 4*y");
}

#[test]
fn sigma_vanishes_at_origin() {
    let c = x5();
    let (code, v, _) = run(&["eval", "sigma", "--curve", c.to_str().unwrap(), "--u", "0,0,0,0"]);
    assert_eq!(code, 0);
    let z = &v["value"];
    let n = z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap());
    assert!(n < 1e-12);
    let (code, v, _) = run(&[
        "eval", "sigma", "--curve", c.to_str().unwrap(), "--u", "0,0,0,0", "--d", "3",
    ]);
    assert_eq!(code, 0);
    assert!((v["value"][0].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn f2_pole_at_origin_exits_5() {
    let c = x5();
    let (code, v, _) = run(&["eval", "f2", "--curve", c.to_str().unwrap(), "--u", "0,0,0,0"]);
    assert_eq!(code, 5);
    assert_eq!(v["error"]["kind"], "pole");
}

#[test]
fn output_is_deterministic() {
    let c = x5();
    let args = ["verify-numeric", "--curve", c.to_str().unwrap(), "--seed", "5"];
    let a = bin().args(args).output().unwrap().stdout;
    let b = bin().args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}
