use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cycint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycint")).args(args).output().expect("spawn cycint")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const COLUMNS: [&str; 12] =
    ["identity", "family", "form", "D", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_residual", "rel_residual", "tol", "pass"];

#[test]
fn integral_of_constant_is_geodesic_length() {
    let out = tmp("const.json");
    let o = cycint(&["integral", "--form", "1,0,-2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let want = 2.0 * (3.0 + 8f64.sqrt()).ln();
    assert!((v["value_re"].as_f64().unwrap() - want).abs() < 1e-12 * want);
    assert_eq!(v["D"], 8);
    assert_eq!(v["weight"], 0);
}

#[test]
fn integral_by_discriminant_and_operators() {
    let o = cycint(&["integral", "--D", "13", "--family", "productE4E6", "--op", "xi"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.starts_with("C(F, Q) = 174.69"), "{text}");
    assert!(text.contains("[1,3,-1]"), "{text}");
}

#[test]
fn integral_input_errors_exit_2() {
    for args in [
        vec!["integral", "--form", "2,1,-1"],
        vec!["integral", "--form", "1,1,1"],
        vec!["integral", "--form", "1,2"],
        vec!["integral", "--form", "1,0,-2", "--family", "nonsense"],
        vec!["integral", "--form", "1,0,-2", "--op", "Q"],
        vec!["integral", "--form", "1,0,-2", "--M", "5000"],
        vec!["integral", "--D", "9"],
        vec!["integral"],
    ] {
        let o = cycint(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn quadrature_failure_exits_3() {
    let o = cycint(&["integral", "--form", "1,0,-2", "--family", "productE4E6", "--quad-tol", "1e-300"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_json_schema_and_sidecar() {
    let out = tmp("theorem.json");
    let o = cycint(&["verify", "--suite", "theorem", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<Value> = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert!(!rows.is_empty());
    for row in &rows {
        let keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = COLUMNS.to_vec();
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(row["pass"], true);
    }
    let meta_path = format!("{}.meta.json", out.display());
    let meta: Value = serde_json::from_slice(&std::fs::read(meta_path).unwrap()).unwrap();
    assert_eq!(meta["rows"].as_u64().unwrap() as usize, rows.len());
    assert_eq!(meta["failed"], 0);
}

#[test]
fn verify_csv_header_order() {
    let o = cycint(&["verify", "--suite", "theorem", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
    let n = lines.filter(|l| !l.is_empty()).count();
    assert!(n > 0);
}

#[test]
fn empty_suite_is_an_empty_report() {
    let o = cycint(&["verify", "--suite", ""]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rows.is_empty());
}

#[test]
fn tight_tolerance_exits_1() {
    let o = cycint(&["verify", "--suite", "theorem", "--tol", "1e-18"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn square_discriminant_rows_exit_2() {
    let o = cycint(&["verify", "--suite", "theorem", "--D", "4", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.starts_with("input-error")), "{text}");
}

#[test]
fn config_file_is_read_and_flags_win() {
    let cfg = tmp("suite.conf");
    std::fs::write(&cfg, "# theorem suite as csv\nsuite = theorem\nformat = csv\ntol = 1e-18\n").unwrap();
    let o = cycint(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("identity,family"));
    let o = cycint(&["verify", "--config", cfg.to_str().unwrap(), "--tol", "1e-6", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let _: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
}

#[test]
fn config_errors_exit_2() {
    let cfg = tmp("bad.conf");
    std::fs::write(&cfg, "suite = theorem\ncolour = blue\n").unwrap();
    assert_eq!(code(&cycint(&["verify", "--config", cfg.to_str().unwrap()])), 2);
    let missing = tmp("does-not-exist.conf");
    assert_eq!(code(&cycint(&["verify", "--config", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&cycint(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn thread_count_does_not_change_the_report() {
    let one = cycint(&["verify", "--suite", "theorem", "--threads", "1"]);
    let four = cycint(&["verify", "--suite", "theorem", "--threads", "4"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn classes_lists_representatives() {
    let o = cycint(&["classes", "--D", "12", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let forms: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["form"].as_str().unwrap()).collect();
    assert_eq!(forms, ["[1,2,-2]", "[2,2,-1]"]);
    let o = cycint(&["classes", "--D", "5"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("1 class"));
    assert_eq!(code(&cycint(&["classes", "--D", "4"])), 2);
    assert_eq!(code(&cycint(&["classes", "--D", "-3"])), 2);
}
