use std::process::Command;

use lfun_twists::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use lfun_twists::identities::VerificationReport;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lfun-twists").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn reports(text: &str) -> Vec<VerificationReport> {
    text.lines()
        .map(|l| {
            let r: VerificationReport = serde_json::from_str(l).unwrap();
            r.validate().unwrap();
            r
        })
        .collect()
}

#[test]
fn coeffs_of_delta() {
    let (code, out, _) = call(&["coeffs", "--form", "delta", "--n", "10"]);
    assert_eq!(code, EXIT_PASS);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,a");
    assert_eq!(lines[1], "1,1");
    assert_eq!(lines[10], "10,-115920");
    assert_eq!(lines.len(), 11);
}

#[test]
fn verify_qmf_passes() {
    let (code, out, _) = call(&["verify-qmf", "--form", "delta", "--gamma", "0,-1,1,0", "--r", "2/7", "--tol", "1e-6"]);
    assert_eq!(code, EXIT_PASS);
    let r = reports(&out);
    assert_eq!(r.len(), 1);
    assert!(r[0].pass);
}

#[test]
fn failing_report_exits_one() {
    let (code, out, _) = call(&["verify-qmf", "--gamma", "0,-1,1,0", "--r", "2/7", "--tol", "1e-300"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(!reports(&out)[0].pass);
}

#[test]
fn reciprocity_report_contents() {
    let (code, out, _) = call(&["reciprocity", "--form", "delta", "--l", "3", "--q", "101", "--tol", "1e-6"]);
    assert_eq!(code, EXIT_PASS);
    let r = reports(&out);
    let main = r.iter().find(|r| r.inputs.get("T1").is_some()).unwrap();
    for key in ["T1", "T2", "central_value"] {
        assert!(main.inputs.contains_key(key));
    }
    assert!(main.residual > 0.0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["verify-qmf", "--gamma", "1,1,1,1", "--r", "1/2"]).0, EXIT_USAGE);
    assert_eq!(call(&["eval", "--r", "1/0"]).0, EXIT_USAGE);
    assert_eq!(call(&["eval", "--r", "1/2", "--form", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["verify-fricke", "--r", "1/3", "--tol", "-1"]).0, EXIT_USAGE);
    let (code, _, err) = call(&["verify-fricke", "--form", "11a", "--r", "1/22"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("not coprime"));
}

#[test]
fn curve_forms_parse() {
    let (code, out, _) = call(&["coeffs", "--form", "curve:0,-1,1,-10,-20:11:11=1", "--n", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "n,a\n1,1\n2,-2\n3,-1\n");
    let (code, out11, _) = call(&["coeffs", "--form", "11a", "--n", "3"]);
    assert_eq!((code, out11), (EXIT_PASS, out));
    assert_eq!(call(&["coeffs", "--form", "curve:0,-1,1,-10,-20:11", "--n", "3"]).0, EXIT_USAGE);
}

#[test]
fn eval_csv_columns() {
    let (code, out, _) = call(&["eval", "--r", "1/3", "--r", "-1/3", "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "a,c,s,re,im,n_max,tail_bound");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][..3], ["1", "3", "6.0"]);
    assert_eq!(rows[1][..2], ["-1", "3"]);
    assert_eq!(rows[0][3], rows[1][3]);
}

#[test]
fn scan_rows_and_truncation() {
    let (code, out, _) = call(&["scan", "--q-max", "1"]);
    assert_eq!(code, EXIT_PASS);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0,1,"));

    let (_, out, _) = call(&["scan", "--q-max", "6"]);
    let fractions: Vec<(u64, u64)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<&str> = l.split(',').collect();
            (v[0].parse().unwrap(), v[1].parse().unwrap())
        })
        .collect();
    // 1 + phi(2) + ... + phi(6)
    assert_eq!(fractions.len(), 1 + 1 + 2 + 2 + 4 + 2);
    assert!(fractions.iter().all(|&(a, q)| a < q));

    let (code, out, _) = call(&["scan", "--q-max", "6", "--budget", "4"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().count(), 1 + 4 + 1);
    assert!(out.lines().last().unwrap().starts_with("# truncated"));
}

#[test]
fn infinity_always_exits_zero() {
    let (code, out, _) = call(&["infinity", "--form", "delta"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["identity"], "INFINITY_EXPERIMENT");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v.get("pass").is_none());

    let (code, out, _) = call(&["infinity", "--form", "11a", "--gamma", "1,0,11,1"]);
    assert_eq!(code, EXIT_PASS);
    assert!(reports(out.lines().next().unwrap())[0].pass);
}

#[test]
fn verify_bs_and_fe() {
    let (code, out, _) = call(&["verify-bs", "--q", "9", "--tol", "1e-7"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(reports(&out).len(), 6 * 4);
    let (code, _, _) = call(&["verify-bs", "--q", "7", "--character", "0", "--nu-reading", "modulus"]);
    assert_eq!(code, EXIT_FAIL);
    let (code, _, _) = call(&["verify-fe", "--form", "11a", "--r", "2/5", "--s", "0.5", "--tol", "1e-8"]);
    assert_eq!(code, EXIT_PASS);
    let (code, _, _) = call(&["verify-fe", "--matrix", "3,1,8,3", "--s", "5", "--tol", "1e-8"]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn characters_listing() {
    let (code, out, _) = call(&["characters", "--q", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bs.json");
    let p = path.to_str().unwrap();
    let args = ["verify-bs", "--form", "11a", "--q", "12", "--output", p];
    assert_eq!(call(&args).0, EXIT_PASS);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(call(&args).0, EXIT_PASS);
    assert_eq!(std::fs::read(&path).unwrap(), first);
    assert!(!first.is_empty());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lfun-twists");
    let ok = Command::new(bin).args(["coeffs", "--n", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "n,a\n1,1\n2,-24\n3,252\n");
    let bad = Command::new(bin).args(["coeffs"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let fail = Command::new(bin)
        .args(["verify-fricke", "--form", "11a", "--r", "1/3", "--tol", "1e-300"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
}
