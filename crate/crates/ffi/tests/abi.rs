use std::ffi::{CStr, CString};
use std::ptr;

use lfun_twists_ffi::*;

fn form(spec: &str, n_max: usize) -> *mut LftForm {
    let spec = CString::new(spec).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lft_form_new(spec.as_ptr(), n_max, &mut out) }, LftStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lft_last_error()) }.to_str().unwrap().to_string()
}

fn take_json(p: *mut std::ffi::c_char) -> serde_json::Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(p) }.to_str().unwrap()).unwrap();
    unsafe { lft_string_free(p) };
    v
}

#[test]
fn form_handles() {
    let f = form("delta", 50);
    unsafe {
        assert_eq!(lft_form_weight(f), 12);
        assert_eq!(lft_form_level(f), 1);
        let mut a = 0i64;
        assert_eq!(lft_form_coefficient(f, 2, &mut a), LftStatus::Ok);
        assert_eq!(a, -24);
        assert_eq!(lft_form_coefficient(f, 100, &mut a), LftStatus::Ok);
        assert_eq!(a, 37_534_859_200);
        assert_eq!(lft_form_coefficient(f, 0, &mut a), LftStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        lft_form_free(f);
        lft_form_free(ptr::null_mut());
        assert_eq!(lft_form_weight(ptr::null()), 0);
    }
}

#[test]
fn bad_inputs_set_status_and_message() {
    let mut out = ptr::null_mut();
    let spec = CString::new("nonsense").unwrap();
    assert_eq!(unsafe { lft_form_new(spec.as_ptr(), 10, &mut out) }, LftStatus::InvalidArgument);
    assert!(out.is_null());
    assert!(last_error().contains("unknown form"));
    assert_eq!(unsafe { lft_form_new(ptr::null(), 10, &mut out) }, LftStatus::NullPointer);

    let bad = CString::new("curve:0,-1,1,-10,-20:13:13=1").unwrap();
    assert_eq!(unsafe { lft_form_new(bad.as_ptr(), 10, &mut out) }, LftStatus::InvalidArgument);

    let mut v = LftValue { re: 0.0, im: 0.0, n_max_used: 0, tail_bound: 0.0 };
    assert_eq!(unsafe { lft_twist(ptr::null(), 1, 3, 6.0, &mut v) }, LftStatus::NullPointer);

    // success clears the message
    let f = form("11a", 10);
    assert!(last_error().is_empty());
    unsafe { lft_form_free(f) };
}

#[test]
fn twist_and_verifiers() {
    let f = form("delta", 2000);
    let mut ev = ptr::null_mut();
    assert_eq!(unsafe { lft_evaluator_new(f, 1e-12, &mut ev) }, LftStatus::Ok);
    // the evaluator owns its copy of the form
    unsafe { lft_form_free(f) };

    let mut v = LftValue { re: 0.0, im: 0.0, n_max_used: 0, tail_bound: 0.0 };
    let mut w = v;
    unsafe {
        assert_eq!(lft_twist(ev, 1, 3, 6.0, &mut v), LftStatus::Ok);
        assert_eq!(lft_twist(ev, -1, 3, 6.0, &mut w), LftStatus::Ok);
    }
    // real coefficients: L(-r) is the conjugate of L(r)
    assert!((v.re - w.re).abs() < 1e-12 && (v.im + w.im).abs() < 1e-12);
    assert!(v.n_max_used > 0);
    assert_eq!(unsafe { lft_twist(ev, 1, 0, 6.0, &mut v) }, LftStatus::InvalidArgument);

    let mut json = ptr::null_mut();
    let mut pass = false;
    let gamma = [0i64, -1, 1, 0];
    unsafe {
        assert_eq!(lft_verify_qmf(ev, gamma.as_ptr(), 2, 7, 1e-6, &mut json, &mut pass), LftStatus::Ok);
        assert!(pass);
        assert_eq!(take_json(json)["identity"], "QMF_GAMMA");

        assert_eq!(lft_verify_fricke(ev, 1, 3, 1e-6, &mut json, &mut pass), LftStatus::Ok);
        assert!(pass);
        take_json(json);

        assert_eq!(lft_verify_fe(ev, 2, 5, 5.0, 1e-8, &mut json, ptr::null_mut()), LftStatus::Ok);
        assert_eq!(take_json(json)["pass"], true);

        let singular = [1i64, 1, 1, 1];
        assert_eq!(lft_verify_qmf(ev, singular.as_ptr(), 2, 7, 1e-6, &mut json, &mut pass), LftStatus::InvalidArgument);
        lft_evaluator_free(ev);
    }
}

#[test]
fn pole_is_reported() {
    let f = form("11a", 500);
    let mut ev = ptr::null_mut();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(lft_evaluator_new(f, 1e-10, &mut ev), LftStatus::Ok);
        // gamma^-1 oo = -1/11 for gamma = (1, 0; 11, 1)
        let gamma = [1i64, 0, 11, 1];
        let status = lft_verify_qmf(ev, gamma.as_ptr(), -1, 11, 1e-6, &mut json, ptr::null_mut());
        assert_eq!(status, LftStatus::Pole, "{}", last_error());
        lft_evaluator_free(ev);
        lft_form_free(f);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lfun_twists.h")).unwrap();
    for name in [
        "lft_last_error",
        "lft_string_free",
        "lft_form_new",
        "lft_form_free",
        "lft_form_weight",
        "lft_form_level",
        "lft_form_coefficient",
        "lft_evaluator_new",
        "lft_evaluator_free",
        "lft_twist",
        "lft_verify_fe",
        "lft_verify_qmf",
        "lft_verify_fricke",
        "typedef struct LftForm LftForm",
        "typedef struct LftEvaluator LftEvaluator",
        "LFT_STATUS_POLE = 10",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempfile_dir();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        "#include \"lfun_twists.h\"\nint main(void) { LftForm *f = 0; LftStatus s = lft_form_new(\"delta\", 10, &f); lft_form_free(f); return (int)s; }\n",
    )
    .unwrap();
    let status = match std::process::Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        // no C compiler on this machine
        Err(_) => return,
    };
    assert!(status.success());
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("lft-abi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
