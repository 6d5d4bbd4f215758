//! C ABI for `lfun-twists`.
//!
//! Forms and evaluators are opaque heap handles released with their `_free`
//! functions. Every fallible call returns an [`LftStatus`]; on failure the
//! message is available from [`lft_last_error`] on the same thread. Reports are
//! returned as JSON strings owned by the caller and released with
//! [`lft_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lfun_twists::cli::FormSpec;
use lfun_twists::forms::CuspForm;
use lfun_twists::identities::{verify_fe, verify_fricke_qmf, verify_qmf, VerificationReport};
use lfun_twists::ltwist::{build_unfolding_matrix, CuspPoint, ModularMatrix, TwistEvaluator};
use lfun_twists::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CoefficientOverflow = 3,
    PrecisionUnreachable = 4,
    Domain = 5,
    NotFrickeEigenform = 6,
    DegenerateTestPoint = 7,
    FrickeEigenvalueUnset = 8,
    UnsupportedCusp = 9,
    Pole = 10,
    BudgetExceeded = 11,
    InvalidUtf8 = 12,
    Panic = 13,
}

impl From<&Error> for LftStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::ConductorMismatch { .. } => Self::InvalidArgument,
            Error::CoefficientOverflow { .. } => Self::CoefficientOverflow,
            Error::PrecisionUnreachable { .. } => Self::PrecisionUnreachable,
            Error::Domain(_) => Self::Domain,
            Error::NotFrickeEigenform { .. } => Self::NotFrickeEigenform,
            Error::DegenerateTestPoint => Self::DegenerateTestPoint,
            Error::FrickeEigenvalueUnset => Self::FrickeEigenvalueUnset,
            Error::UnsupportedCusp { .. } => Self::UnsupportedCusp,
            Error::Pole => Self::Pole,
            Error::BudgetExceeded(_) => Self::BudgetExceeded,
        }
    }
}

/// A twisted value `L(f (x) e(a/c), s)` with the truncation actually used.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LftValue {
    pub re: f64,
    pub im: f64,
    pub n_max_used: usize,
    pub tail_bound: f64,
}

/// Opaque cusp form handle.
pub struct LftForm(CuspForm);

/// Opaque evaluator handle. Owns a private copy of its form.
pub struct LftEvaluator {
    ev: Option<TwistEvaluator<'static>>,
    form: *mut CuspForm,
}

impl Drop for LftEvaluator {
    fn drop(&mut self) {
        // the evaluator borrows the form, so it goes first
        self.ev.take();
        // SAFETY: `form` came from Box::into_raw in lft_evaluator_new
        unsafe { drop(Box::from_raw(self.form)) };
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: LftStatus, msg: &str) -> LftStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> LftStatus {
    fail(LftStatus::from(&e), &e.to_string())
}

/// Runs `body`, clearing the last error and mapping panics to a status.
fn guard(body: impl FnOnce() -> Result<(), LftStatus>) -> LftStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LftStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(LftStatus::Panic, &msg)
        }
    }
}

fn null(name: &str) -> LftStatus {
    fail(LftStatus::NullPointer, &format!("{name} is null"))
}

fn evaluator<'a>(ev: *const LftEvaluator) -> Result<&'a TwistEvaluator<'static>, LftStatus> {
    // SAFETY: non-null handles come from lft_evaluator_new
    unsafe { ev.as_ref() }
        .and_then(|e| e.ev.as_ref())
        .ok_or_else(|| null("evaluator"))
}

fn write_report(
    report: VerificationReport,
    out_json: *mut *mut c_char,
    out_pass: *mut bool,
) -> Result<(), LftStatus> {
    if out_json.is_null() {
        return Err(null("out_json"));
    }
    let text = serde_json::to_string(&report).map_err(|e| fail(LftStatus::Domain, &e.to_string()))?;
    let c = CString::new(text).map_err(|e| fail(LftStatus::Domain, &e.to_string()))?;
    // SAFETY: out pointers checked or optional
    unsafe {
        *out_json = c.into_raw();
        if !out_pass.is_null() {
            *out_pass = report.pass;
        }
    }
    Ok(())
}

/// Message for the last failed call on this thread, or an empty string. Valid
/// until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn lft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a form from `delta`, `11a` or `curve:a1,a2,a3,a4,a6:N[:p=ap,...]`
/// with `n_max` coefficients and computes its Fricke eigenvalue.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_form_new(spec: *const c_char, n_max: usize, out: *mut *mut LftForm) -> LftStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = CStr::from_ptr(spec)
            .to_str()
            .map_err(|e| fail(LftStatus::InvalidUtf8, &e.to_string()))?;
        let spec: FormSpec = spec.parse().map_err(|e: String| fail(LftStatus::InvalidArgument, &e))?;
        let form = spec.load(n_max).map_err(from_error)?;
        *out = Box::into_raw(Box::new(LftForm(form)));
        Ok(())
    })
}

/// # Safety
/// `form` must be null or a handle from [`lft_form_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lft_form_free(form: *mut LftForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Weight of the form, 0 for a null handle.
///
/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lft_form_weight(form: *const LftForm) -> u32 {
    form.as_ref().map_or(0, |f| f.0.weight())
}

/// Level of the form, 0 for a null handle.
///
/// # Safety
/// `form` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lft_form_level(form: *const LftForm) -> u64 {
    form.as_ref().map_or(0, |f| f.0.level())
}

/// Exact coefficient `a(n)`, extending the table if needed. Values outside
/// the `int64_t` range give `LFT_STATUS_COEFFICIENT_OVERFLOW`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_form_coefficient(form: *const LftForm, n: usize, out: *mut i64) -> LftStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| null("form"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let a = f.0.coefficient(n).map_err(from_error)?;
        *out = i64::try_from(a)
            .map_err(|_| fail(LftStatus::CoefficientOverflow, &format!("a({n}) = {a} does not fit in int64")))?;
        Ok(())
    })
}

/// Creates an evaluator with target accuracy `eps` on a copy of `form`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_evaluator_new(form: *const LftForm, eps: f64, out: *mut *mut LftEvaluator) -> LftStatus {
    guard(|| {
        let f = form.as_ref().ok_or_else(|| null("form"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let owned = Box::into_raw(Box::new(f.0.clone()));
        // SAFETY: `owned` lives until the handle is dropped, after the evaluator
        let ev = match TwistEvaluator::new(&*owned, eps) {
            Ok(ev) => ev,
            Err(e) => {
                drop(Box::from_raw(owned));
                return Err(from_error(e));
            }
        };
        *out = Box::into_raw(Box::new(LftEvaluator { ev: Some(ev), form: owned }));
        Ok(())
    })
}

/// # Safety
/// `ev` must be null or a handle from [`lft_evaluator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lft_evaluator_free(ev: *mut LftEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// `L(f (x) e(a/c), s)`.
///
/// # Safety
/// `ev` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_twist(ev: *const LftEvaluator, a: i64, c: i64, s: f64, out: *mut LftValue) -> LftStatus {
    guard(|| {
        let ev = evaluator(ev)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = CuspPoint::new(a, c).map_err(from_error)?;
        let v = ev.twist(&r, s).map_err(from_error)?;
        *out = LftValue { re: v.value.re, im: v.value.im, n_max_used: v.n_max_used, tail_bound: v.tail_bound };
        Ok(())
    })
}

/// Functional equation at `a/c` and `s`. Writes a JSON report to `out_json`
/// and, when `out_pass` is non-null, the verdict.
///
/// # Safety
/// `ev` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_verify_fe(
    ev: *const LftEvaluator,
    a: i64,
    c: i64,
    s: f64,
    tol: f64,
    out_json: *mut *mut c_char,
    out_pass: *mut bool,
) -> LftStatus {
    guard(|| {
        let ev = evaluator(ev)?;
        let r = CuspPoint::new(a, c).map_err(from_error)?;
        let m = build_unfolding_matrix(&r, ev.form().level()).map_err(from_error)?;
        write_report(verify_fe(ev, &m, s, tol).map_err(from_error)?, out_json, out_pass)
    })
}

/// Period relation for `gamma = (g[0], g[1]; g[2], g[3])` in `Gamma_0(N)` at
/// the cusp `a/c`.
///
/// # Safety
/// `ev` must be a live handle; `gamma` must point to four values;
/// `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_verify_qmf(
    ev: *const LftEvaluator,
    gamma: *const i64,
    a: i64,
    c: i64,
    tol: f64,
    out_json: *mut *mut c_char,
    out_pass: *mut bool,
) -> LftStatus {
    guard(|| {
        let ev = evaluator(ev)?;
        if gamma.is_null() {
            return Err(null("gamma"));
        }
        let g = std::slice::from_raw_parts(gamma, 4);
        let m = ModularMatrix::new(g[0], g[1], g[2], g[3], ev.form().level()).map_err(from_error)?;
        let r = CuspPoint::new(a, c).map_err(from_error)?;
        write_report(verify_qmf(ev, &m, &r, tol).map_err(from_error)?, out_json, out_pass)
    })
}

/// Period relation under the Fricke involution at the cusp `a/c`.
///
/// # Safety
/// `ev` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lft_verify_fricke(
    ev: *const LftEvaluator,
    a: i64,
    c: i64,
    tol: f64,
    out_json: *mut *mut c_char,
    out_pass: *mut bool,
) -> LftStatus {
    guard(|| {
        let ev = evaluator(ev)?;
        let r = CuspPoint::new(a, c).map_err(from_error)?;
        write_report(verify_fricke_qmf(ev, &r, tol).map_err(from_error)?, out_json, out_pass)
    })
}
