//! C ABI over theta-lab.
//!
//! Every fallible call returns a [`ThetaLabStatus`]. On failure the message is kept per thread
//! and can be copied out with [`theta_lab_last_error`]. Objects that outlive a call are
//! opaque handles released by their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;
use theta_lab::hecke::{hecke_qexp, HeckeMode, QTerm, QuadFieldElement};
use theta_lab::numerics::{kronecker_symbol, SeriesResult, TruncationSpec, C64};
use theta_lab::suites::{run_suite, SuiteOptions};
use theta_lab::theta_classical::{jacobi_theta, riemann_theta, JacobiArgument, SiegelPoint};
use theta_lab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaLabStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Precondition = 3,
    Conditioning = 4,
    Unsupported = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ThetaLabComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ThetaLabComplex> for C64 {
    fn from(c: ThetaLabComplex) -> C64 {
        C64::new(c.re, c.im)
    }
}

/// A truncated series value with its certified tail bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct ThetaLabSeries {
    pub value: ThetaLabComplex,
    pub tail_bound: f64,
    pub radius_used: usize,
    pub certified: bool,
}

impl From<SeriesResult> for ThetaLabSeries {
    fn from(r: SeriesResult) -> Self {
        ThetaLabSeries {
            value: ThetaLabComplex { re: r.value.re, im: r.value.im },
            tail_bound: r.tail_bound,
            radius_used: r.radius_used,
            certified: r.certified,
        }
    }
}

/// Exact q-expansion of a Hecke theta.
pub struct ThetaLabQExp {
    terms: Vec<QTerm>,
}

/// Outcome of a verification suite, with its JSON report.
pub struct ThetaLabReport {
    passed: bool,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ThetaLabStatus {
    match e {
        Error::Domain(_) => ThetaLabStatus::Domain,
        Error::Precondition(_) => ThetaLabStatus::Precondition,
        Error::Conditioning(_) => ThetaLabStatus::Conditioning,
        Error::Unsupported(_) => ThetaLabStatus::Unsupported,
    }
}

struct Fail(ThetaLabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ThetaLabStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ThetaLabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ThetaLabStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            ThetaLabStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn trunc(target_tail: f64, max_radius: usize) -> Result<TruncationSpec, Fail> {
    if target_tail == 0.0 && max_radius == 0 {
        return Ok(TruncationSpec::default());
    }
    Ok(TruncationSpec::new(target_tail, max_radius)?)
}

unsafe fn siegel_point(tau: *const ThetaLabComplex, n: usize) -> Result<SiegelPoint, Fail> {
    let t = slice(tau, n * n, "tau")?;
    Ok(SiegelPoint::new(DMatrix::from_row_iterator(n, n, t.iter().map(|&c| C64::from(c))))?)
}

/// Copies the last error message of this thread into `buf`, NUL-terminated and truncated to `len`.
/// Returns the full message length in bytes, or 0 when there is no pending error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Kronecker symbol (a/b).
#[no_mangle]
pub extern "C" fn theta_lab_kronecker(a: i64, b: i64) -> i32 {
    kronecker_symbol(a, b) as i32
}

/// Riemann theta at the n×n period matrix `tau` (row-major, πi convention).
/// Passing 0 for both `target_tail` and `max_radius` selects the default truncation.
///
/// # Safety
/// `tau` must point to n·n values and `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_riemann_theta(
    tau: *const ThetaLabComplex,
    n: usize,
    target_tail: f64,
    max_radius: usize,
    result: *mut ThetaLabSeries,
) -> ThetaLabStatus {
    guard(|| {
        let result = out(result, "result")?;
        let t = siegel_point(tau, n)?;
        *result = riemann_theta(&t, &trunc(target_tail, max_radius)?)?.into();
        Ok(())
    })
}

/// Jacobi theta at (tau, z), with tau n×n row-major and z of length n.
///
/// # Safety
/// `tau` must point to n·n values, `z` to n values, and `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_jacobi_theta(
    tau: *const ThetaLabComplex,
    z: *const ThetaLabComplex,
    n: usize,
    target_tail: f64,
    max_radius: usize,
    result: *mut ThetaLabSeries,
) -> ThetaLabStatus {
    guard(|| {
        let result = out(result, "result")?;
        let t = siegel_point(tau, n)?;
        let z = slice(z, n, "z")?.iter().map(|&c| C64::from(c)).collect();
        *result = jacobi_theta(&JacobiArgument::new(t, z)?, &trunc(target_tail, max_radius)?)?.into();
        Ok(())
    })
}

/// Exact q-expansion of the Hecke theta for α = a + b√d and modulus Q·√(disc),
/// keeping norms up to `max_norm`. `full_mode` selects the full lattice sum instead of μμ′ > 0.
///
/// # Safety
/// `out_handle` must be writable. The handle is released with [`theta_lab_qexp_free`].
#[no_mangle]
pub unsafe extern "C" fn theta_lab_hecke_qexp_new(
    a: i64,
    b: i64,
    d: i64,
    q: u64,
    full_mode: bool,
    max_norm: u64,
    out_handle: *mut *mut ThetaLabQExp,
) -> ThetaLabStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = ptr::null_mut();
        let alpha = QuadFieldElement::from_ints(a, b, d)?;
        let mode = if full_mode { HeckeMode::Full } else { HeckeMode::Plus };
        let terms = hecke_qexp(&alpha, q, mode, max_norm)?;
        *slot = Box::into_raw(Box::new(ThetaLabQExp { terms }));
        Ok(())
    })
}

/// Coefficients of η(τ)² through q^n; the handle's exponents are integers.
///
/// # Safety
/// `out_handle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_eta_sq_qexp_new(n: usize, out_handle: *mut *mut ThetaLabQExp) -> ThetaLabStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        let terms = theta_lab::hecke::eta_sq_qexp(n)?
            .into_iter()
            .enumerate()
            .map(|(k, c)| QTerm { exp_num: k as i64, exp_den: 1, coeff: c })
            .collect();
        *slot = Box::into_raw(Box::new(ThetaLabQExp { terms }));
        Ok(())
    })
}

/// Number of terms in the expansion; 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_qexp_len(handle: *const ThetaLabQExp) -> usize {
    handle.as_ref().map_or(0, |h| h.terms.len())
}

/// Term `i` as q^{exp_num/exp_den} with integer coefficient.
///
/// # Safety
/// `handle` must be a live handle and the three outputs writable.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_qexp_term(
    handle: *const ThetaLabQExp,
    i: usize,
    exp_num: *mut i64,
    exp_den: *mut i64,
    coeff: *mut i64,
) -> ThetaLabStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let t = h.terms.get(i).ok_or_else(|| Fail(ThetaLabStatus::Domain, format!("term {i} out of range")))?;
        *out(exp_num, "exp_num")? = t.exp_num;
        *out(exp_den, "exp_den")? = t.exp_den;
        *out(coeff, "coeff")? = t.coeff;
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_qexp_free(handle: *mut ThetaLabQExp) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs a named verification suite (`"all"` runs every suite).
/// `samples` and `tol` of 0 keep the suite defaults.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `out_handle` writable.
/// The handle is released with [`theta_lab_report_free`].
#[no_mangle]
pub unsafe extern "C" fn theta_lab_verify(
    suite: *const c_char,
    seed: u64,
    samples: usize,
    tol: f64,
    out_handle: *mut *mut ThetaLabReport,
) -> ThetaLabStatus {
    guard(|| {
        let slot = out(out_handle, "out_handle")?;
        *slot = ptr::null_mut();
        if suite.is_null() {
            return Err(null("suite"));
        }
        let name = CStr::from_ptr(suite).to_str().map_err(|e| Fail(ThetaLabStatus::InvalidUtf8, e.to_string()))?;
        let opts = SuiteOptions {
            seed,
            samples: (samples > 0).then_some(samples),
            tol: (tol > 0.0).then_some(tol),
            ..Default::default()
        };
        let names: Vec<&str> = if name == "all" { theta_lab::suites::SUITE_NAMES.to_vec() } else { vec![name] };
        let mut runs = Vec::new();
        for n in names {
            runs.push(run_suite(n, &opts)?);
        }
        let passed = runs.iter().all(|r| r.passed());
        let json = serde_json::json!({
            "passed": passed,
            "suites": runs.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        });
        let json = CString::new(json.to_string()).map_err(|e| Fail(ThetaLabStatus::Panic, e.to_string()))?;
        *slot = Box::into_raw(Box::new(ThetaLabReport { passed, json }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_report_passed(handle: *const ThetaLabReport) -> bool {
    handle.as_ref().is_some_and(|h| h.passed)
}

/// The report as JSON. The string is owned by the handle and valid until it is freed.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_report_json(handle: *const ThetaLabReport) -> *const c_char {
    handle.as_ref().map_or(ptr::null(), |h| h.json.as_ptr())
}

/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn theta_lab_report_free(handle: *mut ThetaLabReport) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn last_error_truncates_and_clears() {
        set_error("abcdef".into());
        let mut buf = [1 as c_char; 4];
        assert_eq!(unsafe { theta_lab_last_error(buf.as_mut_ptr(), buf.len()) }, 6);
        assert_eq!(unsafe { CStr::from_ptr(buf.as_ptr()) }.to_bytes(), b"abc");
        assert_eq!(guard(|| Ok(())), ThetaLabStatus::Ok);
        assert_eq!(unsafe { theta_lab_last_error(ptr::null_mut(), 0) }, 0);
    }

    #[test]
    fn panics_become_a_status() {
        assert_eq!(guard(|| panic!("boom")), ThetaLabStatus::Panic);
    }
}
