use std::ffi::{CStr, CString};
use std::ptr;

use theta_lab_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { theta_lab_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn riemann_theta_at_i() {
    // θ(i) = π^{1/4} / Γ(3/4)
    let tau = [ThetaLabComplex { re: 0.0, im: 1.0 }];
    let mut r = ThetaLabSeries::default();
    let s = unsafe { theta_lab_riemann_theta(tau.as_ptr(), 1, 0.0, 0, &mut r) };
    assert_eq!(s, ThetaLabStatus::Ok);
    assert!((r.value.re - 1.086_434_811_213_308).abs() < 1e-14);
    assert!(r.value.im.abs() < 1e-15);
    assert!(r.certified);
}

#[test]
fn jacobi_theta_matches_riemann_at_zero() {
    let tau = [ThetaLabComplex { re: 0.25, im: 0.8 }];
    let z = [ThetaLabComplex::default()];
    let (mut a, mut b) = (ThetaLabSeries::default(), ThetaLabSeries::default());
    unsafe {
        assert_eq!(theta_lab_jacobi_theta(tau.as_ptr(), z.as_ptr(), 1, 1e-14, 200, &mut a), ThetaLabStatus::Ok);
        assert_eq!(theta_lab_riemann_theta(tau.as_ptr(), 1, 1e-14, 200, &mut b), ThetaLabStatus::Ok);
    }
    assert!((a.value.re - b.value.re).abs() < 1e-13 && (a.value.im - b.value.im).abs() < 1e-13);
}

#[test]
fn bad_tau_reports_a_domain_error() {
    let tau = [ThetaLabComplex { re: 0.0, im: -1.0 }];
    let mut r = ThetaLabSeries::default();
    let s = unsafe { theta_lab_riemann_theta(tau.as_ptr(), 1, 0.0, 0, &mut r) };
    assert_eq!(s, ThetaLabStatus::Domain);
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers_are_rejected() {
    let mut r = ThetaLabSeries::default();
    let s = unsafe { theta_lab_riemann_theta(ptr::null(), 1, 0.0, 0, &mut r) };
    assert_eq!(s, ThetaLabStatus::NullPointer);
    assert!(last_error().contains("tau"));
    let s = unsafe { theta_lab_verify(ptr::null(), 0, 0, 0.0, ptr::null_mut()) };
    assert_eq!(s, ThetaLabStatus::NullPointer);
    unsafe {
        theta_lab_qexp_free(ptr::null_mut());
        theta_lab_report_free(ptr::null_mut());
        assert_eq!(theta_lab_qexp_len(ptr::null()), 0);
        assert!(theta_lab_report_json(ptr::null()).is_null());
    }
}

#[test]
fn hecke_expansion_starts_like_eta_squared() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { theta_lab_hecke_qexp_new(1, 0, 3, 1, false, 481, &mut h) }, ThetaLabStatus::Ok);
    let mut eta = ptr::null_mut();
    assert_eq!(unsafe { theta_lab_eta_sq_qexp_new(40, &mut eta) }, ThetaLabStatus::Ok);

    let term = |h, i| {
        let (mut n, mut d, mut c) = (0, 0, 0);
        assert_eq!(unsafe { theta_lab_qexp_term(h, i, &mut n, &mut d, &mut c) }, ThetaLabStatus::Ok);
        (n, d, c)
    };
    assert_eq!(term(h, 0), (1, 12, 1));
    // Exponent (12k+1)/12 carries the k-th coefficient of Π(1−qⁿ)².
    let eta_coeffs: Vec<i64> = (0..unsafe { theta_lab_qexp_len(eta) }).map(|i| term(eta, i).2).collect();
    for i in 0..unsafe { theta_lab_qexp_len(h) } {
        let (n, d, c) = term(h, i);
        assert_eq!((12 * n) % d, 0);
        let k = ((12 * n / d) - 1) / 12;
        assert_eq!(eta_coeffs[k as usize], c, "q^{n}/{d}");
    }

    let (mut n, mut d, mut c) = (0, 0, 0);
    assert_eq!(unsafe { theta_lab_qexp_term(h, 10_000, &mut n, &mut d, &mut c) }, ThetaLabStatus::Domain);
    unsafe {
        theta_lab_qexp_free(h);
        theta_lab_qexp_free(eta);
    }
}

#[test]
fn verify_returns_a_json_report() {
    let name = CString::new("hecke-eta").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { theta_lab_verify(name.as_ptr(), 7, 0, 0.0, &mut h) }, ThetaLabStatus::Ok);
    assert!(unsafe { theta_lab_report_passed(h) });
    let json = unsafe { CStr::from_ptr(theta_lab_report_json(h)) }.to_str().unwrap().to_owned();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "hecke-eta");
    unsafe { theta_lab_report_free(h) };
}

#[test]
fn unknown_suite_is_a_domain_error() {
    let name = CString::new("nope").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { theta_lab_verify(name.as_ptr(), 0, 0, 0.0, &mut h) }, ThetaLabStatus::Domain);
    assert!(h.is_null());
    assert!(last_error().contains("nope"));
}

#[test]
fn kronecker_through_the_abi() {
    assert_eq!(theta_lab_kronecker(-4, 3), -1);
    assert_eq!(theta_lab_kronecker(12, 13), 1);
    assert_eq!(theta_lab_kronecker(2, 4), 0);
}
