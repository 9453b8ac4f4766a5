//! Reference values computed outside this crate (mpmath at 25+ digits, sympy, direct integer
//! products) and frozen here.

use nalgebra::DMatrix;
use theta_lab::hecke::{eta_sq_qexp, fundamental_unit, hecke_qexp, hecke_theta, HeckeMode, QuadFieldElement};
use theta_lab::numerics::{epsilon_d, kronecker_symbol, TruncationSpec, C64};
use theta_lab::theta_classical::{jacobi_theta, riemann_theta, theta_with_char, Characteristic, JacobiArgument, SiegelPoint};
use theta_lab::weylrep::harmonic::{harmonic_dim, harmonic_nullity};

fn t() -> TruncationSpec {
    TruncationSpec::default()
}

fn close(got: C64, re: f64, im: f64, tol: f64) {
    assert!((got - C64::new(re, im)).norm() < tol, "got {got}, want {re}{im:+}i");
}

#[test]
fn riemann_theta_genus_one() {
    // π^{1/4} / Γ(3/4)
    let v = riemann_theta(&SiegelPoint::scalar(C64::new(0.0, 1.0)).unwrap(), &t()).unwrap();
    close(v.value, 1.086_434_811_213_308_0, 0.0, 1e-15);
    let v = riemann_theta(&SiegelPoint::scalar(C64::new(0.3, 0.7)).unwrap(), &t()).unwrap();
    close(v.value, 1.130_127_512_499_348_7, 0.179_264_216_046_321_8, 1e-14);
}

#[test]
fn riemann_theta_genus_two() {
    let tau = DMatrix::from_row_slice(2, 2, &[C64::new(0.1, 1.0), C64::new(0.2, 0.3), C64::new(0.2, 0.3), C64::new(-0.3, 1.2)]);
    let v = riemann_theta(&SiegelPoint::new(tau).unwrap(), &t()).unwrap();
    close(v.value, 1.105_487_669_223_450_5, -0.022_895_753_875_511_46, 1e-14);
}

#[test]
fn jacobi_theta_off_the_origin() {
    let arg = JacobiArgument::new(SiegelPoint::scalar(C64::new(0.3, 0.7)).unwrap(), vec![C64::new(0.2, -0.1)]).unwrap();
    close(jacobi_theta(&arg, &t()).unwrap().value, 0.934_625_056_557_170_5, 0.149_936_210_152_955_08, 1e-14);
}

#[test]
fn theta_with_characteristics() {
    let tau = C64::new(0.1, 1.1);
    let z0 = C64::new(0.0, 0.0);
    let v = theta_with_char(Characteristic { a: 0.5, b: 0.0 }, tau, z0, false, &t()).unwrap();
    close(v.value, 0.841_037_851_575_508_6, 0.066_686_289_474_542_54, 1e-14);
    let v = theta_with_char(Characteristic { a: 0.5, b: 0.5 }, tau, z0, true, &t()).unwrap();
    close(v.value, -2.634_173_168_205_925, -0.202_647_029_484_056_6, 1e-13);
    let v = theta_with_char(Characteristic { a: 0.25, b: 1.0 / 3.0 }, tau, C64::new(0.1, 0.05), false, &t()).unwrap();
    close(v.value, 0.514_713_297_033_924_3, 0.304_606_034_567_466_5, 1e-14);
}

const ETA_SQ: [i64; 41] = [
    1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, 0, 0, 2, 3, -2, 2, 0, 0, -2, -2, 0, 0, -2, -1, 0, 2, 2, -2, 2, 1, 2, 0, 2, -2, -2, 2, 0, -2, 0, -4,
];

#[test]
fn eta_squared_coefficients() {
    assert_eq!(eta_sq_qexp(40).unwrap(), ETA_SQ);
}

#[test]
fn hecke_theta_for_sqrt_twelve() {
    let alpha = QuadFieldElement::from_ints(1, 0, 3).unwrap();
    let terms = hecke_qexp(&alpha, 1, HeckeMode::Plus, 12 * 40 + 1).unwrap();
    for term in &terms {
        assert_eq!(term.exp_den, 12);
        assert_eq!(term.exp_num % 12, 1);
        assert_eq!(term.coeff, ETA_SQ[(term.exp_num / 12) as usize], "q^{}/12", term.exp_num);
    }
    assert_eq!(terms.len(), ETA_SQ.iter().filter(|c| **c != 0).count());
    // η(2i)²
    let v = hecke_theta(C64::new(0.0, 2.0), &alpha, 1, HeckeMode::Plus, &t()).unwrap();
    close(v.value, 0.350_917_359_619_128_85, 0.0, 1e-15);
}

#[test]
fn fundamental_units() {
    let want = [
        (2, 1.0 + 2f64.sqrt()),
        (3, 2.0 + 3f64.sqrt()),
        (5, (1.0 + 5f64.sqrt()) / 2.0),
        (7, 8.0 + 3.0 * 7f64.sqrt()),
        (13, (3.0 + 13f64.sqrt()) / 2.0),
        (19, 170.0 + 39.0 * 19f64.sqrt()),
    ];
    for (d, e) in want {
        let u = fundamental_unit(d).unwrap();
        assert!(u.is_unit());
        assert!((u.to_f64() - e).abs() < 1e-9 * e, "d = {d}: {}", u.to_f64());
    }
}

#[test]
fn kronecker_matches_jacobi_for_odd_moduli() {
    // sympy.jacobi_symbol(a mod b, b)
    let table = [
        (-7, 3, -1), (-7, 7, 0), (-7, 15, 1), (-7, 21, 0), (-4, 3, -1), (-4, 7, -1), (-4, 15, -1), (-4, 21, 1),
        (-4, 35, -1), (-3, 7, 1), (-3, 35, -1), (2, 3, -1), (2, 7, 1), (2, 15, 1), (2, 21, -1), (2, 35, -1),
        (5, 3, -1), (5, 7, -1), (5, 15, 0), (5, 21, 1), (12, 7, -1), (12, 35, 1), (13, 3, 1), (13, 7, -1),
        (13, 15, -1), (13, 21, -1), (13, 35, 1), (30, 7, 1), (30, 35, 0),
    ];
    for (a, b, k) in table {
        assert_eq!(kronecker_symbol(a, b), k, "({a}/{b})");
    }
    assert_eq!(kronecker_symbol(5, 2), -1);
    assert_eq!(kronecker_symbol(7, 2), 1);
    assert_eq!(kronecker_symbol(-1, -1), -1);
}

#[test]
fn epsilon_values() {
    assert_eq!(epsilon_d(5).unwrap(), C64::new(1.0, 0.0));
    assert_eq!(epsilon_d(-1).unwrap(), C64::new(0.0, 1.0));
    assert!(epsilon_d(4).is_err());
}

#[test]
fn harmonic_dimensions() {
    // C(n+m-1, m) - C(n+m-3, m-2)
    for (n, m, d) in [(2, 3, 2), (3, 2, 5), (3, 4, 9), (4, 3, 16), (5, 2, 14)] {
        assert_eq!(harmonic_dim(n, m), d);
        assert_eq!(harmonic_nullity(n, 0, m as u32), d as usize);
    }
}
