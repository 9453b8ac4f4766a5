//! Complex conventions, characters and certified truncation of Gaussian lattice sums.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{domain, Error, Result};

pub type C64 = Complex<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Working precision of series accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// binary64 with Neumaier compensated summation.
    Double,
    /// Double-double phase reduction and accumulation.
    Extended,
}

impl Precision {
    /// Reads `THETA_LAB_PRECISION` once per process.
    pub fn global() -> Precision {
        static P: OnceLock<Precision> = OnceLock::new();
        *P.get_or_init(|| match std::env::var("THETA_LAB_PRECISION") {
            Ok(v) if v.eq_ignore_ascii_case("extended") => Precision::Extended,
            _ => Precision::Double,
        })
    }
}

/// Requested absolute tail bound and a hard cap on the summation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub target_tail: f64,
    pub max_radius: usize,
    pub precision: Precision,
}

impl TruncationSpec {
    pub fn new(target_tail: f64, max_radius: usize) -> Result<Self> {
        if !(target_tail > 0.0) || !target_tail.is_finite() {
            return domain("target_tail must be positive");
        }
        if max_radius < 1 {
            return domain("max_radius must be at least 1");
        }
        Ok(TruncationSpec { target_tail, max_radius, precision: Precision::global() })
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { target_tail: 1e-15, max_radius: 4000, precision: Precision::global() }
    }
}

/// Value of a truncated series together with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: C64,
    pub radius_used: usize,
    pub tail_bound: f64,
    pub terms_summed: u64,
    /// False when the radius cap was hit before the tail target was met,
    /// or when no rigorous tail bound is available.
    pub certified: bool,
}

impl SeriesResult {
    pub fn zero() -> Self {
        SeriesResult { value: C64::new(0.0, 0.0), radius_used: 0, tail_bound: 0.0, terms_summed: 0, certified: true }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": {"re": self.value.re, "im": self.value.im},
            "radius_used": self.radius_used,
            "tail_bound": self.tail_bound,
            "certified": self.certified,
            "terms_summed": self.terms_summed,
        })
    }
}

/// Argument in (−π, π].
pub fn principal_arg(z: C64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `exp(exponent · Log base)` on the principal branch, for half-integer exponents.
pub fn principal_power(base: C64, exponent: f64) -> Result<C64> {
    if base.re == 0.0 && base.im == 0.0 {
        return domain("principal_power of zero");
    }
    let twice = 2.0 * exponent;
    if twice.fract() != 0.0 || !twice.is_finite() {
        return domain(format!("exponent {exponent} is not a half-integer"));
    }
    let k = exponent.floor();
    let int_part = base.powi(k as i32);
    if exponent == k {
        return Ok(int_part);
    }
    let r = base.norm().sqrt();
    let half = 0.5 * principal_arg(base);
    Ok(int_part * C64::new(r * half.cos(), r * half.sin()))
}

/// Extended Kronecker symbol (a/b).
pub fn kronecker_symbol(a: i64, b: i64) -> i32 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut a = a as i128;
    let mut b = b as i128;
    let mut sign = 1i32;
    let v = b.trailing_zeros();
    b >>= v;
    if v % 2 == 1 {
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            sign = -sign;
        }
    }
    if b < 0 {
        b = -b;
        if a < 0 {
            sign = -sign;
        }
    }
    // b odd positive: Jacobi symbol with possibly negative a.
    a = a.rem_euclid(b);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 {
            let r = b % 8;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        if a % 4 == 3 && b % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
        a %= b;
    }
    if b == 1 {
        sign
    } else {
        0
    }
}

/// ε_d = 1 for d ≡ 1 mod 4 and i for d ≡ 3 mod 4.
pub fn epsilon_d(d: i64) -> Result<C64> {
    match d.rem_euclid(4) {
        1 => Ok(C64::new(1.0, 0.0)),
        3 => Ok(I),
        _ => domain(format!("epsilon_d needs odd d, got {d}")),
    }
}

fn one_dim_tail(v: f64, start: f64) -> f64 {
    2.0 * (-PI * v * start * start).exp() / (1.0 - (-2.0 * PI * v * start).exp())
}

/// Upper bound on Σ_{x∈ℤⁿ, |x|_∞ > R} e^{−π v |x|²}.
pub fn gaussian_tail_bound(v_min: f64, n: usize, radius: usize) -> Result<f64> {
    if !(v_min > 0.0) {
        return domain("v_min must be positive");
    }
    if n == 0 {
        return Ok(0.0);
    }
    let t = one_dim_tail(v_min, radius as f64 + 1.0);
    let full = 1.0 + 2.0 * (-PI * v_min).exp() / (1.0 - (-2.0 * PI * v_min).exp());
    Ok(n as f64 * t * full.powi(n as i32 - 1))
}

/// Same bound for Σ_{|m|_∞ > R} e^{−π v |m+δ|²} with every |δ_i| ≤ 1/2.
pub fn shifted_gaussian_tail_bound(v_min: f64, n: usize, radius: usize) -> Result<f64> {
    if !(v_min > 0.0) {
        return domain("v_min must be positive");
    }
    if n == 0 {
        return Ok(0.0);
    }
    let t = one_dim_tail(v_min, radius as f64 + 0.5);
    let full = 1.0 + 2.0 * (-PI * v_min / 4.0).exp() / (1.0 - (-2.0 * PI * v_min).exp());
    Ok(n as f64 * t * full.powi(n as i32 - 1))
}

/// Neumaier summation of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: C64) {
        neumaier(&mut self.sum.re, &mut self.comp.re, x.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        DoubleDouble { hi, lo }
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        self.mul(DoubleDouble::from_f64(x))
    }

    /// Representative of self modulo 2 in [0, 2).
    pub fn rem2(self) -> f64 {
        let k = (self.hi / 2.0).floor() * 2.0;
        let r = self.add(DoubleDouble::from_f64(-k));
        (r.hi + r.lo).rem_euclid(2.0)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct DdComplexSum {
    re: DoubleDouble,
    im: DoubleDouble,
}

enum Accumulator {
    Double(CompensatedSum),
    Extended(DdComplexSum),
}

impl Accumulator {
    fn new(p: Precision) -> Self {
        match p {
            Precision::Double => Accumulator::Double(CompensatedSum::new()),
            Precision::Extended => Accumulator::Extended(DdComplexSum::default()),
        }
    }

    fn add(&mut self, x: C64) {
        match self {
            Accumulator::Double(s) => s.add(x),
            Accumulator::Extended(s) => {
                s.re = s.re.add(DoubleDouble::from_f64(x.re));
                s.im = s.im.add(DoubleDouble::from_f64(x.im));
            }
        }
    }

    fn value(&self) -> C64 {
        match self {
            Accumulator::Double(s) => s.value(),
            Accumulator::Extended(s) => C64::new(s.re.to_f64(), s.im.to_f64()),
        }
    }
}

/// Coefficient attached to each lattice term, with the growth class used for the tail bound.
pub enum Weight<'a> {
    Unit,
    /// |f(ℓ)| ≤ scale.
    Bounded(&'a dyn Fn(&[i64]) -> C64, f64),
    /// |f(ℓ)| ≤ scale·|ℓ + a|₂.
    Linear(&'a dyn Fn(&[i64]) -> C64, f64),
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Largest box (2R+1)^n that the engine will materialise.
const MAX_TERMS: f64 = 4.0e7;

/// Σ_{ℓ∈ℤⁿ} w(ℓ) e^{πi(ᵗ(ℓ+a)τ(ℓ+a) + 2ᵗ(ℓ+a)z)}, summed over a sup-norm box centred at
/// the dominant term, with a certified bound on the omitted terms.
pub fn gaussian_lattice_sum(
    tau: &DMatrix<C64>,
    z: &[C64],
    shift: &[f64],
    weight: Weight<'_>,
    trunc: &TruncationSpec,
) -> Result<SeriesResult> {
    let n = tau.nrows();
    if tau.ncols() != n || z.len() != n || shift.len() != n {
        return Err(Error::Precondition("dimension mismatch in lattice sum".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let d = tau[(i, j)] - tau[(j, i)];
            if d.norm() > 1e-12 * (1.0 + tau[(i, j)].norm()) {
                return domain("tau is not symmetric");
            }
        }
    }
    if tau.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) || z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return domain("non-finite input");
    }
    if n == 0 {
        let w = match &weight {
            Weight::Unit => C64::new(1.0, 0.0),
            Weight::Bounded(f, _) | Weight::Linear(f, _) => f(&[]),
        };
        return Ok(SeriesResult { value: w, radius_used: 0, tail_bound: 0.0, terms_summed: 1, certified: true });
    }
    let re = tau.map(|c| c.re);
    let im = tau.map(|c| c.im);
    let lambda = min_eigenvalue(&im);
    if !(lambda > 0.0) {
        return domain("imaginary part of tau is not positive definite");
    }
    let y = DVector::from_iterator(n, z.iter().map(|c| c.im));
    let chol = im
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Domain("imaginary part of tau is not positive definite".into()))?;
    let c = chol.solve(&y);
    let cyc = c.dot(&(&im * &c));
    let growth = (PI * cyc).exp();
    let centre: Vec<i64> = (0..n).map(|i| (-shift[i] - c[i]).round() as i64).collect();
    let c_norm = c.norm();

    let bound_at = |r: usize| -> Result<f64> {
        let b = match &weight {
            Weight::Unit => shifted_gaussian_tail_bound(lambda, n, r)?,
            Weight::Bounded(_, s) => s * shifted_gaussian_tail_bound(lambda, n, r)?,
            Weight::Linear(_, s) => {
                let c1 = 1.0 / (PI * lambda * std::f64::consts::E).sqrt();
                s * (c_norm * shifted_gaussian_tail_bound(lambda, n, r)?
                    + c1 * shifted_gaussian_tail_bound(lambda / 2.0, n, r)?)
            }
        };
        Ok(growth * b)
    };

    let mut radius = 1usize;
    let mut certified = true;
    loop {
        let b = bound_at(radius)?;
        if b <= trunc.target_tail {
            break;
        }
        let next_terms = (2.0 * (radius + 1) as f64 + 1.0).powi(n as i32);
        if radius >= trunc.max_radius || next_terms > MAX_TERMS {
            certified = false;
            break;
        }
        radius += 1;
    }
    let tail_bound = bound_at(radius)?;

    let side = 2 * radius + 1;
    let total = side.pow(n as u32);
    let mut terms: Vec<(f64, C64)> = Vec::with_capacity(total);
    let mut m = vec![-(radius as i64); n];
    let mut ell = vec![0i64; n];
    let mut w = vec![0f64; n];
    let extended = trunc.precision == Precision::Extended;
    for _ in 0..total {
        for i in 0..n {
            ell[i] = centre[i] + m[i];
            w[i] = ell[i] as f64 + shift[i];
        }
        let mut decay = 0.0;
        let phase = if extended {
            let mut acc = DoubleDouble::default();
            for i in 0..n {
                let wi = DoubleDouble::from_f64(w[i]);
                let mut row = DoubleDouble::default();
                for j in 0..n {
                    row = row.add(DoubleDouble::from_f64(re[(i, j)]).mul_f64(w[j]));
                    decay += w[i] * im[(i, j)] * w[j];
                }
                acc = acc.add(wi.mul(row.add(DoubleDouble::from_f64(2.0 * z[i].re))));
                decay += 2.0 * w[i] * y[i];
            }
            acc.rem2()
        } else {
            let mut acc = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                for j in 0..n {
                    row += re[(i, j)] * w[j];
                    decay += w[i] * im[(i, j)] * w[j];
                }
                acc += w[i] * (row + 2.0 * z[i].re);
                decay += 2.0 * w[i] * y[i];
            }
            acc.rem_euclid(2.0)
        };
        let modulus = (-PI * decay).exp();
        let (s, co) = (PI * phase).sin_cos();
        let mut term = C64::new(modulus * co, modulus * s);
        match &weight {
            Weight::Unit => {}
            Weight::Bounded(f, _) | Weight::Linear(f, _) => term *= f(&ell),
        }
        terms.push((decay, term));
        for i in (0..n).rev() {
            m[i] += 1;
            if m[i] <= radius as i64 {
                break;
            }
            m[i] = -(radius as i64);
        }
    }
    // Largest magnitudes first, then shell by shell outward.
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = Accumulator::new(trunc.precision);
    for (_, t) in &terms {
        acc.add(*t);
    }
    let value = acc.value();
    if !value.re.is_finite() || !value.im.is_finite() {
        return domain("series value overflowed");
    }
    Ok(SeriesResult { value, radius_used: radius, tail_bound, terms_summed: total as u64, certified })
}

/// Deterministic reduction order for parallel partial sums.
pub fn sum_in_order(parts: &[C64]) -> C64 {
    let mut acc = CompensatedSum::new();
    for p in parts {
        acc.add(*p);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kronecker_prime(a: i64, p: i64) -> i32 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| (x * x) % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn principal_power_examples() {
        let one = principal_power(C64::new(1.0, 0.0), 0.5).unwrap();
        assert!((one - C64::new(1.0, 0.0)).norm() < 1e-15);
        let v = principal_power(C64::new(0.0, -1.0), 0.5).unwrap();
        assert!((v - C64::from_polar(1.0, -PI / 4.0)).norm() < 1e-15);
        let v = principal_power(C64::new(-1.0, 0.0), 0.5).unwrap();
        assert!((v - I).norm() < 1e-15);
        let v = principal_power(C64::new(-1.0, -0.0), 0.5).unwrap();
        assert!((v - I).norm() < 1e-15);
        assert!(principal_power(C64::new(0.0, 0.0), 0.5).is_err());
        assert!(principal_power(C64::new(2.0, 0.0), 0.3).is_err());
        let v = principal_power(C64::new(3.0, 4.0), 1.5).unwrap();
        let expect = (C64::new(3.0, 4.0).ln() * 1.5).exp();
        assert!((v - expect).norm() < 1e-13);
    }

    #[test]
    fn kronecker_examples_and_legendre_agreement() {
        assert_eq!(kronecker_symbol(2, 7), 1);
        assert_eq!(kronecker_symbol(3, 5), -1);
        for a in -30..30 {
            assert_eq!(kronecker_symbol(a, 1), 1);
        }
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for a in -40..40 {
                assert_eq!(kronecker_symbol(a, p), brute_kronecker_prime(a, p), "({a}/{p})");
            }
        }
        assert_eq!(kronecker_symbol(-1, -1), -1);
        assert_eq!(kronecker_symbol(1, -1), 1);
        assert_eq!(kronecker_symbol(5, 0), 0);
        assert_eq!(kronecker_symbol(3, 2), -1);
        assert_eq!(kronecker_symbol(7, 2), 1);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_d(1).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(epsilon_d(3).unwrap(), I);
        assert_eq!(epsilon_d(5).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(epsilon_d(-1).unwrap(), I);
        assert!(epsilon_d(4).is_err());
    }

    fn explicit_tail(v: f64, n: usize, r: i64, delta: &[f64]) -> f64 {
        let lim = 40i64;
        let mut s = 0.0;
        if n == 1 {
            for x in -lim..=lim {
                if x.abs() > r {
                    let t = x as f64 + delta[0];
                    s += (-PI * v * t * t).exp();
                }
            }
        } else {
            for x in -lim..=lim {
                for y in -lim..=lim {
                    if x.abs().max(y.abs()) > r {
                        let a = x as f64 + delta[0];
                        let b = y as f64 + delta[1];
                        s += (-PI * v * (a * a + b * b)).exp();
                    }
                }
            }
        }
        s
    }

    #[test]
    fn tail_bound_dominates_explicit_sums() {
        for &v in &[0.5, 1.0, 2.0] {
            for n in 1..=2 {
                for r in 1..=6 {
                    let b = gaussian_tail_bound(v, n, r).unwrap();
                    assert!(explicit_tail(v, n, r as i64, &[0.0, 0.0]) <= b, "v={v} n={n} r={r}");
                    let bs = shifted_gaussian_tail_bound(v, n, r).unwrap();
                    for d in [-0.5, -0.3, 0.0, 0.25, 0.5] {
                        assert!(explicit_tail(v, n, r as i64, &[d, -d]) <= bs, "shifted v={v} n={n} r={r} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn tail_bound_examples() {
        let mut explicit = 0.0;
        for l in 4..200 {
            explicit += 2.0 * (-PI * (l * l) as f64).exp();
        }
        assert!(gaussian_tail_bound(1.0, 1, 3).unwrap() >= explicit);
        let mut prev = f64::INFINITY;
        for r in 1..30 {
            let b = gaussian_tail_bound(1.0, 1, r).unwrap();
            assert!(b <= prev);
            prev = b;
        }
        assert!(prev < 1e-300);
        for n in 1..4 {
            for r in 1..6 {
                assert!(gaussian_tail_bound(2.0, n, r).unwrap() <= gaussian_tail_bound(1.0, n, r).unwrap());
            }
        }
        assert!(gaussian_tail_bound(0.0, 1, 1).is_err());
    }

    #[test]
    fn lattice_sum_at_i_matches_direct_sum() {
        let tau = DMatrix::from_element(1, 1, I);
        let r = gaussian_lattice_sum(&tau, &[C64::new(0.0, 0.0)], &[0.0], Weight::Unit, &TruncationSpec::default()).unwrap();
        let mut direct = 0.0;
        for l in -10i64..=10 {
            direct += (-PI * (l * l) as f64).exp();
        }
        assert!((r.value.re - direct).abs() < 1e-15);
        assert!(r.value.im.abs() < 1e-15);
        assert!(r.certified);
        assert!(r.tail_bound <= 1e-15);
    }

    #[test]
    fn extended_precision_agrees() {
        let tau = DMatrix::from_row_slice(2, 2, &[C64::new(0.3, 1.1), C64::new(0.1, 0.2), C64::new(0.1, 0.2), C64::new(-0.4, 0.9)]);
        let z = [C64::new(0.2, 0.1), C64::new(-0.3, 0.05)];
        let d = gaussian_lattice_sum(&tau, &z, &[0.0, 0.0], Weight::Unit, &TruncationSpec::default().with_precision(Precision::Double)).unwrap();
        let e = gaussian_lattice_sum(&tau, &z, &[0.0, 0.0], Weight::Unit, &TruncationSpec::default().with_precision(Precision::Extended)).unwrap();
        assert!((d.value - e.value).norm() < 1e-14);
    }

    #[test]
    fn radius_cap_marks_result_uncertified() {
        let tau = DMatrix::from_element(1, 1, C64::new(0.0, 1e-3));
        let t = TruncationSpec::new(1e-15, 3).unwrap();
        let r = gaussian_lattice_sum(&tau, &[C64::new(0.0, 0.0)], &[0.0], Weight::Unit, &t).unwrap();
        assert!(!r.certified);
        assert_eq!(r.radius_used, 3);
        assert!(r.tail_bound > 1e-15);
    }

    #[test]
    fn double_double_reduction() {
        let x = DoubleDouble::from_f64(1e10 + 0.25);
        assert!((x.rem2() - 0.25).abs() < 1e-12);
        let y = DoubleDouble::from_f64(0.1).mul_f64(3.0);
        assert!((y.to_f64() - 0.3).abs() < 1e-16);
    }

    #[test]
    fn compensated_sum_cancels() {
        let mut s = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(C64::new(x, 0.0));
        }
        assert_eq!(s.value().re, 2.0);
    }
}
