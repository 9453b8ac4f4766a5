//! Exact scalars: finite sums Σ r_k πᵏ with r_k ∈ ℚ(i), k ∈ ℤ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numerics::C64;

pub type Rational = BigRational;
/// Gaussian rational a + bi.
pub type QI = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(re: Rational, im: Rational) -> QI {
    Complex::new(re, im)
}

pub fn qi_int(n: i64) -> QI {
    Complex::new(rat(n, 1), Rational::zero())
}

pub fn qi_i() -> QI {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn qi_inv(z: &QI) -> Option<QI> {
    let n = &z.re * &z.re + &z.im * &z.im;
    if n.is_zero() {
        return None;
    }
    Some(Complex::new(&z.re / &n, -&z.im / &n))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn qi_to_c64(z: &QI) -> C64 {
    C64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// Element of ℚ(i)[π, π⁻¹]; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    terms: BTreeMap<i32, QI>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_qi(qi_int(1))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_qi(qi_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_qi(qi(rat(n, d), Rational::zero()))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_qi(qi(r, Rational::zero()))
    }

    pub fn i() -> Self {
        Self::from_qi(qi_i())
    }

    pub fn from_qi(c: QI) -> Self {
        Self::monomial(c, 0)
    }

    /// c·πᵏ.
    pub fn monomial(c: QI, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        ExactScalar { terms }
    }

    pub fn pi_pow(k: i32) -> Self {
        Self::monomial(qi_int(1), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &QI)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// The coefficient as a Gaussian rational when no π-power is present.
    pub fn as_qi(&self) -> Option<QI> {
        match self.terms.len() {
            0 => Some(QI::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &QI) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExactScalar { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn conj(&self) -> Self {
        ExactScalar { terms: self.terms.iter().map(|(k, v)| (*k, v.conj())).collect() }
    }

    /// Inverse of a single-term scalar.
    pub fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Self::monomial(qi_inv(c)?, -k))
    }

    pub fn to_c64(&self) -> C64 {
        self.terms.iter().map(|(k, c)| qi_to_c64(c) * std::f64::consts::PI.powi(*k)).sum()
    }

    fn add_term(&mut self, k: i32, c: QI) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(QI::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        for (k, c) in &o.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, o: &ExactScalar) {
        for (k, c) in &o.terms {
            self.add_term(*k, -c.clone());
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        let mut r = ExactScalar::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                r.add_term(k1 + k2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_qi(c: &QI) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => format!("{}i", fmt_rational(&c.im)),
        _ => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("({}{}{}i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| match k {
                0 => fmt_qi(c),
                1 => format!("{}·π", fmt_qi(c)),
                _ => format!("{}·π^{}", fmt_qi(c), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
