//! Real quadratic fields ℚ(√D): exact arithmetic, fundamental units, residue classes
//! modulo units, Hecke's theta series and the η² oracle.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::numerics::{SeriesResult, TruncationSpec, C64};
use crate::report::{IdentityCheck, SuiteReport};
use crate::theta_classical::exp_pi_i;
use crate::weylrep::Rational;

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let d = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

fn check_radicand(d: i64) -> Result<()> {
    if d <= 1 || !is_squarefree(d) {
        return domain(format!("D = {d} must be a squarefree integer > 1"));
    }
    Ok(())
}

/// Field discriminant: D for D ≡ 1 mod 4, else 4D.
pub fn discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// a + b√D with a, b ∈ ℚ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadFieldElement {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadFieldElement {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        check_radicand(d)?;
        Ok(QuadFieldElement { a, b, d })
    }

    pub fn from_ints(a: i64, b: i64, d: i64) -> Result<Self> {
        Self::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()), d)
    }

    /// (x + y√D)/2.
    pub fn from_halves(x: i64, y: i64, d: i64) -> Result<Self> {
        let two = BigInt::from(2);
        Self::new(Rational::new(x.into(), two.clone()), Rational::new(y.into(), two), d)
    }

    /// Q√disc(K), the modulus of Hecke's series.
    pub fn hecke_modulus(q: u64, d: i64) -> Result<Self> {
        let f = if d.rem_euclid(4) == 1 { 1 } else { 2 };
        Self::from_ints(0, f * q as i64, d)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> i64 {
        self.d
    }

    fn same_field(&self, o: &Self) -> Result<()> {
        if self.d != o.d {
            return domain("elements lie in different fields");
        }
        Ok(())
    }

    pub fn conj(&self) -> Self {
        QuadFieldElement { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.into())
    }

    pub fn trace(&self) -> Rational {
        &self.a * Rational::from_integer(2.into())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        Ok(QuadFieldElement { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        Ok(QuadFieldElement { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d })
    }

    pub fn neg(&self) -> Self {
        QuadFieldElement { a: -&self.a, b: -&self.b, d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let dd = Rational::from_integer(self.d.into());
        Ok(QuadFieldElement {
            a: &self.a * &o.a + &self.b * &o.b * dd,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        })
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return domain("zero has no inverse");
        }
        let c = self.conj();
        Ok(QuadFieldElement { a: &c.a / &n, b: &c.b / &n, d: self.d })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = QuadFieldElement { a: Rational::one(), b: Rational::zero(), d: self.d };
        for _ in 0..k {
            r = r.mul(self).expect("same field");
        }
        r
    }

    /// Membership in 𝔬_K.
    pub fn is_integral(&self) -> bool {
        let two = Rational::from_integer(2.into());
        let (x, y) = (&self.a * &two, &self.b * &two);
        if !x.is_integer() || !y.is_integer() {
            return false;
        }
        let (x, y) = (x.to_integer(), y.to_integer());
        if self.d.rem_euclid(4) == 1 {
            (&x - &y).is_even()
        } else {
            x.is_even() && y.is_even()
        }
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    /// Sign of the real embedding with √D > 0, decided exactly.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * Rational::from_integer(self.d.into());
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// μ ≡ ν mod m, i.e. (μ − ν)/m ∈ 𝔬_K.
    pub fn congruent(&self, o: &Self, modulus: &Self) -> Result<bool> {
        Ok(self.sub(o)?.div(modulus)?.is_integral())
    }

    fn to_halves(&self) -> Result<Half> {
        if !self.is_integral() {
            return domain(format!("{self} is not an algebraic integer"));
        }
        let two = Rational::from_integer(2.into());
        let conv = |r: &Rational| (r * &two).to_integer().to_i128();
        match (conv(&self.a), conv(&self.b)) {
            (Some(x), Some(y)) => Ok(Half { x, y }),
            _ => Err(Error::Conditioning("coordinates exceed the 128-bit enumeration range".into())),
        }
    }

    fn from_half(h: Half, d: i64) -> Self {
        let two = BigInt::from(2);
        QuadFieldElement { a: Rational::new(h.x.into(), two.clone()), b: Rational::new(h.y.into(), two), d }
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_negative() {
            write!(f, "{} - {}√{}", self.a, -&self.b, self.d)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

/// Integer (x + y√D)/2 with 128-bit coordinates, used by the enumerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Half {
    x: i128,
    y: i128,
}

impl Half {
    fn one() -> Self {
        Half { x: 2, y: 0 }
    }

    fn neg(self) -> Self {
        Half { x: -self.x, y: -self.y }
    }

    fn conj(self) -> Self {
        Half { x: self.x, y: -self.y }
    }

    fn sub(self, o: Half) -> Half {
        Half { x: self.x - o.x, y: self.y - o.y }
    }

    fn mul(self, o: Half, d: i128) -> Option<Half> {
        let x = self.x.checked_mul(o.x)?.checked_add(d.checked_mul(self.y)?.checked_mul(o.y)?)?;
        let y = self.x.checked_mul(o.y)?.checked_add(self.y.checked_mul(o.x)?)?;
        Some(Half { x: x / 2, y: y / 2 })
    }

    /// N(μ), exact for integral elements.
    fn norm(self, d: i128) -> i128 {
        (self.x * self.x - d * self.y * self.y) / 4
    }

    fn signum(self, d: i128) -> i32 {
        let (sx, sy) = (self.x.signum() as i32, self.y.signum() as i32);
        if sx == sy || sy == 0 {
            sx
        } else if sx == 0 {
            sy
        } else if self.x * self.x > d * self.y * self.y {
            sx
        } else {
            sy
        }
    }

    fn integral(self, d: i128) -> bool {
        if d.rem_euclid(4) == 1 {
            (self.x - self.y).rem_euclid(2) == 0
        } else {
            self.x.rem_euclid(2) == 0 && self.y.rem_euclid(2) == 0
        }
    }

    /// self ∈ m·𝔬.
    fn divisible_by(self, m: Half, d: i128) -> Option<bool> {
        let n = m.norm(d);
        let p = self.mul(m.conj(), d)?;
        if p.x % n != 0 || p.y % n != 0 {
            return Some(false);
        }
        Some(Half { x: p.x / n, y: p.y / n }.integral(d))
    }

    /// |μ| ≥ |μ′|.
    fn dominates_conj(self) -> bool {
        self.x.signum() * self.y.signum() >= 0
    }
}

/// Smallest unit ε₀ > 1 of 𝔬_K, from the continued fraction of ω (√D or (1+√D)/2).
pub fn fundamental_unit(d: i64) -> Result<QuadFieldElement> {
    check_radicand(d)?;
    let one_mod_four = d.rem_euclid(4) == 1;
    let dd = BigInt::from(d);
    let s = dd.sqrt();
    let (mut pp, mut qq) = if one_mod_four { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), BigInt::one());
    for _ in 0..100_000 {
        let a = (&pp + &s).div_floor(&qq);
        let p = &a * &p1 + &p2;
        let q = &a * &q1 + &q2;
        // N(p − qω) = ±1 marks the unit; its conjugate p − qω′ is the one above 1.
        let (ea, eb) = if one_mod_four {
            (Rational::new(BigInt::from(2) * &p - &q, BigInt::from(2)), Rational::new(q.clone(), BigInt::from(2)))
        } else {
            (Rational::from_integer(p.clone()), Rational::from_integer(q.clone()))
        };
        let cand = QuadFieldElement { a: ea, b: eb, d };
        if cand.norm().abs().is_one() {
            return Ok(cand);
        }
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        let np = &a * &qq - &pp;
        qq = (&dd - &np * &np) / &qq;
        pp = np;
    }
    Err(Error::Conditioning(format!("no unit found for D = {d} within the iteration budget")))
}

/// The units ≡ 1 modulo a given modulus: generated by ε_h = ±ε₀^h and, when −1 ≡ 1, by −1.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGroupData {
    pub eps0: QuadFieldElement,
    pub h: u32,
    pub eps_h: QuadFieldElement,
    pub minus_one_congruent: bool,
}

pub fn congruence_units(modulus: &QuadFieldElement) -> Result<UnitGroupData> {
    let d = modulus.radicand();
    if modulus.is_zero() {
        return domain("modulus must be nonzero");
    }
    let m = modulus.to_halves()?;
    let di = d as i128;
    let eps0 = fundamental_unit(d)?;
    let e0 = eps0.to_halves()?;
    let overflow = || Error::Conditioning("unit powers exceed the 128-bit enumeration range".into());
    let minus_one_congruent = Half { x: -4, y: 0 }.divisible_by(m, di).ok_or_else(overflow)?;
    let limit = m.norm(di).unsigned_abs().saturating_mul(2).max(2);
    let mut e = Half::one();
    for h in 1..=limit {
        e = e.mul(e0, di).ok_or_else(overflow)?;
        for cand in [e, e.neg()] {
            if cand.sub(Half::one()).divisible_by(m, di).ok_or_else(overflow)? {
                return Ok(UnitGroupData { eps0, h: h as u32, eps_h: QuadFieldElement::from_half(cand, d), minus_one_congruent });
            }
        }
    }
    Err(Error::Conditioning("no congruence unit found".into()))
}

/// Enumeration budget for the coordinate box.
const MAX_BOX: f64 = 6.0e7;

struct OrbitEnumerator {
    d: i128,
    alpha: Half,
    m: Half,
    eps_inv: Half,
    eps_abs: f64,
    minus_one: bool,
}

impl OrbitEnumerator {
    fn new(alpha: &QuadFieldElement, modulus: &QuadFieldElement) -> Result<(Self, UnitGroupData)> {
        if alpha.radicand() != modulus.radicand() {
            return domain("alpha and modulus lie in different fields");
        }
        let units = congruence_units(modulus)?;
        let d = alpha.radicand() as i128;
        let eh = units.eps_h.to_halves()?;
        let n_eh = eh.norm(d);
        let eps_inv = if n_eh == 1 { eh.conj() } else { eh.conj().neg() };
        let en = OrbitEnumerator {
            d,
            alpha: alpha.to_halves()?,
            m: modulus.to_halves()?,
            eps_inv,
            eps_abs: units.eps_h.to_f64().abs(),
            minus_one: units.minus_one_congruent,
        };
        Ok((en, units))
    }

    fn box_size(&self, bound: u64) -> (i128, i128, f64) {
        let r = (bound as f64).sqrt() * (self.eps_abs + 1.0);
        let xmax = r.ceil() as i128 + 2;
        let ymax = (r / (self.d as f64).sqrt()).ceil() as i128 + 2;
        (xmax, ymax, (2 * xmax + 1) as f64 * (2 * ymax + 1) as f64)
    }

    /// 1 ≤ |μ/μ′| < ε_h², and μ > 0 when −1 is a congruence unit.
    fn in_domain(&self, mu: Half) -> Option<bool> {
        if !mu.dominates_conj() {
            return Some(false);
        }
        let nu = mu.mul(self.eps_inv, self.d)?;
        if nu.x.signum() * nu.y.signum() >= 0 {
            return Some(false);
        }
        Some(!self.minus_one || mu.signum(self.d) > 0)
    }

    fn reps(&self, bound: u64) -> Result<Vec<Half>> {
        let (xmax, ymax, size) = self.box_size(bound);
        if size > MAX_BOX {
            return Err(Error::Conditioning(format!("orbit enumeration box of {size:.3e} points exceeds the budget")));
        }
        let overflow = || Error::Conditioning("enumeration overflowed 128-bit arithmetic".into());
        let half_ring = self.d.rem_euclid(4) == 1;
        let mut out = Vec::new();
        for x in -xmax..=xmax {
            if !half_ring && x.rem_euclid(2) != 0 {
                continue;
            }
            for y in -ymax..=ymax {
                let mu = Half { x, y };
                if !mu.integral(self.d) {
                    continue;
                }
                let n = mu.norm(self.d);
                if n == 0 || n.unsigned_abs() > bound as u128 {
                    continue;
                }
                if !mu.sub(self.alpha).divisible_by(self.m, self.d).ok_or_else(overflow)? {
                    continue;
                }
                if self.in_domain(mu).ok_or_else(overflow)? {
                    out.push(mu);
                }
            }
        }
        out.sort_by_key(|h| (h.norm(self.d).unsigned_abs(), *h));
        Ok(out)
    }
}

/// One μ ≡ α (mod modulus) per orbit under the congruence units, with 0 < |μμ′| ≤ norm_bound,
/// taken from the fundamental domain 1 ≤ |μ/μ′| < ε_h².
pub fn enumerate_residue_orbits(alpha: &QuadFieldElement, modulus: &QuadFieldElement, norm_bound: &Rational) -> Result<Vec<QuadFieldElement>> {
    if modulus.is_zero() {
        return domain("modulus must be nonzero");
    }
    if !norm_bound.is_positive() {
        return Ok(Vec::new());
    }
    let bound = norm_bound.floor().to_integer().to_u64().ok_or_else(|| Error::Conditioning("norm bound too large".into()))?;
    let (en, _) = OrbitEnumerator::new(alpha, modulus)?;
    Ok(en.reps(bound)?.into_iter().map(|h| QuadFieldElement::from_half(h, alpha.radicand())).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeckeMode {
    Full,
    /// Only μμ′ > 0.
    Plus,
}

/// q^{exp_num/exp_den} with an integer coefficient, q = e^{2πiτ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QTerm {
    pub exp_num: i64,
    pub exp_den: i64,
    pub coeff: i64,
}

fn norm_coefficients(alpha: &QuadFieldElement, q: u64, mode: HeckeMode, bound: u64) -> Result<(BTreeMap<u64, i64>, UnitGroupData)> {
    if q == 0 {
        return domain("Q must be positive");
    }
    let modulus = QuadFieldElement::hecke_modulus(q, alpha.radicand())?;
    let (en, units) = OrbitEnumerator::new(alpha, &modulus)?;
    let mut coeffs: BTreeMap<u64, i64> = BTreeMap::new();
    for mu in en.reps(bound)? {
        let n = mu.norm(en.d);
        if mode == HeckeMode::Plus && n < 0 {
            continue;
        }
        *coeffs.entry(n.unsigned_abs() as u64).or_insert(0) += mu.signum(en.d) as i64;
    }
    Ok((coeffs, units))
}

/// Exact expansion of ϑ(τ; α, Q√disc) = Σ_{(μ)} sgn μ · q^{|μμ′|/(Q·disc)} over |μμ′| ≤ max_norm.
pub fn hecke_qexp(alpha: &QuadFieldElement, q: u64, mode: HeckeMode, max_norm: u64) -> Result<Vec<QTerm>> {
    let (coeffs, _) = norm_coefficients(alpha, q, mode, max_norm)?;
    let den = q as i64 * discriminant(alpha.radicand());
    Ok(coeffs
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(n, c)| {
            let g = (n as i64).gcd(&den);
            QTerm { exp_num: n as i64 / g, exp_den: den / g, coeff: c }
        })
        .collect())
}

pub fn qexp_csv(terms: &[QTerm]) -> String {
    let mut s = String::from("exp_num,exp_den,coeff\n");
    for t in terms {
        s.push_str(&format!("{},{},{}\n", t.exp_num, t.exp_den, t.coeff));
    }
    s
}

/// Σ_{n>B} 4h√n·e^{−cn}, bounding the terms beyond norm B: at most 2h orbits per
/// principal ideal and at most τ(n) ≤ 2√n ideals of norm n. Needs B ≥ 1/(2c).
fn hecke_tail(h: u32, c: f64, b: f64) -> f64 {
    4.0 * h as f64 * ((b.sqrt() / c) + 1.0 / (2.0 * c * c * b.sqrt())) * (-c * b).exp()
}

/// ϑ(τ; α, Q√disc) or ϑ₊, summed over orbit representatives up to a norm bound chosen
/// from the tail target.
pub fn hecke_theta(tau: C64, alpha: &QuadFieldElement, q: u64, mode: HeckeMode, trunc: &TruncationSpec) -> Result<SeriesResult> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return domain("Im tau must be positive");
    }
    if q == 0 {
        return domain("Q must be positive");
    }
    let den = (q as i64 * discriminant(alpha.radicand())) as f64;
    let c = 2.0 * PI * tau.im / den;
    let modulus = QuadFieldElement::hecke_modulus(q, alpha.radicand())?;
    let (en, units) = OrbitEnumerator::new(alpha, &modulus)?;
    let h = units.h;
    let mut b = (1.0 / (2.0 * c)).max(1.0).ceil();
    let mut certified = true;
    while hecke_tail(h, c, b) > trunc.target_tail {
        let next = b * 1.25 + 1.0;
        if en.box_size(next as u64).2 > MAX_BOX {
            certified = false;
            break;
        }
        b = next;
    }
    let bound = b as u64;
    let (coeffs, _) = norm_coefficients(alpha, q, mode, bound)?;
    let mut total = C64::new(0.0, 0.0);
    let mut terms = 0u64;
    for (n, cf) in coeffs.iter().rev() {
        if *cf == 0 {
            continue;
        }
        let e = *n as f64 / den;
        total += exp_pi_i(2.0 * tau.re * e) * (-2.0 * PI * tau.im * e).exp() * *cf as f64;
        terms += 1;
    }
    Ok(SeriesResult { value: total, radius_used: bound as usize, tail_bound: hecke_tail(h, c, b), terms_summed: terms, certified })
}

/// Coefficients of Π_{n≥1}(1 − qⁿ)² through q^{n_terms}.
pub fn eta_sq_qexp(n_terms: usize) -> Result<Vec<i64>> {
    if n_terms < 1 {
        return domain("n_terms must be at least 1");
    }
    let mut c = vec![0i64; n_terms + 1];
    c[0] = 1;
    for n in 1..=n_terms {
        for _ in 0..2 {
            for j in (n..=n_terms).rev() {
                c[j] -= c[j - n];
            }
        }
    }
    Ok(c)
}

/// ϑ₊(τ; 1, √12) against q^{1/12}Π(1 − qⁿ)², coefficient by coefficient.
pub fn verify_hecke_eta(n_terms: usize) -> Result<SuiteReport> {
    let eta = eta_sq_qexp(n_terms)?;
    let one = QuadFieldElement::from_ints(1, 0, 3)?;
    let max_norm = 12 * n_terms as u64 + 1;
    let terms = hecke_qexp(&one, 1, HeckeMode::Plus, max_norm)?;
    let mut got: BTreeMap<(i64, i64), i64> = terms.iter().map(|t| ((t.exp_num, t.exp_den), t.coeff)).collect();
    let mut checks = Vec::new();
    for (n, &want) in eta.iter().enumerate() {
        let num = 12 * n as i64 + 1;
        let c = got.remove(&(num, 12)).unwrap_or(0);
        checks.push(IdentityCheck::exact(format!("coefficient of q^({num}/12)"), c == want, || format!("got {c}, expected {want}")));
    }
    checks.push(IdentityCheck::exact("no exponents outside 1/12 + Z", got.is_empty(), || format!("{got:?}")));
    Ok(SuiteReport::new("hecke-eta", checks))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn brute_unit(d: i64) -> (f64, f64) {
        let mut best: Option<(f64, f64)> = None;
        let half = d.rem_euclid(4) == 1;
        for y in 1..=60i64 {
            for x in -400..=400i64 {
                let (a, b) = if half { (x as f64 / 2.0, y as f64 / 2.0) } else { (x as f64, y as f64) };
                if half && (x - y).rem_euclid(2) != 0 {
                    continue;
                }
                let n4 = if half { x * x - d * y * y } else { 4 * (x * x - d * y * y) };
                if n4.abs() != 4 {
                    continue;
                }
                let v = a + b * (d as f64).sqrt();
                if v > 1.0 + 1e-9 && best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, a));
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn units_match_examples_and_search() {
        assert_eq!(fundamental_unit(3).unwrap(), QuadFieldElement::from_ints(2, 1, 3).unwrap());
        assert_eq!(fundamental_unit(2).unwrap(), QuadFieldElement::from_ints(1, 1, 2).unwrap());
        assert_eq!(fundamental_unit(5).unwrap(), QuadFieldElement::from_halves(1, 1, 5).unwrap());
        for d in [2i64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 33, 37] {
            let e = fundamental_unit(d).unwrap();
            assert!(e.is_unit(), "D={d}");
            let (v, _) = brute_unit(d);
            assert!((e.to_f64() - v).abs() < 1e-9 * v, "D={d}: {e} vs {v}");
        }
        assert!(fundamental_unit(4).is_err());
        assert!(fundamental_unit(1).is_err());
        // A classic large one.
        let e = fundamental_unit(94).unwrap();
        assert_eq!(e, QuadFieldElement::from_ints(2143295, 221064, 94).unwrap());
        assert_eq!(fundamental_unit(41).unwrap(), QuadFieldElement::from_ints(32, 5, 41).unwrap());
    }

    #[test]
    fn exact_arithmetic() {
        let a = QuadFieldElement::from_ints(2, 1, 3).unwrap();
        assert_eq!(a.norm(), Rational::one());
        assert_eq!(a.mul(&a.conj()).unwrap(), QuadFieldElement::from_ints(1, 0, 3).unwrap());
        assert_eq!(a.pow(2), QuadFieldElement::from_ints(7, 4, 3).unwrap());
        assert_eq!(QuadFieldElement::from_ints(-5, 2, 3).unwrap().signum(), -1);
        assert_eq!(QuadFieldElement::from_ints(-1, 1, 3).unwrap().signum(), 1);
        assert!(QuadFieldElement::from_halves(1, 1, 5).unwrap().is_integral());
        assert!(!QuadFieldElement::from_halves(1, 1, 3).unwrap().is_integral());
        let m = QuadFieldElement::hecke_modulus(1, 3).unwrap();
        assert!(QuadFieldElement::from_ints(7, 4, 3).unwrap().congruent(&QuadFieldElement::from_ints(1, 0, 3).unwrap(), &m).unwrap());
        assert!(!a.congruent(&QuadFieldElement::from_ints(1, 0, 3).unwrap(), &m).unwrap());
    }

    #[test]
    fn congruence_units_mod_sqrt12() {
        let m = QuadFieldElement::hecke_modulus(1, 3).unwrap();
        let u = congruence_units(&m).unwrap();
        assert_eq!(u.h, 2);
        assert_eq!(u.eps_h, QuadFieldElement::from_ints(7, 4, 3).unwrap());
        assert!(!u.minus_one_congruent);
        let two = QuadFieldElement::from_ints(2, 0, 3).unwrap();
        assert!(congruence_units(&two).unwrap().minus_one_congruent);
    }

    #[test]
    fn eta_against_pentagonal_numbers() {
        let n = 40usize;
        let mut euler = vec![0i64; n + 1];
        for k in -20i64..=20 {
            let e = k * (3 * k - 1) / 2;
            if e >= 0 && (e as usize) <= n {
                euler[e as usize] += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        let sq: Vec<i64> = (0..=n).map(|j| (0..=j).map(|i| euler[i] * euler[j - i]).sum()).collect();
        let c = eta_sq_qexp(n).unwrap();
        assert_eq!(c, sq);
        assert_eq!((c[0], c[1]), (1, -2));
        assert!(eta_sq_qexp(0).is_err());
    }

    #[test]
    fn hecke_eta_identity() {
        let r = verify_hecke_eta(40).unwrap();
        assert!(r.passed, "{:?}", r.failures());
        let one = QuadFieldElement::from_ints(1, 0, 3).unwrap();
        let t = hecke_qexp(&one, 1, HeckeMode::Plus, 40).unwrap();
        assert_eq!(&t[..3], &[
            QTerm { exp_num: 1, exp_den: 12, coeff: 1 },
            QTerm { exp_num: 13, exp_den: 12, coeff: -2 },
            QTerm { exp_num: 25, exp_den: 12, coeff: -1 },
        ]);
        assert!(qexp_csv(&t).starts_with("exp_num,exp_den,coeff\n1,12,1\n13,12,-2\n"));
    }

    /// Floating-point canonicalisation into the shifted domain ε_h^{−1} ≤ |μ/μ′| < ε_h.
    fn brute_orbits(d: i64, alpha: (i64, i64), bound: i64, eps_h: f64) -> BTreeMap<i64, (usize, i64)> {
        let sd = (d as f64).sqrt();
        let mut seen: HashSet<(i64, i64)> = HashSet::new();
        let mut out: BTreeMap<i64, (usize, i64)> = BTreeMap::new();
        for a in -400i64..=400 {
            for b in -250i64..=250 {
                let n = a * a - d * b * b;
                if n == 0 || n.abs() > bound {
                    continue;
                }
                // μ − α ∈ 2√3·𝔬 ⟺ 6 | a − α₀ and 2 | b − α₁.
                if (a - alpha.0).rem_euclid(6) != 0 || (b - alpha.1).rem_euclid(2) != 0 {
                    continue;
                }
                let (v, vc) = (a as f64 + b as f64 * sd, a as f64 - b as f64 * sd);
                let k = ((v / vc).abs().ln() / (2.0 * eps_h.ln()) + 0.5).floor() as i32;
                let (ea, eb) = (7i64, -4i64);
                let (mut x, mut y) = (a, b);
                let steps = k.unsigned_abs();
                for _ in 0..steps {
                    let (ux, uy) = if k > 0 { (ea, eb) } else { (ea, -eb) };
                    let nx = x * ux + d * y * uy;
                    let ny = x * uy + y * ux;
                    x = nx;
                    y = ny;
                }
                if seen.insert((x, y)) {
                    let e = out.entry(n.abs()).or_insert((0, 0));
                    e.0 += 1;
                    e.1 += if (x as f64 + y as f64 * sd) > 0.0 { 1 } else { -1 };
                }
            }
        }
        out
    }

    #[test]
    fn orbits_match_independent_domain() {
        let d = 3;
        let m = QuadFieldElement::hecke_modulus(1, 3).unwrap();
        let one = QuadFieldElement::from_ints(1, 0, 3).unwrap();
        let bound = 160i64;
        let reps = enumerate_residue_orbits(&one, &m, &Rational::from_integer(bound.into())).unwrap();
        let mut mine: BTreeMap<i64, (usize, i64)> = BTreeMap::new();
        for r in &reps {
            assert!(r.congruent(&one, &m).unwrap());
            let n = r.norm().abs().to_integer().to_i64().unwrap();
            let e = mine.entry(n).or_insert((0, 0));
            e.0 += 1;
            e.1 += r.signum() as i64;
        }
        let eps = 7.0 + 4.0 * 3f64.sqrt();
        assert_eq!(mine, brute_orbits(d, (1, 0), bound, eps));
        assert!(enumerate_residue_orbits(&one, &m, &Rational::zero()).unwrap().is_empty());
    }

    #[test]
    fn orbits_are_unit_invariant() {
        let m = QuadFieldElement::hecke_modulus(1, 3).unwrap();
        let one = QuadFieldElement::from_ints(1, 0, 3).unwrap();
        let eps = congruence_units(&m).unwrap().eps_h;
        let moved = enumerate_residue_orbits(&eps, &m, &Rational::from_integer(100.into())).unwrap();
        let base = enumerate_residue_orbits(&one, &m, &Rational::from_integer(100.into())).unwrap();
        assert_eq!(moved, base);
    }

    #[test]
    fn hecke_transformations() {
        let one = QuadFieldElement::from_ints(1, 0, 3).unwrap();
        let tr = TruncationSpec::new(1e-15, 4000).unwrap();
        let tau = C64::new(0.1, 1.2);
        let a = hecke_theta(tau, &one, 1, HeckeMode::Plus, &tr).unwrap();
        let b = hecke_theta(tau + 1.0, &one, 1, HeckeMode::Plus, &tr).unwrap();
        let z = C64::from_polar(1.0, 2.0 * PI / 12.0);
        assert!(a.certified);
        assert!((b.value - z * a.value).norm() < 1e-13);
        let t = C64::new(0.0, 2.0);
        let f = hecke_theta(t, &one, 1, HeckeMode::Plus, &tr).unwrap();
        let g = hecke_theta(-t.inv(), &one, 1, HeckeMode::Plus, &tr).unwrap();
        let rhs = C64::new(0.0, -1.0) * t * f.value;
        assert!((g.value - rhs).norm() < 1e-12 * rhs.norm(), "{} vs {}", g.value, rhs);
        // η² from the product.
        let q = (C64::new(0.0, 2.0 * PI) * t).exp();
        let mut prod = (C64::new(0.0, 2.0 * PI / 12.0) * t).exp();
        for n in 1..200 {
            prod *= (1.0 - q.powi(n)).powi(2);
        }
        assert!((f.value - prod).norm() < 1e-15);
        assert!(hecke_theta(C64::new(0.0, -1.0), &one, 1, HeckeMode::Plus, &tr).is_err());
    }

    #[test]
    fn full_mode_adds_negative_norms() {
        let one = QuadFieldElement::from_ints(1, 0, 3).unwrap();
        let full = hecke_qexp(&one, 1, HeckeMode::Full, 200).unwrap();
        let plus = hecke_qexp(&one, 1, HeckeMode::Plus, 200).unwrap();
        assert!(plus.iter().all(|t| full.contains(t) || full.iter().any(|f| (f.exp_num, f.exp_den) == (t.exp_num, t.exp_den))));
        let tr = TruncationSpec::default();
        let v = hecke_theta(C64::new(0.0, 2.0), &QuadFieldElement::from_ints(1, 0, 3).unwrap(), 1, HeckeMode::Full, &tr).unwrap();
        assert!(v.value.norm().is_finite());
    }
}
