//! Functions P(x)·S₁^a·S₂^b·S^c·exp(πi ᵗxQx) and the action of WeylOperator on them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::operator::WeylOperator;
use super::poly::Polynomial;
use super::scalar::{qi_i, rat, ExactScalar, Rational};
use crate::error::{domain, Result};
use crate::numerics::C64;

/// S₁ = Σ_{j<p} x_j², S₂ = Σ_{j≥p} x_j², S = S₁ − S₂ on ℝ^{p+q}.
///
/// Internally a sum Σ_o P_o·S₁^{a+o₁}S₂^{b+o₂}S^{c+o₃} over integer offsets o;
/// `normalize` collapses it to one polynomial with the S-factors divided out.
#[derive(Clone)]
pub struct GenFunction {
    p: usize,
    q: usize,
    base: [Rational; 3],
    quad: Vec<Vec<ExactScalar>>,
    parts: BTreeMap<[i64; 3], Polynomial>,
}

impl GenFunction {
    /// P·S₁^a·S₂^b·S^c·exp(πi ᵗxQx). With q = 0 the S-power is folded into S₁.
    pub fn new(p: usize, q: usize, poly: Polynomial, exps: [Rational; 3], quad: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let n = p + q;
        if p == 0 {
            return domain("GenFunction needs at least one positive variable");
        }
        if poly.nvars() != n || quad.len() != n || quad.iter().any(|r| r.len() != n) {
            return domain("dimension mismatch in GenFunction");
        }
        for i in 0..n {
            for j in 0..i {
                if quad[i][j] != quad[j][i] {
                    return domain("exponent form must be symmetric");
                }
            }
        }
        let [mut a, b, mut c] = exps;
        if q == 0 {
            if !b.is_zero() {
                return domain("S₂ vanishes identically when q = 0");
            }
            a += &c;
            c = Rational::zero();
        }
        let mut parts = BTreeMap::new();
        parts.insert([0, 0, 0], poly);
        let mut f = GenFunction { p, q, base: [a, b, c], quad, parts };
        f.normalize();
        Ok(f)
    }

    /// P·exp(πi ᵗxQx) with no S-powers.
    pub fn from_poly(p: usize, q: usize, poly: Polynomial, quad: Vec<Vec<ExactScalar>>) -> Result<Self> {
        Self::new(p, q, poly, [Rational::zero(), Rational::zero(), Rational::zero()], quad)
    }

    pub fn zero_quad(n: usize) -> Vec<Vec<ExactScalar>> {
        vec![vec![ExactScalar::zero(); n]; n]
    }

    /// Q with exp(πi ᵗxQx) = e^{−π(Σ_{j<p}x_j² + sign·Σ_{j≥p}x_j²)}.
    pub fn gaussian_quad(p: usize, q: usize, sign: i64) -> Vec<Vec<ExactScalar>> {
        let n = p + q;
        let mut m = Self::zero_quad(n);
        for (j, row) in m.iter_mut().enumerate() {
            let s = if j < p { 1 } else { sign };
            row[j] = ExactScalar::i().scale(&super::scalar::qi_int(s));
        }
        m
    }

    /// φ₀ = e^{−π|x|²} on ℝⁿ, viewed with signature split (p, q).
    pub fn vacuum(p: usize, q: usize) -> Self {
        let n = p + q;
        Self::from_poly(p, q, Polynomial::one(n), Self::gaussian_quad(p, q, 1)).expect("valid vacuum")
    }

    /// φ₁ = e^{−πS(x)}.
    pub fn indefinite_gaussian(p: usize, q: usize) -> Self {
        let n = p + q;
        Self::from_poly(p, q, Polynomial::one(n), Self::gaussian_quad(p, q, -1)).expect("valid Gaussian")
    }

    pub fn with_poly(&self, poly: Polynomial) -> Self {
        let mut f = self.clone();
        f.parts = BTreeMap::new();
        f.parts.insert([0, 0, 0], poly);
        f.normalize();
        f
    }

    pub fn nvars(&self) -> usize {
        self.p + self.q
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Polynomial part of the normal form.
    pub fn poly(&self) -> Polynomial {
        self.parts.get(&[0, 0, 0]).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars()))
    }

    pub fn exponents(&self) -> &[Rational; 3] {
        &self.base
    }

    pub fn quad(&self) -> &Vec<Vec<ExactScalar>> {
        &self.quad
    }

    pub fn s1(&self) -> Polynomial {
        Polynomial::sum_squares(self.nvars(), 0..self.p, 1)
    }

    pub fn s2(&self) -> Polynomial {
        Polynomial::sum_squares(self.nvars(), self.p..self.nvars(), 1)
    }

    pub fn s(&self) -> Polynomial {
        self.s1().sub(&self.s2())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|p| p.is_zero())
    }

    fn normalize(&mut self) {
        self.parts.retain(|_, p| !p.is_zero());
        let n = self.nvars();
        if self.parts.is_empty() {
            self.base = [Rational::zero(), Rational::zero(), Rational::zero()];
            return;
        }
        let mut mins = [i64::MAX; 3];
        for k in self.parts.keys() {
            for t in 0..3 {
                mins[t] = mins[t].min(k[t]);
            }
        }
        let factors = [self.s1(), self.s2(), self.s()];
        let mut total = Polynomial::zero(n);
        for (k, poly) in &self.parts {
            let mut t = poly.clone();
            for s in 0..3 {
                t = t.mul(&factors[s].pow((k[s] - mins[s]) as u32));
            }
            total = total.add(&t);
        }
        for t in 0..3 {
            self.base[t] += Rational::from_integer(mins[t].into());
        }
        if !total.is_zero() {
            let active: Vec<usize> = if self.q == 0 { vec![0] } else { vec![0, 1, 2] };
            loop {
                let mut progressed = false;
                for &s in &active {
                    if let Some(qt) = total.div_exact(&factors[s]) {
                        total = qt;
                        self.base[s] += Rational::from_integer(1.into());
                        progressed = true;
                    }
                }
                if !progressed {
                    break;
                }
            }
        } else {
            self.base = [Rational::zero(), Rational::zero(), Rational::zero()];
        }
        self.parts = BTreeMap::new();
        if !total.is_zero() {
            self.parts.insert([0, 0, 0], total);
        }
    }

    fn compatible(&self, o: &GenFunction) -> Result<[i64; 3]> {
        if self.p != o.p || self.q != o.q || self.quad != o.quad {
            return domain("GenFunctions live in different classes");
        }
        let mut off = [0i64; 3];
        for t in 0..3 {
            let d = &o.base[t] - &self.base[t];
            if !d.is_integer() {
                return domain("S-exponents differ by a non-integer");
            }
            off[t] = d.to_integer().try_into().map_err(|_| crate::error::Error::Domain("exponent overflow".into()))?;
        }
        Ok(off)
    }

    pub fn add(&self, o: &GenFunction) -> Result<GenFunction> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let off = self.compatible(o)?;
        let mut r = self.clone();
        for (k, poly) in &o.parts {
            let key = [k[0] + off[0], k[1] + off[1], k[2] + off[2]];
            let e = r.parts.entry(key).or_insert_with(|| Polynomial::zero(self.nvars()));
            *e = e.add(poly);
        }
        r.normalize();
        Ok(r)
    }

    pub fn scale(&self, c: &ExactScalar) -> GenFunction {
        let mut r = self.clone();
        for p in r.parts.values_mut() {
            *p = p.scale(c);
        }
        r.normalize();
        r
    }

    pub fn sub(&self, o: &GenFunction) -> Result<GenFunction> {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }

    /// Exact equality as functions on the open set where the S-powers are defined.
    pub fn equals(&self, o: &GenFunction) -> bool {
        match self.sub(o) {
            Ok(d) => d.is_zero(),
            Err(_) => self.is_zero() && o.is_zero(),
        }
    }

    pub fn mul_poly(&self, m: &Polynomial) -> GenFunction {
        let mut r = self.clone();
        for p in r.parts.values_mut() {
            *p = p.mul(m);
        }
        r.normalize();
        r
    }

    /// ∂_j, with ∂_j S^c = 2c·ε_j x_j S^{c−1} and ∂_j exp(πi ᵗxQx) = 2πi(Qx)_j·exp.
    pub fn derivative(&self, j: usize) -> GenFunction {
        let n = self.nvars();
        let xj = Polynomial::var(n, j);
        let mut lin = Polynomial::zero(n);
        for k in 0..n {
            let c = &self.quad[j][k] * &ExactScalar::monomial(qi_i().scale(rat(2, 1)), 1);
            lin = lin.add(&Polynomial::var(n, k).scale(&c));
        }
        let eps = if j < self.p { 1 } else { -1 };
        let mut out: BTreeMap<[i64; 3], Polynomial> = BTreeMap::new();
        let mut push = |key: [i64; 3], poly: Polynomial| {
            if poly.is_zero() {
                return;
            }
            let e = out.entry(key).or_insert_with(|| Polynomial::zero(n));
            *e = e.add(&poly);
        };
        for (k, poly) in &self.parts {
            let eff: Vec<Rational> = (0..3).map(|t| &self.base[t] + Rational::from_integer(k[t].into())).collect();
            push(*k, poly.derivative(j));
            if j < self.p && !eff[0].is_zero() {
                push([k[0] - 1, k[1], k[2]], poly.mul(&xj).scale(&ExactScalar::from_rational(&eff[0] * rat(2, 1))));
            }
            if j >= self.p && !eff[1].is_zero() {
                push([k[0], k[1] - 1, k[2]], poly.mul(&xj).scale(&ExactScalar::from_rational(&eff[1] * rat(2, 1))));
            }
            if !eff[2].is_zero() {
                push([k[0], k[1], k[2] - 1], poly.mul(&xj).scale(&ExactScalar::from_rational(&eff[2] * rat(2 * eps, 1))));
            }
            push(*k, poly.mul(&lin));
        }
        let mut r = GenFunction { p: self.p, q: self.q, base: self.base.clone(), quad: self.quad.clone(), parts: out };
        r.normalize();
        r
    }

    pub fn apply(&self, w: &WeylOperator) -> Result<GenFunction> {
        if w.nvars() != self.nvars() {
            return domain("operator and function have different variable counts");
        }
        let mut acc = self.scale(&ExactScalar::zero());
        for ((xs, ds), c) in w.terms() {
            let mut g = self.clone();
            for (j, k) in ds.iter().enumerate() {
                for _ in 0..*k {
                    g = g.derivative(j);
                }
            }
            let mut mono = vec![0u32; self.nvars()];
            mono.copy_from_slice(xs);
            let m = Polynomial::monomial(self.nvars(), mono, c.clone());
            acc = acc.add(&g.mul_poly(&m))?;
        }
        Ok(acc)
    }

    /// Numerical value at a point where S₁, S₂ and S are positive (or their
    /// exponents are nonnegative integers).
    pub fn eval(&self, x: &[f64]) -> C64 {
        let n = self.nvars();
        let s1: f64 = x[..self.p].iter().map(|v| v * v).sum();
        let s2: f64 = x[self.p..n].iter().map(|v| v * v).sum();
        let s = s1 - s2;
        let pw = |base: f64, e: &Rational| -> C64 {
            if e.is_integer() {
                C64::new(base, 0.0).powi(e.to_integer().try_into().unwrap_or(0))
            } else if base > 0.0 {
                C64::new(base.powf(super::scalar::rat_to_f64(e)), 0.0)
            } else {
                C64::new(f64::NAN, f64::NAN)
            }
        };
        let mut quad = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                quad += self.quad[i][j].to_c64() * x[i] * x[j];
            }
        }
        let e = (C64::new(0.0, std::f64::consts::PI) * quad).exp();
        let mut total = C64::new(0.0, 0.0);
        for (k, poly) in &self.parts {
            let ex: Vec<Rational> = (0..3).map(|t| &self.base[t] + Rational::from_integer(k[t].into())).collect();
            total += poly.eval_real(x) * pw(s1, &ex[0]) * pw(s2, &ex[1]) * pw(s, &ex[2]);
        }
        total * e
    }
}

impl fmt::Display for GenFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |r: &Rational| if r.is_negative() || !r.is_integer() { format!("({r})") } else { r.to_string() };
        write!(f, "[{}]·S1^{}·S2^{}·S^{}·exp(πi·xQx)", self.poly(), show(&self.base[0]), show(&self.base[1]), show(&self.base[2]))
    }
}

impl fmt::Debug for GenFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_powers() {
        let n = 3;
        let f = GenFunction::new(2, 1, Polynomial::one(n), [rat(1, 2), rat(0, 1), rat(-3, 2)], GenFunction::zero_quad(n)).unwrap();
        let g = f.derivative(0).derivative(0);
        let x = [0.7, -0.4, 0.3];
        let h = 1e-4;
        let num = |v: f64| {
            let mut y = x;
            y[0] = v;
            f.eval(&y)
        };
        let fd = (num(x[0] + h) - num(x[0]) * 2.0 + num(x[0] - h)) / (h * h);
        assert!((g.eval(&x) - fd).norm() < 1e-5 * (1.0 + fd.norm()));
    }

    #[test]
    fn normal_form_divides_out_s() {
        let n = 3;
        let f = GenFunction::new(2, 1, Polynomial::one(n), [rat(0, 1), rat(0, 1), rat(1, 2)], GenFunction::zero_quad(n)).unwrap();
        let s = f.s();
        let g = f.mul_poly(&s);
        assert_eq!(g.exponents()[2], rat(3, 2));
        assert_eq!(g.poly(), Polynomial::one(n));
        let s1 = f.s1();
        let h = f.mul_poly(&s1).sub(&f.mul_poly(&f.s2())).unwrap();
        assert!(h.equals(&g));
    }
}
