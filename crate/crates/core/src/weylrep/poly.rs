//! Multivariate polynomials over ExactScalar, keyed by exponent vectors.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{ExactScalar, QI};
use crate::numerics::C64;

/// Sparse polynomial in x₁…xₙ. Keys compare lexicographically with x₁ most
/// significant; the largest key is the leading monomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, ExactScalar::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: ExactScalar) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// The coordinate function x_j (0-based).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, e, ExactScalar::one())
    }

    /// Σ_{j∈range} sign·x_j².
    pub fn sum_squares(nvars: usize, range: std::ops::Range<usize>, sign: i64) -> Self {
        let mut p = Self::zero(nvars);
        for j in range {
            let mut e = vec![0; nvars];
            e[j] = 2;
            p.add_term(e, ExactScalar::from_int(sign));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> ExactScalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&ExactScalar::from_int(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (e, v) in &self.terms {
            r.add_term(e.clone(), v * c);
        }
        r
    }

    pub fn scale_qi(&self, c: &QI) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (e, v) in &self.terms {
            r.add_term(e.clone(), v.scale(c));
        }
        r
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut r = Polynomial::one(self.nvars);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Multiplies by x_j^k.
    pub fn mul_var(&self, j: usize, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[j] += k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn derivative(&self, j: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut e2 = e.clone();
                e2[j] -= 1;
                r.add_term(e2, c.scale(&super::scalar::qi_int(e[j] as i64)));
            }
        }
        r
    }

    /// Σ_j signs[j]·∂_j².
    pub fn laplacian(&self, signs: &[i64]) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (j, s) in signs.iter().enumerate() {
            if *s != 0 {
                r = r.add(&self.derivative(j).derivative(j).scale(&ExactScalar::from_int(*s)));
            }
        }
        r
    }

    /// Σ x_j∂_j.
    pub fn euler(&self) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let d: u32 = e.iter().sum();
            r.add_term(e.clone(), c.scale(&super::scalar::qi_int(d as i64)));
        }
        r
    }

    pub fn conj(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree if every term has the same total degree; the zero polynomial
    /// counts as homogeneous of any degree and returns None.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(d)
    }

    /// Places the variables at positions offset.. of an `nvars`-variable ring.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars);
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = vec![0; nvars];
                    v[offset..offset + self.nvars].copy_from_slice(e);
                    (v, c.clone())
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = c.to_c64();
                for (xi, k) in x.iter().zip(e) {
                    m *= xi.powu(*k);
                }
                m
            })
            .sum()
    }

    pub fn eval_real(&self, x: &[f64]) -> C64 {
        let z: Vec<C64> = x.iter().map(|v| C64::new(*v, 0.0)).collect();
        self.eval(&z)
    }

    /// Lex-order division by a single divisor whose leading coefficient is a
    /// single π-monomial. Returns (quotient, remainder).
    pub fn div_rem(&self, d: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let (ld, cd) = d.leading()?;
        let cd_inv = cd.inv()?;
        let mut p = self.clone();
        let mut q = Polynomial::zero(self.nvars);
        let mut r = Polynomial::zero(self.nvars);
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if m.iter().zip(ld).all(|(a, b)| a >= b) {
                let e: Vec<u32> = m.iter().zip(ld).map(|(a, b)| a - b).collect();
                let t = Polynomial::monomial(self.nvars, e, &c * &cd_inv);
                p = p.sub(&t.mul(d));
                q = q.add(&t);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Some((q, r))
    }

    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", j + 1)?,
                    _ => write!(f, "·x{}^{}", j + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_division() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let s = x.mul(&x).add(&y.mul(&y));
        let p = s.mul(&x.add(&y)).add(&y);
        let (q, r) = p.div_rem(&s).unwrap();
        assert_eq!(q.mul(&s).add(&r), p);
        assert_eq!(q, x.add(&y));
        assert_eq!(r, y);
        assert!(s.pow(2).div_exact(&s).is_some());
        assert!(x.div_exact(&s).is_none());
        assert_eq!(s.laplacian(&[1, 1]), Polynomial::constant(2, ExactScalar::from_int(4)));
        assert_eq!(s.euler(), s.scale(&ExactScalar::from_int(2)));
        assert_eq!(p.total_degree(), Some(3));
        assert_eq!(p.homogeneous_degree(), None);
        assert_eq!(s.homogeneous_degree(), Some(2));
        assert_eq!(x.embed(3, 1), Polynomial::var(3, 1));
    }
}
