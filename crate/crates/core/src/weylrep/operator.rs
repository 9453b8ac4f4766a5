//! Normal-ordered differential operators Σ c·x^α∂^β.

use std::collections::BTreeMap;
use std::fmt;

use super::poly::Polynomial;
use super::scalar::{qi_int, ExactScalar};

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOperator {
    nvars: usize,
    terms: BTreeMap<(Vec<u32>, Vec<u32>), ExactScalar>,
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

/// All κ with 0 ≤ κ_j ≤ bound_j.
fn multi_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bound {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for v in &out {
            for k in 0..=b {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

impl WeylOperator {
    pub fn zero(nvars: usize) -> Self {
        WeylOperator { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, xs: Vec<u32>, ds: Vec<u32>, c: ExactScalar) -> Self {
        assert!(xs.len() == nvars && ds.len() == nvars);
        let mut w = Self::zero(nvars);
        w.add_term(xs, ds, c);
        w
    }

    pub fn scalar(nvars: usize, c: ExactScalar) -> Self {
        Self::monomial(nvars, vec![0; nvars], vec![0; nvars], c)
    }

    pub fn identity(nvars: usize) -> Self {
        Self::scalar(nvars, ExactScalar::one())
    }

    /// Multiplication by x_j (0-based).
    pub fn x(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, e, vec![0; nvars], ExactScalar::one())
    }

    /// ∂_j (0-based).
    pub fn d(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Self::monomial(nvars, vec![0; nvars], e, ExactScalar::one())
    }

    pub fn multiplication(p: &Polynomial) -> Self {
        let n = p.nvars();
        let mut w = Self::zero(n);
        for (e, c) in p.terms() {
            w.add_term(e.clone(), vec![0; n], c.clone());
        }
        w
    }

    /// Euler operator Σ x_j∂_j.
    pub fn euler(nvars: usize) -> Self {
        (0..nvars).fold(Self::zero(nvars), |acc, j| acc.add(&Self::x(nvars, j).compose(&Self::d(nvars, j))))
    }

    /// Σ signs[j]·∂_j².
    pub fn laplacian(signs: &[i64]) -> Self {
        let n = signs.len();
        let mut w = Self::zero(n);
        for (j, s) in signs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 2;
            w.add_term(vec![0; n], e, ExactScalar::from_int(*s));
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<u32>, Vec<u32>), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, xs: Vec<u32>, ds: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let key = (xs, ds);
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &WeylOperator) -> WeylOperator {
        let mut r = self.clone();
        for ((x, d), c) in &o.terms {
            r.add_term(x.clone(), d.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &WeylOperator) -> WeylOperator {
        self.add(&o.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> WeylOperator {
        let mut r = Self::zero(self.nvars);
        for ((x, d), v) in &self.terms {
            r.add_term(x.clone(), d.clone(), v * c);
        }
        r
    }

    /// Normal-ordered product self∘o, using ∂^β x^γ = Σ_κ C(β,κ)·γ!/(γ−κ)!·x^{γ−κ}∂^{β−κ}.
    pub fn compose(&self, o: &WeylOperator) -> WeylOperator {
        assert_eq!(self.nvars, o.nvars, "operators act on different variable sets");
        let mut r = Self::zero(self.nvars);
        for ((a, b), c1) in &self.terms {
            for ((g, dl), c2) in &o.terms {
                let c = c1 * c2;
                let bound: Vec<u32> = b.iter().zip(g).map(|(x, y)| *x.min(y)).collect();
                for k in multi_indices(&bound) {
                    let mut f = 1i64;
                    for j in 0..self.nvars {
                        f *= binom(b[j], k[j]) * falling(g[j], k[j]);
                    }
                    let xs: Vec<u32> = (0..self.nvars).map(|j| a[j] + g[j] - k[j]).collect();
                    let ds: Vec<u32> = (0..self.nvars).map(|j| b[j] - k[j] + dl[j]).collect();
                    r.add_term(xs, ds, c.scale(&qi_int(f)));
                }
            }
        }
        r
    }

    pub fn commutator(&self, o: &WeylOperator) -> WeylOperator {
        self.compose(o).sub(&o.compose(self))
    }

    pub fn apply_poly(&self, p: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for ((xs, ds), c) in &self.terms {
            let mut q = p.clone();
            for (j, k) in ds.iter().enumerate() {
                for _ in 0..*k {
                    q = q.derivative(j);
                }
            }
            for (j, k) in xs.iter().enumerate() {
                q = q.mul_var(j, *k);
            }
            r = r.add(&q.scale(c));
        }
        r
    }
}

impl fmt::Display for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((xs, ds), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (j, k) in xs.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", j + 1)?,
                    _ => write!(f, "·x{}^{}", j + 1, k)?,
                }
            }
            for (j, k) in ds.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·∂{}", j + 1)?,
                    _ => write!(f, "·∂{}^{}", j + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        let x = WeylOperator::x(1, 0);
        let d = WeylOperator::d(1, 0);
        assert_eq!(d.compose(&x), x.compose(&d).add(&WeylOperator::identity(1)));
        assert_eq!(x.compose(&x), WeylOperator::monomial(1, vec![2], vec![0], ExactScalar::one()));
        let xd = x.compose(&d);
        let expected = WeylOperator::monomial(1, vec![2], vec![2], ExactScalar::one()).add(&xd);
        assert_eq!(xd.compose(&xd), expected);
        assert_eq!(d.commutator(&x), WeylOperator::identity(1));
    }

    #[test]
    fn apply_matches_compose() {
        let n = 2;
        let a = WeylOperator::x(n, 0).compose(&WeylOperator::d(n, 1)).add(&WeylOperator::d(n, 0).compose(&WeylOperator::d(n, 0)));
        let b = WeylOperator::x(n, 1).compose(&WeylOperator::x(n, 1)).add(&WeylOperator::d(n, 1));
        let p = Polynomial::var(n, 0).pow(3).mul(&Polynomial::var(n, 1).pow(2)).add(&Polynomial::var(n, 1));
        assert_eq!(a.compose(&b).apply_poly(&p), a.apply_poly(&b.apply_poly(&p)));
    }
}
