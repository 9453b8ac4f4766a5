//! Harmonic polynomials: dimensions, exact bases, the Fischer decomposition
//! P = Σ SʲP_j, the Fischer inner product, and the q = 1 ladder split on the
//! light cone.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::linalg::nullspace;
use super::poly::Polynomial;
use super::scalar::{qi_int, rat, ExactScalar, Rational, QI};
use crate::error::{Error, Result};

fn binom(a: i64, b: i64) -> u64 {
    if b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: u64 = 1;
    for k in 0..b {
        r = r * (a - k) as u64 / (k + 1) as u64;
    }
    r
}

/// dim ℋᵐ(ℝᵖ) = C(m+p−1, p−1) − C(m+p−3, p−1).
pub fn harmonic_dim(p: usize, m: usize) -> u64 {
    let (p, m) = (p as i64, m as i64);
    binom(m + p - 1, p - 1) - binom(m + p - 3, p - 1)
}

/// All exponent vectors of total degree `m` in `n` variables, in descending lex order.
pub fn monomials(n: usize, m: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, m: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=m).rev() {
            prefix.push(k);
            rec(n, m - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, m, &mut Vec::with_capacity(n), &mut out);
    out
}

fn signs(p: usize, q: usize) -> Vec<i64> {
    (0..p + q).map(|j| if j < p { 1 } else { -1 }).collect()
}

/// Matrix of Δ_S from degree-m monomials to degree-(m−2) monomials.
fn laplacian_matrix(p: usize, q: usize, m: u32) -> (Vec<Vec<u32>>, Vec<Vec<QI>>) {
    let n = p + q;
    let src = monomials(n, m);
    if m < 2 {
        return (src, Vec::new());
    }
    let dst = monomials(n, m - 2);
    let index: BTreeMap<&Vec<u32>, usize> = dst.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut mat = vec![vec![QI::zero(); src.len()]; dst.len()];
    let sg = signs(p, q);
    for (c, e) in src.iter().enumerate() {
        for j in 0..n {
            if e[j] >= 2 {
                let mut t = e.clone();
                t[j] -= 2;
                let k = (e[j] * (e[j] - 1)) as i64 * sg[j];
                mat[index[&t]][c] = &mat[index[&t]][c] + &qi_int(k);
            }
        }
    }
    (src, mat)
}

/// Exact basis of the degree-m polynomials in p+q variables killed by
/// Δ_S = Σ_{j≤p}∂_j² − Σ_{j>p}∂_j².
pub fn harmonic_basis(p: usize, q: usize, m: u32) -> Vec<Polynomial> {
    let n = p + q;
    let (src, mat) = laplacian_matrix(p, q, m);
    let vecs: Vec<Vec<QI>> = if mat.is_empty() {
        (0..src.len())
            .map(|k| (0..src.len()).map(|i| if i == k { qi_int(1) } else { QI::zero() }).collect())
            .collect()
    } else {
        nullspace(&mat, src.len())
    };
    vecs.into_iter()
        .map(|v| {
            let mut poly = Polynomial::zero(n);
            for (e, c) in src.iter().zip(v) {
                poly.add_term(e.clone(), ExactScalar::from_qi(c));
            }
            poly
        })
        .collect()
}

/// Dimension of the harmonic space computed as a nullity, without any closed formula.
pub fn harmonic_nullity(p: usize, q: usize, m: u32) -> usize {
    harmonic_basis(p, q, m).len()
}

pub fn is_harmonic(poly: &Polynomial, p: usize, q: usize) -> bool {
    poly.laplacian(&signs(p, q)).is_zero()
}

fn homogeneous_parts(poly: &Polynomial) -> BTreeMap<u32, Polynomial> {
    let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (e, c) in poly.terms() {
        let d = e.iter().sum();
        parts.entry(d).or_insert_with(|| Polynomial::zero(poly.nvars())).add_term(e.clone(), c.clone());
    }
    parts
}

// Homogeneous case; components indexed by the power of S.
fn decompose_homogeneous(poly: &Polynomial, m: u32, p: usize, q: usize) -> BTreeMap<u32, Polynomial> {
    let n = (p + q) as i64;
    let mut out = BTreeMap::new();
    if poly.is_zero() {
        return out;
    }
    if m < 2 {
        out.insert(0, poly.clone());
        return out;
    }
    let s = Polynomial::sum_squares(p + q, 0..p, 1).add(&Polynomial::sum_squares(p + q, p..p + q, -1));
    let lap = poly.laplacian(&signs(p, q));
    let inner = decompose_homogeneous(&lap, m - 2, p, q);
    let mut h = poly.clone();
    for (i, d) in inner {
        // Δ(S^{i+1}R) = 4(i+1)(m−2−i+n/2)·S^i R for R harmonic of degree m−2−2i
        let denom = 2 * (i as i64 + 1) * (2 * m as i64 - 2 * i as i64 + n - 4);
        let r = d.scale(&ExactScalar::from_ratio(1, denom));
        h = h.sub(&s.pow(i + 1).mul(&r));
        out.insert(i + 1, r);
    }
    if !h.is_zero() {
        out.insert(0, h);
    }
    out
}

/// P = Σ_j S(x)ʲ·P_j with every P_j harmonic for Δ_S, S of signature (p, q).
/// Components are listed by descending j; zero components are omitted.
pub fn harmonic_decompose(poly: &Polynomial, p: usize, q: usize) -> Result<Vec<(u32, Polynomial)>> {
    if poly.nvars() != p + q {
        return Err(Error::Precondition(format!("polynomial has {} variables, form has {}", poly.nvars(), p + q)));
    }
    let mut acc: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (m, part) in homogeneous_parts(poly) {
        for (j, pj) in decompose_homogeneous(&part, m, p, q) {
            let e = acc.entry(j).or_insert_with(|| Polynomial::zero(p + q));
            *e = e.add(&pj);
        }
    }
    Ok(acc.into_iter().rev().filter(|(_, v)| !v.is_zero()).collect())
}

/// ⟨P, Q⟩ = (P(∂)Q̄)(0) = Σ_α p_α·conj(q_α)·α!.
pub fn harmonic_inner_product(a: &Polynomial, b: &Polynomial) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (e, c) in a.terms() {
        let d = b.coeff(e);
        if d.is_zero() {
            continue;
        }
        let fact: i64 = e.iter().map(|&k| (1..=k as i64).product::<i64>()).product();
        acc += &(c * &d.conj()).scale(&qi_int(fact));
    }
    acc
}

/// Result of splitting (x_j∂_y + y∂_{x_j})(h·y^{a−m}) into K-types on the cone y² = S₁.
#[derive(Debug, Clone)]
pub struct LadderSplit {
    /// Harmonic of degree m+1 multiplying y^{a−m−1}.
    pub t_plus: Polynomial,
    /// Harmonic of degree m−1 multiplying y^{a−m+1}.
    pub t_minus: Polynomial,
    /// Set when a prefactor vanished; the affected part is returned undivided.
    pub raw: bool,
}

/// Computes T⁺_j(h), T⁻_j(h) in
/// (x_j∂_y + y∂_{x_j})(h y^{a−m}) = (a−m)T⁺_j(h)y^{a−m−1} + (a+m+p−2)T⁻_j(h)y^{a−m+1}
/// where h is harmonic of degree m in p variables and S₁ is replaced by y².
pub fn ladder_split_q1(h: &Polynomial, j: usize, a: &Rational, m: u32) -> Result<LadderSplit> {
    let p = h.nvars();
    if j >= p {
        return Err(Error::Precondition(format!("index {j} out of range for {p} variables")));
    }
    if !h.is_zero() && (!h.is_homogeneous_of(m) || !is_harmonic(h, p, 0)) {
        return Err(Error::Precondition("h must be harmonic and homogeneous of degree m".into()));
    }
    // keyed by the y-exponent offset from a−m
    let mut by_y: BTreeMap<i64, Polynomial> = BTreeMap::new();
    let mut push = |off: i64, poly: &Polynomial, c: &Rational| -> Result<()> {
        for (i, pi) in harmonic_decompose(poly, p, 0)? {
            let e = by_y.entry(off + 2 * i as i64).or_insert_with(|| Polynomial::zero(p));
            *e = e.add(&pi.scale(&ExactScalar::from_rational(c.clone())));
        }
        Ok(())
    };
    let am = a - Rational::from_integer((m as i64).into());
    // x_j∂_y(h y^{a−m}) = (a−m)·x_j h·y^{a−m−1}
    push(-1, &h.mul_var(j, 1), &am)?;
    // y∂_{x_j}(h y^{a−m}) = ∂_j h·y^{a−m+1}
    push(1, &h.derivative(j), &Rational::one())?;
    if by_y.keys().any(|&k| k != -1 && k != 1) {
        return Err(Error::Domain("ladder split produced an unexpected K-type".into()));
    }
    let plus = by_y.remove(&-1).unwrap_or_else(|| Polynomial::zero(p));
    let minus = by_y.remove(&1).unwrap_or_else(|| Polynomial::zero(p));
    let cm = a + Rational::from_integer((m as i64 + p as i64 - 2).into());
    let mut raw = false;
    let div = |poly: Polynomial, c: &Rational, raw: &mut bool| {
        if c.is_zero() {
            *raw = true;
            poly
        } else {
            poly.scale(&ExactScalar::from_rational(c.recip()))
        }
    };
    let t_plus = div(plus, &am, &mut raw);
    let t_minus = div(minus, &cm, &mut raw);
    Ok(LadderSplit { t_plus, t_minus, raw })
}

/// Checks that T± agree for several values of a (exact equality).
pub fn ladder_a_independent(h: &Polynomial, j: usize, m: u32, values: &[Rational]) -> Result<bool> {
    let mut first: Option<LadderSplit> = None;
    for a in values {
        let s = ladder_split_q1(h, j, a, m)?;
        if s.raw {
            return Err(Error::Precondition(format!("a = {a} makes a prefactor vanish")));
        }
        match &first {
            None => first = Some(s),
            Some(f) => {
                if f.t_plus != s.t_plus || f.t_minus != s.t_minus {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Default sample of non-degenerate a-values for the independence check.
pub fn generic_a_values() -> Vec<Rational> {
    vec![rat(1, 3), rat(7, 2), rat(-5, 7)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, j: usize) -> Polynomial {
        Polynomial::var(n, j)
    }

    #[test]
    fn dimension_formula() {
        for m in 0..6 {
            assert_eq!(harmonic_dim(3, m), 2 * m as u64 + 1);
        }
        assert_eq!(harmonic_dim(1, 2), 0);
        assert_eq!(harmonic_dim(2, 0), 1);
        for m in 1..6 {
            assert_eq!(harmonic_dim(2, m), 2);
        }
        for p in 1..=4 {
            for m in 0..=6u32 {
                assert_eq!(harmonic_nullity(p, 0, m) as u64, harmonic_dim(p, m as usize), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn bases() {
        let b = harmonic_basis(2, 0, 1);
        assert_eq!(b.len(), 2);
        let b = harmonic_basis(2, 0, 2);
        assert_eq!(b.len(), 2);
        let target = x(2, 0).pow(2).sub(&x(2, 1).pow(2));
        let mixed = x(2, 0).mul(&x(2, 1));
        for t in [target, mixed] {
            assert!(is_harmonic(&t, 2, 0));
        }
        for k in 1..6 {
            let z = x(2, 0).add(&x(2, 1).scale(&ExactScalar::i())).pow(k);
            assert!(is_harmonic(&z, 2, 0));
        }
        // indefinite: x₁² + x₂² is harmonic for signature (1,1)
        assert!(is_harmonic(&x(2, 0).pow(2).add(&x(2, 1).pow(2)), 1, 1));
        assert_eq!(harmonic_nullity(1, 1, 2), 2);
    }

    #[test]
    fn decompositions() {
        let s = Polynomial::sum_squares(2, 0..2, 1);
        let d = harmonic_decompose(&s, 2, 0).unwrap();
        assert_eq!(d, vec![(1, Polynomial::one(2))]);
        let h = x(3, 0).mul(&x(3, 1));
        assert_eq!(harmonic_decompose(&h, 3, 0).unwrap(), vec![(0, h)]);
        let p = x(3, 0).pow(2);
        let d = harmonic_decompose(&p, 3, 0).unwrap();
        let s3 = Polynomial::sum_squares(3, 0..3, 1);
        assert_eq!(d[0], (1, Polynomial::constant(3, ExactScalar::from_ratio(1, 3))));
        assert_eq!(d[1], (0, p.sub(&s3.scale(&ExactScalar::from_ratio(1, 3)))));
    }

    #[test]
    fn inner_products() {
        assert!(harmonic_inner_product(&x(2, 0), &x(2, 0)).is_one());
        assert!(harmonic_inner_product(&x(2, 0), &x(2, 1)).is_zero());
        assert_eq!(harmonic_inner_product(&x(2, 0).pow(2), &x(2, 0).pow(2)), ExactScalar::from_int(2));
    }

    #[test]
    fn ladder() {
        let one = Polynomial::one(3);
        let s = ladder_split_q1(&one, 0, &rat(5, 2), 0).unwrap();
        assert_eq!(s.t_plus, x(3, 0));
        assert!(s.t_minus.is_zero());
        for p in [2usize, 3] {
            for m in 0..=3u32 {
                for h in harmonic_basis(p, 0, m) {
                    for j in 0..p {
                        assert!(ladder_a_independent(&h, j, m, &generic_a_values()).unwrap());
                        let s = ladder_split_q1(&h, j, &rat(1, 3), m).unwrap();
                        assert!(s.t_plus.is_homogeneous_of(m + 1));
                        assert!(s.t_minus.is_zero() || s.t_minus.is_homogeneous_of(m - 1));
                    }
                }
            }
        }
        let h = x(2, 0);
        assert!(ladder_split_q1(&h, 0, &rat(1, 1), 1).unwrap().raw);
    }
}
