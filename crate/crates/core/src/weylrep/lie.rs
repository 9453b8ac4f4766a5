//! Lie algebras with a matrix model (for structure constants) and a Weyl-algebra
//! realization (the infinitesimal Weil representation).
//!
//! Generator names:
//! - `sp(n)`: `A_jk`, `U+_jk`, `U-_jk` (basis), `Uc+_jk`, `Uc-_jk` for Ǔ±, `H_j`.
//! - `sl2(p,q)`: `F`, `G`, `H` (basis), `Z`, `X+`, `X-`.
//! - `o(p,q)`: `Y_ab` with a < b.
//! - `o21`: `H`, `Y1`, `Y2` (basis), `H0`, `Y+`, `Y-`.
//! - `jacobi`: `X`, `Y`, `Z`, `P`, `Q`, `R` (basis), `Z1`, `Z0`, `X+`, `X-`, `Y+`, `Y-`.
//!
//! Indices are 1-based single digits.

use std::fmt;

use num_traits::Zero;

use super::linalg::{solve, ColumnSolver};
use super::operator::WeylOperator;
use super::scalar::{qi, qi_i, qi_int, rat, ExactScalar, Rational, QI};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Algebra {
    Sp { n: usize },
    Sl2Embedded { p: usize, q: usize },
    Opq { p: usize, q: usize },
    O21Example,
    /// Jacobi algebra realized with index m (m = 1/2 gives the Schrödinger–Weil case).
    Jacobi { m: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    pub algebra: Algebra,
    pub name: String,
}

impl LieElement {
    pub fn new(algebra: Algebra, name: &str) -> Self {
        LieElement { algebra, name: name.to_string() }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Sp { n } => write!(f, "sp({n})"),
            Algebra::Sl2Embedded { p, q } => write!(f, "sl2({p},{q})"),
            Algebra::Opq { p, q } => write!(f, "o({p},{q})"),
            Algebra::O21Example => write!(f, "o21"),
            Algebra::Jacobi { m } => write!(f, "jacobi(m={m})"),
        }
    }
}

type Mat = Vec<Vec<QI>>;

fn zeros(d: usize) -> Mat {
    vec![vec![QI::zero(); d]; d]
}

fn e(d: usize, i: usize, j: usize) -> Mat {
    let mut m = zeros(d);
    m[i][j] = qi_int(1);
    m
}

fn madd(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

fn mscale(a: &Mat, c: &QI) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

fn mmul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut r = zeros(d);
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                r[i][j] = &r[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    r
}

fn mcomm(a: &Mat, b: &Mat) -> Mat {
    madd(&mmul(a, b), &mscale(&mmul(b, a), &qi_int(-1)))
}

fn flatten(m: &Mat) -> Vec<QI> {
    m.iter().flatten().cloned().collect()
}

fn pi_scalar(c: QI, k: i32) -> ExactScalar {
    ExactScalar::monomial(c, k)
}

fn half() -> QI {
    qi(rat(1, 2), Rational::zero())
}

fn unknown(alg: &Algebra, name: &str) -> Error {
    Error::Domain(format!("unknown generator {name} for {alg}"))
}

fn parse_indices(s: &str, count: usize, n: usize) -> Option<Vec<usize>> {
    let digits: Vec<usize> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?;
    (digits.len() == count && digits.iter().all(|&d| d >= 1 && d <= n)).then(|| digits.iter().map(|d| d - 1).collect())
}

impl Algebra {
    /// Number of variables of the Weyl realization.
    pub fn nvars(&self) -> usize {
        match self {
            Algebra::Sp { n } => *n,
            Algebra::Sl2Embedded { p, q } | Algebra::Opq { p, q } => p + q,
            Algebra::O21Example => 3,
            Algebra::Jacobi { .. } => 1,
        }
    }

    fn signs(&self) -> Vec<i64> {
        match self {
            Algebra::Sl2Embedded { p, q } | Algebra::Opq { p, q } => (0..p + q).map(|j| if j < *p { 1 } else { -1 }).collect(),
            Algebra::O21Example => vec![1, 1, -1],
            _ => vec![1; self.nvars()],
        }
    }

    pub fn basis_names(&self) -> Vec<String> {
        match self {
            Algebra::Sp { n } => {
                let mut v = Vec::new();
                for j in 1..=*n {
                    for k in 1..=*n {
                        v.push(format!("A_{j}{k}"));
                    }
                }
                for s in ["+", "-"] {
                    for j in 1..=*n {
                        for k in j..=*n {
                            v.push(format!("U{s}_{j}{k}"));
                        }
                    }
                }
                v
            }
            Algebra::Sl2Embedded { .. } => vec!["F".into(), "G".into(), "H".into()],
            Algebra::Opq { p, q } => {
                let n = p + q;
                let mut v = Vec::new();
                for a in 1..=n {
                    for b in a + 1..=n {
                        v.push(format!("Y_{a}{b}"));
                    }
                }
                v
            }
            Algebra::O21Example => vec!["H".into(), "Y1".into(), "Y2".into()],
            Algebra::Jacobi { .. } => ["X", "Y", "Z", "P", "Q", "R"].iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Named elements beyond the basis (complexified combinations).
    pub fn derived_names(&self) -> Vec<String> {
        match self {
            Algebra::Sp { n } => {
                let mut v = Vec::new();
                for j in 1..=*n {
                    v.push(format!("H_{j}"));
                }
                for s in ["+", "-"] {
                    for j in 1..=*n {
                        for k in j..=*n {
                            v.push(format!("Uc{s}_{j}{k}"));
                        }
                    }
                }
                v
            }
            Algebra::Sl2Embedded { .. } => vec!["Z".into(), "X+".into(), "X-".into()],
            Algebra::Opq { .. } => vec![],
            Algebra::O21Example => vec!["H0".into(), "Y+".into(), "Y-".into()],
            Algebra::Jacobi { .. } => ["Z1", "Z0", "X+", "X-", "Y+", "Y-"].iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_names().len()
    }

    fn unit(&self, name: &str) -> Result<Vec<QI>> {
        let names = self.basis_names();
        let k = names.iter().position(|n| n == name).ok_or_else(|| unknown(self, name))?;
        let mut v = vec![QI::zero(); names.len()];
        v[k] = qi_int(1);
        Ok(v)
    }

    /// Coordinates of a named generator in the basis.
    pub fn coords(&self, name: &str) -> Result<Vec<QI>> {
        if let Ok(v) = self.unit(name) {
            return Ok(v);
        }
        let lin = |terms: &[(QI, Vec<QI>)]| -> Vec<QI> {
            let d = self.dim();
            let mut out = vec![QI::zero(); d];
            for (c, v) in terms {
                for k in 0..d {
                    out[k] = &out[k] + &(c * &v[k]);
                }
            }
            out
        };
        let i = qi_i();
        let one = qi_int(1);
        match self {
            Algebra::Sp { n } => {
                if let Some(rest) = name.strip_prefix("H_") {
                    let j = parse_indices(rest, 1, *n).ok_or_else(|| unknown(self, name))?[0] + 1;
                    let up = self.sp_u("+", j, j)?;
                    let dn = self.sp_u("-", j, j)?;
                    return Ok(lin(&[(-i.clone(), up), (i, dn)]));
                }
                for (prefix, sign) in [("Uc+_", 1i64), ("Uc-_", -1i64)] {
                    if let Some(rest) = name.strip_prefix(prefix) {
                        let ix = parse_indices(rest, 2, *n).ok_or_else(|| unknown(self, name))?;
                        let (j, k) = (ix[0] + 1, ix[1] + 1);
                        let ajk = self.unit(&format!("A_{j}{k}"))?;
                        let akj = self.unit(&format!("A_{k}{j}"))?;
                        let div = if j == k { qi(rat(1, 2), Rational::zero()) } else { one.clone() };
                        let ci = &(&i * &qi_int(-sign)) * &div;
                        let up = self.sp_u("+", j, k)?;
                        let dn = self.sp_u("-", j, k)?;
                        let h = half();
                        return Ok(lin(&[
                            (&h * &ci, ajk),
                            (&h * &ci, akj),
                            (h.clone(), up),
                            (h, dn),
                        ]));
                    }
                }
                for s in ["+", "-"] {
                    if let Some(rest) = name.strip_prefix(&format!("U{s}_")) {
                        let ix = parse_indices(rest, 2, *n).ok_or_else(|| unknown(self, name))?;
                        return self.sp_u(s, ix[0] + 1, ix[1] + 1);
                    }
                }
                Err(unknown(self, name))
            }
            Algebra::Sl2Embedded { .. } => {
                let (f, g, h) = (self.unit("F")?, self.unit("G")?, self.unit("H")?);
                match name {
                    "Z" => Ok(lin(&[(-i.clone(), f), (i, g)])),
                    "X+" | "X-" => {
                        let s = if name == "X+" { one.clone() } else { -one.clone() };
                        let ci = &(&i * &s) * &half();
                        Ok(lin(&[(half(), h), (ci.clone(), f), (ci, g)]))
                    }
                    _ => Err(unknown(self, name)),
                }
            }
            Algebra::Opq { .. } => Err(unknown(self, name)),
            Algebra::O21Example => {
                let (h, y1, y2) = (self.unit("H")?, self.unit("Y1")?, self.unit("Y2")?);
                match name {
                    "H0" => Ok(lin(&[(qi(Rational::zero(), rat(-2, 1)), h)])),
                    "Y+" => Ok(lin(&[(one, y1), (i, y2)])),
                    "Y-" => Ok(lin(&[(one, y1), (-i, y2)])),
                    _ => Err(unknown(self, name)),
                }
            }
            Algebra::Jacobi { .. } => {
                let u = |s: &str| self.unit(s);
                match name {
                    "Z1" => Ok(lin(&[(-i.clone(), u("Y")?), (i, u("Z")?)])),
                    "Z0" => Ok(lin(&[(-i, u("R")?)])),
                    "X+" | "X-" => {
                        let s = if name == "X+" { one } else { -one };
                        let ci = &(&i * &s) * &half();
                        Ok(lin(&[(half(), u("X")?), (ci.clone(), u("Y")?), (ci, u("Z")?)]))
                    }
                    "Y+" | "Y-" => {
                        let s = if name == "Y+" { one } else { -one };
                        let ci = &(&i * &s) * &half();
                        Ok(lin(&[(half(), u("P")?), (ci, u("Q")?)]))
                    }
                    _ => Err(unknown(self, name)),
                }
            }
        }
    }

    fn sp_u(&self, s: &str, j: usize, k: usize) -> Result<Vec<QI>> {
        let (a, b) = if j <= k { (j, k) } else { (k, j) };
        self.unit(&format!("U{s}_{a}{b}"))
    }

    /// Matrix model of the k-th basis element.
    pub fn basis_matrix(&self, k: usize) -> Mat {
        let name = &self.basis_names()[k];
        match self {
            Algebra::Sp { n } => {
                let n = *n;
                let d = 2 * n;
                let idx = |s: &str| -> Vec<usize> { s.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect() };
                if let Some(r) = name.strip_prefix("A_") {
                    let ix = idx(r);
                    madd(&e(d, ix[0], ix[1]), &mscale(&e(d, n + ix[1], n + ix[0]), &qi_int(-1)))
                } else {
                    let upper = name.starts_with("U+");
                    let ix = idx(&name[3..]);
                    let (r0, c0) = if upper { (0, n) } else { (n, 0) };
                    if ix[0] == ix[1] {
                        e(d, r0 + ix[0], c0 + ix[0])
                    } else {
                        madd(&e(d, r0 + ix[0], c0 + ix[1]), &e(d, r0 + ix[1], c0 + ix[0]))
                    }
                }
            }
            Algebra::Sl2Embedded { .. } => match name.as_str() {
                "F" => e(2, 0, 1),
                "G" => e(2, 1, 0),
                _ => madd(&e(2, 0, 0), &mscale(&e(2, 1, 1), &qi_int(-1))),
            },
            Algebra::Opq { p, q } => {
                let n = p + q;
                let ix: Vec<usize> = name[2..].chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
                let (a, b) = (ix[0], ix[1]);
                if (a < *p) == (b < *p) {
                    madd(&e(n, a, b), &mscale(&e(n, b, a), &qi_int(-1)))
                } else {
                    mscale(&madd(&e(n, a, b), &e(n, b, a)), &qi_int(-1))
                }
            }
            Algebra::O21Example => match name.as_str() {
                "H" => madd(&e(3, 0, 1), &mscale(&e(3, 1, 0), &qi_int(-1))),
                "Y1" => madd(&e(3, 0, 2), &e(3, 2, 0)),
                _ => madd(&e(3, 1, 2), &e(3, 2, 1)),
            },
            Algebra::Jacobi { .. } => match name.as_str() {
                "X" => madd(&e(4, 0, 0), &mscale(&e(4, 2, 2), &qi_int(-1))),
                "Y" => e(4, 0, 2),
                "Z" => e(4, 2, 0),
                "P" => madd(&e(4, 1, 0), &mscale(&e(4, 2, 3), &qi_int(-1))),
                "Q" => madd(&e(4, 0, 3), &e(4, 1, 2)),
                _ => e(4, 1, 3),
            },
        }
    }

    /// Weyl realization of the k-th basis element.
    pub fn basis_weyl(&self, k: usize) -> WeylOperator {
        let name = self.basis_names()[k].clone();
        let nv = self.nvars();
        let x = |j: usize| WeylOperator::x(nv, j);
        let d = |j: usize| WeylOperator::d(nv, j);
        let sc = |c: ExactScalar| WeylOperator::scalar(nv, c);
        match self {
            Algebra::Sp { .. } => {
                let ix: Vec<usize> = name.chars().filter_map(|c| c.to_digit(10)).map(|v| v as usize - 1).collect();
                let (j, k) = (ix[0], ix[1]);
                if name.starts_with("A_") {
                    let mut w = x(j).compose(&d(k));
                    if j == k {
                        w = w.add(&sc(ExactScalar::from_ratio(1, 2)));
                    }
                    w
                } else if name.starts_with("U+") {
                    let c = if j == k { qi_i() } else { qi(Rational::zero(), rat(2, 1)) };
                    x(j).compose(&x(k)).scale(&pi_scalar(c, 1))
                } else {
                    // −1/(4πi) = i/(4π); −1/(2πi) = i/(2π)
                    let c = if j == k { qi(Rational::zero(), rat(1, 4)) } else { qi(Rational::zero(), rat(1, 2)) };
                    d(j).compose(&d(k)).scale(&pi_scalar(c, -1))
                }
            }
            Algebra::Sl2Embedded { .. } => {
                let signs = self.signs();
                match name.as_str() {
                    "F" => {
                        let mut w = WeylOperator::zero(nv);
                        for (j, s) in signs.iter().enumerate() {
                            w = w.add(&x(j).compose(&x(j)).scale(&pi_scalar(qi(Rational::zero(), rat(*s, 1)), 1)));
                        }
                        w
                    }
                    "G" => WeylOperator::laplacian(&signs).scale(&pi_scalar(qi(Rational::zero(), rat(1, 4)), -1)),
                    _ => WeylOperator::euler(nv).add(&sc(ExactScalar::from_ratio(nv as i64, 2))),
                }
            }
            Algebra::Opq { .. } | Algebra::O21Example => {
                let m = self.basis_matrix(k);
                let mut w = WeylOperator::zero(nv);
                for i in 0..nv {
                    for j in 0..nv {
                        if !m[j][i].is_zero() {
                            w = w.add(&x(i).compose(&d(j)).scale(&ExactScalar::from_qi(-m[j][i].clone())));
                        }
                    }
                }
                w
            }
            Algebra::Jacobi { m } => {
                let tpim = |c: Rational| pi_scalar(qi(Rational::zero(), c * m), 1);
                match name.as_str() {
                    "X" => x(0).compose(&d(0)).add(&sc(ExactScalar::from_ratio(1, 2))),
                    "Y" => x(0).compose(&x(0)).scale(&tpim(rat(2, 1))),
                    // −1/(8πim) = i/(8πm)
                    "Z" => d(0).compose(&d(0)).scale(&pi_scalar(qi(Rational::zero(), rat(1, 8) / m), -1)),
                    "P" => d(0),
                    "Q" => x(0).scale(&tpim(rat(4, 1))),
                    _ => sc(tpim(rat(2, 1))),
                }
            }
        }
    }

    pub fn weyl_of(&self, coords: &[QI]) -> WeylOperator {
        let mut w = WeylOperator::zero(self.nvars());
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                w = w.add(&self.basis_weyl(k).scale(&ExactScalar::from_qi(c.clone())));
            }
        }
        w
    }

    pub fn matrix_of(&self, coords: &[QI]) -> Mat {
        let d = self.basis_matrix(0).len();
        let mut m = zeros(d);
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m = madd(&m, &mscale(&self.basis_matrix(k), c));
            }
        }
        m
    }

    /// Abstract bracket, computed in the matrix model and expressed in the basis.
    pub fn bracket(&self, u: &[QI], v: &[QI]) -> Result<Vec<QI>> {
        let c = mcomm(&self.matrix_of(u), &self.matrix_of(v));
        let cols: Vec<Vec<QI>> = (0..self.dim()).map(|k| flatten(&self.basis_matrix(k))).collect();
        solve(&cols, &flatten(&c)).ok_or_else(|| Error::Domain(format!("bracket leaves the span of the {self} basis")))
    }

    /// Structure constants c_{ij}^k with [e_i, e_j] = Σ_k c_{ij}^k e_k.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<QI>>>> {
        let d = self.dim();
        let units: Vec<Vec<QI>> = (0..d)
            .map(|k| {
                let mut v = vec![QI::zero(); d];
                v[k] = qi_int(1);
                v
            })
            .collect();
        let cols: Vec<Vec<QI>> = (0..d).map(|k| flatten(&self.basis_matrix(k))).collect();
        let solver = ColumnSolver::new(&cols);
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let c = mcomm(&self.matrix_of(&units[i]), &self.matrix_of(&units[j]));
                        solver.solve(&flatten(&c)).ok_or_else(|| Error::Domain(format!("bracket leaves the span of the {self} basis")))
                    })
                    .collect()
            })
            .collect()
    }
}

/// The Weyl-algebra operator of a named generator.
pub fn lie_generator(elem: &LieElement) -> Result<WeylOperator> {
    let c = elem.algebra.coords(&elem.name)?;
    Ok(elem.algebra.weyl_of(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(alg: &Algebra, name: &str) -> WeylOperator {
        lie_generator(&LieElement::new(alg.clone(), name)).unwrap()
    }

    #[test]
    fn table_examples() {
        let sp = Algebra::Sp { n: 2 };
        let a11 = gen(&sp, "A_11");
        let expected = WeylOperator::x(2, 0).compose(&WeylOperator::d(2, 0)).add(&WeylOperator::scalar(2, ExactScalar::from_ratio(1, 2)));
        assert_eq!(a11, expected);
        let um = gen(&sp, "U-_11");
        let dd = WeylOperator::d(2, 0).compose(&WeylOperator::d(2, 0));
        assert_eq!(um, dd.scale(&ExactScalar::monomial(qi(Rational::zero(), rat(1, 4)), -1)));
        let o21 = Algebra::O21Example;
        let h0 = gen(&o21, "H0");
        let rot = WeylOperator::x(3, 0).compose(&WeylOperator::d(3, 1)).sub(&WeylOperator::x(3, 1).compose(&WeylOperator::d(3, 0)));
        assert_eq!(h0, rot.scale(&ExactScalar::from_qi(qi(Rational::zero(), rat(-2, 1)))));
        assert!(gen(&sp, "U+_21") == gen(&sp, "U+_12"));
        assert!(lie_generator(&LieElement::new(sp, "B_11")).is_err());
    }

    #[test]
    fn realizations_are_homomorphisms() {
        for alg in [
            Algebra::Sp { n: 2 },
            Algebra::Sl2Embedded { p: 2, q: 1 },
            Algebra::Opq { p: 2, q: 2 },
            Algebra::O21Example,
            Algebra::Jacobi { m: rat(1, 2) },
        ] {
            let d = alg.dim();
            let sc = alg.structure_constants().unwrap();
            for i in 0..d {
                for j in 0..d {
                    let lhs = alg.basis_weyl(i).commutator(&alg.basis_weyl(j));
                    assert_eq!(lhs, alg.weyl_of(&sc[i][j]), "{alg} [{i},{j}]");
                }
            }
        }
    }
}
