//! Expression trees in the group coordinates (x, y, θ, p, q, κ) of the Jacobi
//! group, with symbolic differentiation and numerical evaluation. Used to check
//! the left-invariant operators on Φ₀ and on lifted functions.

use std::f64::consts::PI;
use std::fmt;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::C64;
use crate::report::{IdentityCheck, SuiteReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X = 0,
    Y = 1,
    Theta = 2,
    P = 3,
    Q = 4,
    Kappa = 5,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = ["x", "y", "θ", "p", "q", "κ"][*self as usize];
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Const(C64),
    Var(Var),
    Add(Expr, Expr),
    Mul(Expr, Expr),
    /// Power with a real (rational) exponent, principal branch.
    Pow(Expr, f64),
    Exp(Expr),
}

/// Immutable expression with shared subtrees.
#[derive(Debug, Clone)]
pub struct Expr(Rc<Node>);

impl Expr {
    pub fn c(z: C64) -> Expr {
        Expr(Rc::new(Node::Const(z)))
    }

    pub fn real(r: f64) -> Expr {
        Expr::c(C64::new(r, 0.0))
    }

    pub fn i() -> Expr {
        Expr::c(C64::new(0.0, 1.0))
    }

    pub fn var(v: Var) -> Expr {
        Expr(Rc::new(Node::Var(v)))
    }

    fn as_const(&self) -> Option<C64> {
        match &*self.0 {
            Node::Const(z) => Some(*z),
            _ => None,
        }
    }

    pub fn add(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::c(a + b),
            (Some(a), _) if a == C64::new(0.0, 0.0) => o.clone(),
            (_, Some(b)) if b == C64::new(0.0, 0.0) => self.clone(),
            _ => Expr(Rc::new(Node::Add(self.clone(), o.clone()))),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::c(a * b),
            (Some(a), _) | (_, Some(a)) if a == zero => Expr::c(zero),
            (Some(a), _) if a == one => o.clone(),
            (_, Some(b)) if b == one => self.clone(),
            _ => Expr(Rc::new(Node::Mul(self.clone(), o.clone()))),
        }
    }

    pub fn scale(&self, z: C64) -> Expr {
        Expr::c(z).mul(self)
    }

    pub fn pow(&self, r: f64) -> Expr {
        if r == 0.0 {
            return Expr::real(1.0);
        }
        if r == 1.0 {
            return self.clone();
        }
        Expr(Rc::new(Node::Pow(self.clone(), r)))
    }

    pub fn exp(&self) -> Expr {
        Expr(Rc::new(Node::Exp(self.clone())))
    }

    pub fn diff(&self, v: Var) -> Expr {
        match &*self.0 {
            Node::Const(_) => Expr::real(0.0),
            Node::Var(w) => Expr::real(if *w == v { 1.0 } else { 0.0 }),
            Node::Add(a, b) => a.diff(v).add(&b.diff(v)),
            Node::Mul(a, b) => a.diff(v).mul(b).add(&a.mul(&b.diff(v))),
            Node::Pow(a, r) => a.pow(r - 1.0).mul(&a.diff(v)).scale(C64::new(*r, 0.0)),
            Node::Exp(a) => self.mul(&a.diff(v)),
        }
    }

    /// Value at a point `pt` indexed by `Var`.
    pub fn eval(&self, pt: &[f64; 6]) -> C64 {
        match &*self.0 {
            Node::Const(z) => *z,
            Node::Var(w) => C64::new(pt[*w as usize], 0.0),
            Node::Add(a, b) => a.eval(pt) + b.eval(pt),
            Node::Mul(a, b) => a.eval(pt) * b.eval(pt),
            Node::Pow(a, r) => {
                let z = a.eval(pt);
                if z.im == 0.0 && z.re > 0.0 {
                    C64::new(z.re.powf(*r), 0.0)
                } else {
                    z.powf(*r)
                }
            }
            Node::Exp(a) => a.eval(pt).exp(),
        }
    }
}

fn cst(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn x() -> Expr {
    Expr::var(Var::X)
}
fn y() -> Expr {
    Expr::var(Var::Y)
}

/// e^{i·k·θ}.
fn e_theta(k: f64) -> Expr {
    Expr::var(Var::Theta).scale(cst(0.0, k)).exp()
}

/// x + s·iy.
fn tau_s(s: f64) -> Expr {
    x().add(&y().scale(cst(0.0, s)))
}

/// Left-invariant operators on functions of (x, y, θ, p, q, κ).
pub mod ops {
    use super::*;

    pub fn l_z(f: &Expr) -> Expr {
        f.diff(Var::Theta).scale(cst(0.0, -1.0))
    }

    /// ℒ_{X±} = ±(i/2)e^{±2iθ}(2y(∂_x ∓ i∂_y) − ∂_θ).
    pub fn l_x(sign: f64, f: &Expr) -> Expr {
        let inner = f.diff(Var::X).add(&f.diff(Var::Y).scale(cst(0.0, -sign)));
        let body = y().mul(&inner).scale(cst(2.0, 0.0)).sub(&f.diff(Var::Theta));
        e_theta(2.0 * sign).mul(&body).scale(cst(0.0, sign * 0.5))
    }

    /// ℒ_{Z₀} = −i∂_κ; acting on index-m functions with eigenvalue 2πm.
    pub fn l_z0(f: &Expr) -> Expr {
        f.diff(Var::Kappa).scale(cst(0.0, -1.0))
    }

    /// ℒ_{Y±} = (1/2)y^{−1/2}e^{±iθ}(∂_p − (x ∓ iy)∂_q − (p(x ∓ iy) + q)∂_κ).
    pub fn l_y(sign: f64, f: &Expr) -> Expr {
        l_y_with(sign, -sign, -sign, f)
    }

    /// ℒ_{Y±} with independent signs s_q, s_κ in (x + s_q·iy)∂_q and (p(x + s_κ·iy) + q)∂_κ.
    pub fn l_y_with(sign: f64, s_q: f64, s_k: f64, f: &Expr) -> Expr {
        let p = Expr::var(Var::P);
        let q = Expr::var(Var::Q);
        let body = f
            .diff(Var::P)
            .sub(&tau_s(s_q).mul(&f.diff(Var::Q)))
            .sub(&p.mul(&tau_s(s_k)).add(&q).mul(&f.diff(Var::Kappa)));
        y().pow(-0.5).mul(&e_theta(sign)).mul(&body).scale(cst(0.5, 0.0))
    }
}

/// Φ₀ = y^{1/4}e^{iθ/2}e^{πi(κ + p(pτ + q))}, τ = x + iy.
pub fn phi0() -> Expr {
    let p = Expr::var(Var::P);
    let q = Expr::var(Var::Q);
    let arg = Expr::var(Var::Kappa).add(&p.mul(&p.mul(&tau_s(1.0)).add(&q)));
    y().pow(0.25).mul(&e_theta(0.5)).mul(&arg.scale(cst(0.0, PI)).exp())
}

/// Lift Φ_f(n(x)t(y)r(θ)) = y^{k/2}e^{ikθ}f(x + iy) of a function on ℍ given as an expression in x, y.
pub fn lift(f: &Expr, k: f64) -> Expr {
    y().pow(k / 2.0).mul(&e_theta(k)).mul(f)
}

fn sample_points(n: usize, seed: u64) -> Vec<[f64; 6]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.3..2.5),
                rng.gen_range(0.0..2.0 * PI),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect()
}

/// max over the points of |lhs − rhs| / max(1, |rhs|, |scale|).
fn residual(lhs: &Expr, rhs: &Expr, scale: &Expr, pts: &[[f64; 6]]) -> f64 {
    pts.iter()
        .map(|pt| {
            let r = rhs.eval(pt);
            (lhs.eval(pt) - r).norm() / 1f64.max(r.norm()).max(scale.eval(pt).norm())
        })
        .fold(0.0, f64::max)
}

/// Applies the group-coordinate operators to Φ₀ and to lifted functions and
/// compares with the expected eigen/annihilation relations at seeded random points.
pub fn verify_group_operator_relations(samples: usize, tol: f64, seed: u64) -> SuiteReport {
    let pts = sample_points(samples.max(1), seed);
    let phi = phi0();
    let zero = Expr::real(0.0);
    let half = |e: &Expr| e.scale(cst(0.5, 0.0));
    let mut checks = Vec::new();

    // As printed ℒ_{Z₀} = i∂_κ with ℒ_{Z₀}Φ₀ = (1/2)Φ₀; Φ₀ has index m = 1/2.
    let lit = residual(&Expr::i().mul(&phi.diff(Var::Kappa)), &half(&phi), &phi, &pts);
    checks.push(
        IdentityCheck::erratum("L_Z0 Phi0 = (1/2) Phi0 with L_Z0 = i d/dkappa as printed", lit < tol, "sign and normalization: -i d/dkappa has eigenvalue 2 pi m = pi with the index m = 1/2")
            .with_residual(lit),
    );
    let r = residual(&ops::l_z0(&phi), &phi.scale(cst(PI, 0.0)), &phi, &pts);
    checks.push(IdentityCheck::numeric("L_Z0 Phi0 = 2 pi m Phi0, m = 1/2", r, tol));
    let r = residual(&ops::l_z0(&phi).scale(cst(1.0 / (2.0 * PI), 0.0)), &half(&phi), &phi, &pts);
    checks.push(IdentityCheck::numeric("(1/2pi) L_Z0 Phi0 = (1/2) Phi0", r, tol));

    let r = residual(&ops::l_z(&phi), &half(&phi), &phi, &pts);
    checks.push(IdentityCheck::numeric("L_Z Phi0 = (1/2) Phi0", r, tol));
    let r = residual(&ops::l_x(-1.0, &phi), &zero, &phi, &pts);
    checks.push(IdentityCheck::numeric("L_X- Phi0 = 0", r, tol));

    // The printed ℒ_{Y−} carries (x − iy)∂_q together with p(x + iy)∂_κ.
    let lit_printed = residual(&ops::l_y_with(-1.0, -1.0, 1.0, &phi), &zero, &phi, &pts);
    checks.push(
        IdentityCheck::erratum("L_Y- Phi0 = 0 with L_Y- as printed", lit_printed < tol, "the signs of iy in the d/dq and d/dkappa terms must both match tau = x + iy")
            .with_residual(lit_printed),
    );
    let r = residual(&ops::l_y(-1.0, &phi), &zero, &phi, &pts);
    checks.push(IdentityCheck::numeric("L_Y- Phi0 = 0 (corrected operator)", r, tol));

    // Relations among the realized operators on a generic test function.
    let g = x().mul(&y().pow(1.5)).add(&Expr::var(Var::Theta).scale(cst(0.3, 0.1)).exp().mul(&x().add(&y().pow(2.0))));
    let r = residual(
        &ops::l_z(&ops::l_x(1.0, &g)).sub(&ops::l_x(1.0, &ops::l_z(&g))),
        &ops::l_x(1.0, &g).scale(cst(2.0, 0.0)),
        &g,
        &pts,
    );
    checks.push(IdentityCheck::numeric("[L_Z, L_X+] = 2 L_X+ on a test function", r, tol));
    let r = residual(
        &ops::l_x(1.0, &ops::l_x(-1.0, &g)).sub(&ops::l_x(-1.0, &ops::l_x(1.0, &g))),
        &ops::l_z(&g),
        &g,
        &pts,
    );
    checks.push(IdentityCheck::numeric("[L_X+, L_X-] = L_Z on a test function", r, tol));

    // Holomorphy criterion for lifts of weight k = 2.
    let f_hol = tau_s(1.0);
    let lifted = lift(&f_hol, 2.0);
    let r = residual(&ops::l_x(-1.0, &lifted), &zero, &lifted, &pts);
    checks.push(IdentityCheck::numeric("L_X- Phi_f = 0 for f(tau) = tau, k = 2", r, tol));
    let r = residual(&ops::l_z(&lifted), &lifted.scale(cst(2.0, 0.0)), &lifted, &pts);
    checks.push(IdentityCheck::numeric("L_Z Phi_f = k Phi_f for f(tau) = tau, k = 2", r, tol));
    let f_anti = tau_s(-1.0);
    let lifted = lift(&f_anti, 2.0);
    let r = residual(&ops::l_x(-1.0, &lifted), &zero, &lifted, &pts);
    checks.push(IdentityCheck {
        id: "L_X- Phi_f != 0 for f(tau) = conj(tau), k = 2".into(),
        status: if r > tol { crate::report::Status::Pass } else { crate::report::Status::Fail },
        residual: Some(r),
        witness: None,
        note: Some("non-holomorphic control: a large residual is the expected outcome".into()),
    });
    SuiteReport::new("group-operators", checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives() {
        let e = x().mul(&y().pow(0.5)).add(&x().scale(cst(0.0, 2.0)).exp());
        let pt = [0.3, 1.7, 0.0, 0.0, 0.0, 0.0];
        let dx = e.diff(Var::X).eval(&pt);
        let h = 1e-6;
        let num = (e.eval(&[0.3 + h, 1.7, 0.0, 0.0, 0.0, 0.0]) - e.eval(&[0.3 - h, 1.7, 0.0, 0.0, 0.0, 0.0])) / (2.0 * h);
        assert!((dx - num).norm() < 1e-8);
        let dy = e.diff(Var::Y).eval(&pt);
        assert!((dy - C64::new(0.3 * 0.5 / 1.7f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn suite_passes() {
        let r = verify_group_operator_relations(10, 1e-10, 3);
        for c in &r.checks {
            assert!(c.passed(), "{} residual {:?}", c.id, c.residual);
        }
        assert_eq!(r.checks.iter().filter(|c| c.status == crate::report::Status::Erratum).count(), 2);
    }
}
