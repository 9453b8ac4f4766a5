//! Riemann and Jacobi theta series, characteristics, θ^S and character twists.
//!
//! Everything is normalised as Σ e^{πi(ᵗℓτℓ + 2ᵗℓz)}; series written with e^{2πi…}
//! are evaluated by doubling τ at the call site.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::numerics::{gaussian_lattice_sum, min_eigenvalue, SeriesResult, TruncationSpec, Weight, C64};
#[cfg(test)]
use crate::numerics::I;

/// Complex symmetric matrix with positive-definite imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint {
    tau: DMatrix<C64>,
}

impl SiegelPoint {
    pub fn new(tau: DMatrix<C64>) -> Result<Self> {
        if !tau.is_square() || tau.nrows() == 0 {
            return domain("tau must be a nonempty square matrix");
        }
        let n = tau.nrows();
        for i in 0..n {
            for j in 0..i {
                if (tau[(i, j)] - tau[(j, i)]).norm() > 1e-12 * (1.0 + tau[(i, j)].norm()) {
                    return domain("tau is not symmetric");
                }
            }
        }
        if tau.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return domain("tau has non-finite entries");
        }
        let im = tau.map(|c| c.im);
        if !(min_eigenvalue(&im) > 0.0) {
            return domain("imaginary part of tau is not positive definite");
        }
        Ok(SiegelPoint { tau })
    }

    pub fn scalar(tau: C64) -> Result<Self> {
        SiegelPoint::new(DMatrix::from_element(1, 1, tau))
    }

    pub fn diagonal(entries: &[C64]) -> Result<Self> {
        let n = entries.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = *e;
        }
        SiegelPoint::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.tau.nrows()
    }
}

/// A point (τ, z) of ℍₙ × ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiArgument {
    pub tau: SiegelPoint,
    pub z: Vec<C64>,
}

impl JacobiArgument {
    pub fn new(tau: SiegelPoint, z: Vec<C64>) -> Result<Self> {
        if z.len() != tau.dim() {
            return domain("z has the wrong length");
        }
        Ok(JacobiArgument { tau, z })
    }
}

/// Scalar characteristic [a, b].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Characteristic {
    pub a: f64,
    pub b: f64,
}

pub fn riemann_theta(tau: &SiegelPoint, trunc: &TruncationSpec) -> Result<SeriesResult> {
    let n = tau.dim();
    gaussian_lattice_sum(tau.matrix(), &vec![C64::new(0.0, 0.0); n], &vec![0.0; n], Weight::Unit, trunc)
}

pub fn jacobi_theta(arg: &JacobiArgument, trunc: &TruncationSpec) -> Result<SeriesResult> {
    let n = arg.tau.dim();
    gaussian_lattice_sum(arg.tau.matrix(), &arg.z, &vec![0.0; n], Weight::Unit, trunc)
}

/// θ[a,b](τ,z) = Σ e^{πi((n+a)²τ + 2(n+a)(z+b))}, or its z-derivative.
pub fn theta_with_char(ch: Characteristic, tau: C64, z: C64, deriv: bool, trunc: &TruncationSpec) -> Result<SeriesResult> {
    if !(tau.im > 0.0) {
        return domain("Im tau must be positive");
    }
    let t = DMatrix::from_element(1, 1, tau);
    let zb = [z + ch.b];
    let a = ch.a;
    if deriv {
        let w = move |l: &[i64]| C64::new(0.0, 2.0 * PI * (l[0] as f64 + a));
        gaussian_lattice_sum(&t, &zb, &[a], Weight::Linear(&w, 2.0 * PI), trunc)
    } else {
        gaussian_lattice_sum(&t, &zb, &[a], Weight::Unit, trunc)
    }
}

/// (τ, z) on ℍ_{nh}: block (i, j) of τ is S_ij·T and z stacks the columns of Z.
pub fn tensor_embed(t: &SiegelPoint, s: &DMatrix<f64>, z: &DMatrix<C64>) -> Result<(SiegelPoint, Vec<C64>)> {
    let n = t.dim();
    let h = s.nrows();
    if !s.is_square() || z.nrows() != n || z.ncols() != h {
        return domain("shape mismatch in tensor embedding");
    }
    if s.clone().cholesky().is_none() {
        return domain("S must be positive definite");
    }
    let mut tau = DMatrix::zeros(n * h, n * h);
    for i in 0..h {
        for j in 0..h {
            for a in 0..n {
                for b in 0..n {
                    tau[(i * n + a, j * n + b)] = t.matrix()[(a, b)] * s[(i, j)];
                }
            }
        }
    }
    let mut zv = Vec::with_capacity(n * h);
    for j in 0..h {
        for a in 0..n {
            zv.push(z[(a, j)]);
        }
    }
    Ok((SiegelPoint::new(tau)?, zv))
}

/// θ^S(T, Z) = Σ_{N ∈ M_{n,h}(ℤ)} e^{πi Tr(ᵗN T N S + 2ᵗN Z)}.
pub fn theta_quadform(s: &DMatrix<f64>, t: &SiegelPoint, z: &DMatrix<C64>, trunc: &TruncationSpec) -> Result<SeriesResult> {
    if !s.is_square() || (s - s.transpose()).iter().any(|x| x.abs() > 1e-12) {
        return domain("S must be symmetric");
    }
    let (tau, zv) = tensor_embed(t, s, z)?;
    jacobi_theta(&JacobiArgument::new(tau, zv)?, trunc)
}

/// φ_{l²}(τ, z) = Σ e^{πi(ᵗℓτℓ + 2l ᵗzℓ)}.
pub fn fourier_jacobi_coeff(l: i64, tau: &SiegelPoint, z: &[C64], trunc: &TruncationSpec) -> Result<SeriesResult> {
    let scaled: Vec<C64> = z.iter().map(|c| c * l as f64).collect();
    jacobi_theta(&JacobiArgument::new(tau.clone(), scaled)?, trunc)
}

/// Multiplicative function on ℤ/Nℤ given by its value table.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<C64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

impl DirichletCharacter {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        let n = values.len() as u64;
        if n == 0 {
            return domain("character table is empty");
        }
        let tol = 1e-12;
        for r in 0..n {
            let v = values[r as usize];
            let unit = gcd(r, n) == 1;
            if unit && (v.norm() - 1.0).abs() > tol {
                return domain(format!("character value at {r} is not a root of unity"));
            }
            if !unit && v.norm() > tol {
                return domain(format!("character must vanish at {r}"));
            }
        }
        if (values[(1 % n) as usize] - C64::new(1.0, 0.0)).norm() > tol {
            return domain("character must take the value 1 at 1");
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = values[((a * b) % n) as usize];
                let rhs = values[a as usize] * values[b as usize];
                if (lhs - rhs).norm() > tol {
                    return domain(format!("character table is not multiplicative at ({a},{b})"));
                }
            }
        }
        Ok(DirichletCharacter { modulus: n, values })
    }

    pub fn from_real(values: &[i64]) -> Result<Self> {
        DirichletCharacter::new(values.iter().map(|&v| C64::new(v as f64, 0.0)).collect())
    }

    /// The principal character modulo n.
    pub fn principal(n: u64) -> Result<Self> {
        DirichletCharacter::new((0..n.max(1)).map(|r| if gcd(r, n.max(1)) == 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, n: i64) -> C64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn is_even(&self) -> bool {
        (self.value(-1) - C64::new(1.0, 0.0)).norm() < 1e-12
    }

    pub fn is_odd(&self) -> bool {
        (self.value(-1) + C64::new(1.0, 0.0)).norm() < 1e-12
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// θ⁺ = Σ ψ(n) e^{2πiτtn²} (even ψ) and θ⁻ = Σ ψ(n) n e^{2πiτtn²} (odd ψ).
pub fn twisted_theta(psi: &DirichletCharacter, t: u64, parity: Parity, tau: C64, trunc: &TruncationSpec) -> Result<SeriesResult> {
    if t == 0 {
        return domain("t must be positive");
    }
    if !(tau.im > 0.0) {
        return domain("Im tau must be positive");
    }
    let matches = match parity {
        Parity::Even => psi.is_even(),
        Parity::Odd => psi.is_odd(),
    };
    if !matches {
        return Err(Error::Domain("character parity does not match: the series vanishes identically".into()));
    }
    let tt = DMatrix::from_element(1, 1, tau * (2.0 * t as f64));
    let z = [C64::new(0.0, 0.0)];
    match parity {
        Parity::Even => {
            let w = |l: &[i64]| psi.value(l[0]);
            gaussian_lattice_sum(&tt, &z, &[0.0], Weight::Bounded(&w, 1.0), trunc)
        }
        Parity::Odd => {
            let w = |l: &[i64]| psi.value(l[0]) * l[0] as f64;
            gaussian_lattice_sum(&tt, &z, &[0.0], Weight::Linear(&w, 1.0), trunc)
        }
    }
}

/// e^{πi·x} for real x, reducing x modulo 2 first.
pub fn exp_pi_i(x: f64) -> C64 {
    let r = x.rem_euclid(2.0);
    C64::from_polar(1.0, PI * r)
}

pub(crate) fn exp_pi_i_complex(w: C64) -> C64 {
    exp_pi_i(w.re) * (-PI * w.im).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_1d(tau: C64, z: C64, a: f64, b: f64, deriv: bool, r: i64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for n in -r..=r {
            let w = n as f64 + a;
            let e = (C64::new(0.0, PI) * (tau * w * w + (z + b) * (2.0 * w))).exp();
            s += if deriv { C64::new(0.0, 2.0 * PI * w) * e } else { e };
        }
        s
    }

    #[test]
    fn riemann_at_i() {
        let r = riemann_theta(&SiegelPoint::scalar(I).unwrap(), &TruncationSpec::default()).unwrap();
        let oracle = direct_1d(I, C64::new(0.0, 0.0), 0.0, 0.0, false, 10);
        assert!((r.value - oracle).norm() < 1e-15);
        assert!((r.value.re - 1.086_434_811_213_308).abs() < 1e-14);
        assert!(r.certified);
    }

    #[test]
    fn riemann_period_two_and_product() {
        let t = TruncationSpec::default();
        for tau in [C64::new(0.3, 0.7), C64::new(-1.2, 0.4)] {
            let a = riemann_theta(&SiegelPoint::scalar(tau).unwrap(), &t).unwrap().value;
            let b = riemann_theta(&SiegelPoint::scalar(tau + 2.0).unwrap(), &t).unwrap().value;
            assert!((a - b).norm() < 1e-13);
        }
        let t1 = C64::new(0.1, 0.9);
        let t2 = C64::new(-0.4, 1.3);
        let both = riemann_theta(&SiegelPoint::diagonal(&[t1, t2]).unwrap(), &t).unwrap().value;
        let p = riemann_theta(&SiegelPoint::scalar(t1).unwrap(), &t).unwrap().value
            * riemann_theta(&SiegelPoint::scalar(t2).unwrap(), &t).unwrap().value;
        assert!((both - p).norm() < 1e-13);
    }

    #[test]
    fn jacobi_periodicity() {
        let t = TruncationSpec::default();
        let tau = C64::new(0.2, 0.8);
        let z = C64::new(0.31, -0.17);
        let sp = SiegelPoint::scalar(tau).unwrap();
        let f = |z: C64| jacobi_theta(&JacobiArgument::new(sp.clone(), vec![z]).unwrap(), &t).unwrap().value;
        let base = f(z);
        assert!((f(C64::new(0.0, 0.0)) - riemann_theta(&sp, &t).unwrap().value).norm() < 1e-14);
        assert!((f(z + 1.0) - base).norm() < 1e-13);
        let shifted = f(z + tau) * (C64::new(0.0, PI) * (tau + z * 2.0)).exp();
        assert!((shifted - base).norm() < 1e-12);
        assert!((base - direct_1d(tau, z, 0.0, 0.0, false, 30)).norm() < 1e-13);
    }

    #[test]
    fn characteristic_examples() {
        let t = TruncationSpec::default();
        let tau = C64::new(0.1, 1.1);
        let z = C64::new(0.2, 0.05);
        let plain = theta_with_char(Characteristic { a: 0.0, b: 0.0 }, tau, z, false, &t).unwrap();
        let j = jacobi_theta(&JacobiArgument::new(SiegelPoint::scalar(tau).unwrap(), vec![z]).unwrap(), &t).unwrap();
        assert!((plain.value - j.value).norm() < 1e-15);
        let d0 = theta_with_char(Characteristic { a: 0.0, b: 0.0 }, tau, C64::new(0.0, 0.0), true, &t).unwrap();
        assert!(d0.value.norm() < 1e-13);
        let tau2 = C64::new(0.0, 2.0);
        let oracle: C64 = (-20i64..=20)
            .map(|n| {
                let w = n as f64 + 0.5;
                C64::new(0.0, 2.0 * PI * w) * (-PI * 2.0 * w * w).exp()
            })
            .sum();
        let d = theta_with_char(Characteristic { a: 0.5, b: 0.0 }, tau2, C64::new(0.0, 0.0), true, &t).unwrap();
        assert!((d.value - oracle).norm() < 1e-14);
        let gen = theta_with_char(Characteristic { a: 0.25, b: 0.4 }, tau, z, true, &t).unwrap();
        assert!((gen.value - direct_1d(tau, z, 0.25, 0.4, true, 30)).norm() < 1e-12);
        assert!(gen.certified);
    }

    #[test]
    fn tensor_embed_examples() {
        let t = SiegelPoint::scalar(I).unwrap();
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let z = DMatrix::from_row_slice(1, 2, &[C64::new(0.1, 0.0), C64::new(0.2, 0.0)]);
        let (tau, zv) = tensor_embed(&t, &s, &z).unwrap();
        assert_eq!(tau.matrix()[(0, 0)], I);
        assert_eq!(tau.matrix()[(1, 1)], I * 2.0);
        assert_eq!(tau.matrix()[(0, 1)], C64::new(0.0, 0.0));
        assert_eq!(zv, vec![C64::new(0.1, 0.0), C64::new(0.2, 0.0)]);
        let one = DMatrix::from_element(1, 1, 1.0);
        let z1 = DMatrix::from_element(1, 1, C64::new(0.3, 0.1));
        let (tau, zv) = tensor_embed(&t, &one, &z1).unwrap();
        assert_eq!(tau, t);
        assert_eq!(zv, vec![C64::new(0.3, 0.1)]);
    }

    #[test]
    fn fourier_jacobi_examples() {
        let tr = TruncationSpec::default();
        let tau = SiegelPoint::scalar(C64::new(0.1, 1.0)).unwrap();
        let z = [C64::new(0.3, 0.2)];
        let f = |l: i64| fourier_jacobi_coeff(l, &tau, &z, &tr).unwrap().value;
        let j = |z: C64| jacobi_theta(&JacobiArgument::new(tau.clone(), vec![z]).unwrap(), &tr).unwrap().value;
        assert!((f(1) - j(z[0])).norm() < 1e-15);
        assert!((f(0) - riemann_theta(&tau, &tr).unwrap().value).norm() < 1e-15);
        assert!((f(2) - j(z[0] * 2.0)).norm() < 1e-15);
    }

    #[test]
    fn twisted_examples() {
        let tr = TruncationSpec::default();
        let tau = C64::new(0.15, 0.6);
        let triv = DirichletCharacter::principal(1).unwrap();
        let v = twisted_theta(&triv, 1, Parity::Even, tau, &tr).unwrap().value;
        let r = riemann_theta(&SiegelPoint::scalar(tau * 2.0).unwrap(), &tr).unwrap().value;
        assert!((v - r).norm() < 1e-14);
        assert!(twisted_theta(&triv, 1, Parity::Odd, tau, &tr).is_err());
        let chi = DirichletCharacter::from_real(&[0, 1, 0, -1]).unwrap();
        assert!(chi.is_odd());
        let v = twisted_theta(&chi, 1, Parity::Odd, I, &tr).unwrap().value;
        let oracle: f64 = (-20i64..=20).map(|n| chi.value(n).re * n as f64 * (-2.0 * PI * (n * n) as f64).exp()).sum();
        assert!((v.re - oracle).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert!(v.re > 0.0);
        assert!(DirichletCharacter::from_real(&[0, 1, 0, 1, 0]).is_err());
    }
}
