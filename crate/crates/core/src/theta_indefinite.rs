//! Theta series of indefinite forms: Siegel's majorant theta, Richter's Jacobi-type
//! extension, Rallis–Schiffmann functions and the two-variable Shimura kernel Ω_u.

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::numerics::{gaussian_lattice_sum, SeriesResult, TruncationSpec, Weight, C64};
use crate::quadforms::{Majorant, QuadraticSpace, SymForm};
use crate::report::{IdentityCheck, SuiteReport};
use crate::theta_classical::{exp_pi_i, exp_pi_i_complex, DirichletCharacter, SiegelPoint};
use crate::weylrep::harmonic::is_harmonic;
use crate::weylrep::suites::rs_psi;
use crate::weylrep::{ExactScalar, GenFunction, Polynomial, Rational, WeylOperator};

fn upper_half(tau: C64, what: &str) -> Result<()> {
    if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
        return domain(format!("Im {what} must be positive"));
    }
    Ok(())
}

/// e^{2πiR[x]} (Siegel) or e^{πiR[x]}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThetaConvention {
    #[default]
    TwoPiI,
    PiI,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiegelThetaInput {
    pub space: QuadraticSpace,
    pub tau: C64,
    pub shift: Vec<f64>,
    pub convention: ThetaConvention,
}

impl SiegelThetaInput {
    pub fn new(space: QuadraticSpace, tau: C64) -> Result<Self> {
        upper_half(tau, "tau")?;
        let n = space.form.dim();
        Ok(SiegelThetaInput { space, tau, shift: vec![0.0; n], convention: ThetaConvention::default() })
    }

    /// Shift a with det(S)·a integral.
    pub fn with_shift(mut self, a: Vec<f64>) -> Result<Self> {
        if a.len() != self.space.form.dim() {
            return domain("shift has the wrong length");
        }
        let det = self.space.form.matrix().determinant();
        for v in &a {
            let t = v * det;
            if !t.is_finite() || (t - t.round()).abs() > 1e-9 * (1.0 + t.abs()) {
                return domain("det(S)·a must be integral");
            }
        }
        self.shift = a;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: ThetaConvention) -> Self {
        self.convention = convention;
        self
    }

    /// R = uS + ivP, doubled in the 2πi convention.
    pub fn matrix(&self) -> DMatrix<C64> {
        let s = self.space.form.matrix();
        let p = self.space.majorant.matrix();
        let f = match self.convention {
            ThetaConvention::TwoPiI => 2.0,
            ThetaConvention::PiI => 1.0,
        };
        DMatrix::from_fn(s.nrows(), s.ncols(), |i, j| C64::new(f * self.tau.re * s[(i, j)], f * self.tau.im * p[(i, j)]))
    }
}

/// θ(τ, P) = Σ_{x∈ℤⁿ} e^{2πiR[x+a]}, certified through the majorant vP.
pub fn siegel_theta(inp: &SiegelThetaInput, trunc: &TruncationSpec) -> Result<SeriesResult> {
    if !crate::quadforms::is_majorant(&inp.space.form, inp.space.majorant.matrix()) {
        return Err(Error::Precondition("P is not a majorant of S".into()));
    }
    let n = inp.space.form.dim();
    gaussian_lattice_sum(&inp.matrix(), &vec![C64::new(0.0, 0.0); n], &inp.shift, Weight::Unit, trunc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichterTheta {
    pub series: SeriesResult,
    /// Whether Sζ = Pζ, the hypothesis under which the transformation law is stated.
    pub hypothesis_holds: bool,
}

/// Σ_{N∈M_{m,n}(ℤ)} e^{πi Tr(S[N]u + iP[N]v + 2ᵗNSζZ)}.
pub fn richter_theta(
    s: &DMatrix<f64>,
    p: &DMatrix<f64>,
    zeta: &DMatrix<i64>,
    tau: &SiegelPoint,
    z: &DMatrix<C64>,
    trunc: &TruncationSpec,
) -> Result<RichterTheta> {
    let m = s.nrows();
    let n = tau.dim();
    if s.iter().any(|x| (x - x.round()).abs() > 1e-12) {
        return domain("S must be integral");
    }
    if (0..m.min(s.ncols())).any(|i| (s[(i, i)].round() as i64) % 2 != 0) {
        return domain("S must have even diagonal");
    }
    let form = SymForm::new(s.clone())?;
    if s.determinant().abs() < 0.5 {
        return domain("S must be invertible");
    }
    let pm = Majorant::new(&form, p.clone())?;
    let j = zeta.ncols();
    if zeta.nrows() != m || z.nrows() != j || z.ncols() != n {
        return domain("shape mismatch: zeta must be m×j and Z j×n");
    }
    let zf = zeta.map(|v| v as f64);
    let hypothesis_holds = (s * &zf - pm.matrix() * &zf).iter().all(|v| v.abs() < 1e-9);

    let t = tau.matrix();
    let big = DMatrix::from_fn(m * n, m * n, |r, c| {
        let (a, i) = (r / m, r % m);
        let (b, k) = (c / m, c % m);
        C64::new(t[(a, b)].re * s[(i, k)], t[(a, b)].im * pm.matrix()[(i, k)])
    });
    let szz = (s * &zf).map(|v| C64::new(v, 0.0)) * z;
    let zv: Vec<C64> = (0..n).flat_map(|a| (0..m).map(move |i| (a, i))).map(|(a, i)| szz[(i, a)]).collect();
    let series = gaussian_lattice_sum(&big, &zv, &vec![0.0; m * n], Weight::Unit, trunc)?;
    Ok(RichterTheta { series, hypothesis_holds })
}

/// Harmonic data (P₁, P₂) of degrees (k, m) for a Rallis–Schiffmann function.
#[derive(Debug, Clone)]
pub struct RSData {
    pub p: usize,
    pub q: usize,
    pub k: u32,
    pub m: u32,
    pub p1: Polynomial,
    pub p2: Polynomial,
}

impl RSData {
    pub fn new(p: usize, q: usize, k: u32, m: u32, p1: Polynomial, p2: Polynomial) -> Result<Self> {
        if p == 0 {
            return domain("p must be positive");
        }
        if p1.nvars() != p || p2.nvars() != q {
            return domain("P1 must be in p variables and P2 in q variables");
        }
        if p1.is_zero() || !p1.is_homogeneous_of(k) || p2.is_zero() || !p2.is_homogeneous_of(m) {
            return domain("P1 and P2 must be nonzero and homogeneous of degrees k and m");
        }
        if !is_harmonic(&p1, p, 0) || !is_harmonic(&p2, q, 0) {
            return Err(Error::Precondition("P1 and P2 must be harmonic".into()));
        }
        Ok(RSData { p, q, k, m, p1, p2 })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// d = k − m + (p−q)/2.
    pub fn d(&self) -> Rational {
        Rational::new((2 * self.k as i64 - 2 * self.m as i64 + self.p as i64 - self.q as i64).into(), 2.into())
    }

    pub fn s1_exponent(&self) -> f64 {
        -(self.k as f64 + (self.p as f64 - 2.0) / 2.0)
    }

    /// ψ = P₁P₂S₁^{−(k+(p−2)/2)}S^{d−1} as an exact generalized function.
    pub fn psi(&self) -> Result<GenFunction> {
        Ok(rs_psi(self.p, self.q, &self.p1, &self.p2, self.k, self.m, -1)?.0)
    }

    /// Δψ = 0 and (E + n/2)ψ = dψ, exactly.
    pub fn verify_symbolic(&self) -> Result<SuiteReport> {
        let n = self.n();
        let psi = self.psi()?;
        let signs: Vec<i64> = (0..n).map(|j| if j < self.p { 1 } else { -1 }).collect();
        let lap = psi.apply(&WeylOperator::laplacian(&signs))?;
        let euler = WeylOperator::euler(n).add(&WeylOperator::scalar(n, ExactScalar::from_ratio(n as i64, 2)));
        let lhs = psi.apply(&euler)?;
        let rhs = psi.scale(&ExactScalar::from_rational(self.d()));
        let checks = vec![
            IdentityCheck::exact("Laplacian psi = 0", lap.is_zero(), || lap.to_string()),
            IdentityCheck::exact("(E + n/2) psi = d psi", lhs.equals(&rhs), || format!("{lhs} vs {rhs}")),
        ];
        Ok(SuiteReport::new("rallis-schiffmann data", checks))
    }
}

/// φ_{P₁P₂,τ}(x) on {S > 0}, extended by zero.
pub fn rs_phi_eval(data: &RSData, tau: C64, x: &[f64]) -> Result<C64> {
    upper_half(tau, "tau")?;
    if x.len() != data.n() {
        return domain("x has the wrong length");
    }
    let s1: f64 = x[..data.p].iter().map(|v| v * v).sum();
    let s2: f64 = x[data.p..].iter().map(|v| v * v).sum();
    let s = s1 - s2;
    if s <= 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    // S₁ ≥ S > 0 here, so S₁ never vanishes on the support.
    let poly = data.p1.eval_real(&x[..data.p]) * data.p2.eval_real(&x[data.p..]);
    let d = crate::weylrep::scalar::rat_to_f64(&data.d());
    let amp = s1.powf(data.s1_exponent()) * s.powf(d - 1.0);
    Ok(poly * amp * exp_pi_i_complex(tau * s))
}

/// (a, b) for g = n(b)t(a) = [[a, b/a], [0, 1/a]].
fn borel_parts(g: &[[f64; 2]; 2]) -> Result<(f64, f64)> {
    let [[a, b0], [c, d]] = *g;
    if c != 0.0 {
        return Err(Error::Unsupported("only upper-triangular elements act on Rallis–Schiffmann functions here".into()));
    }
    if !(a > 0.0) || !a.is_finite() || !b0.is_finite() {
        return domain("diagonal entry a must be positive and finite");
    }
    if (a * d - 1.0).abs() > 1e-12 {
        return domain("g must have determinant 1");
    }
    Ok((a, b0 * a))
}

/// (j(g,τ)^{−d}, g(τ)) with ω(g)φ_τ = j(g,τ)^{−d}·φ_{g(τ)} for upper-triangular g.
pub fn rs_weil_borel_action(data: &RSData, g: &[[f64; 2]; 2], tau: C64) -> Result<(C64, C64)> {
    upper_half(tau, "tau")?;
    let (a, b) = borel_parts(g)?;
    let d = crate::weylrep::scalar::rat_to_f64(&data.d());
    Ok((C64::new(a.powf(d), 0.0), tau * (a * a) + b))
}

/// (ω(g)φ_τ)(x) from the explicit formulas: t(a) acts by a^{n/2}φ(ax) and n(b) by e^{πibS(x)}.
pub fn weil_borel_apply(data: &RSData, g: &[[f64; 2]; 2], tau: C64, x: &[f64]) -> Result<C64> {
    let (a, b) = borel_parts(g)?;
    let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
    let s: f64 = x.iter().enumerate().map(|(j, v)| if j < data.p { v * v } else { -v * v }).sum();
    Ok(rs_phi_eval(data, tau, &ax)? * a.powf(data.n() as f64 / 2.0) * exp_pi_i(b * s))
}

/// k, the class-function table u on ℤ/Nℤ, and the evaluation point (z, τ).
#[derive(Debug, Clone, PartialEq)]
pub struct ShimuraInput {
    pub k: u32,
    pub u: Vec<C64>,
    pub z: C64,
    pub tau: C64,
}

impl ShimuraInput {
    /// Checks u(aj) = ψ(a)u(j) for every unit a modulo the conductor of ψ, which
    /// must be a multiple of N = u.len().
    pub fn new(k: u32, u: Vec<C64>, psi: &DirichletCharacter, z: C64, tau: C64) -> Result<Self> {
        if k < 2 {
            return domain("k must be at least 2");
        }
        upper_half(z, "z")?;
        upper_half(tau, "tau")?;
        let n = u.len() as u64;
        if n == 0 {
            return domain("u must be a table on Z/NZ with N >= 1");
        }
        let md = psi.modulus();
        if !md.is_multiple_of(n) {
            return domain("the modulus of psi must be a multiple of N");
        }
        let scale = u.iter().fold(1.0f64, |s, v| s.max(v.norm()));
        for a in 0..md {
            if num_integer::Integer::gcd(&a, &md) != 1 {
                continue;
            }
            for j in 0..n {
                let lhs = u[((a * j) % n) as usize];
                let rhs = psi.value(a as i64) * u[j as usize];
                if (lhs - rhs).norm() > 1e-12 * scale {
                    return Err(Error::Precondition(format!("u(aj) != psi(a)u(j) at a={a}, j={j}")));
                }
            }
        }
        Ok(ShimuraInput { k, u, z, tau })
    }

    pub fn modulus(&self) -> usize {
        self.u.len()
    }

    pub fn at(&self, z: C64, tau: C64) -> Result<Self> {
        upper_half(z, "z")?;
        upper_half(tau, "tau")?;
        Ok(ShimuraInput { z, tau, ..self.clone() })
    }
}

/// |y|_∞ ≤ radius and S′(y) ≤ norm_bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShimuraCutoffs {
    pub radius: i64,
    pub norm_bound: f64,
}

impl ShimuraCutoffs {
    pub fn new(radius: i64, norm_bound: f64) -> Result<Self> {
        if radius < 1 || !(norm_bound > 0.0) {
            return domain("cutoffs must be positive");
        }
        Ok(ShimuraCutoffs { radius, norm_bound })
    }

    pub fn radius(radius: i64) -> Result<Self> {
        Self::new(radius, f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShimuraResult {
    /// `tail_bound` is the mass of the outermost shell, a heuristic; `certified` is false.
    pub series: SeriesResult,
    pub cutoffs: ShimuraCutoffs,
    /// Terms on the zero set of S′(y, Q(z)) that were left out.
    pub skipped: u64,
}

impl ShimuraResult {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.series.to_json();
        v["radius"] = self.cutoffs.radius.into();
        v["norm_bound"] = if self.cutoffs.norm_bound.is_finite() { self.cutoffs.norm_bound.into() } else { serde_json::Value::Null };
        v["skipped"] = self.skipped.into();
        v
    }
}

/// Ω_u(z,τ) = Σ_{y∈ℤ³, S′(y)>0} u(y₁)·S′(y,Q(z))^{−k}·S′(y)^{k−1/2}·e^{πiτS′(y)} with
/// S′(y) = 2y₃² − 2y₁y₂ and S′(y,Q(z)) = 2y₃z − y₁ − y₂z².
pub fn shimura_kernel(inp: &ShimuraInput, cut: &ShimuraCutoffs) -> Result<ShimuraResult> {
    let r = cut.radius;
    let n = inp.u.len() as i64;
    let k = inp.k as i32;
    let z = inp.z;
    let z2 = z * z;
    // S′(y) is even, so reducing Re τ mod 1 leaves every term unchanged.
    let tau = C64::new(inp.tau.re.rem_euclid(1.0), inp.tau.im);
    let zscale = 1.0 + z.norm_sqr();
    let mut total = C64::new(0.0, 0.0);
    let mut shell = 0.0f64;
    let mut terms = 0u64;
    let mut skipped = 0u64;
    for y1 in -r..=r {
        let u = inp.u[y1.rem_euclid(n) as usize];
        if u == C64::new(0.0, 0.0) {
            continue;
        }
        for y2 in -r..=r {
            for y3 in -r..=r {
                let sp = 2 * y3 * y3 - 2 * y1 * y2;
                if sp <= 0 || sp as f64 > cut.norm_bound {
                    continue;
                }
                let lin = z * (2 * y3) as f64 - y1 as f64 - z2 * y2 as f64;
                let ymax = y1.abs().max(y2.abs()).max(y3.abs());
                if lin.norm() <= 1e-12 * (1.0 + ymax as f64) * zscale {
                    skipped += 1;
                    continue;
                }
                let spf = sp as f64;
                let term = u * lin.powi(-k) * spf.powf(k as f64 - 0.5) * exp_pi_i_complex(tau * spf);
                total += term;
                terms += 1;
                if ymax == r {
                    shell += term.norm();
                }
            }
        }
    }
    Ok(ShimuraResult {
        series: SeriesResult { value: total, radius_used: r as usize, tail_bound: shell, terms_summed: terms, certified: false },
        cutoffs: *cut,
        skipped,
    })
}

/// Relative Cauchy–Riemann defect |f_x + i f_y| / |f_x| by central differences.
pub fn cauchy_riemann_residual(f: impl Fn(C64) -> Result<C64>, w: C64, h: f64) -> Result<f64> {
    let fx = (f(w + h)? - f(w - h)?) / (2.0 * h);
    let fy = (f(w + C64::new(0.0, h))? - f(w - C64::new(0.0, h))?) / (2.0 * h);
    if fx.norm() == 0.0 {
        return Err(Error::Conditioning("derivative vanishes at the sample point".into()));
    }
    Ok((fx + C64::new(0.0, 1.0) * fy).norm() / fx.norm())
}
