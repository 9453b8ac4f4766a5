//! Congruence subgroups, multiplier systems, Jacobi-group automorphy factors, lifts to
//! the group, and a numerical verifier for functional equations.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::hecke::{hecke_theta, HeckeMode, QuadFieldElement};
use crate::numerics::{epsilon_d, kronecker_symbol, principal_power, TruncationSpec, C64, I};
use crate::report::IdentityCheck;
use crate::theta_classical::{
    exp_pi_i, jacobi_theta, riemann_theta, theta_with_char, twisted_theta, Characteristic, DirichletCharacter, JacobiArgument, Parity,
    SiegelPoint,
};
use crate::theta_indefinite::{shimura_kernel, ShimuraCutoffs, ShimuraInput};

/// (a b; c d) ∈ SL(2, ℤ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModularElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return domain(format!("({a} {b}; {c} {d}) does not have determinant 1"));
        }
        Ok(ModularElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        ModularElement { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn t(n: i64) -> Self {
        ModularElement { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn s() -> Self {
        ModularElement { a: 0, b: -1, c: 1, d: 0 }
    }

    pub fn neg(&self) -> Self {
        ModularElement { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let f = |x: i128| i64::try_from(x).map_err(|_| Error::Conditioning("matrix entries overflow".into()));
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let (p, q, r, s) = (o.a as i128, o.b as i128, o.c as i128, o.d as i128);
        Ok(ModularElement { a: f(a * p + b * r)?, b: f(a * q + b * s)?, c: f(c * p + d * r)?, d: f(c * q + d * s)? })
    }

    pub fn inverse(&self) -> Self {
        ModularElement { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn height(&self) -> i64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }

    /// cτ + d.
    pub fn j(&self, tau: C64) -> C64 {
        tau * self.c as f64 + self.d as f64
    }

    pub fn act(&self, tau: C64) -> C64 {
        (tau * self.a as f64 + self.b as f64) / self.j(tau)
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl fmt::Display for ModularElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Full,
    /// ac and bd even.
    GammaTheta,
    /// c ≡ 0 mod N.
    Gamma0(u64),
    /// b ≡ c ≡ 0 mod 2.
    Gamma0Upper2,
    /// b ≡ 0 mod 2N.
    Gamma0Lower(u64),
}

impl GroupSpec {
    pub fn contains(&self, g: &ModularElement) -> bool {
        match *self {
            GroupSpec::Full => true,
            GroupSpec::GammaTheta => (g.a * g.c) % 2 == 0 && (g.b * g.d) % 2 == 0,
            GroupSpec::Gamma0(n) => g.c.rem_euclid(n.max(1) as i64) == 0,
            GroupSpec::Gamma0Upper2 => g.b % 2 == 0 && g.c % 2 == 0,
            GroupSpec::Gamma0Lower(n) => g.b.rem_euclid(2 * n.max(1) as i64) == 0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let num = |p: &str| -> Result<u64> {
            let v: u64 = p.parse().map_err(|_| Error::Domain(format!("bad group parameter in {s}")))?;
            if v == 0 {
                return domain("group parameter must be positive");
            }
            Ok(v)
        };
        match lower.as_str() {
            "full" | "sl2z" => Ok(GroupSpec::Full),
            "gamma_theta" | "theta" => Ok(GroupSpec::GammaTheta),
            "gamma0_upper2" => Ok(GroupSpec::Gamma0Upper2),
            _ => {
                if let Some(n) = lower.strip_prefix("gamma0_lower:") {
                    Ok(GroupSpec::Gamma0Lower(num(n)?))
                } else if let Some(n) = lower.strip_prefix("gamma0:") {
                    Ok(GroupSpec::Gamma0(num(n)?))
                } else {
                    domain(format!("unknown group {s}"))
                }
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Full => write!(f, "SL2(Z)"),
            GroupSpec::GammaTheta => write!(f, "Gamma_theta"),
            GroupSpec::Gamma0(n) => write!(f, "Gamma0({n})"),
            GroupSpec::Gamma0Upper2 => write!(f, "Gamma0^0(2)"),
            GroupSpec::Gamma0Lower(n) => write!(f, "Gamma0(0,{})", 2 * n),
        }
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Seeded elements of G with entries bounded by `height`, filtered by `keep`.
pub fn sample_group_elements_where(
    group: GroupSpec,
    height: i64,
    count: usize,
    seed: u64,
    keep: impl Fn(&ModularElement) -> bool,
) -> Result<Vec<ModularElement>> {
    if height < 1 {
        return domain("height must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    let step = match group {
        GroupSpec::Gamma0(n) => n as i64,
        _ => 1,
    };
    for _ in 0..count.max(1) * 20_000 {
        if out.len() == count {
            break;
        }
        let c = step * rng.gen_range(-(height / step)..=(height / step));
        let d = rng.gen_range(-height..=height);
        let (g, x, y) = ext_gcd(d, c);
        if g.abs() != 1 {
            continue;
        }
        // a·d − b·c = 1 with a = x·g, b = −y·g, then (a, b) += t(c, d).
        let (a0, b0) = (x * g, -y * g);
        let cands: Vec<ModularElement> = (-2 * height..=2 * height)
            .filter_map(|t| ModularElement::new(a0 + t * c, b0 + t * d, c, d).ok())
            .filter(|m| m.height() <= height && group.contains(m) && keep(m))
            .collect();
        if cands.is_empty() {
            continue;
        }
        let m = cands[rng.gen_range(0..cands.len())];
        if seen.insert(m) {
            out.push(m);
        }
    }
    if out.len() < count {
        return Err(Error::Conditioning(format!("only {} of {count} elements of {group} found with height {height}", out.len())));
    }
    Ok(out)
}

pub fn sample_group_elements(group: GroupSpec, height: i64, count: usize, seed: u64) -> Result<Vec<ModularElement>> {
    sample_group_elements_where(group, height, count, seed, |_| true)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierSpec {
    /// λ(γ) = ε_d⁻¹(2c/d), c even.
    ThetaHalf,
    /// ε_d and ε_d⁻¹ swapped: a deliberately wrong multiplier.
    ThetaHalfSwapped,
    /// ζ = i^{(d−1)/2}(c/d) for c even; e^{−πic/4}(d/c) for c > 0 odd, extended by ζ(γ) = iζ(−γ).
    JacobiZeta,
    /// ζ exactly as printed: i^{(d−1)/2}(c/|d|) and e^{πic/4}(d/c).
    JacobiZetaPrinted,
    /// ψ(d)(t/d)ε_d⁻¹, times (c/d) when `with_c_over_d`.
    PsiEpsWeight { psi: DirichletCharacter, t: u64, with_c_over_d: bool },
    /// v_η(γ)², the multiplier of η².
    EtaSquared,
    /// v_η(γ)³, the multiplier of η³.
    EtaCubed,
    /// λ(γ)ψ(d) with λ = ε_d(c/d), for the τ-variable of Ω_u.
    ShimuraTau { psi: DirichletCharacter },
    /// ψ(d)⁻², for the z-variable of Ω_u.
    ShimuraZ { psi: DirichletCharacter },
}

impl MultiplierSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MultiplierSpec::ThetaHalf => "theta_half",
            MultiplierSpec::ThetaHalfSwapped => "theta_half_swapped",
            MultiplierSpec::JacobiZeta => "jacobi_zeta",
            MultiplierSpec::JacobiZetaPrinted => "jacobi_zeta_printed",
            MultiplierSpec::PsiEpsWeight { with_c_over_d: true, .. } => "psi_eps_weight_c_over_d",
            MultiplierSpec::PsiEpsWeight { .. } => "psi_eps_weight",
            MultiplierSpec::EtaSquared => "eta_squared",
            MultiplierSpec::EtaCubed => "eta_cubed",
            MultiplierSpec::ShimuraTau { .. } => "shimura_pair_tau",
            MultiplierSpec::ShimuraZ { .. } => "shimura_pair_z",
        }
    }
}

fn i_pow(k: i64) -> C64 {
    [C64::new(1.0, 0.0), I, C64::new(-1.0, 0.0), -I][k.rem_euclid(4) as usize]
}

fn need_c_even(g: &ModularElement, what: &str) -> Result<()> {
    if g.c % 2 != 0 {
        return Err(Error::Unsupported(format!("{what} is only given for even c, got {g}")));
    }
    Ok(())
}

/// e^{πi·x} for x = num/den, reduced exactly modulo 2.
fn exp_pi_i_rational(num: i128, den: i128) -> C64 {
    let r = num.rem_euclid(2 * den);
    C64::from_polar(1.0, PI * r as f64 / den as f64)
}

/// 4c²·s(d, c) for c > 0, an integer.
fn dedekind_sum_scaled(d: i64, c: i64) -> i128 {
    let (c, d) = (c as i128, d as i128);
    (1..c).map(|r| (2 * r - c) * (2 * (d * r).rem_euclid(c) - c)).sum()
}

/// v_η(γ)^r, where η(γτ) = v_η(γ)(cτ+d)^{1/2}η(τ) with the principal branch.
fn eta_power(g: &ModularElement, r: i64) -> C64 {
    if g.c == 0 {
        // γ acts as τ ↦ τ + bd, and d^{r/2} = i^r when d = −1.
        let base = exp_pi_i_rational(r as i128 * g.b as i128 * g.d as i128, 12);
        return if g.d > 0 { base } else { base * i_pow(-r) };
    }
    if g.c < 0 {
        // arg(−(cτ+d)) = arg(cτ+d) + π.
        return eta_power(&g.neg(), r) * i_pow(r);
    }
    // v_η = exp(πi((a+d)/(12c) − s(d,c) − 1/4)) over the common denominator 12c².
    let (a, c, d) = (g.a as i128, g.c as i128, g.d as i128);
    let s4 = dedekind_sum_scaled(g.d, g.c);
    let num = r as i128 * ((a + d) * c - 3 * s4 - 3 * c * c);
    exp_pi_i_rational(num, 12 * c * c)
}

/// The root of unity attached to γ by the given multiplier system.
pub fn multiplier_value(spec: &MultiplierSpec, g: &ModularElement) -> Result<C64> {
    match spec {
        MultiplierSpec::ThetaHalf | MultiplierSpec::ThetaHalfSwapped => {
            need_c_even(g, "lambda")?;
            let e = epsilon_d(g.d)?;
            let e = if matches!(spec, MultiplierSpec::ThetaHalf) { e.conj() } else { e };
            Ok(e * kronecker_symbol(2 * g.c, g.d) as f64)
        }
        MultiplierSpec::JacobiZeta => {
            if g.c % 2 == 0 {
                Ok(i_pow((g.d - 1) / 2) * kronecker_symbol(g.c, g.d) as f64)
            } else if g.d % 2 == 0 {
                if g.c > 0 {
                    Ok(exp_pi_i_rational(-(g.c as i128), 4) * kronecker_symbol(g.d, g.c) as f64)
                } else {
                    Ok(I * multiplier_value(spec, &g.neg())?)
                }
            } else {
                Err(Error::Unsupported(format!("zeta is undefined for c and d both odd: {g}")))
            }
        }
        MultiplierSpec::JacobiZetaPrinted => {
            if g.c % 2 == 0 {
                Ok(i_pow((g.d - 1) / 2) * kronecker_symbol(g.c, g.d.abs()) as f64)
            } else if g.d % 2 == 0 {
                Ok(exp_pi_i_rational(g.c as i128, 4) * kronecker_symbol(g.d, g.c) as f64)
            } else {
                Err(Error::Unsupported(format!("zeta is undefined for c and d both odd: {g}")))
            }
        }
        MultiplierSpec::PsiEpsWeight { psi, t, with_c_over_d } => {
            need_c_even(g, "the theta-plus/minus multiplier")?;
            let mut v = psi.value(g.d) * kronecker_symbol(*t as i64, g.d) as f64 * epsilon_d(g.d)?.conj();
            if *with_c_over_d {
                v *= kronecker_symbol(g.c, g.d) as f64;
            }
            Ok(v)
        }
        MultiplierSpec::EtaSquared => Ok(eta_power(g, 2)),
        MultiplierSpec::EtaCubed => Ok(eta_power(g, 3)),
        MultiplierSpec::ShimuraTau { psi } => {
            need_c_even(g, "lambda")?;
            Ok(psi.value(g.d) * epsilon_d(g.d)? * kronecker_symbol(g.c, g.d) as f64)
        }
        MultiplierSpec::ShimuraZ { psi } => Ok(psi.value(g.d).conj().powi(2)),
    }
}

/// Real symplectic 2×2 matrix.
pub type Sl2R = [[f64; 2]; 2];

fn sl2_mul(x: &Sl2R, y: &Sl2R) -> Sl2R {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// (M, (λ, μ), κ) in SL(2,ℝ) ⋉ H(ℝ), acting by (τ, z) ↦ (Mτ, (z + λτ + μ)/(cτ + d)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiGroupElement {
    pub m: Sl2R,
    pub lambda: f64,
    pub mu: f64,
    pub kappa: f64,
}

impl JacobiGroupElement {
    pub fn new(m: Sl2R, lambda: f64, mu: f64, kappa: f64) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if (det - 1.0).abs() > 1e-12 {
            return domain("M must have determinant 1");
        }
        Ok(JacobiGroupElement { m, lambda, mu, kappa })
    }

    pub fn identity() -> Self {
        JacobiGroupElement { m: [[1.0, 0.0], [0.0, 1.0]], lambda: 0.0, mu: 0.0, kappa: 0.0 }
    }

    /// (M,X,κ)(M′,X′,κ′) = (MM′, XM′ + X′, κ + κ′ + det(XM′; X′)).
    pub fn mul(&self, o: &Self) -> Self {
        let xm = [
            self.lambda * o.m[0][0] + self.mu * o.m[1][0],
            self.lambda * o.m[0][1] + self.mu * o.m[1][1],
        ];
        JacobiGroupElement {
            m: sl2_mul(&self.m, &o.m),
            lambda: xm[0] + o.lambda,
            mu: xm[1] + o.mu,
            kappa: self.kappa + o.kappa + xm[0] * o.mu - xm[1] * o.lambda,
        }
    }

    pub fn act(&self, tau: C64, z: C64) -> (C64, C64) {
        let [[a, b], [c, d]] = self.m;
        let j = tau * c + d;
        ((tau * a + b) / j, (z + tau * self.lambda + self.mu) / j)
    }

    /// Image in Sp(2, ℝ) on (x₁, x₂, y₁, y₂): M in the first coordinate pair, then the Heisenberg part.
    pub fn to_sp4(&self) -> [[f64; 4]; 4] {
        let [[a, b], [c, d]] = self.m;
        let em = [[a, 0.0, b, 0.0], [0.0, 1.0, 0.0, 0.0], [c, 0.0, d, 0.0], [0.0, 0.0, 0.0, 1.0]];
        let (l, u, k) = (self.lambda, self.mu, self.kappa);
        let eh = [[1.0, 0.0, 0.0, u], [l, 1.0, u, k], [0.0, 0.0, 1.0, -l], [0.0, 0.0, 0.0, 1.0]];
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|r| em[i][r] * eh[r][j]).sum();
            }
        }
        out
    }
}

/// j_{m,k}(g, (τ,z)) = (cτ+d)^{−k} e^m(κ − c(z+λτ+μ)²/(cτ+d) + λ²τ + 2λz + λμ).
pub fn jacobi_automorphy(g: &JacobiGroupElement, m: f64, k: f64, tau: C64, z: C64) -> Result<C64> {
    if !(tau.im > 0.0) {
        return domain("Im tau must be positive");
    }
    let [[_, _], [c, d]] = g.m;
    let j = tau * c + d;
    let w = z + tau * g.lambda + g.mu;
    let arg = -(w * w) * c / j + tau * (g.lambda * g.lambda) + z * (2.0 * g.lambda) + g.lambda * g.mu + g.kappa;
    Ok(principal_power(j, -k)? * (C64::new(0.0, 2.0 * PI * m) * arg).exp())
}

/// j_k(g, τ) = (cτ + d)^{−k}.
pub fn automorphy_factor(g: &Sl2R, tau: C64, k: f64) -> Result<C64> {
    principal_power(tau * g[1][0] + g[1][1], -k)
}

fn sl2_act(g: &Sl2R, tau: C64) -> C64 {
    (tau * g[0][0] + g[0][1]) / (tau * g[1][0] + g[1][1])
}

/// g_τ = n(u)t(v^{1/2}), which maps i to τ.
pub fn g_tau(tau: C64) -> Sl2R {
    let s = tau.im.sqrt();
    [[s, tau.re / s], [0.0, 1.0 / s]]
}

pub fn rotation(theta: f64) -> Sl2R {
    [[theta.cos(), theta.sin()], [-theta.sin(), theta.cos()]]
}

/// Φ_f(g) = j_k(g, i)·f(g(i)).
pub fn lift_function<F: Fn(C64) -> C64>(f: F, k: f64) -> impl Fn(&Sl2R) -> Result<C64> {
    move |g: &Sl2R| Ok(automorphy_factor(g, I, k)? * f(sl2_act(g, I)))
}

/// I_k Φ(τ) = v^{−k/2}Φ(g_τ).
pub fn descend(phi: impl Fn(&Sl2R) -> Result<C64>, k: f64, tau: C64) -> Result<C64> {
    if !(tau.im > 0.0) {
        return domain("Im tau must be positive");
    }
    Ok(phi(&g_tau(tau))? * tau.im.powf(-k / 2.0))
}

/// Series whose functional equations can be checked.
#[derive(Debug, Clone)]
pub enum Series {
    /// θ(τ) = Σ e^{πin²τ}.
    Theta,
    /// θ(τ, z); the index factor e^{πicz²/(cτ+d)} is part of the law.
    JacobiTheta,
    /// ∂_zθ[a,b](τ, 0).
    CharDerivative { a: f64, b: f64 },
    Twisted { psi: DirichletCharacter, t: u64, parity: Parity },
    /// ϑ₊(τ; 1, √12).
    HeckePlus,
    /// Ω_u in τ at fixed z, or in z at fixed τ.
    ShimuraTau { input: ShimuraInput, cutoffs: ShimuraCutoffs },
    ShimuraZ { input: ShimuraInput, cutoffs: ShimuraCutoffs },
}

impl Series {
    pub fn name(&self) -> String {
        match self {
            Series::Theta => "theta".into(),
            Series::JacobiTheta => "jacobi_theta".into(),
            Series::CharDerivative { a, b } => format!("dz_theta_char[{a},{b}]"),
            Series::Twisted { t, parity, .. } => format!("theta_{}_psi_t{t}", if *parity == Parity::Even { "plus" } else { "minus" }),
            Series::HeckePlus => "hecke_plus_sqrt12".into(),
            Series::ShimuraTau { .. } => "shimura_kernel_tau".into(),
            Series::ShimuraZ { .. } => "shimura_kernel_z".into(),
        }
    }

    fn heuristic(&self) -> bool {
        matches!(self, Series::ShimuraTau { .. } | Series::ShimuraZ { .. })
    }

    /// Value and truncation slack (certified tail, or 0 for heuristic series).
    fn eval(&self, w: C64, z: Option<C64>, trunc: &TruncationSpec) -> Result<(C64, f64)> {
        let r = match self {
            Series::Theta => riemann_theta(&SiegelPoint::scalar(w)?, trunc)?,
            Series::JacobiTheta => {
                let z = z.ok_or_else(|| Error::Precondition("jacobi theta needs z".into()))?;
                jacobi_theta(&JacobiArgument::new(SiegelPoint::scalar(w)?, vec![z])?, trunc)?
            }
            Series::CharDerivative { a, b } => theta_with_char(Characteristic { a: *a, b: *b }, w, C64::new(0.0, 0.0), true, trunc)?,
            Series::Twisted { psi, t, parity } => twisted_theta(psi, *t, *parity, w, trunc)?,
            Series::HeckePlus => hecke_theta(w, &QuadFieldElement::from_ints(1, 0, 3)?, 1, HeckeMode::Plus, trunc)?,
            Series::ShimuraTau { input, cutoffs } => shimura_kernel(&input.at(input.z, w)?, cutoffs)?.series,
            Series::ShimuraZ { input, cutoffs } => shimura_kernel(&input.at(w, input.tau)?, cutoffs)?.series,
        };
        Ok((r.value, if r.certified { r.tail_bound } else { 0.0 }))
    }
}

#[derive(Debug, Clone)]
pub struct EquationSample {
    pub gamma: ModularElement,
    pub tau: C64,
    pub z: Option<C64>,
    pub lhs: C64,
    pub rhs: C64,
    pub multiplier: C64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct EquationReport {
    pub series: String,
    pub group: String,
    pub multiplier: String,
    pub weight: f64,
    pub tol: f64,
    pub samples: Vec<EquationSample>,
    pub max_residual: f64,
    pub passed: bool,
    /// Truncation has no certified tail (Ω_u).
    pub heuristic: bool,
    /// Both sides vanish identically at every sample.
    pub degenerate: bool,
}

fn cjson(c: C64) -> serde_json::Value {
    json!({"re": c.re, "im": c.im})
}

impl EquationReport {
    pub fn to_json(&self) -> serde_json::Value {
        let samples: Vec<_> = self
            .samples
            .iter()
            .map(|s| {
                let mut v = json!({
                    "series": self.series,
                    "group": self.group,
                    "gamma": s.gamma.as_array(),
                    "tau": cjson(s.tau),
                    "lhs": cjson(s.lhs),
                    "rhs": cjson(s.rhs),
                    "multiplier": cjson(s.multiplier),
                    "residual": s.residual,
                });
                if let Some(z) = s.z {
                    v["z"] = cjson(z);
                }
                v
            })
            .collect();
        json!({
            "series": self.series,
            "group": self.group,
            "multiplier": self.multiplier,
            "weight": self.weight,
            "tol": self.tol,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "heuristic": self.heuristic,
            "degenerate": self.degenerate,
            "samples": samples,
        })
    }

    pub fn to_check(&self, id: impl Into<String>) -> IdentityCheck {
        let c = IdentityCheck::numeric(id, self.max_residual, self.tol);
        if self.degenerate {
            c.with_note("both sides vanish identically")
        } else if self.heuristic {
            c.with_note("heuristic truncation")
        } else {
            c
        }
    }
}

/// Below this magnitude both sides count as zero: odd series cancel only to rounding.
const ZERO_FLOOR: f64 = 1e-12;

/// Checks F(γ·x) = multiplier(γ)·j(γ,x)^weight·F(x) (with the index factor for θ(τ,z)).
/// The residual is relative to the right-hand side, after subtracting truncation slack.
pub fn verify_equation(
    series: &Series,
    group: GroupSpec,
    spec: &MultiplierSpec,
    weight: f64,
    points: &[(ModularElement, C64, Option<C64>)],
    tol: f64,
    trunc: &TruncationSpec,
) -> Result<EquationReport> {
    let mut samples = Vec::with_capacity(points.len());
    let mut all_zero = !points.is_empty();
    for &(g, tau, z) in points {
        if !group.contains(&g) {
            return Err(Error::Precondition(format!("{g} is not in {group}")));
        }
        let mult = multiplier_value(spec, &g)?;
        let (lhs, rhs, factor, slack) = match series {
            Series::ShimuraZ { input, .. } => {
                let zz = input.z;
                let (l, s1) = series.eval(g.act(zz), None, trunc)?;
                let (r, s2) = series.eval(zz, None, trunc)?;
                (l, r, mult * principal_power(g.j(zz), 2.0 * weight)?, s1 + s2)
            }
            Series::JacobiTheta => {
                let z = z.ok_or_else(|| Error::Precondition("jacobi theta needs z".into()))?;
                let j = g.j(tau);
                let (l, s1) = series.eval(g.act(tau), Some(z / j), trunc)?;
                let (r, s2) = series.eval(tau, Some(z), trunc)?;
                let index = (C64::new(0.0, PI) * z * z * g.c as f64 / j).exp();
                (l, r, mult * principal_power(j, weight)? * index, s1 + s2)
            }
            _ => {
                let (l, s1) = series.eval(g.act(tau), z, trunc)?;
                let (r, s2) = series.eval(tau, z, trunc)?;
                (l, r, mult * principal_power(g.j(tau), weight)?, s1 + s2)
            }
        };
        let expected = factor * rhs;
        let scale = expected.norm().max(lhs.norm());
        all_zero &= scale <= ZERO_FLOOR;
        let residual = ((lhs - expected).norm() - slack * factor.norm().max(1.0)).max(0.0) / scale.max(ZERO_FLOOR);
        let z_out = if let Series::ShimuraZ { input, .. } = series { Some(input.z) } else { z };
        samples.push(EquationSample { gamma: g, tau, z: z_out, lhs, rhs, multiplier: mult, residual });
    }
    let max_residual = samples.iter().fold(0.0f64, |m, s| m.max(s.residual));
    Ok(EquationReport {
        series: series.name(),
        group: group.to_string(),
        multiplier: spec.name().into(),
        weight,
        tol,
        passed: max_residual < tol,
        max_residual,
        samples,
        heuristic: series.heuristic(),
        degenerate: all_zero,
    })
}

/// ε(γ)² fitted from θ(γτ) = ε(γ)(cτ+d)^{1/2}θ(τ), compared with (−1/d).
pub fn fitted_epsilon_squared(g: &ModularElement, tau: C64, trunc: &TruncationSpec) -> Result<(C64, i32)> {
    let l = riemann_theta(&SiegelPoint::scalar(g.act(tau))?, trunc)?.value;
    let r = riemann_theta(&SiegelPoint::scalar(tau)?, trunc)?.value;
    let eps = l / (principal_power(g.j(tau), 0.5)? * r);
    Ok((eps * eps, kronecker_symbol(-1, g.d)))
}

/// e^{2πi/12}, the T-multiplier of ϑ₊(·; 1, √12).
pub fn hecke_t_multiplier() -> C64 {
    exp_pi_i(1.0 / 6.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn me(a: i64, b: i64, c: i64, d: i64) -> ModularElement {
        ModularElement::new(a, b, c, d).unwrap()
    }

    fn tr() -> TruncationSpec {
        TruncationSpec::new(1e-16, 4000).unwrap()
    }

    #[test]
    fn membership_examples() {
        let id = ModularElement::identity();
        for g in [GroupSpec::Full, GroupSpec::GammaTheta, GroupSpec::Gamma0(7), GroupSpec::Gamma0Upper2, GroupSpec::Gamma0Lower(3)] {
            assert!(g.contains(&id));
        }
        assert!(GroupSpec::GammaTheta.contains(&ModularElement::s()));
        assert!(!GroupSpec::GammaTheta.contains(&ModularElement::t(1)));
        assert!(ModularElement::new(1, 1, 1, 1).is_err());
        assert_eq!(GroupSpec::parse("gamma0:64").unwrap(), GroupSpec::Gamma0(64));
        assert!(GroupSpec::parse("nope").is_err());
    }

    #[test]
    fn sampler_soundness() {
        let one = sample_group_elements(GroupSpec::Full, 1, 1, 0).unwrap();
        assert!(one[0].height() <= 1);
        for (g, h) in [(GroupSpec::GammaTheta, 50), (GroupSpec::Gamma0(4), 30), (GroupSpec::Gamma0(64), 200), (GroupSpec::Gamma0Upper2, 20), (GroupSpec::Gamma0Lower(2), 30)] {
            let s = sample_group_elements(g, h, 15, 9).unwrap();
            assert_eq!(s.len(), 15);
            for m in &s {
                assert!(g.contains(m) && m.height() <= h);
                assert_eq!(m.a as i128 * m.d as i128 - m.b as i128 * m.c as i128, 1);
            }
            assert_eq!(s, sample_group_elements(g, h, 15, 9).unwrap());
        }
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_value(&MultiplierSpec::JacobiZeta, &me(1, 0, 2, 1)).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(multiplier_value(&MultiplierSpec::ThetaHalf, &ModularElement::identity()).unwrap(), C64::new(1.0, 0.0));
        // d ≡ 1 mod 4 with (2c/d) = 1: (1 0; 4 1) has (8/1) = 1.
        assert_eq!(multiplier_value(&MultiplierSpec::ThetaHalf, &me(1, 0, 4, 1)).unwrap(), C64::new(1.0, 0.0));
        assert!(matches!(multiplier_value(&MultiplierSpec::JacobiZeta, &me(2, 1, 1, 1)), Err(Error::Unsupported(_))));
        assert!(matches!(multiplier_value(&MultiplierSpec::ThetaHalf, &ModularElement::s()), Err(Error::Unsupported(_))));
        // η² under S is −i.
        assert!((multiplier_value(&MultiplierSpec::EtaSquared, &ModularElement::s()).unwrap() - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((multiplier_value(&MultiplierSpec::EtaSquared, &ModularElement::t(1)).unwrap() - hecke_t_multiplier()).norm() < 1e-15);
    }

    #[test]
    fn theta_law_and_negative_control() {
        let gs = sample_group_elements_where(GroupSpec::GammaTheta, 50, 20, 1, |g| g.c % 2 == 0).unwrap();
        let mut pts = Vec::new();
        for g in &gs {
            for tau in [C64::new(0.0, 1.0), C64::new(1.0 / 3.0, 2.0), C64::new(-0.5, 0.5)] {
                pts.push((*g, tau, None));
            }
        }
        let r = verify_equation(&Series::Theta, GroupSpec::GammaTheta, &MultiplierSpec::ThetaHalf, 0.5, &pts, 1e-9, &tr()).unwrap();
        assert!(r.passed, "{}", r.max_residual);
        let bad = verify_equation(&Series::Theta, GroupSpec::GammaTheta, &MultiplierSpec::ThetaHalfSwapped, 0.5, &pts, 1e-9, &tr()).unwrap();
        assert!(bad.max_residual > 0.1);
    }

    #[test]
    fn jacobi_law_both_branches() {
        let gs = sample_group_elements_where(GroupSpec::GammaTheta, 30, 20, 2, |g| g.c % 2 == 0 || g.d % 2 == 0).unwrap();
        let pts: Vec<_> = gs.iter().map(|g| (*g, C64::new(0.2, 1.1), Some(C64::new(0.3, 0.2)))).collect();
        let r = verify_equation(&Series::JacobiTheta, GroupSpec::GammaTheta, &MultiplierSpec::JacobiZeta, 0.5, &pts, 1e-9, &tr()).unwrap();
        assert!(r.passed, "{}", r.max_residual);
        let odd: Vec<_> = pts.iter().filter(|p| p.0.c % 2 != 0).cloned().collect();
        assert!(!odd.is_empty());
        let lit = verify_equation(&Series::JacobiTheta, GroupSpec::GammaTheta, &MultiplierSpec::JacobiZetaPrinted, 0.5, &odd, 1e-9, &tr()).unwrap();
        assert!(!lit.passed);
    }

    #[test]
    fn eta_squared_law_on_full_group() {
        let gs = sample_group_elements(GroupSpec::Full, 12, 10, 4).unwrap();
        let pts: Vec<_> = gs.iter().map(|g| (*g, C64::new(0.1, 1.3), None)).collect();
        let r = verify_equation(&Series::HeckePlus, GroupSpec::Full, &MultiplierSpec::EtaSquared, 1.0, &pts, 1e-9, &TruncationSpec::new(1e-15, 4000).unwrap()).unwrap();
        assert!(r.passed, "{:?}", r.samples.iter().map(|s| (s.gamma, s.residual)).collect::<Vec<_>>());
    }

    #[test]
    fn eta_cubed_law_for_odd_characteristic() {
        let gs = sample_group_elements(GroupSpec::Full, 15, 12, 6).unwrap();
        let pts: Vec<_> = gs.iter().map(|g| (*g, C64::new(-0.2, 0.9), None)).collect();
        let s = Series::CharDerivative { a: 0.5, b: 0.5 };
        let r = verify_equation(&s, GroupSpec::Full, &MultiplierSpec::EtaCubed, 1.5, &pts, 1e-8, &tr()).unwrap();
        assert!(r.passed && !r.degenerate, "{:?}", r.samples.iter().map(|s| (s.gamma, s.residual, s.lhs / (s.rhs * principal_power(s.gamma.j(s.tau), 1.5).unwrap()), s.multiplier)).collect::<Vec<_>>());
        let zero = Series::CharDerivative { a: 0.5, b: 0.0 };
        let r = verify_equation(&zero, GroupSpec::Full, &MultiplierSpec::EtaCubed, 1.5, &pts, 1e-8, &tr()).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn twisted_laws() {
        let chi = DirichletCharacter::from_real(&[0, 1, 0, -1]).unwrap();
        let gs = sample_group_elements(GroupSpec::Gamma0(64), 400, 10, 5).unwrap();
        let pts: Vec<_> = gs.iter().map(|g| (*g, C64::new(0.1, 0.9), None)).collect();
        let minus = Series::Twisted { psi: chi.clone(), t: 1, parity: Parity::Odd };
        let fixed = MultiplierSpec::PsiEpsWeight { psi: chi.clone(), t: 1, with_c_over_d: true };
        let r = verify_equation(&minus, GroupSpec::Gamma0(64), &fixed, 1.5, &pts, 1e-8, &tr()).unwrap();
        assert!(r.passed, "{}", r.max_residual);
        let principal = DirichletCharacter::principal(4).unwrap();
        let plus = Series::Twisted { psi: principal.clone(), t: 1, parity: Parity::Even };
        let m = MultiplierSpec::PsiEpsWeight { psi: principal, t: 1, with_c_over_d: true };
        let r = verify_equation(&plus, GroupSpec::Gamma0(64), &m, 0.5, &pts, 1e-8, &tr()).unwrap();
        assert!(r.passed, "{}", r.max_residual);
    }

    #[test]
    fn epsilon_squared_on_gamma00_2() {
        for g in sample_group_elements(GroupSpec::Gamma0Upper2, 20, 8, 3).unwrap() {
            let (e2, k) = fitted_epsilon_squared(&g, C64::new(0.1, 1.0), &tr()).unwrap();
            assert!((e2 - k as f64).norm() < 1e-9, "{g}: {e2} vs {k}");
        }
    }

    #[test]
    fn jacobi_group_law_and_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rand_el = |rng: &mut ChaCha8Rng| {
            let a: f64 = rng.gen_range(0.5..2.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let c: f64 = rng.gen_range(-1.0..1.0);
            let d = (1.0 + b * c) / a;
            JacobiGroupElement::new([[a, b], [c, d]], rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).unwrap()
        };
        for _ in 0..20 {
            let (g1, g2) = (rand_el(&mut rng), rand_el(&mut rng));
            let prod = g1.mul(&g2);
            let (e1, e2, e12) = (g1.to_sp4(), g2.to_sp4(), prod.to_sp4());
            for i in 0..4 {
                for j in 0..4 {
                    let v: f64 = (0..4).map(|r| e1[i][r] * e2[r][j]).sum();
                    assert!((v - e12[i][j]).abs() < 1e-12, "embedding is not a homomorphism");
                }
            }
            let (tau, z) = (C64::new(0.3, 0.8), C64::new(-0.2, 0.4));
            let (t2, z2) = g2.act(tau, z);
            let (t12, z12) = prod.act(tau, z);
            let (t1, z1) = g1.act(t2, z2);
            assert!((t1 - t12).norm() < 1e-12 && (z1 - z12).norm() < 1e-12);
            for (m, k) in [(1.0, 2.0), (0.5, 1.0), (3.0, 4.0)] {
                let lhs = jacobi_automorphy(&prod, m, k, tau, z).unwrap();
                let rhs = jacobi_automorphy(&g1, m, k, t2, z2).unwrap() * jacobi_automorphy(&g2, m, k, tau, z).unwrap();
                assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
            }
        }
        let id = JacobiGroupElement::identity();
        assert_eq!(jacobi_automorphy(&id, 0.5, 0.5, C64::new(0.0, 1.0), C64::new(0.1, 0.1)).unwrap(), C64::new(1.0, 0.0));
        let h = JacobiGroupElement::new([[1.0, 0.0], [0.0, 1.0]], 0.0, 0.0, 0.3).unwrap();
        let v = jacobi_automorphy(&h, 2.0, 0.5, C64::new(0.0, 1.0), C64::new(0.1, 0.1)).unwrap();
        assert!((v - (C64::new(0.0, 2.0 * PI * 2.0 * 0.3)).exp()).norm() < 1e-14);
    }

    #[test]
    fn lift_round_trip_and_rotation() {
        let f = |t: C64| (C64::new(0.0, 2.0 * PI) * t).exp();
        let phi = lift_function(f, 2.0);
        assert!((lift_function(|_| C64::new(1.0, 0.0), 0.5)(&[[1.0, 0.0], [0.0, 1.0]]).unwrap() - 1.0).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let tau = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..2.0));
            let back = descend(&phi, 2.0, tau).unwrap();
            assert!((back - f(tau)).norm() < 1e-12);
            let g = g_tau(C64::new(0.2, 0.7));
            let th = rng.gen_range(0.0..6.0);
            let rot = phi(&sl2_mul(&g, &rotation(th))).unwrap();
            assert!((rot - C64::from_polar(1.0, 2.0 * th) * phi(&g).unwrap()).norm() < 1e-12);
        }
    }
}
