//! Command-line front end. Exit codes: 0 pass, 1 verification failure, 2 usage or domain error.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hecke::{eta_sq_qexp, hecke_qexp, hecke_theta, qexp_csv, HeckeMode, QuadFieldElement, QTerm};
use crate::numerics::{TruncationSpec, C64};
use crate::quadforms::{QuadraticSpace, SymForm};
use crate::report::SuiteReport;
use crate::suites::{run_suite, SuiteOptions, SuiteRun, SUITE_NAMES};
use crate::theta_classical::{
    jacobi_theta, riemann_theta, theta_quadform, theta_with_char, twisted_theta, Characteristic, DirichletCharacter, JacobiArgument, Parity, SiegelPoint,
};
use crate::theta_indefinite::{rs_phi_eval, richter_theta, shimura_kernel, siegel_theta, RSData, ShimuraCutoffs, ShimuraInput, SiegelThetaInput, ThetaConvention};
use crate::weylrep::harmonic::{harmonic_basis, harmonic_dim, harmonic_nullity};
use crate::weylrep::scalar::ExactScalar;
use crate::weylrep::suites::{bracket_tables, homomorphism_checks};
use crate::weylrep::{Algebra, Polynomial, Rational};

#[derive(Debug, Parser)]
#[command(name = "theta-lab", version, about = "Theta series evaluation and identity verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a series and print its value with truncation data.
    Eval(EvalArgs),
    /// Exact q-expansion coefficients.
    Qexp(QexpArgs),
    /// Run a verification suite, or `all`.
    Verify(VerifyArgs),
    /// Check that a Weyl-algebra realization respects the Lie bracket.
    LieCheck(LieArgs),
    /// Basis and dimension of harmonic polynomials.
    Harmonics(HarmonicArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Riemann,
    Jacobi,
    Char,
    Quadform,
    Siegel,
    Richter,
    Hecke,
    Shimura,
    Twisted,
    Rs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Plus,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    TwoPiI,
    PiI,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub series: SeriesKind,
    /// Genus (size of tau) for riemann, jacobi, quadform and richter.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Row-major complex entries, e.g. `0+1i` or `1+0.5i,0.2,0.2,1+0.7i`.
    #[arg(long, allow_hyphen_values = true)]
    pub tau: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Size of S (or the lattice rank) for quadform, siegel and richter.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Row-major real entries of S.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Row-major real entries of a majorant P.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Integral m x n matrix zeta for richter.
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
    #[arg(long, value_enum, default_value_t = ConventionArg::TwoPiI)]
    pub convention: ConventionArg,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub b: String,
    /// z-derivative for char.
    #[arg(long)]
    pub deriv: bool,
    /// Squarefree radicand of the real quadratic field.
    #[arg(long = "D")]
    pub d: Option<i64>,
    #[arg(long = "Q", default_value_t = 1)]
    pub q_level: u64,
    /// `a` or `a,b` for a + b sqrt(D), rational entries allowed.
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Plus)]
    pub mode: ModeArg,
    /// Character values on 0..N-1.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Class function u on Z/NZ for shimura.
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, default_value_t = 12)]
    pub radius: i64,
    #[arg(long)]
    pub norm_bound: Option<f64>,
    /// Signature (p, q) and degree m for rs.
    #[arg(long = "sig-p", default_value_t = 2)]
    pub sig_p: usize,
    #[arg(long = "sig-q", default_value_t = 1)]
    pub sig_q: usize,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    /// Evaluation point for rs.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, default_value_t = 1e-15)]
    pub target_tail: f64,
    #[arg(long, default_value_t = 4000)]
    pub max_radius: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QexpKind {
    Hecke,
    EtaSq,
}

#[derive(Debug, Args)]
pub struct QexpArgs {
    pub series: QexpKind,
    #[arg(long = "D", default_value_t = 3)]
    pub d: i64,
    #[arg(long = "Q", default_value_t = 1)]
    pub q_level: u64,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub alpha: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Plus)]
    pub mode: ModeArg,
    /// Largest |N(mu)| enumerated.
    #[arg(long, default_value_t = 481)]
    pub max_norm: u64,
    /// Number of eta^2 coefficients beyond the constant one.
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of the suite names, or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, hide = true)]
    pub corrupt_multiplier: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LieArgs {
    /// `sp:N`, `sl2:P,Q`, `o:P,Q`, `o21` or `jacobi`; all tables when omitted.
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HarmonicArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `re+imi`, `re-imi`, `re`, `imi`, `i` and `-i`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Domain(format!("cannot parse complex number {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(C64::new(num(&t).and_then(|v| if t == "+" || t == "-" { Err(bad()) } else { Ok(v) })?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?)),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

pub fn parse_complex_list(s: &str) -> Result<Vec<C64>> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| Error::Domain(format!("cannot parse number {x:?}")))).collect()
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| Error::Domain(format!("cannot parse integer {x:?}")))).collect()
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Domain(format!("cannot parse rational {s:?}")))
}

/// Row-major r x c matrix from a flat list.
pub fn matrix_from<T: nalgebra::Scalar + Copy>(vals: &[T], rows: usize, cols: usize) -> Result<DMatrix<T>> {
    if vals.len() != rows * cols {
        return Err(Error::Domain(format!("expected {} entries for a {rows}x{cols} matrix, got {}", rows * cols, vals.len())));
    }
    Ok(DMatrix::from_row_slice(rows, cols, vals))
}

fn square_dim(len: usize, hint: Option<usize>) -> Result<usize> {
    if let Some(d) = hint {
        return Ok(d);
    }
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len {
        return Err(Error::Domain(format!("{len} entries do not form a square matrix; pass --dim")));
    }
    Ok(d)
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::Domain(format!("--{flag} is required")))
}

fn parse_alpha(s: &str, d: i64) -> Result<QuadFieldElement> {
    let parts: Vec<&str> = s.split(',').collect();
    let (a, b) = match parts.as_slice() {
        [a] => (parse_rational(a)?, Rational::from_integer(0.into())),
        [a, b] => (parse_rational(a)?, parse_rational(b)?),
        _ => return Err(Error::Domain("--alpha takes `a` or `a,b`".into())),
    };
    QuadFieldElement::new(a, b, d)
}

fn character(s: &str) -> Result<DirichletCharacter> {
    DirichletCharacter::new(parse_complex_list(s)?)
}

fn scalar_tau(a: &EvalArgs) -> Result<C64> {
    let v = parse_complex_list(&a.tau)?;
    if v.len() != 1 {
        return Err(Error::Domain("--tau must be a single complex number here".into()));
    }
    Ok(v[0])
}

fn siegel_point(a: &EvalArgs, n: usize) -> Result<SiegelPoint> {
    SiegelPoint::new(matrix_from(&parse_complex_list(&a.tau)?, n, n)?)
}

fn real_square(s: &str, hint: Option<usize>) -> Result<DMatrix<f64>> {
    let v = parse_real_list(s)?;
    let d = square_dim(v.len(), hint)?;
    matrix_from(&v, d, d)
}

fn rs_data(a: &EvalArgs) -> Result<RSData> {
    let (p, q, k, m) = (a.sig_p, a.sig_q, a.k, a.m);
    let iu = ExactScalar::from_qi(crate::weylrep::scalar::qi(crate::weylrep::scalar::rat(0, 1), crate::weylrep::scalar::rat(1, 1)));
    // (x₁ + i x₂)^k is harmonic; in one variable only degrees 0 and 1 are.
    let first = |n: usize, deg: u32| -> Result<Polynomial> {
        if n >= 2 {
            Ok(Polynomial::var(n, 0).add(&Polynomial::var(n, 1).scale(&iu)).pow(deg))
        } else if n == 1 && deg <= 1 {
            Ok(Polynomial::var(1, 0).pow(deg))
        } else if n == 0 && deg == 0 {
            Ok(Polynomial::one(0))
        } else {
            Err(Error::Domain(format!("no harmonic of degree {deg} in {n} variable(s) is built in")))
        }
    };
    RSData::new(p, q, k, m, first(p, k)?, first(q, m)?)
}

fn eval_series(a: &EvalArgs) -> Result<serde_json::Value> {
    let trunc = TruncationSpec::new(a.target_tail, a.max_radius)?;
    let z_list = || -> Result<Vec<C64>> { a.z.as_deref().map(parse_complex_list).unwrap_or_else(|| Ok(vec![C64::new(0.0, 0.0); a.n])) };
    let r = match a.series {
        SeriesKind::Riemann => riemann_theta(&siegel_point(a, a.n)?, &trunc)?.to_json(),
        SeriesKind::Jacobi => jacobi_theta(&JacobiArgument::new(siegel_point(a, a.n)?, z_list()?)?, &trunc)?.to_json(),
        SeriesKind::Char => {
            let ch = Characteristic { a: a.a.parse().map_err(|_| Error::Domain("bad --a".into()))?, b: a.b.parse().map_err(|_| Error::Domain("bad --b".into()))? };
            let z = a.z.as_deref().map(parse_complex).transpose()?.unwrap_or(C64::new(0.0, 0.0));
            theta_with_char(ch, scalar_tau(a)?, z, a.deriv, &trunc)?.to_json()
        }
        SeriesKind::Quadform => {
            let s = real_square(need(&a.s, "s")?, a.dim)?;
            let h = s.nrows();
            let z = match &a.z {
                Some(z) => matrix_from(&parse_complex_list(z)?, a.n, h)?,
                None => DMatrix::zeros(a.n, h),
            };
            theta_quadform(&s, &siegel_point(a, a.n)?, &z, &trunc)?.to_json()
        }
        SeriesKind::Siegel => {
            let s = real_square(need(&a.s, "s")?, a.dim)?;
            let mut space = QuadraticSpace::from_form(SymForm::new(s.clone())?)?;
            if let Some(p) = &a.p {
                space = space.with_majorant(real_square(p, Some(s.nrows()))?)?;
            }
            let mut inp = SiegelThetaInput::new(space, scalar_tau(a)?)?;
            if let Some(sh) = &a.shift {
                inp = inp.with_shift(parse_real_list(sh)?)?;
            }
            let conv = if a.convention == ConventionArg::PiI { ThetaConvention::PiI } else { ThetaConvention::TwoPiI };
            siegel_theta(&inp.with_convention(conv), &trunc)?.to_json()
        }
        SeriesKind::Richter => {
            let s = real_square(need(&a.s, "s")?, a.dim)?;
            let m = s.nrows();
            let p = real_square(need(&a.p, "p")?, Some(m))?;
            let zeta = matrix_from(&parse_int_list(need(&a.zeta, "zeta")?)?, m, a.n)?;
            let tau = siegel_point(a, a.n)?;
            let z = match &a.z {
                Some(z) => {
                    let v = parse_complex_list(z)?;
                    matrix_from(&v, a.n, v.len() / a.n.max(1))?
                }
                None => DMatrix::zeros(a.n, a.n),
            };
            let r = richter_theta(&s, &p, &zeta, &tau, &z, &trunc)?;
            let mut v = r.series.to_json();
            v["hypothesis_holds"] = r.hypothesis_holds.into();
            v
        }
        SeriesKind::Hecke => {
            let d = a.d.ok_or_else(|| Error::Domain("--D is required".into()))?;
            let mode = if a.mode == ModeArg::Plus { HeckeMode::Plus } else { HeckeMode::Full };
            hecke_theta(scalar_tau(a)?, &parse_alpha(&a.alpha, d)?, a.q_level, mode, &trunc)?.to_json()
        }
        SeriesKind::Shimura => {
            let u = parse_complex_list(need(&a.u, "u")?)?;
            let psi = match &a.psi {
                Some(p) => character(p)?,
                None => DirichletCharacter::principal(u.len() as u64)?,
            };
            let z = parse_complex(need(&a.z, "z")?)?;
            let inp = ShimuraInput::new(a.k, u, &psi, z, scalar_tau(a)?)?;
            let cut = match a.norm_bound {
                Some(b) => ShimuraCutoffs::new(a.radius, b)?,
                None => ShimuraCutoffs::radius(a.radius)?,
            };
            shimura_kernel(&inp, &cut)?.to_json()
        }
        SeriesKind::Twisted => {
            let psi = character(need(&a.psi, "psi")?)?;
            let parity = match a.parity {
                Some(ParityArg::Even) => Parity::Even,
                Some(ParityArg::Odd) => Parity::Odd,
                None if psi.is_odd() => Parity::Odd,
                None => Parity::Even,
            };
            twisted_theta(&psi, a.t, parity, scalar_tau(a)?, &trunc)?.to_json()
        }
        SeriesKind::Rs => {
            let data = rs_data(a)?;
            let x = parse_real_list(need(&a.x, "x")?)?;
            let v = rs_phi_eval(&data, scalar_tau(a)?, &x)?;
            json!({"value": {"re": v.re, "im": v.im}, "psi": data.psi()?.to_string(), "d": data.d().to_string()})
        }
    };
    Ok(r)
}

fn qexp_terms(a: &QexpArgs) -> Result<Vec<QTerm>> {
    match a.series {
        QexpKind::Hecke => {
            let mode = if a.mode == ModeArg::Plus { HeckeMode::Plus } else { HeckeMode::Full };
            hecke_qexp(&parse_alpha(&a.alpha, a.d)?, a.q_level, mode, a.max_norm)
        }
        // η² = Σ c_n q^{(12n+1)/12}.
        QexpKind::EtaSq => Ok(eta_sq_qexp(a.terms)?
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(n, coeff)| QTerm { exp_num: 12 * n as i64 + 1, exp_den: 12, coeff })
            .collect()),
    }
}

fn parse_algebra(s: &str) -> Result<Algebra> {
    let bad = || Error::Domain(format!("unknown algebra {s:?}"));
    let nums = |x: &str| -> Result<Vec<usize>> { x.split(',').map(|v| v.trim().parse::<usize>().map_err(|_| bad())).collect() };
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    match (head, nums(rest).ok().as_deref()) {
        ("o21", _) => Ok(Algebra::O21Example),
        ("jacobi", _) => Ok(Algebra::Jacobi { m: Rational::new(1.into(), 2.into()) }),
        ("sp", Some([n])) if *n >= 1 => Ok(Algebra::Sp { n: *n }),
        ("sl2", Some([p, q])) if p + q >= 1 => Ok(Algebra::Sl2Embedded { p: *p, q: *q }),
        ("o", Some([p, q])) if p + q >= 2 => Ok(Algebra::Opq { p: *p, q: *q }),
        _ => Err(bad()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Domain(format!("cannot write to stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).unwrap_or_default()
}

/// Runs the suites on worker threads and returns them ordered by name.
pub fn run_suites(names: &[&str], opts: &SuiteOptions) -> Result<Vec<SuiteRun>> {
    let results: Vec<Result<SuiteRun>> = std::thread::scope(|sc| {
        let handles: Vec<_> = names.iter().map(|n| sc.spawn(move || run_suite(n, opts))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Error::Conditioning("suite worker panicked".into())))).collect()
    });
    let mut runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    runs.sort_by(|a, b| a.suite.cmp(&b.suite));
    Ok(runs)
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let opts = SuiteOptions { seed: a.seed, samples: a.samples, tol: a.tol, terms: a.terms, corrupt_multiplier: a.corrupt_multiplier };
    let names: Vec<&str> = if a.suite == "all" { SUITE_NAMES.to_vec() } else { vec![a.suite.as_str()] };
    if let Some(bad) = names.iter().find(|n| !SUITE_NAMES.contains(n)) {
        return Err(Error::Domain(format!("unknown suite {bad}; expected one of {} or all", SUITE_NAMES.join(", "))));
    }
    let runs = run_suites(&names, &opts)?;
    let passed = runs.iter().all(|r| r.passed());
    let report = if runs.len() == 1 {
        runs[0].to_json()
    } else {
        json!({"passed": passed, "suites": runs.iter().map(|r| r.to_json()).collect::<Vec<_>>()})
    };
    emit(&a.out, &pretty(&report))?;
    for r in &runs {
        for c in &r.criteria {
            for f in c.report.failures() {
                eprintln!("FAIL {} [{}] {}", r.suite, c.number, f.id);
            }
        }
    }
    Ok(if passed { 0 } else { 1 })
}

fn lie_check(a: &LieArgs) -> Result<i32> {
    let report = match &a.algebra {
        None => bracket_tables()?,
        Some(s) => {
            let alg = parse_algebra(s)?;
            SuiteReport::new(format!("lie-check {alg}"), homomorphism_checks(&alg)?)
        }
    };
    emit(&a.out, &pretty(&serde_json::to_value(&report).unwrap_or_default()))?;
    Ok(if report.passed { 0 } else { 1 })
}

fn harmonics(a: &HarmonicArgs) -> Result<i32> {
    if a.p + a.q == 0 {
        return Err(Error::Domain("p + q must be positive".into()));
    }
    let basis = harmonic_basis(a.p, a.q, a.m);
    let nullity = harmonic_nullity(a.p, a.q, a.m);
    let mut v = json!({
        "p": a.p, "q": a.q, "m": a.m,
        "nullity": nullity,
        "basis": basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
    });
    let mut ok = basis.len() == nullity;
    if a.q == 0 {
        let f = harmonic_dim(a.p, a.m as usize);
        v["dim_formula"] = f.into();
        ok &= f == nullity as u64;
    }
    emit(&a.out, &pretty(&v))?;
    Ok(if ok { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Eval(a) => {
            emit(&a.out, &pretty(&eval_series(a)?))?;
            Ok(0)
        }
        Command::Qexp(a) => {
            let terms = qexp_terms(a)?;
            let text = match a.format {
                Format::Csv => qexp_csv(&terms).trim_end().to_string(),
                Format::Json => pretty(&serde_json::to_value(&terms).unwrap_or_default()),
            };
            emit(&a.out, &text)?;
            Ok(0)
        }
        Command::Verify(a) => verify(a),
        Command::LieCheck(a) => lie_check(a),
        Command::Harmonics(a) => harmonics(a),
    }
}

/// Parses the arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0+1i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("0-1i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("-0.5+0.5i").unwrap(), C64::new(-0.5, 0.5));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C64::new(1e-3, 20.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        let z = C64::new(0.1 + 0.2, -1.0 / 3.0);
        assert_eq!(parse_complex(&format!("{}{:+}i", z.re, z.im)).unwrap(), z);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["theta-lab", "eval", "riemann", "--n", "1", "--tau", "0+1i"]), 0);
        assert_eq!(run(["theta-lab", "eval", "riemann", "--n", "1", "--tau", "0-1i"]), 2);
        assert_eq!(run(["theta-lab", "eval", "hecke", "--D", "3", "--Q", "1", "--alpha", "1", "--mode", "plus", "--tau", "0+2i"]), 0);
        assert_eq!(run(["theta-lab", "verify", "nope"]), 2);
        assert_eq!(run(["theta-lab", "eval", "riemann", "--bogus", "1", "--tau", "0+1i"]), 2);
        assert_eq!(run(["theta-lab", "harmonics", "--p", "3", "--m", "2"]), 0);
        assert_eq!(run(["theta-lab", "lie-check", "--algebra", "sl2:2,1"]), 0);
        assert_eq!(run(["theta-lab", "lie-check", "--algebra", "su:3"]), 2);
    }

    #[test]
    fn algebra_and_alpha_parsing() {
        assert_eq!(parse_algebra("sp:2").unwrap(), Algebra::Sp { n: 2 });
        assert_eq!(parse_algebra("o:2,1").unwrap(), Algebra::Opq { p: 2, q: 1 });
        assert!(parse_algebra("sp").is_err());
        let a = parse_alpha("1/2,1/2", 5).unwrap();
        assert!(a.is_integral());
        assert!(parse_alpha("1,2,3", 5).is_err());
    }
}
