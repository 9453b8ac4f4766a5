//! Symmetric forms, diagonalising frames, majorants and lattice enumeration.

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};

const TOL: f64 = 1e-9;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = 1.0f64.max(max_abs(a)).max(max_abs(b));
    (a - b).iter().all(|x| x.abs() <= tol * scale)
}

/// Nondegenerate real symmetric matrix S, with S[x] = ᵗxSx.
#[derive(Debug, Clone, PartialEq)]
pub struct SymForm {
    entries: DMatrix<f64>,
}

impl SymForm {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return domain("form must be a nonempty square matrix");
        }
        if !close(&entries, &entries.transpose(), TOL) {
            return domain("form is not symmetric");
        }
        let eig = entries.clone().symmetric_eigenvalues();
        let big = eig.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let small = eig.iter().fold(f64::INFINITY, |a, x| a.min(x.abs()));
        if !(small > 1e-12 * big.max(1e-300)) {
            return Err(Error::Conditioning("form is singular or nearly so".into()));
        }
        Ok(SymForm { entries })
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        SymForm::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(d)))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// S[x] = ᵗxSx.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.entries[(i, j)] * x[j];
            }
        }
        s
    }
}

/// Symmetric positive-definite P with PS⁻¹P = S.
#[derive(Debug, Clone, PartialEq)]
pub struct Majorant {
    entries: DMatrix<f64>,
}

impl Majorant {
    pub fn new(form: &SymForm, p: DMatrix<f64>) -> Result<Self> {
        if !is_majorant(form, &p) {
            return Err(Error::Precondition("matrix is not a majorant of the form".into()));
        }
        Ok(Majorant { entries: p })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// A form together with its signature, a diagonalising frame and a majorant.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSpace {
    pub form: SymForm,
    pub p: usize,
    pub q: usize,
    pub frame: DMatrix<f64>,
    pub majorant: Majorant,
}

impl QuadraticSpace {
    pub fn from_form(form: SymForm) -> Result<Self> {
        let (p, q, frame) = signature_frame(&form)?;
        let majorant = majorant_from_frame(&frame)?;
        Ok(QuadraticSpace { form, p, q, frame, majorant })
    }

    /// Same form with a different majorant.
    pub fn with_majorant(&self, p: DMatrix<f64>) -> Result<Self> {
        let majorant = Majorant::new(&self.form, p)?;
        Ok(QuadraticSpace { majorant, ..self.clone() })
    }

    /// S₀ = diag(1_p, −1_q).
    pub fn standard_form(&self) -> DMatrix<f64> {
        standard_form(self.p, self.q)
    }
}

pub fn standard_form(p: usize, q: usize) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(p + q, p + q);
    for i in 0..p + q {
        d[(i, i)] = if i < p { 1.0 } else { -1.0 };
    }
    d
}

/// Signature (p, q) and a frame C with ᵗCSC = diag(1_p, −1_q).
pub fn signature_frame(form: &SymForm) -> Result<(usize, usize, DMatrix<f64>)> {
    let n = form.dim();
    let eig = form.matrix().clone().symmetric_eigen();
    let big = eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut cols: Vec<(bool, usize, f64, Vec<f64>)> = Vec::with_capacity(n);
    for k in 0..n {
        let lam = eig.eigenvalues[k];
        if lam.abs() <= 1e-12 * big {
            return Err(Error::Conditioning("form is singular or nearly so".into()));
        }
        let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().cloned().collect();
        // Orient and order by the dominant coordinate so diagonal inputs give permutation-free frames.
        let (lead, _) = v.iter().enumerate().fold((0, 0.0f64), |acc, (i, x)| {
            if x.abs() > acc.1 + 1e-12 {
                (i, x.abs())
            } else {
                acc
            }
        });
        if v[lead] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let scale = 1.0 / lam.abs().sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
        cols.push((lam < 0.0, lead, lam, v));
    }
    cols.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let p = cols.iter().filter(|c| !c.0).count();
    let mut c = DMatrix::zeros(n, n);
    for (k, col) in cols.iter().enumerate() {
        for i in 0..n {
            c[(i, k)] = col.3[i];
        }
    }
    Ok((p, n - p, c))
}

/// P = (C ᵗC)⁻¹.
pub fn majorant_from_frame(frame: &DMatrix<f64>) -> Result<Majorant> {
    let gram = frame * frame.transpose();
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::Domain("frame is singular".into()))?;
    let sym = (&inv + inv.transpose()) * 0.5;
    Ok(Majorant { entries: sym })
}

/// Siegel's conditions: ᵗP = P > 0 and PS⁻¹P = S.
pub fn is_majorant(form: &SymForm, p: &DMatrix<f64>) -> bool {
    let s = form.matrix();
    if p.shape() != s.shape() || !close(p, &p.transpose(), TOL) {
        return false;
    }
    if p.clone().cholesky().is_none() {
        return false;
    }
    let Some(s_inv) = s.clone().try_inverse() else {
        return false;
    };
    close(&(p * s_inv * p), s, TOL)
}

/// True when ᵗASA = S.
pub fn in_orthogonal_group(form: &SymForm, a: &DMatrix<f64>) -> bool {
    a.shape() == form.matrix().shape() && close(&(a.transpose() * form.matrix() * a), form.matrix(), TOL)
}

/// P[A] = ᵗAPA for A ∈ O(S).
pub fn transport_majorant(form: &SymForm, p: &Majorant, a: &DMatrix<f64>) -> Result<Majorant> {
    if !in_orthogonal_group(form, a) {
        return Err(Error::Precondition("transport matrix is not in O(S)".into()));
    }
    let m = a.transpose() * p.matrix() * a;
    let m = (&m + m.transpose()) * 0.5;
    Ok(Majorant { entries: m })
}

/// exp(S⁻¹W) for skew-symmetric W, an element of the identity component of O(S).
pub fn orthogonal_from_skew(form: &SymForm, w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if w.shape() != form.matrix().shape() || !close(w, &(-w.transpose()), TOL) {
        return Err(Error::Precondition("generator must be skew-symmetric of the form's size".into()));
    }
    let s_inv = form
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("form is not invertible".into()))?;
    Ok((s_inv * w).exp())
}

/// P[A] for A = exp(S⁻¹W), W skew with entries uniform in [−scale, scale].
pub fn random_majorant<R: rand::Rng>(space: &QuadraticSpace, rng: &mut R, scale: f64) -> Result<Majorant> {
    let n = space.form.dim();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = rng.gen_range(-scale..=scale);
            w[(i, j)] = v;
            w[(j, i)] = -v;
        }
    }
    let a = orthogonal_from_skew(&space.form, &w)?;
    transport_majorant(&space.form, &space.majorant, &a)
}

/// All x ∈ ℤⁿ with ᵗxPx ≤ bound, in lexicographic order.
pub fn enumerate_lattice(p: &DMatrix<f64>, bound: f64) -> Result<Vec<Vec<i64>>> {
    let n = p.nrows();
    if !p.is_square() {
        return domain("matrix must be square");
    }
    if bound < 0.0 || !bound.is_finite() {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    // Reverse the coordinates so the outermost enumeration level is x₁.
    let rev = DMatrix::from_fn(n, n, |i, j| p[(n - 1 - i, n - 1 - j)]);
    let chol = rev
        .cholesky()
        .ok_or_else(|| Error::Domain("matrix is not positive definite".into()))?;
    let r = chol.l().transpose();
    let mut qd = vec![0.0; n];
    let mut qo = DMatrix::zeros(n, n);
    for i in 0..n {
        qd[i] = r[(i, i)] * r[(i, i)];
        for j in i + 1..n {
            qo[(i, j)] = r[(i, j)] / r[(i, i)];
        }
    }
    let slack = 1e-9 * (1.0 + bound);
    let exact = |x: &[i64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] as f64 * p[(i, j)] * x[j] as f64;
            }
        }
        s
    };
    let mut out = Vec::new();
    let mut y = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let mut rem = vec![0.0; n + 1];
    rem[n] = bound + slack;
    let mut level = n - 1;
    let centre = |y: &[i64], i: usize, qo: &DMatrix<f64>| -> f64 {
        let mut c = 0.0;
        for j in i + 1..n {
            c -= qo[(i, j)] * y[j] as f64;
        }
        c
    };
    let start = |i: usize, y: &mut [i64], hi: &mut [i64], rem: &[f64]| {
        let c = centre(y, i, &qo);
        let w = (rem[i + 1].max(0.0) / qd[i]).sqrt();
        y[i] = (c - w).ceil() as i64;
        hi[i] = (c + w).floor() as i64;
    };
    start(level, &mut y, &mut hi, &rem);
    loop {
        if y[level] > hi[level] {
            if level == n - 1 {
                break;
            }
            level += 1;
            y[level] += 1;
            continue;
        }
        let c = centre(&y, level, &qo);
        let d = y[level] as f64 - c;
        rem[level] = rem[level + 1] - qd[level] * d * d;
        if level == 0 {
            let x: Vec<i64> = y.iter().rev().cloned().collect();
            if exact(&x) <= bound + 1e-12 * (1.0 + bound) {
                out.push(x);
            }
            y[0] += 1;
        } else {
            level -= 1;
            start(level, &mut y, &mut hi, &rem);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn skew_exponential_is_orthogonal() {
        let space = QuadraticSpace::from_form(SymForm::diagonal(&[1.0, 1.0, -1.0]).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let p = random_majorant(&space, &mut rng, 0.8).unwrap();
            assert!(is_majorant(&space.form, p.matrix()));
        }
        let w = DMatrix::from_row_slice(2, 2, &[0.0, 0.7, -0.7, 0.0]);
        let s = SymForm::diagonal(&[1.0, -2.0]).unwrap();
        let a = orthogonal_from_skew(&s, &w).unwrap();
        assert!(in_orthogonal_group(&s, &a));
        assert!(orthogonal_from_skew(&s, &DMatrix::identity(2, 2)).is_err());
    }

    fn m(n: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, v)
    }

    #[test]
    fn frame_examples() {
        let s = SymForm::diagonal(&[1.0, -1.0]).unwrap();
        let (p, q, c) = signature_frame(&s).unwrap();
        assert_eq!((p, q), (1, 1));
        assert!(close(&c, &DMatrix::identity(2, 2), 1e-12));

        let s = SymForm::diagonal(&[4.0, -1.0]).unwrap();
        let (p, q, c) = signature_frame(&s).unwrap();
        assert_eq!((p, q), (1, 1));
        assert!(close(&c, &m(2, &[0.5, 0.0, 0.0, 1.0]), 1e-12));
        assert!(close(&(c.transpose() * s.matrix() * &c), &standard_form(1, 1), 1e-10));

        let s = SymForm::diagonal(&[1.0, 1.0, -1.0]).unwrap();
        let (p, q, c) = signature_frame(&s).unwrap();
        assert_eq!((p, q), (2, 1));
        assert!(close(&c, &DMatrix::identity(3, 3), 1e-12));

        let s = SymForm::new(m(2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let (p, q, c) = signature_frame(&s).unwrap();
        assert_eq!((p, q), (1, 1));
        assert!(close(&(c.transpose() * s.matrix() * &c), &standard_form(1, 1), 1e-10));
    }

    #[test]
    fn degenerate_form_rejected() {
        assert!(SymForm::new(m(2, &[1.0, 1.0, 1.0, 1.0])).is_err());
        assert!(SymForm::new(m(2, &[1.0, 2.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn majorant_examples() {
        let p = majorant_from_frame(&DMatrix::identity(2, 2)).unwrap();
        assert!(close(p.matrix(), &DMatrix::identity(2, 2), 1e-14));
        let s = SymForm::diagonal(&[4.0, -1.0]).unwrap();
        let p = majorant_from_frame(&m(2, &[0.5, 0.0, 0.0, 1.0])).unwrap();
        assert!(close(p.matrix(), &m(2, &[4.0, 0.0, 0.0, 1.0]), 1e-14));
        assert!(is_majorant(&s, p.matrix()));

        let s0 = SymForm::diagonal(&[1.0, -1.0]).unwrap();
        assert!(is_majorant(&s0, &DMatrix::identity(2, 2)));
        assert!(!is_majorant(&s0, &m(2, &[2.0, 0.0, 0.0, 2.0])));
        let pd = SymForm::new(m(2, &[2.0, 1.0, 1.0, 3.0])).unwrap();
        assert!(is_majorant(&pd, pd.matrix()));
    }

    #[test]
    fn hyperbolic_transport() {
        let s = SymForm::diagonal(&[1.0, -1.0]).unwrap();
        let p = Majorant::new(&s, DMatrix::identity(2, 2)).unwrap();
        let t: f64 = 0.37;
        let a = m(2, &[t.cosh(), t.sinh(), t.sinh(), t.cosh()]);
        let pa = transport_majorant(&s, &p, &a).unwrap();
        let expect = m(2, &[(2.0 * t).cosh(), (2.0 * t).sinh(), (2.0 * t).sinh(), (2.0 * t).cosh()]);
        assert!(close(pa.matrix(), &expect, 1e-12));
        assert!(is_majorant(&s, pa.matrix()));
        let same = transport_majorant(&s, &p, &DMatrix::identity(2, 2)).unwrap();
        assert!(close(same.matrix(), p.matrix(), 1e-15));
        let u: f64 = -0.8;
        let b = m(2, &[u.cosh(), u.sinh(), u.sinh(), u.cosh()]);
        let pab = transport_majorant(&s, &pa, &b).unwrap();
        let p_ab = transport_majorant(&s, &p, &(&a * &b)).unwrap();
        assert!(close(pab.matrix(), p_ab.matrix(), 1e-12));
        assert!(transport_majorant(&s, &p, &m(2, &[2.0, 0.0, 0.0, 1.0])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let v = enumerate_lattice(&m(1, &[1.0]), 4.0).unwrap();
        assert_eq!(v, vec![vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
        let v = enumerate_lattice(&DMatrix::identity(2, 2), 1.0).unwrap();
        assert_eq!(v, vec![vec![-1, 0], vec![0, -1], vec![0, 0], vec![0, 1], vec![1, 0]]);
        let v = enumerate_lattice(&m(2, &[1.0, 0.0, 0.0, 4.0]), 4.0).unwrap();
        let mut brute = Vec::new();
        for a in -2i64..=2 {
            for b in -1i64..=1 {
                if a * a + 4 * b * b <= 4 {
                    brute.push(vec![a, b]);
                }
            }
        }
        assert_eq!(v.len(), 7);
        assert_eq!(v, brute);
        assert!(enumerate_lattice(&m(1, &[1.0]), -1.0).unwrap().is_empty());
    }
}
