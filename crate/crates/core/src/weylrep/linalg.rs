//! Exact Gaussian elimination over ℚ(i).

use num_traits::Zero;

use super::scalar::{qi_inv, QI};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<QI>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = qi_inv(&m[r][c]).expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<QI>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Basis of {v : M v = 0}.
pub fn nullspace(m: &[Vec<QI>], cols: usize) -> Vec<Vec<QI>> {
    let mut w = m.to_vec();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![QI::zero(); cols];
            v[f] = super::scalar::qi_int(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

/// Solves Σ_k c_k·cols[k] = target exactly, if solvable.
pub fn solve(cols: &[Vec<QI>], target: &[QI]) -> Option<Vec<QI>> {
    let n = cols.len();
    let len = target.len();
    let mut m: Vec<Vec<QI>> = (0..len)
        .map(|i| {
            let mut row: Vec<QI> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![QI::zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][n].clone();
    }
    Some(x)
}

/// Factors a fixed column set once so that many right-hand sides can be solved cheaply.
pub struct ColumnSolver {
    n: usize,
    pivots: Vec<usize>,
    // rows of the row-reduction transform E, with E·M in reduced echelon form
    transform: Vec<Vec<QI>>,
}

impl ColumnSolver {
    pub fn new(cols: &[Vec<QI>]) -> Self {
        let n = cols.len();
        let len = cols.first().map_or(0, |c| c.len());
        let mut m: Vec<Vec<QI>> = (0..len)
            .map(|i| {
                let mut row: Vec<QI> = cols.iter().map(|c| c[i].clone()).collect();
                row.extend((0..len).map(|j| if i == j { super::scalar::qi_int(1) } else { QI::zero() }));
                row
            })
            .collect();
        let mut pivots = rref(&mut m);
        pivots.retain(|&p| p < n);
        let transform = m.into_iter().map(|row| row[n..].to_vec()).collect();
        ColumnSolver { n, pivots, transform }
    }

    pub fn solve(&self, target: &[QI]) -> Option<Vec<QI>> {
        let apply = |row: &[QI]| {
            let mut acc = QI::zero();
            for (e, t) in row.iter().zip(target) {
                if !e.is_zero() && !t.is_zero() {
                    acc = &acc + &(e * t);
                }
            }
            acc
        };
        if self.transform[self.pivots.len()..].iter().any(|row| !apply(row).is_zero()) {
            return None;
        }
        let mut x = vec![QI::zero(); self.n];
        for (r, &pc) in self.pivots.iter().enumerate() {
            x[pc] = apply(&self.transform[r]);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylrep::scalar::qi_int;

    #[test]
    fn small_systems() {
        let m = vec![vec![qi_int(1), qi_int(2), qi_int(3)], vec![qi_int(2), qi_int(4), qi_int(6)]];
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = &(&m[0][0] * &v[0] + &m[0][1] * &v[1]) + &(&m[0][2] * &v[2]);
            assert!(dot.is_zero());
        }
        let cols = vec![vec![qi_int(1), qi_int(0)], vec![qi_int(1), qi_int(1)]];
        assert_eq!(solve(&cols, &[qi_int(3), qi_int(2)]).unwrap(), vec![qi_int(1), qi_int(2)]);
        let dep = vec![vec![qi_int(1), qi_int(1)]];
        assert!(solve(&dep, &[qi_int(1), qi_int(0)]).is_none());
        let fs = ColumnSolver::new(&cols);
        assert_eq!(fs.solve(&[qi_int(3), qi_int(2)]).unwrap(), vec![qi_int(1), qi_int(2)]);
        assert!(ColumnSolver::new(&dep).solve(&[qi_int(1), qi_int(0)]).is_none());
    }
}
