//! Exact Gauss-Jordan over the rationals, plus a dense f64 solve.

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::poly::Q;

/// Solve A x = b; None when inconsistent. Free variables are set to zero.
pub fn solve_q(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

pub fn invert_q(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        cols.push(solve_q(a, &e)?);
    }
    // solve_q zero-fills free variables, so check that A·A⁻¹ = I
    for (j, c) in cols.iter().enumerate() {
        for (i, r) in a.iter().enumerate() {
            let v = r.iter().zip(c).fold(Q::zero(), |s, (x, y)| s + x * y);
            if v != if i == j { Q::one() } else { Q::zero() } {
                return None;
            }
        }
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Rank over the rationals.
pub fn rank_q(a: &[Vec<Q>]) -> usize {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pr = m[rank].clone();
        for r in m.iter_mut().skip(rank + 1) {
            if !r[col].is_zero() {
                let f = &r[col] / &pr[col];
                for (x, y) in r.iter_mut().zip(&pr) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solve A x = b in double precision by LU; None when singular.
pub fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    m.lu().solve(&DVector::from_column_slice(b)).map(|x| x.iter().cloned().collect())
}

/// Least-squares slope and intercept of y against x.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn inverse_and_rank() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert_q(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert_eq!(rank_q(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert!(invert_q(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn overdetermined_consistency() {
        let a = vec![vec![q(1)], vec![q(2)]];
        assert_eq!(solve_q(&a, &[q(3), q(6)]), Some(vec![q(3)]));
        assert_eq!(solve_q(&a, &[q(3), q(5)]), None);
    }

    #[test]
    fn float_solve_and_fit() {
        let x = solve_f64(&[vec![2.0, 0.0], vec![0.0, 4.0]], &[2.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
        let (s, c) = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((s - 2.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
    }
}
