//! Dense exact simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`.
//!
//! Every LP built in this crate is homogeneous apart from box bounds, so the
//! slack basis is always feasible and no phase I is needed. Bland's rule
//! guarantees termination on the heavily degenerate systems that show up here.

use num_traits::{Signed, Zero};

use crate::poly::Q;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Q>,
        value: Q,
        /// Dual multipliers, one per row of A.
        dual: Vec<Q>,
    },
    Unbounded,
}

pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(b.iter().all(|x| !x.is_negative()), "right-hand side must be nonnegative");
    let w = n + m + 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = vec![Q::zero(); w];
            assert_eq!(a[i].len(), n);
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = Q::from_integer(1.into());
            row[w - 1] = b[i].clone();
            row
        })
        .collect();
    let mut obj = vec![Q::zero(); w];
    obj[..n].clone_from_slice(c);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(col) = (0..w - 1).find(|&j| obj[j].is_positive()) {
        let mut best: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][col].is_positive() {
                let ratio = &t[i][w - 1] / &t[i][col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut t, &mut obj, r, col);
        basis[r] = col;
    }

    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][w - 1].clone();
        }
    }
    let dual = (0..m).map(|i| -obj[n + i].clone()).collect();
    LpOutcome::Optimal { x, value: -obj[w - 1].clone(), dual }
}

fn pivot(t: &mut [Vec<Q>], obj: &mut [Q], r: usize, col: usize) {
    let p = t[r][col].clone();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let prow = t[r].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for &j in &nz {
            row[j] -= &f * &prow[j];
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for &j in &nz {
            obj[j] -= &f * &prow[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn small_lp() {
        // max x + y  s.t. x + 2y ≤ 4, 3x + y ≤ 6
        let a = vec![vec![q(1), q(2)], vec![q(3), q(1)]];
        let out = maximize(&a, &[q(4), q(6)], &[q(1), q(1)]);
        match out {
            LpOutcome::Optimal { x, value, dual } => {
                assert_eq!(value, crate::poly::qf(14, 5));
                assert_eq!(x, vec![crate::poly::qf(8, 5), crate::poly::qf(6, 5)]);
                // strong duality
                assert_eq!(&dual[0] * q(4) + &dual[1] * q(6), value);
            }
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(1)], &[q(0), q(1)]), LpOutcome::Unbounded);
    }
}
