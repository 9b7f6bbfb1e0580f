//! Minimal commutative-ring interface shared by symbolic and numeric matrices.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::poly::{LaurentPolynomial, Q};

pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn rneg(&self) -> Self {
        self.zero_like().rsub(self)
    }
}

impl Ring for LaurentPolynomial {
    fn zero_like(&self) -> Self {
        LaurentPolynomial::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        LaurentPolynomial::one(self.nvars())
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_elem(&self) -> bool {
        *self == 0.0
    }
}

impl Ring for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn radd(&self, o: &Self) -> Self {
        self + o
    }
    fn rsub(&self, o: &Self) -> Self {
        self - o
    }
    fn rmul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero_elem(&self) -> bool {
        self.norm() == 0.0
    }
}

/// a + b·ε with ε² = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<R> {
    pub re: R,
    pub eps: R,
}

impl<R: Ring> Dual<R> {
    pub fn new(re: R, eps: R) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: R) -> Self {
        let z = re.zero_like();
        Dual { re, eps: z }
    }
}

impl<R: Ring> Ring for Dual<R> {
    fn zero_like(&self) -> Self {
        Dual::constant(self.re.zero_like())
    }
    fn one_like(&self) -> Self {
        Dual::constant(self.re.one_like())
    }
    fn radd(&self, o: &Self) -> Self {
        Dual::new(self.re.radd(&o.re), self.eps.radd(&o.eps))
    }
    fn rsub(&self, o: &Self) -> Self {
        Dual::new(self.re.rsub(&o.re), self.eps.rsub(&o.eps))
    }
    fn rmul(&self, o: &Self) -> Self {
        Dual::new(self.re.rmul(&o.re), self.re.rmul(&o.eps).radd(&self.eps.rmul(&o.re)))
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero_elem() && self.eps.is_zero_elem()
    }
}

/// Square matrix over a ring, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<R> {
    pub n: usize,
    pub a: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        Mat { n, a }
    }

    pub fn identity(n: usize, proto: &R) -> Self {
        let (z, o) = (proto.zero_like(), proto.one_like());
        Self::from_fn(n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let z = self.a[0].zero_like();
        Self::from_fn(n, |i, j| {
            let mut s = z.clone();
            for k in 0..n {
                let x = self.get(i, k);
                let y = o.get(k, j);
                if !x.is_zero_elem() && !y.is_zero_elem() {
                    s = s.radd(&x.rmul(y));
                }
            }
            s
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { n: self.n, a: self.a.iter().map(f).collect() }
    }

    /// Determinant of the submatrix on (rows, cols), in the given orders.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> R {
        assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let z = self.a[0].zero_like();
        if k == 0 {
            return z.one_like();
        }
        let mut total = z.clone();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut c = vec![0usize; k];
        let mut sign = true;
        let add = |perm: &[usize], sign: bool, total: &mut R| {
            let mut p = z.one_like();
            for (i, &j) in perm.iter().enumerate() {
                let x = self.get(rows[i], cols[j]);
                if x.is_zero_elem() {
                    return;
                }
                p = p.rmul(x);
            }
            *total = if sign { total.radd(&p) } else { total.rsub(&p) };
        };
        add(&perm, sign, &mut total);
        // Heap's algorithm; every swap flips the sign
        let mut i = 1;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                sign = !sign;
                add(&perm, sign, &mut total);
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        total
    }

    pub fn det(&self) -> R {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor(&idx, &idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    #[test]
    fn det_3x3() {
        let m = Mat::from_fn(3, |i, j| q([[2, 0, 1], [1, 3, 2], [1, 1, 2]][i][j]));
        assert_eq!(m.det(), q(6));
        assert_eq!(m.minor(&[0, 1], &[1, 2]), q(-3));
    }

    #[test]
    fn dual_product_rule() {
        let a = Dual::new(3.0, 1.0);
        let b = Dual::new(5.0, 2.0);
        let p = a.rmul(&b);
        assert_eq!(p.re, 15.0);
        assert_eq!(p.eps, 11.0);
    }
}
