//! Sparse multivariate Laurent polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scaled::Scaled;

pub type Q = BigRational;

/// Exponent vector; its length is the ambient variable count.
pub type ExpVec = Vec<i32>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    // numerator and denominator may individually overflow f64
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            let shift = x.numer().bits().max(x.denom().bits()) as i64 - 60;
            let n = (x.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(n, d))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<ExpVec, Q>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(e: ExpVec, c: Q) -> Self {
        let mut p = Self::zero(e.len());
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (ExpVec, Q)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: ExpVec, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&ExpVec, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn as_monomial(&self) -> Option<(&ExpVec, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        match self.as_monomial() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn all_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }

    /// Split into (positive part, negated negative part), both coefficient-positive.
    pub fn split_signs(&self) -> (Self, Self) {
        let mut p = Self::zero(self.nvars);
        let mut m = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if c.is_positive() {
                p.add_term(e.clone(), c.clone());
            } else {
                m.add_term(e.clone(), -c.clone());
            }
        }
        (p, m)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &[i32], c: &Q) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (f, x) in &self.terms {
            out.terms.insert(f.iter().zip(e).map(|(a, b)| a + b).collect(), x * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative powers exist only for monomials.
    pub fn powi(&self, k: i32) -> Option<Self> {
        if k >= 0 {
            return Some(self.pow(k as u32));
        }
        let (e, c) = self.as_monomial()?;
        let e: ExpVec = e.iter().map(|x| x * k).collect();
        let c = c.recip().pow(-k);
        Some(Self::monomial(e, c))
    }

    pub fn degree_bounds(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut f = e.clone();
                f[var] -= 1;
                out.add_term(f, c * q(e[var] as i64));
            }
        }
        out
    }

    /// Re-embed into `nvars` variables; variable i goes to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                f[map[i]] += x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Expansion Σ_k f_k x_var^k; the f_k do not involve x_var.
    pub fn expand_in(&self, var: usize) -> BTreeMap<i32, LaurentPolynomial> {
        let mut out: BTreeMap<i32, LaurentPolynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[var] = 0;
            out.entry(e[var]).or_insert_with(|| Self::zero(self.nvars)).add_term(f, c.clone());
        }
        out
    }

    pub fn eval_q(&self, pt: &[Q]) -> Result<Q> {
        if pt.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: pt.len() });
        }
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k != 0 {
                    if x.is_zero() && k < 0 {
                        return Err(Error::DenominatorZero);
                    }
                    t *= x.pow(k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_c(&self, pt: &[Complex64]) -> Complex64 {
        assert_eq!(pt.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(q_to_f64(c), 0.0);
            for (x, &k) in pt.iter().zip(e) {
                if k != 0 {
                    t *= x.powi(k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluate at x_k = exp(w_k) with complex logarithms w, factoring out the
    /// largest real exponent so huge or tiny magnitudes never overflow.
    pub fn eval_log(&self, w: &[Complex64]) -> Scaled {
        assert_eq!(w.len(), self.nvars);
        if self.is_zero() {
            return Scaled::zero();
        }
        let exps: Vec<(Complex64, f64)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut z = Complex64::new(0.0, 0.0);
                for (wk, &k) in w.iter().zip(e) {
                    if k != 0 {
                        z += wk * k as f64;
                    }
                }
                (z, q_to_f64(c))
            })
            .collect();
        let m = exps.iter().map(|(z, _)| z.re).fold(f64::NEG_INFINITY, f64::max);
        let mant = exps.iter().map(|(z, c)| (z - m).exp() * *c).sum();
        Scaled::new(m, mant)
    }

    /// Exact Laurent division p = self / d, or `NotDivisible`.
    pub fn div_exact(&self, d: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return Err(Error::DenominatorZero);
        }
        let mut quot = Self::zero(self.nvars);
        if self.is_zero() {
            return Ok(quot);
        }
        let n = self.nvars;
        let bounds: Vec<(i32, i32)> = (0..n)
            .map(|v| {
                let (pl, ph) = self.degree_bounds(v).unwrap();
                let (dl, dh) = d.degree_bounds(v).unwrap();
                (pl - dl, ph - dh)
            })
            .collect();
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut r = self.clone();
        while let Some((re, rc)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: ExpVec = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if qe.iter().zip(&bounds).any(|(x, (lo, hi))| x < lo || x > hi) {
                return Err(Error::NotDivisible);
            }
            let qc = rc / &dc;
            r = &r - &d.mul_monomial(&qe, &qc);
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { e: e.clone(), c: c.to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let mut p = Self::zero(j.nvars);
        for t in &j.terms {
            if t.e.len() != j.nvars {
                return Err(Error::Dimension { expected: j.nvars, got: t.e.len() });
            }
            p.add_term(t.e.clone(), parse_q(&t.c)?);
        }
        Ok(p)
    }

    /// Canonical text with the given variable names (default `x1..xn`).
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut s = c.to_string();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => s.push_str(&format!("*{}", names[i])),
                    _ => s.push_str(&format!("*{}^{}", names[i], k)),
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }

    pub fn default_names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&Self::default_names(self.nvars)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub e: ExpVec,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, o.nvars);
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                out.add_term(e.iter().zip(f).map(|(a, b)| a + b).collect(), c * d);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-Q::one())
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> Self {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LaurentPolynomial {
        LaurentPolynomial::var(2, i)
    }

    #[test]
    fn divides_cubic_sum() {
        let one = LaurentPolynomial::one(2);
        let p = &x(0).pow(3) + &one;
        let d = &x(0) + &one;
        let r = p.div_exact(&d).unwrap();
        assert_eq!(r, &(&x(0).pow(2) - &x(0)) + &one);
        let p2 = &x(0).pow(3) + &x(1).pow(3);
        let r2 = p2.div_exact(&(&x(0) + &x(1))).unwrap();
        let expect = &(&x(0).pow(2) - &(&x(0) * &x(1))) + &x(1).pow(2);
        assert_eq!(r2, expect);
        assert_eq!(p2.div_exact(&p2).unwrap(), one);
    }

    #[test]
    fn rejects_non_divisor() {
        let one = LaurentPolynomial::one(2);
        let p = &x(0).pow(2) + &one;
        assert_eq!(p.div_exact(&(&x(0) + &one)), Err(Error::NotDivisible));
    }

    #[test]
    fn laurent_division_with_negative_exponents() {
        let xi = x(0).powi(-2).unwrap();
        let p = &(&xi + &x(1)) * &(&x(0) + &x(1).powi(-1).unwrap());
        let r = p.div_exact(&(&xi + &x(1))).unwrap();
        assert_eq!(r, &x(0) + &x(1).powi(-1).unwrap());
    }

    #[test]
    fn log_eval_matches_direct() {
        let p = &(&x(0).pow(3) + &x(1).scale(&qf(5, 2))) + &LaurentPolynomial::one(2);
        let w = [Complex64::new(0.3, 0.7), Complex64::new(-0.2, 1.1)];
        let pt: Vec<Complex64> = w.iter().map(|z| z.exp()).collect();
        let a = p.eval_c(&pt);
        let b = p.eval_log(&w).to_complex();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let p = &x(0).pow(3) + &x(1).scale(&qf(-5, 2));
        assert_eq!(LaurentPolynomial::from_json(&p.to_json()).unwrap(), p);
    }
}
