//! Ratios of Laurent polynomials, with a subtraction-free subtype.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LaurentPolynomial, PolyJson, Q};
use crate::scaled::Scaled;

/// A ratio num/den. No cancellation is ever performed implicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    pub num: LaurentPolynomial,
    pub den: LaurentPolynomial,
}

impl RationalFunction {
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Self {
        assert_eq!(num.nvars(), den.nvars());
        assert!(!den.is_zero(), "zero denominator");
        RationalFunction { num, den }
    }

    pub fn from_poly(p: LaurentPolynomial) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: LaurentPolynomial::one(n) }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num - &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(Self::new(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn powi(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = k.unsigned_abs();
        Ok(Self::new(base.num.pow(k), base.den.pow(k)))
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.num, self.den.clone())
    }

    /// Semantic equality by cross-multiplication.
    pub fn equals(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// Reduce to a Laurent polynomial when the denominator divides exactly.
    pub fn reduce(&self) -> Result<LaurentPolynomial> {
        self.num.div_exact(&self.den)
    }

    pub fn is_subtraction_free(&self) -> bool {
        self.num.all_positive() && self.den.all_positive()
    }

    pub fn eval_q(&self, pt: &[Q]) -> Result<Q> {
        let d = self.den.eval_q(pt)?;
        if num_traits::Zero::is_zero(&d) {
            return Err(Error::DenominatorZero);
        }
        Ok(self.num.eval_q(pt)? / d)
    }

    pub fn eval_c(&self, pt: &[Complex64]) -> Result<Complex64> {
        let d = self.den.eval_c(pt);
        if d.norm() < 1e-300 {
            return Err(Error::DenominatorZero);
        }
        Ok(self.num.eval_c(pt) / d)
    }

    pub fn eval_log(&self, w: &[Complex64]) -> Result<Scaled> {
        self.num.eval_log(w).div(&self.den.eval_log(w)).ok_or(Error::DenominatorZero)
    }

    /// f ∘ comps. Each numerator/denominator is cleared to a common denominator
    /// built from powers of the component parts, so positivity is preserved.
    pub fn substitute(&self, comps: &[RationalFunction]) -> Result<RationalFunction> {
        if comps.len() != self.nvars() {
            return Err(Error::Arity { expected: self.nvars(), got: comps.len() });
        }
        let target = comps.first().map(|c| c.nvars()).unwrap_or(0);
        if comps.iter().any(|c| c.nvars() != target) {
            return Err(Error::Invalid("components live in different rings".into()));
        }
        let mut cache = PowCache::new(comps);
        let (n1, d1) = clear(&self.num, &mut cache, target);
        let (n2, d2) = clear(&self.den, &mut cache, target);
        if n2.is_zero() {
            return Err(Error::DenominatorZero);
        }
        Ok(RationalFunction::new(&n1 * &d2, &n2 * &d1))
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.den == LaurentPolynomial::one(self.nvars()) {
            return self.num.format_with(names);
        }
        format!("({})/({})", self.num.format_with(names), self.den.format_with(names))
    }

    pub fn to_json(&self) -> RationalJson {
        RationalJson { num: self.num.to_json(), den: self.den.to_json() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

struct PowCache<'a> {
    comps: &'a [RationalFunction],
    memo: HashMap<(usize, bool, u32), LaurentPolynomial>,
}

impl<'a> PowCache<'a> {
    fn new(comps: &'a [RationalFunction]) -> Self {
        PowCache { comps, memo: HashMap::new() }
    }

    /// num_k^e (top = true) or den_k^e.
    fn get(&mut self, k: usize, top: bool, e: u32) -> LaurentPolynomial {
        if let Some(p) = self.memo.get(&(k, top, e)) {
            return p.clone();
        }
        let base = if top { &self.comps[k].num } else { &self.comps[k].den };
        let p = base.pow(e);
        self.memo.insert((k, top, e), p.clone());
        p
    }
}

/// Σ c·Π (p_k/q_k)^{e_k} = N / Π q_k^{A_k} p_k^{B_k}.
fn clear(f: &LaurentPolynomial, cache: &mut PowCache, target: usize) -> (LaurentPolynomial, LaurentPolynomial) {
    let m = f.nvars();
    let mut a = vec![0u32; m];
    let mut b = vec![0u32; m];
    for (e, _) in f.terms() {
        for k in 0..m {
            if e[k] > 0 {
                a[k] = a[k].max(e[k] as u32);
            } else {
                b[k] = b[k].max((-e[k]) as u32);
            }
        }
    }
    let mut num = LaurentPolynomial::zero(target);
    for (e, c) in f.terms() {
        let mut t = LaurentPolynomial::constant(target, c.clone());
        for k in 0..m {
            let pe = (e[k] + b[k] as i32) as u32;
            let qe = (a[k] as i32 - e[k]) as u32;
            if pe > 0 {
                t = &t * &cache.get(k, true, pe);
            }
            if qe > 0 {
                t = &t * &cache.get(k, false, qe);
            }
        }
        num = &num + &t;
    }
    let mut den = LaurentPolynomial::one(target);
    for k in 0..m {
        if a[k] > 0 {
            den = &den * &cache.get(k, false, a[k]);
        }
        if b[k] > 0 {
            den = &den * &cache.get(k, true, b[k]);
        }
    }
    (num, den)
}

/// Subtraction-free ratio: every stored coefficient is strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveRational(RationalFunction);

impl PositiveRational {
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Result<Self> {
        Self::try_from_rational(RationalFunction::new(num, den))
    }

    pub fn try_from_rational(r: RationalFunction) -> Result<Self> {
        if !r.num.all_positive() {
            return Err(Error::NotPositive(format!("numerator {}", r.num)));
        }
        if !r.den.all_positive() {
            return Err(Error::NotPositive(format!("denominator {}", r.den)));
        }
        Ok(PositiveRational(r))
    }

    pub fn from_poly(p: LaurentPolynomial) -> Result<Self> {
        Self::try_from_rational(RationalFunction::from_poly(p))
    }

    pub fn monomial(e: Vec<i32>) -> Self {
        PositiveRational(RationalFunction::from_poly(LaurentPolynomial::monomial(e, num_traits::One::one())))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        PositiveRational(RationalFunction::from_poly(LaurentPolynomial::var(nvars, i)))
    }

    pub fn num(&self) -> &LaurentPolynomial {
        &self.0.num
    }

    pub fn den(&self) -> &LaurentPolynomial {
        &self.0.den
    }

    pub fn as_rational(&self) -> &RationalFunction {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn add(&self, o: &Self) -> Self {
        PositiveRational(self.0.add(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        PositiveRational(self.0.mul(&o.0))
    }

    pub fn div(&self, o: &Self) -> Self {
        PositiveRational(RationalFunction::new(&self.0.num * &o.0.den, &self.0.den * &o.0.num))
    }

    pub fn recip(&self) -> Self {
        PositiveRational(RationalFunction::new(self.0.den.clone(), self.0.num.clone()))
    }

    pub fn substitute(&self, comps: &[PositiveRational]) -> Result<PositiveRational> {
        let rc: Vec<RationalFunction> = comps.iter().map(|c| c.0.clone()).collect();
        Ok(PositiveRational(self.0.substitute(&rc)?))
    }

    pub fn eval_q(&self, pt: &[Q]) -> Result<Q> {
        self.0.eval_q(pt)
    }

    pub fn eval_c(&self, pt: &[Complex64]) -> Result<Complex64> {
        self.0.eval_c(pt)
    }

    pub fn eval_log(&self, w: &[Complex64]) -> Result<Scaled> {
        self.0.eval_log(w)
    }

    pub fn reduce(&self) -> Result<LaurentPolynomial> {
        self.0.reduce()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.0.equals(&o.0)
    }
}

/// f = plus − minus with each side subtraction-free; `None` marks an absent side.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedPositiveSum {
    pub plus: Option<PositiveRational>,
    pub minus: Option<PositiveRational>,
}

impl SignedPositiveSum {
    pub fn empty() -> Self {
        SignedPositiveSum { plus: None, minus: None }
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_none() && self.minus.is_none()
    }

    /// Split a polynomial numerator by coefficient sign over a positive denominator.
    pub fn from_signed(num: &LaurentPolynomial, den: &LaurentPolynomial) -> Result<Self> {
        let (p, m) = num.split_signs();
        let side = |x: LaurentPolynomial| -> Result<Option<PositiveRational>> {
            if x.is_zero() {
                Ok(None)
            } else {
                PositiveRational::new(x, den.clone()).map(Some)
            }
        };
        Ok(SignedPositiveSum { plus: side(p)?, minus: side(m)? })
    }

    pub fn eval_q(&self, pt: &[Q]) -> Result<Q> {
        let mut v = Q::from_integer(0.into());
        if let Some(p) = &self.plus {
            v += p.eval_q(pt)?;
        }
        if let Some(m) = &self.minus {
            v -= m.eval_q(pt)?;
        }
        Ok(v)
    }

    pub fn eval_c(&self, pt: &[Complex64]) -> Result<Complex64> {
        let mut v = Complex64::new(0.0, 0.0);
        if let Some(p) = &self.plus {
            v += p.eval_c(pt)?;
        }
        if let Some(m) = &self.minus {
            v -= m.eval_c(pt)?;
        }
        Ok(v)
    }

    pub fn eval_log(&self, w: &[Complex64]) -> Result<Scaled> {
        let mut v = Scaled::zero();
        if let Some(p) = &self.plus {
            v = v.add(&p.eval_log(w)?);
        }
        if let Some(m) = &self.minus {
            v = v.add(&m.eval_log(w)?.scale(Complex64::new(-1.0, 0.0)));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn v(n: usize, i: usize) -> LaurentPolynomial {
        LaurentPolynomial::var(n, i)
    }

    #[test]
    fn semifield_division_keeps_presentation() {
        let one = LaurentPolynomial::one(1);
        let a = PositiveRational::from_poly(&v(1, 0).pow(3) + &one).unwrap();
        let b = PositiveRational::from_poly(&v(1, 0) + &one).unwrap();
        let r = a.div(&b);
        assert_eq!(r.num(), &(&v(1, 0).pow(3) + &one));
        assert_eq!(r.den(), &(&v(1, 0) + &one));
        let expect = &(&v(1, 0).pow(2) - &v(1, 0)) + &one;
        assert_eq!(r.reduce().unwrap(), expect);
    }

    #[test]
    fn add_with_unit_denominator() {
        let x = PositiveRational::var(1, 0);
        let one = PositiveRational::from_poly(LaurentPolynomial::one(1)).unwrap();
        let s = x.add(&one);
        assert_eq!(s.num(), &(&v(1, 0) + &LaurentPolynomial::one(1)));
        assert_eq!(s.den(), &LaurentPolynomial::one(1));
    }

    #[test]
    fn substitution_into_product() {
        // y1*y2 with y = (x2x3/(x1+x3), x1+x3) gives x2x3
        let n = 3;
        let s13 = &v(n, 0) + &v(n, 2);
        let c1 = PositiveRational::new(&v(n, 1) * &v(n, 2), s13.clone()).unwrap();
        let c2 = PositiveRational::from_poly(s13).unwrap();
        let f = PositiveRational::from_poly(&v(2, 0) * &v(2, 1)).unwrap();
        let g = f.substitute(&[c1, c2]).unwrap();
        assert_eq!(g.reduce().unwrap(), &v(n, 1) * &v(n, 2));
    }

    #[test]
    fn exact_eval() {
        let f = PositiveRational::new(&v(1, 0) + &LaurentPolynomial::one(1), v(1, 0)).unwrap();
        assert_eq!(f.eval_q(&[q(1)]).unwrap(), q(2));
    }

    #[test]
    fn rejects_signed() {
        let p = &v(1, 0) - &LaurentPolynomial::one(1);
        assert!(PositiveRational::from_poly(p).is_err());
    }
}
