//! Max-plus tropicalization of subtraction-free functions and piecewise-linear maps.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::poly::{q, Q};
use crate::rational::PositiveRational;

/// Integer linear form ⟨a, ξ⟩; there is no constant term.
pub type LinearForm = Vec<i64>;

pub fn dot_q(a: &[i64], x: &[Q]) -> Q {
    a.iter().zip(x).filter(|(k, _)| **k != 0).map(|(k, v)| v * q(*k)).fold(Q::zero(), |s, t| s + t)
}

pub fn dot_f(a: &[i64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(k, v)| *k as f64 * v).sum()
}

/// max over a nonempty set of linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropPolynomial {
    dim: usize,
    forms: BTreeSet<LinearForm>,
}

impl TropPolynomial {
    pub fn new<I: IntoIterator<Item = LinearForm>>(dim: usize, forms: I) -> Self {
        let forms: BTreeSet<LinearForm> = forms.into_iter().collect();
        assert!(!forms.is_empty(), "tropical polynomial needs at least one form");
        assert!(forms.iter().all(|f| f.len() == dim));
        TropPolynomial { dim, forms }
    }

    pub fn linear(form: LinearForm) -> Self {
        Self::new(form.len(), [form])
    }

    /// The constant 0 (tropical one).
    pub fn zero(dim: usize) -> Self {
        Self::linear(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &BTreeSet<LinearForm> {
        &self.forms
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.forms.iter().map(|f| dot_q(f, x)).max().unwrap()
    }

    pub fn eval_f(&self, x: &[f64]) -> f64 {
        self.forms.iter().map(|f| dot_f(f, x)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Tropical product: pointwise sum.
    pub fn plus(&self, o: &Self) -> Self {
        let mut out = BTreeSet::new();
        for a in &self.forms {
            for b in &o.forms {
                out.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        TropPolynomial { dim: self.dim, forms: out }
    }

    /// Tropical sum: pointwise max.
    pub fn max(&self, o: &Self) -> Self {
        TropPolynomial { dim: self.dim, forms: self.forms.union(&o.forms).cloned().collect() }
    }

    pub fn times(&self, k: u64) -> Self {
        if k == 0 {
            return Self::zero(self.dim);
        }
        TropPolynomial {
            dim: self.dim,
            forms: self.forms.iter().map(|f| f.iter().map(|x| x * k as i64).collect()).collect(),
        }
    }
}

/// pos − neg.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropRational {
    pub pos: TropPolynomial,
    pub neg: TropPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropJson {
    pub pos: Vec<LinearForm>,
    pub neg: Vec<LinearForm>,
}

impl TropRational {
    pub fn new(pos: TropPolynomial, neg: TropPolynomial) -> Self {
        assert_eq!(pos.dim, neg.dim);
        TropRational { pos, neg }
    }

    pub fn linear(form: LinearForm) -> Self {
        let d = form.len();
        Self::new(TropPolynomial::linear(form), TropPolynomial::zero(d))
    }

    pub fn dim(&self) -> usize {
        self.pos.dim
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q> {
        if x.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: x.len() });
        }
        Ok(self.pos.eval(x) - self.neg.eval(x))
    }

    pub fn eval_f(&self, x: &[f64]) -> f64 {
        self.pos.eval_f(x) - self.neg.eval_f(x)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.pos.plus(&o.pos), self.neg.plus(&o.neg))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.pos.plus(&o.neg), self.neg.plus(&o.pos))
    }

    pub fn negate(&self) -> Self {
        Self::new(self.neg.clone(), self.pos.clone())
    }

    pub fn times(&self, k: i64) -> Self {
        let r = Self::new(self.pos.times(k.unsigned_abs()), self.neg.times(k.unsigned_abs()));
        if k < 0 {
            r.negate()
        } else {
            r
        }
    }

    pub fn to_json(&self) -> TropJson {
        TropJson {
            pos: self.pos.forms.iter().cloned().collect(),
            neg: self.neg.forms.iter().cloned().collect(),
        }
    }

    pub fn from_json(j: &TropJson) -> Result<Self> {
        let dim = j.pos.first().or(j.neg.first()).map(|f| f.len()).unwrap_or(0);
        if j.pos.is_empty() || j.neg.is_empty() {
            return Err(Error::Invalid("pos and neg must be nonempty".into()));
        }
        if j.pos.iter().chain(&j.neg).any(|f| f.len() != dim) {
            return Err(Error::Invalid("forms of unequal length".into()));
        }
        Ok(Self::new(TropPolynomial::new(dim, j.pos.clone()), TropPolynomial::new(dim, j.neg.clone())))
    }

    /// Human-readable max-plus formula.
    pub fn format(&self, names: &[String]) -> String {
        fn form(f: &[i64], names: &[String]) -> String {
            let mut s = String::new();
            for (k, &c) in f.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let sign = if c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
                let mag = c.unsigned_abs();
                if mag == 1 {
                    s.push_str(&format!("{sign}{}", names[k]));
                } else {
                    s.push_str(&format!("{sign}{mag}{}", names[k]));
                }
            }
            if s.is_empty() {
                "0".into()
            } else {
                s
            }
        }
        fn poly(p: &TropPolynomial, names: &[String]) -> String {
            let fs: Vec<String> = p.forms.iter().rev().map(|f| form(f, names)).collect();
            if fs.len() == 1 {
                fs[0].clone()
            } else {
                format!("max({})", fs.join(","))
            }
        }
        let n = poly(&self.neg, names);
        if n == "0" {
            poly(&self.pos, names)
        } else if self.neg.forms.len() == 1 && (n.starts_with('-') || n.trim_start_matches('-').contains(['+', '-'])) {
            format!("{} - ({})", poly(&self.pos, names), n)
        } else {
            format!("{} - {}", poly(&self.pos, names), n)
        }
    }
}

pub fn tropicalize(f: &PositiveRational) -> TropRational {
    let d = f.nvars();
    let forms = |p: &crate::poly::LaurentPolynomial| -> Vec<LinearForm> {
        p.terms().map(|(e, _)| e.iter().map(|&x| x as i64).collect()).collect()
    };
    TropRational::new(TropPolynomial::new(d, forms(f.num())), TropPolynomial::new(d, forms(f.den())))
}

/// Tuple of tropical rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    domain_dim: usize,
    pub comps: Vec<TropRational>,
}

impl PLMap {
    pub fn new(domain_dim: usize, comps: Vec<TropRational>) -> Self {
        assert!(comps.iter().all(|c| c.dim() == domain_dim));
        PLMap { domain_dim, comps }
    }

    pub fn from_positive(fs: &[PositiveRational]) -> Result<Self> {
        let d = fs.first().map(|f| f.nvars()).ok_or_else(|| Error::Invalid("empty map".into()))?;
        if fs.iter().any(|f| f.nvars() != d) {
            return Err(Error::Invalid("components over different rings".into()));
        }
        Ok(Self::new(d, fs.iter().map(tropicalize).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            n,
            (0..n)
                .map(|i| {
                    let mut f = vec![0; n];
                    f[i] = 1;
                    TropRational::linear(f)
                })
                .collect(),
        )
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn eval(&self, x: &[Q]) -> Result<Vec<Q>> {
        self.comps.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|c| c.eval_f(x)).collect()
    }
}

/// F ∘ G by symbolic max-plus substitution. With U_a − V_a = ⟨a, G⟩,
/// max_a(U_a − V_a) = max_a(U_a + Σ_{a'≠a} V_{a'}) − Σ_a V_a.
pub fn pl_compose(f: &PLMap, g: &PLMap) -> Result<PLMap> {
    if g.codomain_dim() != f.domain_dim() {
        return Err(Error::Dimension { expected: f.domain_dim(), got: g.codomain_dim() });
    }
    let d = g.domain_dim();
    let subst_poly = |p: &TropPolynomial| -> (TropPolynomial, TropPolynomial) {
        let uv: Vec<(TropPolynomial, TropPolynomial)> = p
            .forms()
            .iter()
            .map(|a| {
                let mut u = TropPolynomial::zero(d);
                let mut v = TropPolynomial::zero(d);
                for (j, &aj) in a.iter().enumerate() {
                    let c = &g.comps[j];
                    if aj > 0 {
                        u = u.plus(&c.pos.times(aj as u64));
                        v = v.plus(&c.neg.times(aj as u64));
                    } else if aj < 0 {
                        u = u.plus(&c.neg.times((-aj) as u64));
                        v = v.plus(&c.pos.times((-aj) as u64));
                    }
                }
                (u, v)
            })
            .collect();
        let total_v = uv.iter().fold(TropPolynomial::zero(d), |s, (_, v)| s.plus(v));
        let mut top: Option<TropPolynomial> = None;
        for (a, (u, _)) in uv.iter().enumerate() {
            let mut t = u.clone();
            for (b, (_, v)) in uv.iter().enumerate() {
                if a != b {
                    t = t.plus(v);
                }
            }
            top = Some(match top {
                None => t,
                Some(s) => s.max(&t),
            });
        }
        (top.unwrap(), total_v)
    };
    let comps = f
        .comps
        .iter()
        .map(|c| {
            let (pt, pv) = subst_poly(&c.pos);
            let (nt, nv) = subst_poly(&c.neg);
            TropRational::new(pt.plus(&nv), nt.plus(&pv))
        })
        .collect();
    Ok(PLMap::new(d, comps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chamber {
    pub cone: Cone,
    /// Row k is the linear form of component k on this chamber.
    pub linear_map: Vec<LinearForm>,
}

/// Open chambers (nonempty interior) on which F is linear, one per consistent
/// argmax selection.
pub fn linearity_chambers(f: &PLMap) -> Vec<Chamber> {
    let mut polys: Vec<TropPolynomial> = Vec::new();
    let idx = |p: &TropPolynomial, polys: &mut Vec<TropPolynomial>| -> usize {
        if let Some(i) = polys.iter().position(|x| x == p) {
            i
        } else {
            polys.push(p.clone());
            polys.len() - 1
        }
    };
    let slots: Vec<(usize, usize)> = f
        .comps
        .iter()
        .map(|c| (idx(&c.pos, &mut polys), idx(&c.neg, &mut polys)))
        .collect();
    let d = f.domain_dim();
    let lists: Vec<Vec<LinearForm>> = polys.iter().map(|p| p.forms().iter().cloned().collect()).collect();

    fn walk(
        depth: usize,
        lists: &[Vec<LinearForm>],
        chosen: &mut Vec<usize>,
        ineqs: &mut Vec<Vec<Q>>,
        d: usize,
        out: &mut Vec<(Vec<usize>, Cone)>,
    ) {
        if depth == lists.len() {
            out.push((chosen.clone(), Cone::new(d, ineqs.clone())));
            return;
        }
        for (k, f) in lists[depth].iter().enumerate() {
            let before = ineqs.len();
            for (j, g) in lists[depth].iter().enumerate() {
                if j != k {
                    let diff: Vec<i64> = g.iter().zip(f).map(|(a, b)| a - b).collect();
                    let k = diff.iter().fold(0, |acc, &x| num_integer::gcd(acc, x)).max(1);
                    let row: Vec<Q> = diff.iter().map(|x| q(x / k)).collect();
                    if !ineqs.contains(&row) {
                        ineqs.push(row);
                    }
                }
            }
            let cone = Cone::new(d, ineqs.clone());
            if cone.interior_point().is_some() {
                chosen.push(k);
                walk(depth + 1, lists, chosen, ineqs, d, out);
                chosen.pop();
            }
            ineqs.truncate(before);
        }
    }

    let mut found = Vec::new();
    walk(0, &lists, &mut Vec::new(), &mut Vec::new(), d, &mut found);
    found
        .into_iter()
        .map(|(choice, cone)| {
            let linear_map = slots
                .iter()
                .map(|&(p, n)| lists[p][choice[p]].iter().zip(&lists[n][choice[n]]).map(|(a, b)| a - b).collect())
                .collect();
            Chamber { cone, linear_map }
        })
        .collect()
}

/// Semantic equality of tropical rational functions, decided chamberwise.
pub fn trop_equal(a: &TropRational, b: &TropRational) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let diff = PLMap::new(a.dim(), vec![a.sub(b)]);
    linearity_chambers(&diff).iter().all(|c| c.linear_map[0].iter().all(|x| *x == 0))
}

/// Integer scaling of a rational form by the lcm of its denominators.
pub fn integral_form(f: &[Q]) -> LinearForm {
    use num_integer::Integer;
    let l = f.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    f.iter()
        .map(|x| {
            let v = x.numer() * (&l / x.denom());
            num_traits::ToPrimitive::to_i64(&v).expect("form coefficient overflow")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{collect_vars, parse_positive};

    fn trop_of(s: &str) -> TropRational {
        let v = collect_vars(&[s]).unwrap();
        tropicalize(&parse_positive(s, &v).unwrap())
    }

    #[test]
    fn cubic_quotient() {
        let t = trop_of("(x^3+1)/(x+1)");
        assert_eq!(t.pos.forms().iter().cloned().collect::<Vec<_>>(), vec![vec![0], vec![3]]);
        assert_eq!(t.neg.forms().iter().cloned().collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        assert_eq!(t.eval(&[q(2)]).unwrap(), q(4));
        assert_eq!(t.eval(&[q(-2)]).unwrap(), q(0));
    }

    #[test]
    fn format_reads_naturally() {
        let t = trop_of("(x^3+1)/(x+1)");
        assert_eq!(t.format(&["ξ".into()]), "max(3ξ,0) - max(ξ,0)");
        let names: Vec<String> = vec!["ξ1".into(), "ξ2".into()];
        let t = trop_of("(x1^2+1)/(x1*x2)");
        assert_eq!(t.format(&names), "max(2ξ1,0) - (ξ1+ξ2)");
        let t = trop_of("x1^2/x2");
        assert_eq!(t.format(&names), "2ξ1 - ξ2");
    }

    #[test]
    fn chamber_rows_are_primitive() {
        let t = trop_of("(x^3+1)/(x+1)");
        let ch = linearity_chambers(&PLMap::new(1, vec![t]));
        assert_eq!(ch.len(), 2);
        assert!(ch.iter().all(|c| c.cone.strict().len() == 1));
    }

    #[test]
    fn linear_map_single_chamber() {
        let m = PLMap::identity(2);
        let ch = linearity_chambers(&m);
        assert_eq!(ch.len(), 1);
        assert!(ch[0].cone.strict().is_empty());
    }

    #[test]
    fn equality_is_semantic() {
        let a = trop_of("(x^2 + y^2)/(x*y)");
        let b = trop_of("(x^2 + x*y + y^2)/(x*y)");
        assert!(trop_equal(&a, &b));
        let c = trop_of("(x^2 + 1)/(x*y)");
        assert!(!trop_equal(&a, &c));
    }
}
