//! Open polyhedral cones {ξ : ℓ_i·ξ < 0}, exact interior points and domination
//! decisions with re-checkable certificates.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::poly::{parse_q, q, Q};
use crate::rational::{PositiveRational, SignedPositiveSum};
use crate::tropical::{integral_form, tropicalize, LinearForm, TropPolynomial, TropRational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    strict: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    pub dim: usize,
    pub strict: Vec<Vec<String>>,
}

impl Cone {
    pub fn new(dim: usize, strict: Vec<Vec<Q>>) -> Self {
        assert!(strict.iter().all(|r| r.len() == dim), "inequality length mismatch");
        Cone { dim, strict }
    }

    pub fn from_forms(dim: usize, forms: &[LinearForm]) -> Self {
        Self::new(dim, forms.iter().map(|f| f.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn whole(dim: usize) -> Self {
        Self::new(dim, vec![])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strict(&self) -> &[Vec<Q>] {
        &self.strict
    }

    pub fn member(&self, x: &[Q], strict: bool) -> bool {
        assert_eq!(x.len(), self.dim);
        self.strict.iter().all(|r| {
            let v: Q = r.iter().zip(x).map(|(a, b)| a * b).fold(Q::zero(), |s, t| s + t);
            if strict {
                v.is_negative()
            } else {
                !v.is_positive()
            }
        })
    }

    pub fn member_f(&self, x: &[f64], strict: bool) -> bool {
        self.strict.iter().all(|r| {
            let v: f64 = r.iter().zip(x).map(|(a, b)| crate::poly::q_to_f64(a) * b).sum();
            if strict {
                v < 0.0
            } else {
                v <= 0.0
            }
        })
    }

    /// Point maximizing the minimal slack over the box [-1,1]^n, or None when
    /// the open cone is empty.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        let (x, t) = slack_lp(self.dim, &self.strict, &[])?;
        if t.is_positive() {
            Some(x)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> ConeJson {
        ConeJson {
            dim: self.dim,
            strict: self.strict.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn from_json(j: &ConeJson) -> Result<Self> {
        let rows = j
            .strict
            .iter()
            .map(|r| {
                if r.len() != j.dim {
                    return Err(Error::Dimension { expected: j.dim, got: r.len() });
                }
                r.iter().map(|s| parse_q(s)).collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(j.dim, rows))
    }

    /// Pad with extra trailing coordinates that are left unconstrained.
    pub fn padded(&self, dim: usize) -> Cone {
        assert!(dim >= self.dim);
        let rows = self
            .strict
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(dim, Q::zero());
                r
            })
            .collect();
        Cone::new(dim, rows)
    }

    /// Image of the cone under an invertible linear change of coordinates
    /// ξ = A η, i.e. the cone {η : ℓ·Aη < 0}.
    pub fn pullback(&self, a: &[Vec<Q>]) -> Cone {
        let m = a.first().map(|r| r.len()).unwrap_or(0);
        let rows = self
            .strict
            .iter()
            .map(|r| {
                (0..m)
                    .map(|j| r.iter().zip(a).map(|(l, row)| l * &row[j]).fold(Q::zero(), |s, t| s + t))
                    .collect()
            })
            .collect();
        Cone::new(m, rows)
    }
}

/// max t  s.t.  ℓ_i·ξ + t ≤ 0 (strict rows), m_j·ξ ≤ 0 (weak rows),
/// ξ = p − q with p, q ∈ [0,1]^n, t ∈ [0,1]. Returns (ξ, t) and the duals.
fn slack_lp_full(dim: usize, strict: &[Vec<Q>], weak: &[Vec<Q>]) -> (Vec<Q>, Q, Vec<Q>) {
    let nv = 2 * dim + 1;
    let mut a: Vec<Vec<Q>> = Vec::new();
    let mut b: Vec<Q> = Vec::new();
    let row = |l: &[Q], tcoef: Q| -> Vec<Q> {
        let mut r = vec![Q::zero(); nv];
        for k in 0..dim {
            r[k] = l[k].clone();
            r[dim + k] = -l[k].clone();
        }
        r[2 * dim] = tcoef;
        r
    };
    for l in strict {
        a.push(row(l, Q::one()));
        b.push(Q::zero());
    }
    for m in weak {
        a.push(row(m, Q::zero()));
        b.push(Q::zero());
    }
    for k in 0..nv {
        let mut r = vec![Q::zero(); nv];
        r[k] = Q::one();
        a.push(r);
        b.push(Q::one());
    }
    let mut c = vec![Q::zero(); nv];
    c[2 * dim] = Q::one();
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, value, dual } => {
            let xi = (0..dim).map(|k| &x[k] - &x[dim + k]).collect();
            (xi, value, dual)
        }
        LpOutcome::Unbounded => unreachable!("bounded by construction"),
    }
}

fn slack_lp(dim: usize, strict: &[Vec<Q>], weak: &[Vec<Q>]) -> Option<(Vec<Q>, Q)> {
    let (x, t, _) = slack_lp_full(dim, strict, weak);
    Some((x, t))
}

/// Cone of tropical sublevel sets {Φ^t < 0}; every denominator must be a monomial.
/// One inequality per (potential, numerator term); repeats across potentials are kept.
pub fn cone_from_potentials(dim: usize, phi: &[PositiveRational]) -> Result<Cone> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (i, f) in phi.iter().enumerate() {
        if f.nvars() != dim {
            return Err(Error::Dimension { expected: dim, got: f.nvars() });
        }
        let (d, _) = f.den().as_monomial().ok_or(Error::NonMonomialDenominator(i))?;
        for (e, _) in f.num().terms() {
            let r: Vec<Q> = e.iter().zip(d).map(|(a, b)| q((a - b) as i64)).collect();
            rows.push(r);
        }
    }
    Ok(Cone::new(dim, rows))
}

/// Pointwise membership for arbitrary potentials.
pub fn member_potentials(phi: &[PositiveRational], x: &[Q], strict: bool) -> Result<bool> {
    for f in phi {
        let v = tropicalize(f).eval(x)?;
        let ok = if strict { v.is_negative() } else { !v.is_positive() };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Certificate that no ξ in the cone has a·ξ ≥ max_b b·ξ: nonnegative y, z with
/// Σy ≥ 1 and Σ y_i ℓ_i + Σ z_j (b_j − a) = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub form: LinearForm,
    pub cone_multipliers: Vec<Q>,
    pub neg_multipliers: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub form: LinearForm,
    pub cone_multipliers: Vec<String>,
    pub neg_multipliers: Vec<String>,
}

impl FarkasCertificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            form: self.form.clone(),
            cone_multipliers: self.cone_multipliers.iter().map(|x| x.to_string()).collect(),
            neg_multipliers: self.neg_multipliers.iter().map(|x| x.to_string()).collect(),
        }
    }

    /// Exact re-check against the cone and the tropical function.
    pub fn verify(&self, t: &TropRational, c: &Cone) -> bool {
        let negs: Vec<&LinearForm> = t.neg.forms().iter().collect();
        if self.cone_multipliers.len() != c.strict().len() || self.neg_multipliers.len() != negs.len() {
            return false;
        }
        if self.cone_multipliers.iter().chain(&self.neg_multipliers).any(|x| x.is_negative()) {
            return false;
        }
        let total: Q = self.cone_multipliers.iter().fold(Q::zero(), |s, x| s + x);
        if total < Q::one() {
            return false;
        }
        (0..c.dim()).all(|k| {
            let mut s = Q::zero();
            for (y, l) in self.cone_multipliers.iter().zip(c.strict()) {
                s += y * &l[k];
            }
            for (z, b) in self.neg_multipliers.iter().zip(&negs) {
                s += z * q(b[k] - self.form[k]);
            }
            s.is_zero()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationVerdict {
    pub dominated: bool,
    pub certificates: Vec<FarkasCertificate>,
    /// A point of the open cone with T(ξ) ≥ 0, when not dominated.
    pub witness: Option<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub dominated: bool,
    pub certificates: Vec<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl DominationVerdict {
    pub fn to_json(&self) -> VerdictJson {
        VerdictJson {
            dominated: self.dominated,
            certificates: self.certificates.iter().map(|c| c.to_json()).collect(),
            witness: self.witness.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect()),
        }
    }
}

/// Decide whether T < 0 on the whole open cone.
pub fn is_dominated(t: &TropRational, c: &Cone) -> Result<DominationVerdict> {
    if t.dim() != c.dim() {
        return Err(Error::Dimension { expected: c.dim(), got: t.dim() });
    }
    if c.interior_point().is_none() {
        return Err(Error::EmptyCone);
    }
    let mut certs = Vec::new();
    for a in t.pos.forms() {
        let weak: Vec<Vec<Q>> = t.neg.forms().iter().map(|b| b.iter().zip(a).map(|(x, y)| q(x - y)).collect()).collect();
        let (xi, tv, dual) = slack_lp_full(c.dim(), c.strict(), &weak);
        if tv.is_positive() {
            return Ok(DominationVerdict { dominated: false, certificates: vec![], witness: Some(xi) });
        }
        let ns = c.strict().len();
        let cert = FarkasCertificate {
            form: a.clone(),
            cone_multipliers: dual[..ns].to_vec(),
            neg_multipliers: dual[ns..ns + weak.len()].to_vec(),
        };
        debug_assert!(cert.verify(t, c));
        certs.push(cert);
    }
    Ok(DominationVerdict { dominated: true, certificates: certs, witness: None })
}

/// Each side of f₊ − f₋ checked separately.
pub fn is_weakly_dominated(f: &SignedPositiveSum, c: &Cone) -> Result<(Option<DominationVerdict>, Option<DominationVerdict>)> {
    let side = |p: &Option<PositiveRational>| -> Result<Option<DominationVerdict>> {
        match p {
            None => Ok(None),
            Some(p) => is_dominated(&tropicalize(p), c).map(Some),
        }
    };
    Ok((side(&f.plus)?, side(&f.minus)?))
}

/// Is every point of `a` inside `b`?
pub fn cone_contains(b: &Cone, a: &Cone) -> Result<bool> {
    if a.interior_point().is_none() {
        return Ok(true);
    }
    for row in b.strict() {
        let t = TropRational::new(TropPolynomial::linear(integral_form(row)), TropPolynomial::zero(a.dim()));
        if !is_dominated(&t, a)?.dominated {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn cones_equal(a: &Cone, b: &Cone) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), got: b.dim() });
    }
    Ok(cone_contains(b, a)? && cone_contains(a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_positive;

    fn names(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("x{i}")).collect()
    }

    fn example_cone() -> (Vec<PositiveRational>, Cone) {
        let v = names(3);
        let phi: Vec<PositiveRational> = ["1/x1", "1/x3", "(x1+x3)/(x1*x2)", "(x1+x3)/(x2*x3)"]
            .iter()
            .map(|s| parse_positive(s, &v).unwrap())
            .collect();
        let c = cone_from_potentials(3, &phi).unwrap();
        (phi, c)
    }

    #[test]
    fn six_inequalities() {
        let (_, c) = example_cone();
        assert_eq!(c.strict().len(), 6);
        assert!(c.member(&[q(1), q(1), q(1)], true));
        assert!(!c.member(&[q(0), q(0), q(0)], true));
        assert!(c.member(&[q(0), q(0), q(0)], false));
    }

    #[test]
    fn domination_with_certificate() {
        let (_, c) = example_cone();
        let v = names(3);
        let f = tropicalize(&parse_positive("1/(x1*x2)", &v).unwrap());
        let verdict = is_dominated(&f, &c).unwrap();
        assert!(verdict.dominated);
        assert!(verdict.certificates.iter().all(|k| k.verify(&f, &c)));
        let g = tropicalize(&parse_positive("x1", &v).unwrap());
        let verdict = is_dominated(&g, &c).unwrap();
        assert!(!verdict.dominated);
        let w = verdict.witness.unwrap();
        assert!(c.member(&w, true));
        assert!(!g.eval(&w).unwrap().is_negative());
    }

    #[test]
    fn empty_cone() {
        let c = Cone::from_forms(1, &[vec![1], vec![-1]]);
        assert!(c.interior_point().is_none());
        let t = TropRational::linear(vec![1]);
        assert_eq!(is_dominated(&t, &c), Err(Error::EmptyCone));
    }

    #[test]
    fn json_round_trip() {
        let (_, c) = example_cone();
        assert_eq!(Cone::from_json(&c.to_json()).unwrap(), c);
    }
}
