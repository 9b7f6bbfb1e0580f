//! Minor-ratio potentials on the upper Borel, their string cones, and estimate
//! certificates for logarithmic derivatives.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cones::{cone_from_potentials, member_potentials, Cone, ConeJson};
use crate::error::{Error, Result};
use crate::lie::{bk_minor_pairs, check_w0_word, elem, iterated_left_derivative, theta_chart, MinorSet, Permutation, SymbolicMatrix};
use crate::poly::{LaurentPolynomial, Q};
use crate::rational::PositiveRational;
use crate::ring::Mat;

const WORD_SEARCH_CAP: usize = 64;

/// Coordinate names of the θ chart with torus: t1..tm, h1..hr.
pub fn theta_names(n: usize, m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("t{i}")).chain((1..n).map(|i| format!("h{i}"))).collect()
}

#[derive(Clone, Debug)]
pub struct PotentialSet {
    pub n: usize,
    pub word: Vec<usize>,
    pub names: Vec<String>,
    pub labels: Vec<String>,
    pub potentials: Vec<PositiveRational>,
}

#[derive(Serialize)]
pub struct PotentialJson {
    pub label: String,
    pub expr: String,
}

impl PotentialSet {
    pub fn to_json(&self) -> Vec<PotentialJson> {
        self.labels
            .iter()
            .zip(&self.potentials)
            .map(|(l, p)| PotentialJson { label: l.clone(), expr: p.as_rational().format_with(&self.names) })
            .collect()
    }
}

/// num/den with a monomial den folded into the numerator.
pub fn fold_monomial_den(num: &LaurentPolynomial, den: &LaurentPolynomial) -> Result<PositiveRational> {
    match den.as_monomial() {
        Some((e, c)) => {
            let inv: Vec<i32> = e.iter().map(|x| -x).collect();
            let nv = num.nvars();
            PositiveRational::new(num.mul_monomial(&inv, &(Q::one() / c)), LaurentPolynomial::one(nv))
        }
        None => PositiveRational::new(num.clone(), den.clone()),
    }
}

/// φ_i, ψ_i evaluated on a matrix; `φ_i` first then `ψ_i`, for i = 1..n−1.
pub fn potentials_on(n: usize, m: &SymbolicMatrix) -> Result<(Vec<String>, Vec<PositiveRational>)> {
    let mut labels = Vec::new();
    let mut out = Vec::new();
    for (label, num, den) in bk_minor_pairs(n) {
        out.push(fold_monomial_den(&num.eval(m), &den.eval(m))?);
        labels.push(label);
    }
    Ok((labels, out))
}

pub fn bk_potential_set(n: usize, word: &[usize]) -> Result<PotentialSet> {
    let w: Vec<i32> = word.iter().map(|&x| x as i32).collect();
    check_w0_word(n, &w)?;
    let m = theta_chart(n, &w, true)?;
    let (labels, potentials) = potentials_on(n, &m)?;
    Ok(PotentialSet { n, word: word.to_vec(), names: theta_names(n, word.len()), labels, potentials })
}

/// SL_2 upper Borel in entry coordinates (b11, b12): [[b11, b12], [0, 1/b11]].
pub fn matrix_chart_sl2() -> SymbolicMatrix {
    let v = |i| LaurentPolynomial::var(2, i);
    Mat { n: 2, a: vec![v(0), v(1), LaurentPolynomial::zero(2), LaurentPolynomial::monomial(vec![-1, 0], Q::one())] }
}

pub fn bk_potential_set_matrix_sl2() -> Result<PotentialSet> {
    let (labels, potentials) = potentials_on(2, &matrix_chart_sl2())?;
    Ok(PotentialSet { n: 2, word: vec![1], names: vec!["b11".into(), "b12".into()], labels, potentials })
}

#[derive(Clone, Debug)]
pub struct StringCone {
    pub n: usize,
    pub word: Vec<usize>,
    /// Chart the cone is expressed in; differs from `word` after a braid search.
    pub chart: PotentialSet,
    /// None when no searched chart has monomial denominators.
    pub cone: Option<Cone>,
}

#[derive(Serialize)]
pub struct StringConeJson {
    pub n: usize,
    pub word: Vec<usize>,
    pub chart_word: Vec<usize>,
    pub coords: Vec<String>,
    pub potentials: Vec<PotentialJson>,
    pub cone: Option<ConeJson>,
    pub inequalities: Vec<String>,
}

fn all_monomial_dens(p: &PotentialSet) -> bool {
    p.potentials.iter().all(|f| f.den().as_monomial().is_some())
}

impl StringCone {
    pub fn member(&self, x: &[Q], strict: bool) -> Result<bool> {
        match &self.cone {
            Some(c) => Ok(c.member(x, strict)),
            None => member_potentials(&self.chart.potentials, x, strict),
        }
    }

    pub fn to_json(&self) -> StringConeJson {
        StringConeJson {
            n: self.n,
            word: self.word.clone(),
            chart_word: self.chart.word.clone(),
            coords: self.chart.names.clone(),
            potentials: self.chart.to_json(),
            cone: self.cone.as_ref().map(|c| c.to_json()),
            inequalities: self.cone.as_ref().map(|c| format_inequalities(c, &self.chart.names)).unwrap_or_default(),
        }
    }
}

/// Each row ℓ rendered as `ℓ·ξ < 0`.
pub fn format_inequalities(c: &Cone, names: &[String]) -> Vec<String> {
    c.strict()
        .iter()
        .map(|row| {
            let mut s = String::new();
            for (k, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let neg = a < &Q::zero();
                let mag = if neg { -a.clone() } else { a.clone() };
                let coef = if mag.is_one() { String::new() } else { format!("{mag}*") };
                if s.is_empty() {
                    s.push_str(if neg { "-" } else { "" });
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                s.push_str(&format!("{coef}ξ_{}", names[k]));
            }
            if s.is_empty() {
                s.push('0');
            }
            format!("{s} < 0")
        })
        .collect()
}

/// H-representation in the θ chart of `word`, or of the first braid-equivalent
/// word whose potentials have monomial denominators.
pub fn string_cone(n: usize, word: &[usize]) -> Result<StringCone> {
    let first = bk_potential_set(n, word)?;
    if all_monomial_dens(&first) {
        let cone = cone_from_potentials(first.names.len(), &first.potentials)?;
        return Ok(StringCone { n, word: word.to_vec(), chart: first, cone: Some(cone) });
    }
    for w in Permutation::longest(n).reduced_words().into_iter().take(WORD_SEARCH_CAP) {
        if w == word {
            continue;
        }
        let p = bk_potential_set(n, &w)?;
        if all_monomial_dens(&p) {
            let cone = cone_from_potentials(p.names.len(), &p.potentials)?;
            return Ok(StringCone { n, word: word.to_vec(), chart: p, cone: Some(cone) });
        }
    }
    Ok(StringCone { n, word: word.to_vec(), chart: first, cone: None })
}

pub fn string_cone_matrix_sl2() -> Result<StringCone> {
    let p = bk_potential_set_matrix_sl2()?;
    let cone = cone_from_potentials(2, &p.potentials)?;
    Ok(StringCone { n: 2, word: vec![1], chart: p, cone: Some(cone) })
}

/// α with α/t_1 − ∂_{t_1}D / D subtraction-free, D = E_{j_2}⋯E_{j_k}·Δ on θ_word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateCertificate {
    pub alpha: u64,
    pub expansion_degrees: Vec<i32>,
}

pub struct EstimateData {
    pub certificate: EstimateCertificate,
    /// t_1-expansion of D, in increasing degree.
    pub expansion: Vec<(i32, LaurentPolynomial)>,
    pub derivative: LaurentPolynomial,
}

/// E_j = E_{j,j+1} for a 1-based simple index.
pub fn simple_e(n: usize, j: usize) -> crate::lie::RatMatrix {
    elem(n, j - 1, j)
}

pub fn estimate_domination_certificate(n: usize, jword: &[usize], minor: &MinorSet, word: &[usize]) -> Result<EstimateData> {
    let w: Vec<i32> = word.iter().map(|&x| x as i32).collect();
    check_w0_word(n, &w)?;
    if jword.is_empty() || jword[0] != word[0] || jword.iter().any(|&j| j == 0 || j >= n) {
        return Err(Error::Invalid("jword must be nonempty, start with the first letter of the word, and use letters 1..n-1".into()));
    }
    let m = theta_chart(n, &w, true)?;
    let xs: Vec<_> = jword[1..].iter().map(|&j| simple_e(n, j)).collect();
    let d = iterated_left_derivative(&xs, minor, &m);
    if d.is_zero() {
        return Err(Error::ZeroDerivative);
    }
    let expansion: Vec<(i32, LaurentPolynomial)> = d.expand_in(0).into_iter().collect();
    if expansion.iter().any(|(k, f)| *k < 0 || !f.all_positive()) {
        return Err(Error::NotPositive("t_1-expansion is not a positive polynomial in t_1".into()));
    }
    let degs: Vec<i32> = expansion.iter().map(|(k, _)| *k).collect();
    let alpha = degs.iter().cloned().max().unwrap_or(0).max(1) as u64;
    Ok(EstimateData { certificate: EstimateCertificate { alpha, expansion_degrees: degs }, expansion, derivative: d })
}

impl EstimateData {
    /// α·f_0 ≥ 0 and (α−k)·f_k subtraction-free for k ≥ 1, and the numerator
    /// α·D − t_1·∂D agrees with Σ (α−k) f_k t_1^k.
    pub fn verify(&self) -> bool {
        let a = self.certificate.alpha as i64;
        let d = &self.derivative;
        let lhs = &d.scale(&Q::from_integer(a.into())) - &d.derivative(0).mul_monomial(&unit(d.nvars(), 0), &Q::one());
        let mut rhs = LaurentPolynomial::zero(d.nvars());
        for (k, f) in &self.expansion {
            let c = Q::from_integer((a - *k as i64).into());
            if c < Q::zero() || !f.all_positive() {
                return false;
            }
            let mut e = vec![0; d.nvars()];
            e[0] = *k;
            rhs = &rhs + &f.mul_monomial(&e, &c);
        }
        lhs == rhs
    }
}

fn unit(nv: usize, i: usize) -> Vec<i32> {
    let mut e = vec![0; nv];
    e[i] = 1;
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_positive;
    use crate::lie::{cluster_minors, coroot};

    #[test]
    fn sl2_theta_potentials() {
        let p = bk_potential_set(2, &[1]).unwrap();
        let v = p.names.clone();
        assert!(p.potentials[0].equals(&parse_positive("1/t1", &v).unwrap()));
        assert!(p.potentials[1].equals(&parse_positive("h1^2/t1", &v).unwrap()));
    }

    #[test]
    fn sl2_matrix_potentials() {
        let p = bk_potential_set_matrix_sl2().unwrap();
        let v = p.names.clone();
        assert!(p.potentials[0].equals(&parse_positive("b11^-1/b12", &v).unwrap()));
        assert!(p.potentials[1].equals(&parse_positive("b11/b12", &v).unwrap()));
    }

    #[test]
    fn first_letter_identity() {
        for word in [vec![1], vec![1, 2, 1], vec![2, 1, 2]] {
            let n = if word.len() == 1 { 2 } else { 3 };
            let p = bk_potential_set(n, &word).unwrap();
            let i1 = word[0];
            let phi = &p.potentials[2 * (i1 - 1)];
            let expect = PositiveRational::new(LaurentPolynomial::one(p.names.len()), LaurentPolynomial::var(p.names.len(), 0)).unwrap();
            assert!(phi.equals(&expect), "word {word:?}");
        }
    }

    #[test]
    fn sl2_cones() {
        let c = string_cone(2, &[1]).unwrap().cone.unwrap();
        assert!(c.member(&[crate::poly::q(1), crate::poly::q(0)], true));
        assert!(!c.member(&[crate::poly::q(1), crate::poly::q(1)], true));
        let g = string_cone_matrix_sl2().unwrap().cone.unwrap();
        assert!(g.member(&[crate::poly::q(0), crate::poly::q(1)], true));
        assert!(!g.member(&[crate::poly::q(1), crate::poly::q(1)], true));
    }

    #[test]
    fn sl3_cone_has_interior() {
        for w in [vec![1, 2, 1], vec![2, 1, 2]] {
            let sc = string_cone(3, &w).unwrap();
            let c = sc.cone.as_ref().unwrap();
            let x = c.interior_point().unwrap();
            assert!(member_potentials(&sc.chart.potentials, &x, true).unwrap());
        }
    }

    #[test]
    fn estimate_sl2() {
        let den = MinorSet::new(vec![0], vec![1]);
        let e = estimate_domination_certificate(2, &[1], &den, &[1]).unwrap();
        assert_eq!(e.certificate.alpha, 1);
        assert!(e.verify());
    }

    #[test]
    fn estimate_sl3_and_left_action_is_t1_derivative() {
        // rows {1} are fixed by the left action of E_2, so that minor has no certificate
        let top = MinorSet::new(vec![0], vec![2]);
        assert_eq!(estimate_domination_certificate(3, &[1, 2], &top, &[1, 2, 1]).err(), Some(Error::ZeroDerivative));
        let minor = MinorSet::new(vec![0, 1], vec![1, 2]);
        let e = estimate_domination_certificate(3, &[1, 2], &minor, &[1, 2, 1]).unwrap();
        assert!(e.verify());
        let m = theta_chart(3, &[1, 2, 1], true).unwrap();
        let full = iterated_left_derivative(&[simple_e(3, 1), simple_e(3, 2)], &minor, &m);
        assert_eq!(full, e.derivative.derivative(0));
    }

    #[test]
    fn coroot_ratio_is_constant() {
        let m = theta_chart(3, &[1, 2, 1], true).unwrap();
        for ms in cluster_minors(3, &[1, 2, 1]) {
            let d = ms.eval(&m);
            let hd = iterated_left_derivative(&[coroot(3, 1)], &ms, &m);
            let ratio = hd.div_exact(&d).unwrap();
            assert!(ratio.as_constant().is_some());
        }
    }
}
