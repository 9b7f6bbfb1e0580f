//! The dual group G* of SL_n in the pair chart (b⁺, τ(b⁻)) = (θ(t; h), θ(u; h)),
//! its r-matrix Poisson bracket, and the split of coordinate brackets into a
//! constant log-canonical part and a residual.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bk::potentials_on;
use crate::cones::{cone_from_potentials, is_dominated, CertificateJson, Cone};
use crate::error::{Error, Result};
use crate::lie::{check_w0_word, cluster_minors, coroot, derivative_action, elem, theta_in, weight_pairing, MinorSet, RatMatrix, Side, SymbolicMatrix, WeightVector};
use crate::linalg::{invert_q, solve_f64};
use crate::poly::{q, q_to_f64, LaurentPolynomial, Q};
use crate::rational::PositiveRational;
use crate::tropical::{tropicalize, TropRational};

/// r = Σ coef·X⊗Y over the Cartan part and the positive roots.
#[derive(Clone, Debug)]
pub struct RMatrix {
    pub n: usize,
    pub form_scale: Q,
    pub cartan: Vec<(Q, RatMatrix, RatMatrix)>,
    /// (E_ij, E_ji / form_scale) for i < j.
    pub roots: Vec<(RatMatrix, RatMatrix)>,
}

fn trace_mul(a: &RatMatrix, b: &RatMatrix) -> Q {
    a.mul(b).a.iter().step_by(a.n + 1).fold(Q::zero(), |s, x| s + x)
}

fn scaled(x: &RatMatrix, c: &Q) -> RatMatrix {
    x.map(|v| v * c)
}

/// ½ Σ X_k⊗X_k for a form-orthonormal Cartan basis is written as
/// ½ Σ_{ab} (G⁻¹)_{ab} H_a⊗H_b with G the Gram matrix of the simple coroots.
pub fn build_rmatrix(n: usize, form_scale: &Q) -> Result<RMatrix> {
    if *form_scale <= Q::zero() {
        return Err(Error::Invalid("form_scale must be positive".into()));
    }
    if n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    let r = n - 1;
    let h: Vec<RatMatrix> = (1..=r).map(|i| coroot(n, i)).collect();
    let gram: Vec<Vec<Q>> = (0..r).map(|a| (0..r).map(|b| form_scale * trace_mul(&h[a], &h[b])).collect()).collect();
    let gi = invert_q(&gram).ok_or_else(|| Error::Invalid("degenerate Cartan form".into()))?;
    let half = Q::new(1.into(), 2.into());
    let mut cartan = Vec::new();
    for a in 0..r {
        for b in 0..r {
            if !gi[a][b].is_zero() {
                cartan.push((&half * &gi[a][b], h[a].clone(), h[b].clone()));
            }
        }
    }
    let inv = Q::one() / form_scale;
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            roots.push((elem(n, i, j), scaled(&elem(n, j, i), &inv)));
        }
    }
    Ok(RMatrix { n, form_scale: form_scale.clone(), cartan, roots })
}

impl RMatrix {
    pub fn form(&self, x: &RatMatrix, y: &RatMatrix) -> Q {
        &self.form_scale * trace_mul(x, y)
    }

    fn terms(&self) -> Vec<(Q, RatMatrix, RatMatrix)> {
        let mut out = self.cartan.clone();
        out.extend(self.roots.iter().map(|(a, b)| (Q::one(), a.clone(), b.clone())));
        out
    }
}

/// {f, g}_B = Σ (a·f)(b·g) − (f·a)(g·b) over r = Σ a⊗b, with a·f the left and
/// f·a the right derivative. On SL_2 this gives {b11, b12} = b11·b12.
pub fn bracket_b(rm: &RMatrix, f: &MinorSet, g: &MinorSet, m: &SymbolicMatrix) -> LaurentPolynomial {
    let nv = m.a[0].nvars();
    let mut out = LaurentPolynomial::zero(nv);
    for (c, a, b) in rm.terms() {
        let l = &derivative_action(Side::Left, &a, f, m) * &derivative_action(Side::Left, &b, g, m);
        let r = &derivative_action(Side::Right, &a, f, m) * &derivative_action(Side::Right, &b, g, m);
        out = &out + &(&l - &r).scale(&c);
    }
    out
}

/// One term coef·a⊗b of the double's r-matrix; slot k holds the component
/// acting on side k+1 (None = zero).
#[derive(Clone, Debug)]
struct DoubleTerm {
    coef: Q,
    a: [Option<usize>; 2],
    b: [Option<usize>; 2],
    cartan: bool,
    label: String,
}

#[derive(Clone, Debug)]
pub struct Coord {
    /// 1 for b⁺, 2 for τ(b⁻).
    pub side: usize,
    pub minor: MinorSet,
    pub label: String,
    pub poly: LaurentPolynomial,
}

#[derive(Clone, Debug)]
pub struct GStarChart {
    pub n: usize,
    pub word: Vec<usize>,
    pub m: usize,
    pub r: usize,
    pub nv: usize,
    /// t1..tm, u1..um, h1..hr
    pub names: Vec<String>,
    pub bplus: SymbolicMatrix,
    pub c: SymbolicMatrix,
    pub coords: Vec<Coord>,
    pub rm: RMatrix,
    /// Global sign in {z_i, z_j} = i·sign·D(z_i, z_j).
    pub sign: i32,
    elems: Vec<RatMatrix>,
    terms: Vec<DoubleTerm>,
    /// deriv[k][e] = (left, right) derivative of coordinate k by elems[e] on its side.
    deriv: Vec<BTreeMap<usize, (LaurentPolynomial, LaurentPolynomial)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualTerm {
    pub label: String,
    /// residual = i·Σ sign·num/(z_i z_j)
    pub sign: i32,
    #[serde(skip)]
    pub num: LaurentPolynomial,
}

#[derive(Clone, Debug)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub mixed: bool,
    /// π_ij = i·pi
    pub pi: Q,
    /// raw D(z_i, z_j); the bracket is i·sign·total
    pub total: LaurentPolynomial,
    pub zz: LaurentPolynomial,
    /// residual·z_i z_j / i, as a polynomial
    pub residual_num: LaurentPolynomial,
    pub residual_terms: Vec<ResidualTerm>,
}

impl BracketEntry {
    pub fn has_residual(&self) -> bool {
        !self.residual_num.is_zero()
    }

    /// Each term as a tropical function sign·num/(z_i z_j) ↦ trop(num) − trop(zz).
    pub fn term_trops(&self) -> Vec<TropRational> {
        self.residual_terms
            .iter()
            .map(|t| tropicalize(&PositiveRational::new(t.num.clone(), self.zz.clone()).expect("split terms are positive")))
            .collect()
    }
}

pub fn format_imag(x: &Q) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        format!("{x}i")
    }
}

fn push_elem(elems: &mut Vec<RatMatrix>, x: RatMatrix) -> usize {
    if let Some(k) = elems.iter().position(|e| *e == x) {
        return k;
    }
    elems.push(x);
    elems.len() - 1
}

impl GStarChart {
    pub fn new(n: usize, word: &[usize], form_scale: &Q, sign: i32) -> Result<Self> {
        let w: Vec<i32> = word.iter().map(|&x| x as i32).collect();
        check_w0_word(n, &w)?;
        if sign != 1 && sign != -1 {
            return Err(Error::Invalid("sign must be +1 or -1".into()));
        }
        let rm = build_rmatrix(n, form_scale)?;
        let m = word.len();
        let r = n - 1;
        let nv = 2 * m + r;
        let t: Vec<usize> = (0..m).collect();
        let u: Vec<usize> = (m..2 * m).collect();
        let h: Vec<usize> = (2 * m..nv).collect();
        let bplus = theta_in(n, &w, nv, &t, Some(&h));
        let c = theta_in(n, &w, nv, &u, Some(&h));
        let names: Vec<String> = (1..=m)
            .map(|i| format!("t{i}"))
            .chain((1..=m).map(|i| format!("u{i}")))
            .chain((1..=r).map(|i| format!("h{i}")))
            .collect();

        let cl = cluster_minors(n, word);
        let nonprincipal: Vec<MinorSet> = cl.iter().filter(|x| !x.is_principal()).cloned().collect();
        let mut principal: Vec<MinorSet> = cl.iter().filter(|x| x.is_principal()).cloned().collect();
        principal.sort_by_key(|x| x.k());
        let mut coords = Vec::new();
        for ms in &nonprincipal {
            coords.push(Coord { side: 1, minor: ms.clone(), label: format!("({})_1", ms.label()), poly: ms.eval(&bplus) });
        }
        for ms in &nonprincipal {
            coords.push(Coord { side: 2, minor: ms.clone(), label: format!("({}∘τ)_2", ms.label()), poly: ms.eval(&c) });
        }
        for ms in &principal {
            coords.push(Coord { side: 1, minor: ms.clone(), label: format!("({})_1", ms.label()), poly: ms.eval(&bplus) });
        }

        // Terms of the double's r-matrix: Cartan (H_a,H_a)⊗(H_b,−H_b), roots
        // (E,E)⊗(0,−E'/s) and (E'/s,E'/s)⊗(E,0), with E = E_ij, E' = E_ji.
        let mut elems = Vec::new();
        let mut terms = Vec::new();
        let neg = -Q::one();
        for (coef, ha, hb) in &rm.cartan {
            let a = push_elem(&mut elems, ha.clone());
            let b1 = push_elem(&mut elems, hb.clone());
            let b2 = push_elem(&mut elems, scaled(hb, &neg));
            terms.push(DoubleTerm { coef: coef.clone(), a: [Some(a), Some(a)], b: [Some(b1), Some(b2)], cartan: true, label: "H".into() });
        }
        for (k, (e, f)) in rm.roots.iter().enumerate() {
            let (i, j) = { let mut it = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))); it.nth(k).unwrap() };
            let ie = push_elem(&mut elems, e.clone());
            let iff = push_elem(&mut elems, f.clone());
            let inf = push_elem(&mut elems, scaled(f, &neg));
            terms.push(DoubleTerm { coef: Q::one(), a: [Some(ie), Some(ie)], b: [None, Some(inf)], cartan: false, label: format!("E{}{}", i + 1, j + 1) });
            terms.push(DoubleTerm { coef: Q::one(), a: [Some(iff), Some(iff)], b: [Some(ie), None], cartan: false, label: format!("E{}{}", j + 1, i + 1) });
        }

        let mut chart = GStarChart { n, word: word.to_vec(), m, r, nv, names, bplus, c, coords, rm, sign, elems, terms, deriv: vec![] };
        chart.deriv = crate::par::map(&(0..chart.coords.len()).collect::<Vec<_>>(), |&k| chart.coord_derivs(k));
        Ok(chart)
    }

    pub fn default_for(n: usize, word: &[usize]) -> Result<Self> {
        Self::new(n, word, &Q::new(1.into(), 2.into()), 1)
    }

    fn coord_derivs(&self, k: usize) -> BTreeMap<usize, (LaurentPolynomial, LaurentPolynomial)> {
        let co = &self.coords[k];
        let slot = co.side - 1;
        let mut used: Vec<usize> = Vec::new();
        for t in &self.terms {
            used.extend(t.a[slot]);
            used.extend(t.b[slot]);
        }
        used.sort_unstable();
        used.dedup();
        let mut out = BTreeMap::new();
        for e in used {
            let x = &self.elems[e];
            let (mat, xx) = if co.side == 1 {
                (&self.bplus, x.clone())
            } else {
                // b⁻ ↦ (I+εX)b⁻ moves τ(b⁻) = (b⁻ᵀ)⁻¹ to (I−εXᵀ)τ(b⁻)
                (&self.c, x.transpose().map(|v| -v.clone()))
            };
            let l = derivative_action(Side::Left, &xx, &co.minor, mat);
            let r = derivative_action(Side::Right, &xx, &co.minor, mat);
            out.insert(e, (l, r));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.label.clone()).collect()
    }

    fn d(&self, k: usize, slot: &[Option<usize>; 2], right: bool) -> Option<&LaurentPolynomial> {
        let e = slot[self.coords[k].side - 1]?;
        let (l, r) = self.deriv[k].get(&e)?;
        Some(if right { r } else { l })
    }

    /// Per-term contributions coef·(R_a z_i·R_b z_j) and −coef·(L_a z_i·L_b z_j).
    fn contributions(&self, i: usize, j: usize) -> Vec<(bool, String, LaurentPolynomial)> {
        let mut out = Vec::new();
        for t in &self.terms {
            for right in [true, false] {
                let (Some(x), Some(y)) = (self.d(i, &t.a, right), self.d(j, &t.b, right)) else { continue };
                let mut p = (x * y).scale(&t.coef);
                if !right {
                    p = -p;
                }
                if !p.is_zero() {
                    let side = if right { "R" } else { "L" };
                    out.push((t.cartan, format!("{}:{}", t.label, side), p));
                }
            }
        }
        out
    }

    /// D(z_i, z_j) before the i·sign factor.
    pub fn raw(&self, i: usize, j: usize) -> LaurentPolynomial {
        self.contributions(i, j).into_iter().fold(LaurentPolynomial::zero(self.nv), |s, (_, _, p)| &s + &p)
    }

    pub fn bracket(&self, i: usize, j: usize) -> Result<BracketEntry> {
        let nv = self.nv;
        let zz = &self.coords[i].poly * &self.coords[j].poly;
        let parts = self.contributions(i, j);
        let mixed = self.coords[i].side != self.coords[j].side;
        let mut cartan = LaurentPolynomial::zero(nv);
        let mut total = LaurentPolynomial::zero(nv);
        for (is_cartan, _, p) in &parts {
            total = &total + p;
            if *is_cartan {
                cartan = &cartan + p;
            }
        }
        let not_lc = || Error::Invalid(format!("{{{}, {}}} has no constant log-canonical part", self.coords[i].label, self.coords[j].label));
        let constant_ratio = |p: &LaurentPolynomial| -> Result<Q> {
            if p.is_zero() {
                return Ok(Q::zero());
            }
            p.div_exact(&zz).ok().and_then(|x| x.as_constant()).ok_or_else(not_lc)
        };
        let sgn = q(self.sign as i64);
        if !mixed {
            let pi = constant_ratio(&total)? * &sgn;
            return Ok(BracketEntry { i, j, mixed, pi, total, zz, residual_num: LaurentPolynomial::zero(nv), residual_terms: vec![] });
        }
        let pi = constant_ratio(&cartan)? * &sgn;
        let residual_num = (&total - &cartan).scale(&sgn);
        let mut residual_terms = Vec::new();
        for (is_cartan, label, p) in parts {
            if is_cartan {
                continue;
            }
            let (plus, minus) = p.split_signs();
            if !plus.is_zero() {
                residual_terms.push(ResidualTerm { label: label.clone(), sign: self.sign, num: plus });
            }
            if !minus.is_zero() {
                residual_terms.push(ResidualTerm { label, sign: -self.sign, num: minus });
            }
        }
        Ok(BracketEntry { i, j, mixed, pi, total, zz, residual_num, residual_terms })
    }

    /// Entries for all i < j.
    pub fn bracket_table(&self) -> Result<Vec<BracketEntry>> {
        let d = self.dim();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        crate::par::map(&pairs, |&(i, j)| self.bracket(i, j)).into_iter().collect()
    }

    /// π with π_ij = i·pi[i][j].
    pub fn pi_matrix(table: &[BracketEntry], d: usize) -> Vec<Vec<Q>> {
        let mut p = vec![vec![Q::zero(); d]; d];
        for e in table {
            p[e.i][e.j] = e.pi.clone();
            p[e.j][e.i] = -e.pi.clone();
        }
        p
    }

    /// ½(K(J, J') − K(I, I')) for a side-1 minor Δ_{I,J} and side-2 minor Δ_{I',J'},
    /// with K the form induced on weights.
    pub fn cartan_prediction(&self, i: usize, j: usize) -> Q {
        let (a, b) = (&self.coords[i].minor, &self.coords[j].minor);
        let w = |s: &[usize]| WeightVector::from_set(self.n, s);
        let k = Q::one() / &self.rm.form_scale;
        let half = Q::new(1.into(), 2.into());
        let v = &half * (weight_pairing(&w(&a.cols), &w(&b.cols), &k) - weight_pairing(&w(&a.rows), &w(&b.rows), &k));
        let oriented = if self.coords[i].side == 1 { v } else { -v };
        oriented * q(self.sign as i64)
    }

    /// The potentials φ_i, ψ_i on b⁺ and on τ(b⁻), in the (t, u, h) variables.
    pub fn phi(&self) -> Result<(Vec<String>, Vec<PositiveRational>)> {
        let (l1, p1) = potentials_on(self.n, &self.bplus)?;
        let (l2, p2) = potentials_on(self.n, &self.c)?;
        let labels = l1.into_iter().map(|l| format!("{l}[1]")).chain(l2.into_iter().map(|l| format!("{l}[2]"))).collect();
        Ok((labels, p1.into_iter().chain(p2).collect()))
    }

    pub fn phi_cone(&self) -> Result<Cone> {
        cone_from_potentials(self.nv, &self.phi()?.1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermVerdict {
    pub label: String,
    pub sign: i32,
    pub expr: String,
    pub dominated: bool,
    pub certificates: Vec<CertificateJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    pub zi: String,
    pub zj: String,
    pub mixed: bool,
    pub pi: String,
    pub residual_terms: Vec<TermVerdict>,
    /// "none", "termwise" or "joint"
    pub method: String,
    pub dominated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WlcReport {
    pub n: usize,
    pub word: Vec<usize>,
    pub form_scale: String,
    pub sign: i32,
    pub coords: Vec<String>,
    pub pairs: Vec<PairReport>,
    pub all_dominated: bool,
}

/// Domination of each residual term against cone(Φ_G*); when a term fails,
/// fall back to the two sign classes of the whole residual.
pub fn pair_report(chart: &GStarChart, e: &BracketEntry, cone: &Cone) -> Result<PairReport> {
    let mut terms = Vec::new();
    let mut all = true;
    for (t, tr) in e.residual_terms.iter().zip(e.term_trops()) {
        let v = is_dominated(&tr, cone)?;
        all &= v.dominated;
        let expr = format!("{}({})/({})", if t.sign > 0 { "+i" } else { "-i" }, t.num.format_with(&chart.names), e.zz.format_with(&chart.names));
        terms.push(TermVerdict { label: t.label.clone(), sign: t.sign, expr, dominated: v.dominated, certificates: v.certificates.iter().map(|c| c.to_json()).collect() });
    }
    let mut method = if e.residual_terms.is_empty() { "none" } else { "termwise" }.to_string();
    if !all {
        let (plus, minus) = e.residual_num.split_signs();
        let mut ok = true;
        for p in [plus, minus.scale(&-Q::one())] {
            if p.is_zero() {
                continue;
            }
            let tr = tropicalize(&PositiveRational::new(p, e.zz.clone())?);
            ok &= is_dominated(&tr, cone)?.dominated;
        }
        all = ok;
        method = "joint".into();
    }
    Ok(PairReport {
        i: e.i + 1,
        j: e.j + 1,
        zi: chart.coords[e.i].label.clone(),
        zj: chart.coords[e.j].label.clone(),
        mixed: e.mixed,
        pi: format_imag(&e.pi),
        residual_terms: terms,
        method,
        dominated: all,
    })
}

pub fn verify_weak_log_canonical(chart: &GStarChart) -> Result<WlcReport> {
    let cone = chart.phi_cone()?;
    let table = chart.bracket_table()?;
    let pairs: Vec<PairReport> = crate::par::map(&table, |e| pair_report(chart, e, &cone)).into_iter().collect::<Result<_>>()?;
    let all_dominated = pairs.iter().all(|p| p.dominated);
    Ok(WlcReport {
        n: chart.n,
        word: chart.word.clone(),
        form_scale: chart.rm.form_scale.to_string(),
        sign: chart.sign,
        coords: chart.labels(),
        pairs,
        all_dominated,
    })
}

/// Largest relative Jacobi defect over all coordinate triples at a point of the
/// (t, u, h) chart, using ∂P/∂z = J⁻ᵀ ∇ₓP.
pub fn jacobi_defect(chart: &GStarChart, x: &[f64]) -> Result<f64> {
    let d = chart.dim();
    let nv = chart.nv;
    let ev = |p: &LaurentPolynomial| -> f64 { p.terms().map(|(e, c)| q_to_f64(c) * e.iter().zip(x).map(|(&k, v)| v.powi(k)).product::<f64>()).sum() };
    let jac: Vec<Vec<f64>> = chart.coords.iter().map(|c| (0..nv).map(|k| ev(&c.poly.derivative(k))).collect()).collect();
    let jt: Vec<Vec<f64>> = (0..nv).map(|k| (0..d).map(|a| jac[a][k]).collect()).collect();
    let mut p = vec![vec![0.0; d]; d];
    let mut dp = vec![vec![vec![0.0; d]; d]; d];
    for a in 0..d {
        for b in a + 1..d {
            let poly = chart.raw(a, b);
            let v = ev(&poly);
            let grad: Vec<f64> = (0..nv).map(|k| ev(&poly.derivative(k))).collect();
            let g = solve_f64(&jt, &grad).ok_or_else(|| Error::NumericalBreakdown("singular coordinate Jacobian".into()))?;
            p[a][b] = v;
            p[b][a] = -v;
            dp[a][b] = g.clone();
            dp[b][a] = g.iter().map(|y| -y).collect();
        }
    }
    // Normalise by the global size of π·∂π: triples whose terms all vanish
    // exactly would otherwise compare rounding noise with itself.
    let pmax = p.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let dmax = dp.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = pmax * dmax * d as f64;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let sum: f64 = (0..d).map(|k| p[a][k] * dp[b][c][k] + p[b][k] * dp[c][a][k] + p[c][k] * dp[a][b][k]).sum();
                worst = worst.max(sum.abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// The three SL_2 brackets in the chart (b12, b21, b11): returns
/// ({b11,b12}/(i b11 b12), {b11,b21}/(i b11 b21), {b12,b21}/(i(b11² − b11⁻²))).
pub fn sl2_calibration(form_scale: &Q, sign: i32) -> Result<(Q, Q, Q)> {
    let ch = GStarChart::new(2, &[1], form_scale, sign)?;
    let sg = q(sign as i64);
    let ratio = |i: usize, j: usize, target: &LaurentPolynomial| -> Result<Q> {
        let v = ch.raw(i, j).scale(&sg);
        v.div_exact(target)?.as_constant().ok_or(Error::NotDivisible)
    };
    let z = |k: usize| ch.coords[k].poly.clone();
    let b11 = z(2);
    let diff = &(&b11 * &b11) - &b11.powi(-2).expect("monomial");
    Ok((ratio(2, 0, &(&b11 * &z(0)))?, ratio(2, 1, &(&b11 * &z(1)))?, ratio(0, 1, &diff)?))
}

/// Matrix of real f64 values for an exact rational matrix.
pub fn to_f64_matrix(p: &[Vec<Q>]) -> Vec<Vec<f64>> {
    p.iter().map(|r| r.iter().map(q_to_f64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::matrix_chart_sl2;
    use crate::poly::qf;

    #[test]
    fn root_pairs_are_dual() {
        let rm = build_rmatrix(3, &qf(1, 2)).unwrap();
        for (e, f) in &rm.roots {
            assert_eq!(rm.form(e, f), Q::one());
        }
    }

    #[test]
    fn sl2_borel_bracket() {
        let rm = build_rmatrix(2, &qf(1, 2)).unwrap();
        let m = matrix_chart_sl2();
        let b11 = MinorSet::new(vec![0], vec![0]);
        let b12 = MinorSet::new(vec![0], vec![1]);
        let v = bracket_b(&rm, &b11, &b12, &m);
        assert_eq!(v, &m.get(0, 0).clone() * m.get(0, 1));
        assert!(bracket_b(&rm, &b12, &b12, &m).is_zero());
    }

    #[test]
    fn sl2_chart_and_pi() {
        let ch = GStarChart::default_for(2, &[1]).unwrap();
        assert_eq!(ch.labels(), vec!["(Δ_{1,2})_1", "(Δ_{1,2}∘τ)_2", "(Δ_{1,1})_1"]);
        let e31 = ch.bracket(2, 0).unwrap();
        assert_eq!(e31.pi, q(1));
        assert!(!e31.has_residual());
        let e32 = ch.bracket(2, 1).unwrap();
        assert_eq!(e32.pi, q(-1));
        let e12 = ch.bracket(0, 1).unwrap();
        assert_eq!(e12.pi, q(0));
        assert!(e12.has_residual());
    }

    #[test]
    fn sl2_calibration_values() {
        let (a, b, c) = sl2_calibration(&qf(1, 2), 1).unwrap();
        assert_eq!((a, b), (q(1), q(-1)));
        assert_eq!(c, q(2));
        let (a, _, _) = sl2_calibration(&q(1), 1).unwrap();
        assert_eq!(a, qf(1, 2));
    }

    #[test]
    fn same_side_bracket_is_borel_bracket() {
        let ch = GStarChart::default_for(3, &[1, 2, 1]).unwrap();
        let rm = &ch.rm;
        for i in 0..ch.dim() {
            for j in 0..ch.dim() {
                if ch.coords[i].side == 1 && ch.coords[j].side == 1 {
                    let b = bracket_b(rm, &ch.coords[i].minor, &ch.coords[j].minor, &ch.bplus);
                    assert_eq!(ch.raw(i, j), b, "{i},{j}");
                }
            }
        }
    }

    #[test]
    fn sl3_table_properties() {
        let ch = GStarChart::default_for(3, &[1, 2, 1]).unwrap();
        let d = ch.dim();
        assert_eq!(d, 8);
        for i in 0..d {
            assert!(ch.raw(i, i).is_zero());
            for j in 0..d {
                assert_eq!(ch.raw(i, j), -ch.raw(j, i));
            }
        }
        for e in ch.bracket_table().unwrap() {
            if e.mixed {
                assert_eq!(e.pi, ch.cartan_prediction(e.i, e.j), "{},{}", e.i, e.j);
            } else {
                assert!(!e.has_residual());
            }
            if ch.coords[e.i].minor.is_principal() || ch.coords[e.j].minor.is_principal() {
                assert!(!e.has_residual());
            }
        }
    }

    #[test]
    fn sl3_example_pair_residual() {
        let ch = GStarChart::default_for(3, &[1, 2, 1]).unwrap();
        let e = ch.bracket(1, 5).unwrap();
        assert_eq!(ch.coords[1].label, "(Δ_{1,3})_1");
        assert_eq!(ch.coords[5].label, "(Δ_{1,2}∘τ)_2");
        assert_eq!(e.pi, q(-1));
        let m = |r: usize, c: usize, x: &SymbolicMatrix| MinorSet::new(vec![r], vec![c]).eval(x);
        let stated = &(&m(1, 2, &ch.bplus) * &m(1, 1, &ch.c)) + &(&m(2, 2, &ch.bplus) * &m(2, 1, &ch.c));
        assert_eq!(e.residual_num, stated.scale(&q(-2)));
    }

    #[test]
    fn sl2_weakly_log_canonical() {
        let ch = GStarChart::default_for(2, &[1]).unwrap();
        let rep = verify_weak_log_canonical(&ch).unwrap();
        assert!(rep.all_dominated);
        let p = rep.pairs.iter().find(|p| p.i == 1 && p.j == 2).unwrap();
        assert_eq!(p.residual_terms.len(), 2);
        assert!(p.residual_terms.iter().all(|t| t.dominated));
    }

    #[test]
    fn jacobi_sl2_sl3() {
        let ch = GStarChart::default_for(2, &[1]).unwrap();
        assert!(jacobi_defect(&ch, &[1.3, 0.7, 1.9]).unwrap() < 1e-10);
        let ch = GStarChart::default_for(3, &[1, 2, 1]).unwrap();
        let x = [1.1, 0.8, 1.7, 0.6, 1.4, 0.9, 1.25, 0.75];
        let j = jacobi_defect(&ch, &x).unwrap();
        assert!(j < 1e-8, "{j}");
    }
}
