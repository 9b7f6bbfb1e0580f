//! Real form of the G* chart and its partial tropicalization: the cone on the
//! fixed subspace L, the fixed torus, the constant bracket pairing them, and
//! numerical checks that the scaled bracket converges to it.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bk::{format_inequalities, potentials_on};
use crate::cones::{cone_from_potentials, cones_equal, Cone, ConeJson};
use crate::error::{Error, Result};
use crate::gstar::{BracketEntry, GStarChart};
use crate::lie::{bk_minor_pairs, WeightVector};
use crate::linalg::{fit_line, invert_q, rank_q, solve_q};
use crate::poly::{q, q_to_f64, LaurentPolynomial, Q};
use crate::rational::PositiveRational;
use crate::scaled::Scaled;
use crate::gstar::to_f64_matrix;
use crate::tropical::{linearity_chambers, tropicalize, LinearForm, PLMap, TropPolynomial};

#[derive(Clone, Debug)]
pub struct RealFormSpec {
    pub n: usize,
    pub word: Vec<usize>,
    pub dim: usize,
    /// σ(k) on chart indices; σ² = id.
    pub sigma: Vec<usize>,
    /// Chart indices carrying the L coordinates: the b⁺ block, then the fixed ones.
    pub l_index: Vec<usize>,
    /// Chart indices carrying the torus angles (the b⁺ block).
    pub torus_index: Vec<usize>,
    /// e_k + e_σ(k), or e_k when fixed.
    pub l_basis: Vec<Vec<Q>>,
    /// e_k − e_σ(k).
    pub t_basis: Vec<Vec<i64>>,
}

impl RealFormSpec {
    pub fn torus_dim(&self) -> usize {
        self.t_basis.len()
    }

    /// 1-based cycle notation, fixed points omitted.
    pub fn cycles(&self) -> String {
        let mut s = String::new();
        for (k, &j) in self.sigma.iter().enumerate() {
            if k < j {
                s.push_str(&format!("({} {})", k + 1, j + 1));
            }
        }
        if s.is_empty() {
            "()".into()
        } else {
            s
        }
    }
}

/// τ sends a minor of b⁺ to the same minor of τ(b⁻) and fixes the principal ones.
pub fn real_form_spec(chart: &GStarChart) -> Result<RealFormSpec> {
    let d = chart.dim();
    let mut sigma = vec![usize::MAX; d];
    for (k, c) in chart.coords.iter().enumerate() {
        if c.minor.is_principal() {
            sigma[k] = k;
            continue;
        }
        let other = 3 - c.side;
        let j = chart
            .coords
            .iter()
            .position(|o| o.side == other && o.minor == c.minor)
            .ok_or_else(|| Error::Invalid(format!("no τ-partner for {}", c.label)))?;
        sigma[k] = j;
    }
    let block: Vec<usize> = (0..d).filter(|&k| chart.coords[k].side == 1 && sigma[k] != k).collect();
    let fixed: Vec<usize> = (0..d).filter(|&k| sigma[k] == k).collect();
    let l_index: Vec<usize> = block.iter().chain(&fixed).cloned().collect();
    let unit = |k: usize| -> Vec<Q> { (0..d).map(|i| if i == k { Q::one() } else { Q::zero() }).collect() };
    let l_basis = l_index
        .iter()
        .map(|&k| {
            let mut v = unit(k);
            v[sigma[k]] = Q::one();
            v
        })
        .collect();
    let t_basis = block
        .iter()
        .map(|&k| {
            let mut v = vec![0i64; d];
            v[k] = 1;
            v[sigma[k]] = -1;
            v
        })
        .collect();
    Ok(RealFormSpec { n: chart.n, word: chart.word.clone(), dim: d, sigma, l_index, torus_index: block, l_basis, t_basis })
}

/// Keep only the listed variables, in order; the others must not occur.
fn restrict(p: &LaurentPolynomial, keep: &[usize]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        keep.len(),
        p.terms().map(|(e, c)| {
            debug_assert!(e.iter().enumerate().all(|(i, &k)| k == 0 || keep.contains(&i)));
            (keep.iter().map(|&i| e[i]).collect(), c.clone())
        }),
    )
}

fn weight_ints(n: usize, rows: &[usize], cols: &[usize]) -> Vec<i64> {
    let to_int = |w: WeightVector| -> Vec<i64> {
        w.0.iter()
            .map(|x| {
                let y = x * q(n as i64);
                y.to_integer().try_into().expect("small weight")
            })
            .collect()
    };
    let mut v = to_int(WeightVector::from_set(n, rows));
    v.extend(to_int(WeightVector::from_set(n, cols)));
    v
}

/// Write f as a Laurent polynomial in the functions zs, searching exponents in
/// [−bound, bound] with the right torus bi-weight and solving exactly for the
/// coefficients.
pub fn laurent_in(f: &PositiveRational, fw: &[i64], zs: &[LaurentPolynomial], zw: &[Vec<i64>], bound: i32) -> Result<LaurentPolynomial> {
    let d = zs.len();
    let nv = f.nvars();
    let mut candidates: Vec<Vec<i32>> = Vec::new();
    let mut e = vec![-bound; d];
    loop {
        let ok = (0..fw.len()).all(|c| (0..d).map(|k| e[k] as i64 * zw[k][c]).sum::<i64>() == fw[c]);
        if ok {
            candidates.push(e.clone());
        }
        let mut k = 0;
        while k < d && e[k] == bound {
            e[k] = -bound;
            k += 1;
        }
        if k == d {
            break;
        }
        e[k] += 1;
    }
    if candidates.is_empty() {
        return Err(Error::NotDivisible);
    }
    let b = bound as u32;
    let pows: Vec<Vec<LaurentPolynomial>> = zs.iter().map(|z| (0..=2 * b).map(|p| z.pow(p)).collect()).collect();
    let shift = pows.iter().fold(LaurentPolynomial::one(nv), |acc, p| &acc * &p[b as usize]);
    let cols: Vec<LaurentPolynomial> = candidates
        .iter()
        .map(|e| {
            let mono = e.iter().enumerate().fold(LaurentPolynomial::one(nv), |acc, (k, &x)| &acc * &pows[k][(x + bound) as usize]);
            &mono * f.den()
        })
        .collect();
    let rhs = &shift * f.num();
    let mut rows: Vec<Vec<i32>> = rhs.terms().map(|(e, _)| e.clone()).collect();
    for c in &cols {
        rows.extend(c.terms().map(|(e, _)| e.clone()));
    }
    rows.sort();
    rows.dedup();
    let a: Vec<Vec<Q>> = rows.iter().map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
    let b_vec: Vec<Q> = rows.iter().map(|r| rhs.coeff(r)).collect();
    let x = solve_q(&a, &b_vec).ok_or(Error::NotDivisible)?;
    let out = LaurentPolynomial::from_terms(d, candidates.into_iter().zip(x).filter(|(_, c)| !c.is_zero()));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PtSpace {
    pub chart: GStarChart,
    pub spec: RealFormSpec,
    pub table: Vec<BracketEntry>,
    /// π_ab = i·p[a][b]
    pub p: Vec<Vec<Q>>,
    pub l_names: Vec<String>,
    pub t_names: Vec<String>,
    /// Potentials on b⁺ as Laurent polynomials in the L coordinates.
    pub z_potentials: Vec<(String, PositiveRational)>,
    pub cone: Cone,
    /// String cone with torus in the θ-chart coordinates (t, h).
    pub theta_cone: Cone,
    /// Linearity chambers of the tropical transition η ↦ ξ.
    pub pieces: Vec<Piece>,
    /// On every chamber, the image of the θ cone piece equals the PT cone
    /// restricted to the image of the chamber.
    pub cone_matches_theta: bool,
    /// {ξ_i, ν_j} for i in L, j in the torus.
    pub bracket: Vec<Vec<Q>>,
    pub rank: usize,
    /// p_{σa,σb} = −p_ab for every pair.
    pub anti_invariant: bool,
    euler: Vec<Vec<LaurentPolynomial>>,
}

/// A chamber of the transition, where ξ = A η.
#[derive(Clone, Debug)]
pub struct Piece {
    pub chamber: Cone,
    pub a: Vec<Vec<Q>>,
    /// The image of the chamber in ξ coordinates.
    pub region: Cone,
    a_inv: Vec<Vec<f64>>,
    /// Coefficients of the dominant terms of the coordinates.
    lead: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabeledExpr {
    pub label: String,
    pub expr: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PtJson {
    pub n: usize,
    pub word: Vec<usize>,
    pub coords: Vec<String>,
    pub sigma: String,
    pub l_coords: Vec<String>,
    pub torus_coords: Vec<String>,
    pub torus_dim: usize,
    pub potentials: Vec<LabeledExpr>,
    pub cone: ConeJson,
    pub inequalities: Vec<String>,
    pub cone_matches_theta_string_cone: bool,
    pub bracket_normalization: String,
    pub bracket: Vec<Vec<String>>,
    pub rank: usize,
    pub anti_invariant: bool,
}

impl PtSpace {
    pub fn new(chart: GStarChart) -> Result<Self> {
        let spec = real_form_spec(&chart)?;
        let table = chart.bracket_table()?;
        let d = chart.dim();
        let p = GStarChart::pi_matrix(&table, d);
        let anti_invariant = (0..d).all(|a| (0..d).all(|b| p[spec.sigma[a]][spec.sigma[b]] == -p[a][b].clone()));
        let (m, r) = (chart.m, chart.r);
        let label = |k: usize| chart.coords[k].minor.label();
        let l_names: Vec<String> = spec.l_index.iter().map(|&k| format!("xi[{}]", label(k))).collect();
        let t_names: Vec<String> = spec.torus_index.iter().map(|&k| format!("nu[{}]", label(k))).collect();

        // θ variables of b⁺: t1..tm then h1..hr.
        let x_index: Vec<usize> = (0..m).chain(2 * m..2 * m + r).collect();
        let zs: Vec<LaurentPolynomial> = spec.l_index.iter().map(|&k| restrict(&chart.coords[k].poly, &x_index)).collect();
        let zw: Vec<Vec<i64>> = spec.l_index.iter().map(|&k| weight_ints(chart.n, &chart.coords[k].minor.rows, &chart.coords[k].minor.cols)).collect();
        let (labels, phis) = potentials_on(chart.n, &chart.bplus)?;
        let pairs = bk_minor_pairs(chart.n);
        let mut theta_phis = Vec::new();
        let mut z_potentials = Vec::new();
        for ((label, f), (_, num, den)) in labels.into_iter().zip(&phis).zip(&pairs) {
            let fr = PositiveRational::new(restrict(f.num(), &x_index), restrict(f.den(), &x_index))?;
            let wn = weight_ints(chart.n, &num.rows, &num.cols);
            let wd = weight_ints(chart.n, &den.rows, &den.cols);
            let fw: Vec<i64> = wn.iter().zip(&wd).map(|(a, b)| a - b).collect();
            let mut found = None;
            for bound in 1..=3 {
                if let Ok(g) = laurent_in(&fr, &fw, &zs, &zw, bound) {
                    found = Some(g);
                    break;
                }
            }
            let g = found.ok_or_else(|| Error::Invalid(format!("{label} is not Laurent in the cluster coordinates")))?;
            z_potentials.push((label, PositiveRational::from_poly(g)?));
            theta_phis.push(fr);
        }
        let zphis: Vec<PositiveRational> = z_potentials.iter().map(|(_, f)| f.clone()).collect();
        let cone = cone_from_potentials(m + r, &zphis)?;
        let theta_cone = cone_from_potentials(m + r, &theta_phis)?;

        let zmap = PLMap::from_positive(&zs.iter().map(|z| PositiveRational::from_poly(z.clone())).collect::<Result<Vec<_>>>()?)?;
        let mut pieces = Vec::new();
        let mut cone_matches_theta = true;
        for ch in linearity_chambers(&zmap) {
            let a: Vec<Vec<Q>> = ch.linear_map.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let inv = invert_q(&a).ok_or_else(|| Error::Invalid("tropical transition is not invertible".into()))?;
            let region = ch.cone.pullback(&inv);
            let piece = Cone::new(m + r, theta_cone.strict().iter().chain(ch.cone.strict()).cloned().collect());
            let image = piece.pullback(&inv);
            let restricted = Cone::new(m + r, cone.strict().iter().chain(region.strict()).cloned().collect());
            if !cones_equal(&image, &restricted)? {
                cone_matches_theta = false;
            }
            let lead = zs
                .iter()
                .zip(&ch.linear_map)
                .map(|(z, row)| q_to_f64(&z.coeff(&row.iter().map(|&x| x as i32).collect::<Vec<_>>())))
                .collect();
            pieces.push(Piece { chamber: ch.cone, a, region, a_inv: to_f64_matrix(&inv), lead });
        }

        let half = Q::new(1.into(), 2.into());
        let bracket: Vec<Vec<Q>> = spec
            .l_index
            .iter()
            .map(|&i| spec.torus_index.iter().map(|&j| &half * (&p[i][j] - &p[i][spec.sigma[j]])).collect())
            .collect();
        let nl = spec.l_index.len();
        let nt = spec.torus_index.len();
        let mut full = vec![vec![Q::zero(); nl + nt]; nl + nt];
        for i in 0..nl {
            for j in 0..nt {
                full[i][nl + j] = bracket[i][j].clone();
                full[nl + j][i] = -bracket[i][j].clone();
            }
        }
        let rank = rank_q(&full);

        // x_k ∂z/∂x_k in the full chart variables, for the Newton Jacobian.
        let nv = chart.nv;
        let euler = zs
            .iter()
            .map(|z| {
                (0..x_index.len())
                    .map(|k| {
                        LaurentPolynomial::from_terms(
                            nv,
                            z.terms().map(|(e, c)| {
                                let mut full = vec![0; nv];
                                for (i, &xi) in x_index.iter().enumerate() {
                                    full[xi] = e[i];
                                }
                                (full, c * q(e[k] as i64))
                            }),
                        )
                    })
                    .collect()
            })
            .collect();

        Ok(PtSpace {
            chart,
            spec,
            table,
            p,
            l_names,
            t_names,
            z_potentials,
            cone,
            theta_cone,
            pieces,
            cone_matches_theta,
            bracket,
            rank,
            anti_invariant,
            euler,
        })
    }

    pub fn torus_dim(&self) -> usize {
        self.spec.torus_dim()
    }

    pub fn to_json(&self) -> PtJson {
        PtJson {
            n: self.chart.n,
            word: self.chart.word.clone(),
            coords: self.chart.labels(),
            sigma: self.spec.cycles(),
            l_coords: self.l_names.clone(),
            torus_coords: self.t_names.clone(),
            torus_dim: self.torus_dim(),
            potentials: self.z_potentials.iter().map(|(l, f)| LabeledExpr { label: l.clone(), expr: f.as_rational().format_with(&self.l_names) }).collect(),
            cone: self.cone.to_json(),
            inequalities: format_inequalities(&self.cone, &self.spec.l_index.iter().map(|&k| self.chart.coords[k].minor.label()).collect::<Vec<_>>()),
            cone_matches_theta_string_cone: self.cone_matches_theta,
            bracket_normalization: "{xi_a, nu_b} = (p_ab - p_a,sigma(b))/2 where pi_ab = i p_ab".into(),
            bracket: self.bracket.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            rank: self.rank,
            anti_invariant: self.anti_invariant,
        }
    }

    fn entry(&self, a: usize, b: usize) -> Option<&BracketEntry> {
        if a == b {
            return None;
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        self.table.iter().find(|e| e.i == i && e.j == j)
    }

    /// Log-bracket {log z_a, log z_b} split as (exact constant i·p_ab, residual).
    fn log_bracket(&self, a: usize, b: usize, w: &[Complex64]) -> Result<(Complex64, Scaled)> {
        let Some(e) = self.entry(a, b) else { return Ok((Complex64::new(0.0, 0.0), Scaled::zero())) };
        let flip = if a < b { 1.0 } else { -1.0 };
        let c = Complex64::new(0.0, flip * q_to_f64(&e.pi));
        if e.residual_num.is_zero() {
            return Ok((c, Scaled::zero()));
        }
        let zz = e.zz.eval_log(w);
        let res = e.residual_num.eval_log(w).div(&zz).ok_or_else(|| Error::NumericalBreakdown("coordinate product vanishes".into()))?;
        Ok((c, res.scale(Complex64::new(0.0, flip))))
    }

    /// Max over all residual terms of their tropical value at the θ point
    /// (η_t, η_t, η_h); the expected exponential rate of the deviation.
    pub fn predicted_rate(&self, eta: &[f64]) -> f64 {
        let x = self.full_trop(eta);
        self.table
            .iter()
            .flat_map(|e| e.term_trops())
            .map(|t| t.eval_f(&x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn full_trop(&self, eta: &[f64]) -> Vec<f64> {
        let (m, r) = (self.chart.m, self.chart.r);
        let mut x = vec![0.0; 2 * m + r];
        x[..m].copy_from_slice(&eta[..m]);
        x[m..2 * m].copy_from_slice(&eta[..m]);
        x[2 * m..].copy_from_slice(&eta[m..m + r]);
        x
    }

    /// The chamber whose image contains ξ (largest slack wins near walls).
    pub fn piece_of(&self, xi: &[f64]) -> Result<usize> {
        let slack = |c: &Cone| -> f64 {
            c.strict()
                .iter()
                .map(|r| {
                    let n = r.iter().map(|x| q_to_f64(x).powi(2)).sum::<f64>().sqrt();
                    -r.iter().zip(xi).map(|(a, b)| q_to_f64(a) * b).sum::<f64>() / n
                })
                .fold(f64::INFINITY, f64::min)
        };
        (0..self.pieces.len())
            .map(|k| (k, slack(&self.pieces[k].region)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .filter(|x| x.1 > -1e-9)
            .map(|x| x.0)
            .ok_or_else(|| Error::Invalid("point outside every chamber image".into()))
    }

    /// η with Z^t(η) = ξ.
    pub fn theta_of(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let p = &self.pieces[self.piece_of(xi)?];
        Ok(p.a_inv.iter().map(|r| r.iter().zip(xi).map(|(a, b)| a * b).sum()).collect())
    }

    /// Log θ variables (t, u = t̄, h) of the real-form point with log z = sξ + iν
    /// on the b⁺ block, by Newton's method from the dominant-term guess.
    pub fn chart_point(&self, s: f64, pt: &PtPoint) -> Result<Vec<Complex64>> {
        let nl = self.spec.l_index.len();
        let nt = self.spec.torus_index.len();
        if pt.xi.len() != nl || pt.nu.len() != nt {
            return Err(Error::Dimension { expected: nl + nt, got: pt.xi.len() + pt.nu.len() });
        }
        let target: Vec<Complex64> = (0..nl).map(|k| Complex64::new(s * pt.xi[k], if k < nt { pt.nu[k] } else { 0.0 })).collect();
        // dominant-term guess: log z ≈ ln(lead) + A w
        let piece = &self.pieces[self.piece_of(&pt.xi)?];
        let mut w: Vec<Complex64> = piece
            .a_inv
            .iter()
            .map(|r| r.iter().zip(&target).zip(&piece.lead).map(|((a, t), c)| (t - Complex64::new(c.ln(), 0.0)) * a).sum())
            .collect();
        let zs: Vec<&LaurentPolynomial> = self.spec.l_index.iter().map(|&k| &self.chart.coords[k].poly).collect();
        let residual = |w: &[Complex64]| -> Result<(Vec<Complex64>, Vec<Scaled>)> {
            let full = self.lift(w);
            let mut f = Vec::with_capacity(nl);
            let mut vals = Vec::with_capacity(nl);
            for k in 0..nl {
                let v = zs[k].eval_log(&full);
                if v.is_zero() {
                    return Err(Error::NumericalBreakdown("coordinate vanishes".into()));
                }
                let mut im = v.arg() - target[k].im;
                im = (im + PI).rem_euclid(2.0 * PI) - PI;
                f.push(Complex64::new(v.ln_abs() - target[k].re, im));
                vals.push(v);
            }
            Ok((f, vals))
        };
        let norm = |f: &[Complex64]| f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (mut f, mut vals) = residual(&w)?;
        for _ in 0..100 {
            if norm(&f) < 1e-12 * (1.0 + s) {
                return Ok(self.lift(&w));
            }
            let full = self.lift(&w);
            let jac = DMatrix::from_fn(nl, nl, |a, k| self.euler[a][k].eval_log(&full).div(&vals[a]).map(|x| x.to_complex()).unwrap_or_default());
            let step = jac.lu().solve(&DVector::from_column_slice(&f)).ok_or_else(|| Error::NumericalBreakdown("singular chart Jacobian".into()))?;
            let mut lambda = 1.0;
            loop {
                let trial: Vec<Complex64> = w.iter().zip(step.iter()).map(|(x, d)| x - d * lambda).collect();
                if let Ok((f2, v2)) = residual(&trial) {
                    if norm(&f2) < norm(&f) || lambda < 1e-3 {
                        w = trial;
                        f = f2;
                        vals = v2;
                        break;
                    }
                }
                lambda *= 0.5;
                if lambda < 1e-4 {
                    return Err(Error::NumericalBreakdown("Newton step failed".into()));
                }
            }
        }
        Err(Error::NumericalBreakdown(format!("no convergence at s = {s}")))
    }

    /// Full log vector (t, t̄, h) from the b⁺ unknowns (t, h).
    fn lift(&self, w: &[Complex64]) -> Vec<Complex64> {
        let (m, r) = (self.chart.m, self.chart.r);
        let mut full = vec![Complex64::new(0.0, 0.0); 2 * m + r];
        for k in 0..m {
            full[k] = w[k];
            full[m + k] = w[k].conj();
        }
        for k in 0..r {
            full[2 * m + k] = Complex64::new(w[m + k].re, 0.0);
        }
        full
    }

    /// The real-form point at scale s directly from θ data: log t = sη + iφ.
    pub fn theta_point(&self, s: f64, eta: &[f64], phase: &[f64]) -> Vec<Complex64> {
        let m = self.chart.m;
        let w: Vec<Complex64> = (0..eta.len()).map(|k| Complex64::new(s * eta[k], if k < m { phase[k] } else { 0.0 })).collect();
        self.lift(&w)
    }
}

pub fn pt_space(n: usize, word: &[usize]) -> Result<PtSpace> {
    PtSpace::new(GStarChart::default_for(n, word)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct PtPoint {
    pub xi: Vec<f64>,
    pub nu: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryValue {
    pub block: &'static str,
    pub i: String,
    pub j: String,
    pub re: f64,
    pub im: f64,
    pub target: f64,
    /// ln |measured − target|; −∞ when they agree exactly.
    pub ln_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasuredBracket {
    pub s: f64,
    pub entries: Vec<EntryValue>,
}

impl MeasuredBracket {
    pub fn ln_sup_dev(&self) -> f64 {
        self.entries.iter().map(|e| e.ln_dev).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_dev(&self) -> f64 {
        self.ln_sup_dev().exp()
    }

    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|e| e.im.abs()).fold(0.0, f64::max)
    }

    pub fn get(&self, i: &str, j: &str) -> Option<&EntryValue> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }
}

/// {ξ, ν}_s, {ξ, ξ}_s, {ν, ν}_s of the s-scaled real-form bracket, from the
/// log-brackets with ξ = (ℓ + ℓ∘σ)/(2s), ν = (ℓ − ℓ∘σ)/(2i).
pub fn numeric_bracket_at(space: &PtSpace, s: f64, pt: &PtPoint) -> Result<MeasuredBracket> {
    if s <= 0.0 {
        return Err(Error::Invalid("s must be positive".into()));
    }
    let w = space.chart_point(s, pt)?;
    measure(space, s, &w)
}

fn measure(space: &PtSpace, s: f64, w: &[Complex64]) -> Result<MeasuredBracket> {
    let sg = &space.spec.sigma;
    let li = &space.spec.l_index;
    let ti = &space.spec.torus_index;
    let i_unit = Complex64::new(0.0, 1.0);
    // Σ_k c_k·{ℓ_{a_k}, ℓ_{b_k}} as (constant, residual)
    let combo = |terms: &[(f64, usize, usize)]| -> Result<(Complex64, Scaled)> {
        let mut c = Complex64::new(0.0, 0.0);
        let mut r = Scaled::zero();
        for &(k, a, b) in terms {
            let (c0, r0) = space.log_bracket(a, b, w)?;
            c += c0 * k;
            r = r.add(&r0.scale(Complex64::new(k, 0.0)));
        }
        Ok((c, r))
    };
    let mut entries = Vec::new();
    let mut push = |block: &'static str, i: String, j: String, scale: Complex64, c: Complex64, r: Scaled, target: f64| {
        let c = c * scale;
        let r = r.scale(scale);
        let offset = Scaled::from_complex(c - Complex64::new(target, 0.0));
        let dev = offset.add(&r);
        let v = c + r.to_complex();
        entries.push(EntryValue { block, i, j, re: v.re, im: v.im, target, ln_dev: dev.ln_abs() });
    };
    for (x, &i) in li.iter().enumerate() {
        for (y, &j) in ti.iter().enumerate() {
            let (c, r) = combo(&[(1.0, i, j), (-1.0, i, sg[j]), (1.0, sg[i], j), (-1.0, sg[i], sg[j])])?;
            push("xi_nu", space.l_names[x].clone(), space.t_names[y].clone(), 1.0 / (4.0 * i_unit), c, r, q_to_f64(&space.bracket[x][y]));
        }
    }
    for x in 0..li.len() {
        for y in x + 1..li.len() {
            let (i, j) = (li[x], li[y]);
            let (c, r) = combo(&[(1.0, i, j), (1.0, i, sg[j]), (1.0, sg[i], j), (1.0, sg[i], sg[j])])?;
            push("xi_xi", space.l_names[x].clone(), space.l_names[y].clone(), Complex64::new(1.0 / (4.0 * s), 0.0), c, r, 0.0);
        }
    }
    for x in 0..ti.len() {
        for y in x + 1..ti.len() {
            let (i, j) = (ti[x], ti[y]);
            let (c, r) = combo(&[(1.0, i, j), (-1.0, i, sg[j]), (-1.0, sg[i], j), (1.0, sg[i], sg[j])])?;
            push("nu_nu", space.t_names[x].clone(), space.t_names[y].clone(), Complex64::new(-s / 4.0, 0.0), c, r, 0.0);
        }
    }
    Ok(MeasuredBracket { s, entries })
}

/// Uniform points of [−1,1]^L at distance ≥ margin from every wall, rescaled
/// so the predicted rate is −1; angles uniform in (−π, π].
pub fn sample_points(space: &PtSpace, count: usize, seed: u64) -> Result<Vec<PtPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = space.cone.strict().iter().map(|r| r.iter().map(q_to_f64).collect()).collect();
    let nl = space.spec.l_index.len();
    let nt = space.spec.torus_index.len();
    let margin = 0.05;
    let mut out = Vec::new();
    let mut tries = 0usize;
    while out.len() < count {
        tries += 1;
        if tries > 2_000_000 {
            return Err(Error::EmptyCone);
        }
        let xi: Vec<f64> = (0..nl).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let inside = rows.iter().all(|r| {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            -r.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>() >= margin * norm
        });
        if !inside {
            continue;
        }
        let nu: Vec<f64> = (0..nt).map(|_| rng.gen_range(-PI..PI)).collect();
        let rate = space.predicted_rate(&space.theta_of(&xi)?);
        if rate.is_nan() || rate >= 0.0 {
            return Err(Error::Invalid(format!("residual terms do not decay at an interior point (rate {rate})")));
        }
        let xi = xi.iter().map(|x| x / -rate).collect();
        out.push(PtPoint { xi, nu });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub id: usize,
    pub xi: Vec<f64>,
    pub nu: Vec<f64>,
    pub predicted_rate: f64,
    pub sup_dev: Vec<f64>,
    pub fitted_rate: f64,
    pub fitted_intercept: f64,
    pub rate_rel_error: f64,
    pub max_imag: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CsvRow {
    pub point_id: usize,
    pub s: f64,
    pub entry_i: String,
    pub entry_j: String,
    pub measured_re: f64,
    pub measured_im: f64,
    pub target: f64,
    pub abs_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub n: usize,
    pub word: Vec<usize>,
    pub s_grid: Vec<f64>,
    pub points: Vec<PointReport>,
    #[serde(skip)]
    pub rows: Vec<CsvRow>,
}

impl ScalingReport {
    pub fn max_rate_rel_error(&self) -> f64 {
        self.points.iter().map(|p| p.rate_rel_error).fold(0.0, f64::max)
    }
}

pub fn default_s_grid() -> Vec<f64> {
    (1..=12).map(|k| 5.0 * k as f64).collect()
}

fn fit_finite(s: &[f64], ln: &[f64]) -> (f64, f64) {
    let (x, y): (Vec<f64>, Vec<f64>) = s.iter().zip(ln).filter(|(_, v)| v.is_finite()).map(|(a, b)| (*a, *b)).unzip();
    if x.len() < 2 {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    fit_line(&x, &y)
}

pub fn convergence_experiment(space: &PtSpace, points: &[PtPoint], s_grid: &[f64]) -> Result<ScalingReport> {
    let jobs: Vec<(usize, f64)> = (0..points.len()).flat_map(|p| s_grid.iter().map(move |&s| (p, s))).collect();
    let measured: Vec<MeasuredBracket> = crate::par::map(&jobs, |&(p, s)| numeric_bracket_at(space, s, &points[p])).into_iter().collect::<Result<_>>()?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (id, pt) in points.iter().enumerate() {
        let ms: Vec<&MeasuredBracket> = jobs.iter().zip(&measured).filter(|((p, _), _)| *p == id).map(|(_, m)| m).collect();
        let ln: Vec<f64> = ms.iter().map(|m| m.ln_sup_dev()).collect();
        let (slope, intercept) = fit_finite(s_grid, &ln);
        let predicted = space.predicted_rate(&space.theta_of(&pt.xi)?);
        for m in &ms {
            for e in &m.entries {
                rows.push(CsvRow {
                    point_id: id,
                    s: m.s,
                    entry_i: e.i.clone(),
                    entry_j: e.j.clone(),
                    measured_re: e.re,
                    measured_im: e.im,
                    target: e.target,
                    abs_dev: e.ln_dev.exp(),
                });
            }
        }
        reports.push(PointReport {
            id,
            xi: pt.xi.clone(),
            nu: pt.nu.clone(),
            predicted_rate: predicted,
            sup_dev: ln.iter().map(|x| x.exp()).collect(),
            fitted_rate: slope,
            fitted_intercept: intercept,
            rate_rel_error: ((slope - predicted) / predicted).abs(),
            max_imag: ms.iter().map(|m| m.max_imag()).fold(0.0, f64::max),
        });
    }
    Ok(ScalingReport { n: space.chart.n, word: space.chart.word.clone(), s_grid: s_grid.to_vec(), points: reports, rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub eta: Vec<f64>,
    pub predicted_rate: f64,
    pub sup_dev: Vec<f64>,
    pub fitted_rate: f64,
    pub decays: bool,
}

/// Falsification control: cross one wall of the cone where some residual term
/// stops decaying, and evaluate directly at log t = sη + iφ.
pub fn boundary_probe(space: &PtSpace, seed: u64, s_grid: &[f64]) -> Result<ProbeReport> {
    let pt = sample_points(space, 1, seed)?.remove(0);
    let eta_in = space.theta_of(&pt.xi)?;
    let rows: Vec<Vec<f64>> = space.theta_cone.strict().iter().map(|r| r.iter().map(q_to_f64).collect()).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for r in &rows {
        let nn: f64 = r.iter().map(|x| x * x).sum();
        let v: f64 = r.iter().zip(&eta_in).map(|(a, b)| a * b).sum();
        let scale = eta_in.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let lambda = (-v + 0.25 * scale * nn.sqrt()) / nn;
        let eta: Vec<f64> = eta_in.iter().zip(r).map(|(x, a)| x + lambda * a).collect();
        let rate = space.predicted_rate(&eta);
        if best.as_ref().map_or(true, |(b, _)| rate > *b) {
            best = Some((rate, eta));
        }
    }
    let (rate, eta) = best.ok_or(Error::EmptyCone)?;
    let phase: Vec<f64> = pt.nu.clone();
    let ln: Vec<f64> = s_grid
        .iter()
        .map(|&s| measure(space, s, &space.theta_point(s, &eta, &phase)).map(|m| m.ln_sup_dev()))
        .collect::<Result<_>>()?;
    let (slope, _) = fit_finite(s_grid, &ln);
    Ok(ProbeReport { eta, predicted_rate: rate, sup_dev: ln.iter().map(|x| x.exp()).collect(), fitted_rate: slope, decays: slope < 0.0 })
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSample {
    pub s: f64,
    pub scaled_log_abs: f64,
    pub phase: f64,
    /// |ln|f| − s·f^t(ξ) − ln(c)|, with c the ratio of dominant coefficients.
    pub magnitude_error: f64,
    pub phase_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlLimitReport {
    pub limit: f64,
    pub phase_slope: Vec<i64>,
    pub phase_limit: f64,
    pub samples: Vec<LimitSample>,
    pub magnitude_rate: f64,
    pub phase_rate: f64,
    pub converged: bool,
}

fn dominant(t: &TropPolynomial, xi: &[f64]) -> Result<LinearForm> {
    let vals: Vec<(f64, &LinearForm)> = t.forms().iter().map(|f| (crate::tropical::dot_f(f, xi), f)).collect();
    let top = vals.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
    let scale = 1.0 + xi.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let winners: Vec<&LinearForm> = vals.iter().filter(|v| v.0 > top - 1e-9 * scale).map(|v| v.1).collect();
    if winners.len() != 1 {
        return Err(Error::PointOnChamberWall);
    }
    Ok(winners[0].clone())
}

/// (1/s) ln|f(e^{sξ+iν})| → f^t(ξ) and arg f → (a_num − a_den)·ν inside a chamber.
pub fn pl_limit_check(f: &PositiveRational, xi: &[f64], nu: &[f64], s_grid: &[f64]) -> Result<PlLimitReport> {
    let nv = f.nvars();
    if xi.len() != nv || nu.len() != nv {
        return Err(Error::Arity { expected: nv, got: xi.len().min(nu.len()) });
    }
    let t = tropicalize(f);
    let a = dominant(&t.pos, xi)?;
    let b = dominant(&t.neg, xi)?;
    let slope: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let limit = crate::tropical::dot_f(&slope, xi);
    let phase_limit = crate::tropical::dot_f(&slope, nu);
    let ea: Vec<i32> = a.iter().map(|&x| x as i32).collect();
    let eb: Vec<i32> = b.iter().map(|&x| x as i32).collect();
    let lnc = q_to_f64(&f.num().coeff(&ea)).ln() - q_to_f64(&f.den().coeff(&eb)).ln();
    let mut samples = Vec::new();
    for &s in s_grid {
        let w: Vec<Complex64> = xi.iter().zip(nu).map(|(x, y)| Complex64::new(s * x, *y)).collect();
        let v = f.eval_log(&w)?;
        let ph = v.arg();
        let mut dph = ph - phase_limit;
        dph = (dph + PI).rem_euclid(2.0 * PI) - PI;
        samples.push(LimitSample {
            s,
            scaled_log_abs: v.ln_abs() / s,
            phase: ph,
            magnitude_error: (v.ln_abs() - s * limit - lnc).abs(),
            phase_error: dph.abs(),
        });
    }
    let sv: Vec<f64> = samples.iter().map(|x| x.s).collect();
    let lm: Vec<f64> = samples.iter().map(|x| x.magnitude_error.ln()).collect();
    let lp: Vec<f64> = samples.iter().map(|x| x.phase_error.ln()).collect();
    let last = samples.last();
    let converged = last.is_some_and(|x| x.magnitude_error < 1e-6 && x.phase_error < 1e-6);
    Ok(PlLimitReport {
        limit,
        phase_slope: slope,
        phase_limit,
        magnitude_rate: fit_finite(&sv, &lm).0,
        phase_rate: fit_finite(&sv, &lp).0,
        samples,
        converged,
    })
}

/// Zero test on the exact bracket for the principal (exactly log-canonical) rows.
pub fn exact_rows(space: &PtSpace) -> Vec<usize> {
    space
        .spec
        .l_index
        .iter()
        .enumerate()
        .filter(|(_, &k)| space.chart.coords[k].minor.is_principal())
        .map(|(x, _)| x)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_form_sl2_sl3() {
        let s2 = real_form_spec(&GStarChart::default_for(2, &[1]).unwrap()).unwrap();
        assert_eq!(s2.sigma, vec![1, 0, 2]);
        assert_eq!(s2.torus_dim(), 1);
        let s3 = real_form_spec(&GStarChart::default_for(3, &[1, 2, 1]).unwrap()).unwrap();
        assert_eq!(s3.cycles(), "(1 4)(2 5)(3 6)");
        assert_eq!(s3.l_basis.len(), 5);
        assert_eq!(s3.torus_dim(), 3);
        assert!(s3.sigma.iter().enumerate().all(|(k, &j)| s3.sigma[j] == k));
    }

    #[test]
    fn torus_dims() {
        for (n, w) in [(2, vec![1]), (3, vec![1, 2, 1]), (4, vec![1, 2, 1, 3, 2, 1])] {
            let spec = real_form_spec(&GStarChart::default_for(n, &w).unwrap()).unwrap();
            assert_eq!(spec.torus_dim(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn sl2_is_gelfand_zeitlin() {
        let sp = pt_space(2, &[1]).unwrap();
        assert!(sp.anti_invariant);
        // L = (ξ of b12, ξ of b11); torus angle of b12
        assert_eq!(sp.bracket, vec![vec![Q::zero()], vec![Q::one()]]);
        let gz = Cone::new(2, vec![vec![q(-1), q(1)], vec![q(-1), q(-1)]]);
        assert!(cones_equal(&sp.cone, &gz).unwrap());
        assert!(sp.cone_matches_theta);
        assert_eq!(sp.rank, 2);
    }

    #[test]
    fn sl3_space() {
        let sp = pt_space(3, &[1, 2, 1]).unwrap();
        assert!(sp.anti_invariant);
        assert_eq!(sp.torus_dim(), 3);
        assert_eq!(sp.rank, 6);
        assert!(sp.cone_matches_theta);
    }

    #[test]
    fn sl2_measured_bracket() {
        let sp = pt_space(2, &[1]).unwrap();
        let pts = sample_points(&sp, 3, 1).unwrap();
        for pt in &pts {
            assert!(sp.cone.member_f(&pt.xi, true));
            let m = numeric_bracket_at(&sp, 40.0, pt).unwrap();
            let e = m.get("xi[Δ_{1,1}]", "nu[Δ_{1,2}]").unwrap();
            assert!((e.re - 1.0).abs() < 1e-6, "{e:?}");
            assert!(m.max_imag() < 1e-10);
            let small = numeric_bracket_at(&sp, 5.0, pt).unwrap();
            let e5 = small.get("xi[Δ_{1,1}]", "nu[Δ_{1,2}]").unwrap();
            assert!(e5.ln_dev == f64::NEG_INFINITY || e5.ln_dev < -20.0);
        }
    }

    #[test]
    fn sl2_convergence_rate() {
        let sp = pt_space(2, &[1]).unwrap();
        let pts = sample_points(&sp, 5, 7).unwrap();
        let rep = convergence_experiment(&sp, &pts, &default_s_grid()).unwrap();
        for p in &rep.points {
            assert!(*p.sup_dev.last().unwrap() < 1e-4);
            assert!(p.fitted_rate < 0.0);
            assert!(p.rate_rel_error < 0.1, "{p:?}");
        }
        let probe = boundary_probe(&sp, 3, &default_s_grid()).unwrap();
        assert!(!probe.decays, "{probe:?}");
    }

    #[test]
    fn sl3_convergence_rate() {
        let sp = pt_space(3, &[1, 2, 1]).unwrap();
        let pts = sample_points(&sp, 3, 0).unwrap();
        let rep = convergence_experiment(&sp, &pts, &default_s_grid()).unwrap();
        for p in &rep.points {
            assert!(*p.sup_dev.last().unwrap() < 1e-4);
            assert!(p.rate_rel_error < 0.1, "{p:?}");
            assert!(p.max_imag < 1e-10);
        }
        // principal rows are exactly log-canonical: no residual at any s
        let rows = exact_rows(&sp);
        assert_eq!(rows.len(), 2);
        let m = numeric_bracket_at(&sp, 7.0, &pts[0]).unwrap();
        for &x in &rows {
            let name = &sp.l_names[x];
            assert!(m.entries.iter().filter(|e| e.block == "xi_nu" && &e.i == name).all(|e| e.ln_dev == f64::NEG_INFINITY));
        }
    }

    #[test]
    fn pl_limits() {
        let x = |i| LaurentPolynomial::var(3, i);
        let f = PositiveRational::from_poly(&x(0) + &x(2)).unwrap();
        let r = pl_limit_check(&f, &[1.0, 0.0, 0.5], &[0.3, 0.1, -0.2], &[10.0, 20.0, 40.0, 60.0]).unwrap();
        assert_eq!(r.limit, 1.0);
        assert!((r.phase_limit - 0.3).abs() < 1e-15);
        assert!(r.converged);
        assert!(r.phase_rate < -0.4);
        let wall = pl_limit_check(&f, &[1.0, 0.0, 1.0], &[0.0; 3], &[10.0]);
        assert_eq!(wall.unwrap_err(), Error::PointOnChamberWall);
        let mono = PositiveRational::monomial(vec![2, -1, 0]);
        let r = pl_limit_check(&mono, &[0.5, 0.25, 0.0], &[0.1, 0.2, 0.0], &[5.0, 10.0]).unwrap();
        assert!(r.samples.iter().all(|s| s.magnitude_error < 1e-12 && s.phase_error < 1e-12));
    }
}
