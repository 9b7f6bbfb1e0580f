use serde::Serialize;

use tropos::bk::{estimate_domination_certificate, format_inequalities, string_cone, string_cone_matrix_sl2, EstimateCertificate, StringConeJson};
use tropos::cones::{cone_from_potentials, is_dominated, is_weakly_dominated, ConeJson, VerdictJson};
use tropos::expr::{infer_vars, parse_positive, parse_rational, parse_vector, xi_names};
use tropos::gstar::{format_imag, pair_report, verify_weak_log_canonical, GStarChart, PairReport};
use tropos::lie::MinorSet;
use tropos::poly::{parse_q, Q};
use tropos::pt::{boundary_probe, convergence_experiment, pl_limit_check, pt_space, sample_points, ProbeReport, ScalingReport};
use tropos::rational::{PositiveRational, SignedPositiveSum};
use tropos::tropical::{linearity_chambers, tropicalize, PLMap, TropJson};
use tropos::verify::{run_suite, Level, SuiteOptions};
use tropos::Error;

use crate::output::{Output, Table};
use crate::{Cmd, Coords, LevelArg};

pub enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Io(_) => "IoError",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::Trop { expr, vars, at } => trop(&expr, vars.as_deref(), at.as_deref()),
        Cmd::Cone { phi, vars, member } => cone(&phi, vars.as_deref(), member.as_deref()),
        Cmd::Dominate { phi, f, vars } => dominate(&phi, &f, vars.as_deref()),
        Cmd::StringCone { n, word, coords, estimate, minor } => {
            string_cone_cmd(n, &word.0, coords, estimate.as_ref().map(|w| w.0.as_slice()), minor.as_deref())
        }
        Cmd::GstarBracket { n, word, pair, form_scale, sign } => gstar_bracket(n, &word.0, pair.as_ref().map(|w| w.0.as_slice()), &form_scale, sign),
        Cmd::VerifyWlc { n, word, form_scale, sign } => verify_wlc(n, &word.0, &form_scale, sign),
        Cmd::Pt { n, word } => pt(n, &word.0),
        Cmd::Scaling { n, word, points, smax, step, seed, probe, csv } => scaling(n, &word.0, points, smax, step, seed, probe, csv.as_deref()),
        Cmd::PlLimit { expr, vars, xi, nu, s_grid } => pl_limit(&expr, vars.as_deref(), &xi.0, &nu.0, &s_grid.0),
        Cmd::Verify { level, form_scale, seed } => verify(level, &form_scale, seed),
    }
}

fn point(s: &str, dim: usize) -> Result<Vec<Q>> {
    let x = parse_vector(s)?;
    if x.len() != dim {
        return Err(Error::Arity { expected: dim, got: x.len() }.into());
    }
    Ok(x)
}

fn strs(v: &[Q]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Serialize)]
struct TropComponent {
    expr: String,
    formatted: String,
    trop: TropJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize)]
struct ChamberJson {
    inequalities: Vec<String>,
    linear_map: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct TropReport {
    vars: Vec<String>,
    components: Vec<TropComponent>,
    chambers: Vec<ChamberJson>,
}

fn trop(exprs: &[String], vars: Option<&str>, at: Option<&str>) -> Result<Output> {
    let refs: Vec<&str> = exprs.iter().map(String::as_str).collect();
    let vars = infer_vars(&refs, vars)?;
    let fs: Vec<PositiveRational> = exprs.iter().map(|e| parse_positive(e, &vars)).collect::<tropos::Result<_>>()?;
    let names = xi_names(&vars);
    let x = at.map(|a| point(a, vars.len())).transpose()?;
    let mut components = Vec::new();
    let mut table = Table::new(vec!["component", "expr", "tropicalization", "value"]);
    for (k, (e, f)) in exprs.iter().zip(&fs).enumerate() {
        let t = tropicalize(f);
        let value = x.as_ref().map(|x| t.eval(x)).transpose()?.map(|v| v.to_string());
        let formatted = t.format(&names);
        table.push(vec![(k + 1).to_string(), e.clone(), formatted.clone(), value.clone().unwrap_or_default()]);
        components.push(TropComponent { expr: e.clone(), formatted, trop: t.to_json(), value });
    }
    let map = PLMap::from_positive(&fs)?;
    let chambers = linearity_chambers(&map)
        .into_iter()
        .map(|c| ChamberJson { inequalities: format_inequalities(&c.cone, &vars), linear_map: c.linear_map })
        .collect();
    Ok(Output::new(&TropReport { vars, components, chambers }, table))
}

fn positives(phi: &[String], extra: &[&str], vars: Option<&str>) -> Result<(Vec<String>, Vec<PositiveRational>)> {
    let refs: Vec<&str> = phi.iter().map(String::as_str).chain(extra.iter().copied()).collect();
    let vars = infer_vars(&refs, vars)?;
    let fs = phi.iter().map(|e| parse_positive(e, &vars)).collect::<tropos::Result<_>>()?;
    Ok((vars, fs))
}

fn inequality_table(rows: &[Vec<Q>], text: &[String]) -> Table {
    let mut t = Table::new(vec!["row", "coefficients", "inequality"]);
    for (k, (r, s)) in rows.iter().zip(text).enumerate() {
        t.push(vec![(k + 1).to_string(), strs(r).join(" "), s.clone()]);
    }
    t
}

#[derive(Serialize)]
struct ConeReport {
    vars: Vec<String>,
    cone: ConeJson,
    inequalities: Vec<String>,
    interior_point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    member: Option<bool>,
}

fn cone(phi: &[String], vars: Option<&str>, member: Option<&str>) -> Result<Output> {
    let (vars, fs) = positives(phi, &[], vars)?;
    let c = cone_from_potentials(vars.len(), &fs)?;
    let member = member.map(|m| point(m, vars.len()).map(|x| c.member(&x, true))).transpose()?;
    let inequalities = format_inequalities(&c, &vars);
    let table = inequality_table(c.strict(), &inequalities);
    let report = ConeReport { cone: c.to_json(), interior_point: c.interior_point().map(|p| strs(&p)), vars, inequalities, member };
    Ok(Output::new(&report, table))
}

#[derive(Serialize)]
struct DominationReport {
    vars: Vec<String>,
    f: String,
    /// "positive" for f^t < 0, "signed" when each sign class is checked.
    mode: &'static str,
    dominated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plus: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minus: Option<VerdictJson>,
}

fn dominate(phi: &[String], f: &str, vars: Option<&str>) -> Result<Output> {
    let (vars, fs) = positives(phi, &[f], vars)?;
    let c = cone_from_potentials(vars.len(), &fs)?;
    let mut table = Table::new(vec!["part", "dominated", "certificates"]);
    let report = match parse_positive(f, &vars) {
        Ok(g) => {
            let v = is_dominated(&tropicalize(&g), &c)?;
            table.push(vec!["f".into(), v.dominated.to_string(), v.certificates.len().to_string()]);
            DominationReport { f: f.into(), mode: "positive", dominated: v.dominated, verdict: Some(v.to_json()), plus: None, minus: None, vars }
        }
        Err(Error::NotPositive(_)) => {
            let r = parse_rational(f, &vars)?;
            let (num, den) = match r.den.as_monomial() {
                Some(_) => (r.num.clone(), r.den.clone()),
                None => return Err(Error::NotPositive("signed expressions need a positive denominator; write f as (p - q)/d with d subtraction-free".into()).into()),
            };
            let s = SignedPositiveSum::from_signed(&num, &den)?;
            let (p, m) = is_weakly_dominated(&s, &c)?;
            let mut ok = true;
            for (name, v) in [("plus", &p), ("minus", &m)] {
                if let Some(v) = v {
                    ok &= v.dominated;
                    table.push(vec![name.into(), v.dominated.to_string(), v.certificates.len().to_string()]);
                }
            }
            DominationReport { f: f.into(), mode: "signed", dominated: ok, verdict: None, plus: p.map(|v| v.to_json()), minus: m.map(|v| v.to_json()), vars }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output::new(&report, table))
}

#[derive(Serialize)]
struct StringConeReport {
    #[serde(flatten)]
    cone: StringConeJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<EstimateCertificate>,
}

fn string_cone_cmd(n: usize, word: &[usize], coords: Coords, estimate: Option<&[usize]>, minor: Option<&str>) -> Result<Output> {
    let sc = match coords {
        Coords::Theta => string_cone(n, word)?,
        Coords::Matrix => {
            if n != 2 {
                return Err(Error::Invalid("matrix-entry coordinates are available for n = 2 only".into()).into());
            }
            string_cone_matrix_sl2()?
        }
    };
    let estimate = match (estimate, minor) {
        (Some(j), Some(m)) => Some(estimate_domination_certificate(n, j, &MinorSet::parse(m)?, word)?.certificate),
        _ => None,
    };
    let json = sc.to_json();
    let rows = sc.cone.as_ref().map(|c| c.strict().to_vec()).unwrap_or_default();
    let table = inequality_table(&rows, &json.inequalities);
    Ok(Output::new(&StringConeReport { cone: json, estimate }, table))
}

fn chart(n: usize, word: &[usize], form_scale: &str, sign: i32) -> Result<GStarChart> {
    Ok(GStarChart::new(n, word, &parse_q(form_scale)?, sign)?)
}

#[derive(Serialize)]
struct BracketRow {
    i: usize,
    j: usize,
    zi: String,
    zj: String,
    mixed: bool,
    pi: String,
    residual: String,
}

#[derive(Serialize)]
struct BracketReport {
    n: usize,
    word: Vec<usize>,
    form_scale: String,
    sign: i32,
    coords: Vec<String>,
    brackets: Vec<BracketRow>,
}

fn pair_table(p: &PairReport) -> Table {
    let mut t = Table::new(vec!["i", "j", "pi", "term", "expr", "dominated"]);
    for r in &p.residual_terms {
        t.push(vec![p.i.to_string(), p.j.to_string(), p.pi.clone(), r.label.clone(), r.expr.clone(), r.dominated.to_string()]);
    }
    if p.residual_terms.is_empty() {
        t.push(vec![p.i.to_string(), p.j.to_string(), p.pi.clone(), String::new(), String::new(), p.dominated.to_string()]);
    }
    t
}

fn gstar_bracket(n: usize, word: &[usize], pair: Option<&[usize]>, form_scale: &str, sign: i32) -> Result<Output> {
    let ch = chart(n, word, form_scale, sign)?;
    let d = ch.dim();
    if let Some(p) = pair {
        let (i, j) = match p {
            [i, j] if *i >= 1 && *j >= 1 && *i <= d && *j <= d => (i - 1, j - 1),
            _ => return Err(Error::Invalid(format!("pair must be i,j with 1 ≤ i, j ≤ {d}")).into()),
        };
        let e = ch.bracket(i, j)?;
        let rep = pair_report(&ch, &e, &ch.phi_cone()?)?;
        let table = pair_table(&rep);
        return Ok(Output::new(&rep, table));
    }
    let mut table = Table::new(vec!["i", "j", "zi", "zj", "mixed", "pi", "residual"]);
    let mut rows = Vec::new();
    for e in ch.bracket_table()? {
        let residual = if e.has_residual() { format!("i({})/({})", e.residual_num.format_with(&ch.names), e.zz.format_with(&ch.names)) } else { "0".into() };
        let row = BracketRow { i: e.i + 1, j: e.j + 1, zi: ch.coords[e.i].label.clone(), zj: ch.coords[e.j].label.clone(), mixed: e.mixed, pi: format_imag(&e.pi), residual };
        table.push(vec![row.i.to_string(), row.j.to_string(), row.zi.clone(), row.zj.clone(), row.mixed.to_string(), row.pi.clone(), row.residual.clone()]);
        rows.push(row);
    }
    let rep = BracketReport { n, word: word.to_vec(), form_scale: ch.rm.form_scale.to_string(), sign, coords: ch.labels(), brackets: rows };
    Ok(Output::new(&rep, table))
}

fn verify_wlc(n: usize, word: &[usize], form_scale: &str, sign: i32) -> Result<Output> {
    let ch = chart(n, word, form_scale, sign)?;
    let rep = verify_weak_log_canonical(&ch)?;
    let mut table = Table::new(vec!["i", "j", "zi", "zj", "pi", "terms", "method", "dominated"]);
    for p in &rep.pairs {
        table.push(vec![
            p.i.to_string(),
            p.j.to_string(),
            p.zi.clone(),
            p.zj.clone(),
            p.pi.clone(),
            p.residual_terms.len().to_string(),
            p.method.clone(),
            p.dominated.to_string(),
        ]);
    }
    let mut out = Output::new(&rep, table);
    if !rep.all_dominated {
        out.status = 1;
    }
    Ok(out)
}

fn pt(n: usize, word: &[usize]) -> Result<Output> {
    let sp = pt_space(n, word)?;
    let json = sp.to_json();
    let mut table = Table::new(vec!["xi", "nu", "bracket"]);
    for (a, row) in sp.l_names.iter().zip(&sp.bracket) {
        for (b, v) in sp.t_names.iter().zip(row) {
            table.push(vec![a.clone(), b.clone(), v.to_string()]);
        }
    }
    Ok(Output::new(&json, table))
}

#[derive(Serialize)]
struct ScalingJson {
    #[serde(flatten)]
    report: ScalingReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn scaling(n: usize, word: &[usize], points: usize, smax: f64, step: f64, seed: u64, probe: bool, csv: Option<&std::path::Path>) -> Result<Output> {
    if !(step > 0.0 && smax >= step && smax <= 120.0 && points > 0) {
        return Err(Error::Invalid("need points ≥ 1 and 0 < step ≤ smax ≤ 120".into()).into());
    }
    let grid: Vec<f64> = (1..).map(|k| k as f64 * step).take_while(|s| *s <= smax + 1e-9).collect();
    if grid.len() < 2 {
        return Err(Error::Invalid("the s grid needs at least two values".into()).into());
    }
    let sp = pt_space(n, word)?;
    let pts = sample_points(&sp, points, seed)?;
    let report = convergence_experiment(&sp, &pts, &grid)?;
    let mut table = Table::new(vec!["point_id", "s", "entry_i", "entry_j", "measured_re", "measured_im", "target", "abs_dev"]);
    for r in &report.rows {
        table.push(vec![
            r.point_id.to_string(),
            r.s.to_string(),
            r.entry_i.clone(),
            r.entry_j.clone(),
            format!("{:e}", r.measured_re),
            format!("{:e}", r.measured_im),
            r.target.to_string(),
            format!("{:e}", r.abs_dev),
        ]);
    }
    if let Some(path) = csv {
        table.write_to(std::fs::File::create(path)?).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    }
    let probe = if probe { Some(boundary_probe(&sp, seed, &grid)?) } else { None };
    let json = ScalingJson { report, probe, csv: csv.map(|p| p.display().to_string()) };
    Ok(Output::new(&json, table))
}

fn pl_limit(expr: &str, vars: Option<&str>, xi: &[f64], nu: &[f64], grid: &[f64]) -> Result<Output> {
    let vars = infer_vars(&[expr], vars)?;
    let f = parse_positive(expr, &vars)?;
    let rep = pl_limit_check(&f, xi, nu, grid)?;
    let mut table = Table::new(vec!["s", "scaled_log_abs", "phase", "magnitude_error", "phase_error"]);
    for s in &rep.samples {
        table.push(vec![s.s.to_string(), s.scaled_log_abs.to_string(), s.phase.to_string(), format!("{:e}", s.magnitude_error), format!("{:e}", s.phase_error)]);
    }
    Ok(Output::new(&rep, table))
}

fn verify(level: LevelArg, form_scale: &str, seed: u64) -> Result<Output> {
    let level = match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let form_scale = parse_q(form_scale)?;
    let rep = run_suite(&SuiteOptions { level, form_scale, seed });
    let mut table = Table::new(vec!["id", "name", "passed", "detail", "note"]);
    for c in &rep.checks {
        table.push(vec![c.id.to_string(), c.name.into(), c.passed.to_string(), c.detail.clone(), c.note.clone().unwrap_or_default()]);
    }
    let mut out = Output::new(&rep, table);
    if !rep.passed {
        out.status = 1;
    }
    Ok(out)
}
