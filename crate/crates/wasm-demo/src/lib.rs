//! Browser bindings. Every export returns a JSON string; failures come back as
//! `{"error":{"kind","message"}}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tropos::bk::format_inequalities;
use tropos::cones::{cone_from_potentials, is_dominated};
use tropos::expr::{infer_vars, parse_positive, xi_names};
use tropos::poly::Q;
use tropos::pt::{boundary_probe, convergence_experiment, pt_space, sample_points};
use tropos::rational::PositiveRational;
use tropos::tropical::{linearity_chambers, tropicalize, PLMap};
use tropos::Error;

fn respond(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string(),
    }
}

fn lines(text: &str) -> Vec<&str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).collect()
}

fn to_f(x: &Q) -> f64 {
    tropos::poly::q_to_f64(x)
}

/// Tropicalize one expression per line. For one variable the graph is sampled
/// on [lo, hi].
#[wasm_bindgen]
pub fn trop(exprs: &str, lo: f64, hi: f64, samples: usize) -> String {
    respond((|| {
        let es = lines(exprs);
        if es.is_empty() {
            return Err(Error::Invalid("enter at least one expression".into()));
        }
        let vars = infer_vars(&es, None)?;
        let names = xi_names(&vars);
        let fs: Vec<PositiveRational> = es.iter().map(|e| parse_positive(e, &vars)).collect::<tropos::Result<_>>()?;
        let ts: Vec<_> = fs.iter().map(tropicalize).collect();
        let chambers: Vec<Value> = linearity_chambers(&PLMap::from_positive(&fs)?)
            .into_iter()
            .map(|c| json!({ "inequalities": format_inequalities(&c.cone, &vars), "linear_map": c.linear_map }))
            .collect();
        let graph = if vars.len() == 1 && samples >= 2 && hi > lo {
            let xs: Vec<f64> = (0..samples).map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64).collect();
            let ys: Vec<Vec<f64>> = ts.iter().map(|t| xs.iter().map(|x| t.eval_f(&[*x])).collect()).collect();
            Some(json!({ "x": xs, "y": ys }))
        } else {
            None
        };
        Ok(json!({
            "vars": vars,
            "components": es.iter().zip(&ts).map(|(e, t)| json!({ "expr": e, "formatted": t.format(&names) })).collect::<Vec<_>>(),
            "chambers": chambers,
            "graph": graph,
        }))
    })())
}

/// Cone of the potentials (one per line) and, if `f` is nonempty, whether
/// f^t < 0 on it. Two-variable cones also return their rows as floats.
#[wasm_bindgen]
pub fn cone(potentials: &str, f: &str) -> String {
    respond((|| {
        let ps = lines(potentials);
        if ps.is_empty() {
            return Err(Error::Invalid("enter at least one potential".into()));
        }
        let f = f.trim();
        let mut all = ps.clone();
        if !f.is_empty() {
            all.push(f);
        }
        let vars = infer_vars(&all, None)?;
        let phi: Vec<PositiveRational> = ps.iter().map(|e| parse_positive(e, &vars)).collect::<tropos::Result<_>>()?;
        let c = cone_from_potentials(vars.len(), &phi)?;
        let rows: Vec<Vec<f64>> = c.strict().iter().map(|r| r.iter().map(to_f).collect()).collect();
        let dom = if f.is_empty() {
            None
        } else {
            let g = tropicalize(&parse_positive(f, &vars)?);
            let v = is_dominated(&g, &c)?;
            Some(json!({ "f": f, "formatted": g.format(&xi_names(&vars)), "verdict": v.to_json(), "dominated": v.dominated }))
        };
        Ok(json!({
            "vars": vars,
            "inequalities": format_inequalities(&c, &vars),
            "rows": rows,
            "interior_point": c.interior_point().map(|p| p.iter().map(to_f).collect::<Vec<_>>()),
            "domination": dom,
        }))
    })())
}

/// Scaling curves for SL_2: log sup-deviation against s at sampled cone
/// points, plus the outside-cone control.
#[wasm_bindgen]
pub fn scaling(points: usize, seed: u32, smax: f64) -> String {
    respond((|| {
        if !(1..=20).contains(&points) || !(10.0..=120.0).contains(&smax) {
            return Err(Error::Invalid("need 1 ≤ points ≤ 20 and 10 ≤ smax ≤ 120".into()));
        }
        let grid: Vec<f64> = (1..).map(|k| k as f64 * 5.0).take_while(|s| *s <= smax + 1e-9).collect();
        let sp = pt_space(2, &[1])?;
        let pts = sample_points(&sp, points, seed as u64)?;
        let rep = convergence_experiment(&sp, &pts, &grid)?;
        let probe = boundary_probe(&sp, seed as u64, &grid)?;
        Ok(json!({ "s": grid, "points": rep.points, "probe": probe }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn trop_graph() {
        let v = parse(trop("(x^3+1)/(x+1)", -2.0, 2.0, 5));
        assert_eq!(v["components"][0]["formatted"], "max(3ξ,0) - max(ξ,0)");
        let ys: Vec<f64> = v["graph"]["y"][0].as_array().unwrap().iter().map(|y| y.as_f64().unwrap()).collect();
        assert_eq!(ys, [0.0, 0.0, 0.0, 2.0, 4.0]);
    }

    #[test]
    fn cone_and_domination() {
        let v = parse(cone("1/x1\n1/x3\n(x1+x3)/(x1*x2)\n(x1+x3)/(x2*x3)", "1/(x1*x2)"));
        assert_eq!(v["domination"]["dominated"], true);
        assert_eq!(v["vars"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn page_defaults() {
        let v = parse(cone("1/x1\n(x1+1)/x2", "x1/x2 + 1/(x1*x2)"));
        assert_eq!(v["domination"]["dominated"], true);
        assert!(v["interior_point"].is_array());
        assert_eq!(v["rows"][0].as_array().unwrap().len(), 2);
        let v = parse(trop("(x^3+1)/(x+1)\nx + 1/x", -4.0, 4.0, 201));
        assert_eq!(v["graph"]["y"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn errors_are_json() {
        assert_eq!(parse(trop("x-1", 0.0, 1.0, 2))["error"]["kind"], "NotPositive");
        assert_eq!(parse(scaling(0, 0, 60.0))["error"]["kind"], "InvalidInput");
    }

    #[test]
    fn scaling_decays() {
        let v = parse(scaling(3, 0, 40.0));
        for p in v["points"].as_array().unwrap() {
            assert!(p["fitted_rate"].as_f64().unwrap() < 0.0);
        }
        assert_eq!(v["probe"]["decays"], false);
    }
}
