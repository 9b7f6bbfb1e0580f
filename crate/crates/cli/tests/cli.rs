use std::process::{Command, Output};

use serde_json::Value;

fn tropos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropos")).args(args).output().expect("binary runs")
}

fn tropos_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropos")).args(args).env("TROPOS_THREADS", threads).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn trop_cubic_quotient() {
    let o = tropos(&["trop", "--expr", "(x^3+1)/(x+1)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["components"][0]["formatted"], "max(3ξ,0) - max(ξ,0)");
    assert_eq!(v["chambers"].as_array().unwrap().len(), 2);
}

#[test]
fn trop_map_chambers_and_value() {
    let o = tropos(&["trop", "--expr", "x2*x3/(x1+x3)", "--expr", "x1+x3", "--expr", "x1*x2/(x1+x3)", "--at", "1,0,2"]);
    let v = json(&o);
    assert_eq!(v["components"][0]["formatted"], "ξ2+ξ3 - max(ξ1,ξ3)");
    let vals: Vec<&str> = v["components"].as_array().unwrap().iter().map(|c| c["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["0", "2", "-1"]);
    assert_eq!(v["chambers"].as_array().unwrap().len(), 2);
}

#[test]
fn string_cone_matrix_is_gz2() {
    let o = tropos(&["string-cone", "--n", "2", "--word", "1", "--coords", "matrix", "--emit", "csv"]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("-ξ_b11 - ξ_b12 < 0"), "{s}");
    assert!(s.contains("ξ_b11 - ξ_b12 < 0"), "{s}");
    assert_eq!(s.lines().count(), 3);
}

#[test]
fn string_cone_estimate_certificate() {
    let o = tropos(&["string-cone", "--n", "3", "--word", "1,2,1", "--estimate", "1,2", "--minor", "12,23"]);
    let v = json(&o);
    assert!(v["estimate"]["alpha"].as_u64().unwrap() >= 1);
    assert!(v["estimate"]["expansion_degrees"].is_array());
}

#[test]
fn dominate_with_certificate() {
    let phi = ["--phi", "1/x1", "--phi", "1/x3", "--phi", "(x1+x3)/(x1*x2)", "--phi", "(x1+x3)/(x2*x3)"];
    let mut args = vec!["dominate"];
    args.extend(phi);
    args.extend(["--f", "1/(x1*x2)"]);
    let v = json(&tropos(&args));
    assert_eq!(v["dominated"], true);
    assert!(!v["verdict"]["certificates"].as_array().unwrap().is_empty());
    let mut args = vec!["dominate"];
    args.extend(phi);
    args.extend(["--f", "x1"]);
    let v = json(&tropos(&args));
    assert_eq!(v["dominated"], false);
    assert!(v["verdict"]["witness"].is_array());
}

#[test]
fn gstar_pair_report() {
    let v = json(&tropos(&["gstar-bracket", "--n", "3", "--word", "1,2,1", "--pair", "2,6"]));
    assert_eq!(v["zi"], "(Δ_{1,3})_1");
    assert_eq!(v["zj"], "(Δ_{1,2}∘τ)_2");
    assert_eq!(v["pi"], "-1i");
    assert_eq!(v["dominated"], true);
}

#[test]
fn verify_wlc_sl3() {
    let o = tropos(&["verify-wlc", "--n", "3", "--word", "1,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["all_dominated"], true);
}

#[test]
fn pt_sl2() {
    let v = json(&tropos(&["pt", "--n", "2", "--word", "1"]));
    assert_eq!(v["torus_dim"], 1);
    assert_eq!(v["sigma"], "(1 2)");
}

#[test]
fn scaling_csv_and_determinism() {
    let dir = std::env::temp_dir().join(format!("tropos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.csv");
    let b = dir.join("b.csv");
    let args = |p: &str| vec!["scaling".to_string(), "--n".into(), "2".into(), "--word".into(), "1".into(), "--seed".into(), "7".into(), "--csv".into(), p.into()];
    let sa: Vec<String> = args(a.to_str().unwrap());
    let sb: Vec<String> = args(b.to_str().unwrap());
    let oa = tropos_env(&sa.iter().map(String::as_str).collect::<Vec<_>>(), "1");
    let ob = tropos_env(&sb.iter().map(String::as_str).collect::<Vec<_>>(), "3");
    assert_eq!(oa.status.code(), Some(0));
    let (ca, cb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ca, cb);
    let text = String::from_utf8(ca).unwrap();
    assert!(text.starts_with("point_id,s,entry_i,entry_j,measured_re,measured_im,target,abs_dev"));
    let va = json(&oa);
    for p in va["points"].as_array().unwrap() {
        assert!(p["fitted_rate"].as_f64().unwrap() < 0.0);
        assert!(p["sup_dev"].as_array().unwrap().last().unwrap().as_f64().unwrap() < 1e-4);
    }
    // stdout differs only in the csv path
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("csv");
        v
    };
    assert_eq!(strip(&oa), strip(&ob));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn pl_limit_chamber_and_wall() {
    let v = json(&tropos(&["pl-limit", "--expr", "x1+x3", "--xi", "1,0,0.5", "--nu", "0.3,0.1,-0.2"]));
    assert_eq!(v["limit"], 1.0);
    assert_eq!(v["converged"], true);
    let o = tropos(&["pl-limit", "--expr", "x1+x3", "--xi", "1,0,1", "--nu", "0,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "PointOnChamberWall");
}

#[test]
fn verify_fast_and_tampered() {
    let o = tropos(&["verify", "fast"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
    let o = tropos(&["verify", "fast", "--form-scale", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let cal = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "sl2-calibration").unwrap();
    assert_eq!(cal["passed"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(tropos(&["string-cone", "--n", "3", "--word", "1,x"]).status.code(), Some(2));
    assert_eq!(tropos(&["nonsense"]).status.code(), Some(2));
    assert_eq!(tropos_env(&["pt", "--n", "2", "--word", "1"], "zero").status.code(), Some(2));
    let o = tropos(&["string-cone", "--n", "3", "--word", "1,1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "NotReducedForW0");
    let o = tropos(&["trop", "--expr", "x-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"]["kind"], "NotPositive");
}

#[test]
fn byte_identical_json() {
    let args = ["verify-wlc", "--n", "2", "--word", "1"];
    assert_eq!(tropos_env(&args, "1").stdout, tropos_env(&args, "4").stdout);
}
