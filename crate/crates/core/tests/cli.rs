use std::path::PathBuf;
use std::process::{Command, Output};

use coxdom::roots::{is_unit, Root};
use coxdom::{CoxeterDatum, Scalar};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn coxdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxdom")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn coeffs(v: &Value) -> String {
    v.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect::<Vec<_>>().join(",")
}

#[test]
fn hierarchy_of_tilde_a1() {
    let report = json(&coxdom(&["hierarchy", &data("tilde_a1.json"), "--levels", "3"]));
    let levels = report["result"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for (n, level) in levels.iter().enumerate() {
        let roots: Vec<String> =
            level["roots"].as_array().unwrap().iter().map(|r| coeffs(&r["coefficients"])).collect();
        assert_eq!(roots, vec![format!("{},{}", n + 1, n), format!("{},{}", n, n + 1)]);
    }
    assert_eq!(report["result"]["finite_group"], false);
}

#[test]
fn elementary_roots_of_a3() {
    let report = json(&coxdom(&["elementary", &data("a3.json")]));
    assert_eq!(report["result"]["count"], 6);
    assert_eq!(report["result"]["finite_group"], true);
}

#[test]
fn dominance_with_oracle_witness() {
    let out = coxdom(&["dominates", &data("tilde_a1.json"), "--x", "1,2", "--y", "2,1", "--oracle", "12"]);
    let report = json(&out);
    assert_eq!(report["result"]["dominates"], false);
    assert_eq!(report["result"]["oracle"]["verdict"], "refuted");
    assert!(report["result"]["oracle"]["witness"]["length"].as_u64().unwrap() <= 3);

    let report = json(&coxdom(&["dominates", &data("tilde_a1.json"), "--x", "3,2", "--y", "2,1", "--oracle", "12"]));
    assert_eq!(report["result"]["dominates"], true);
    assert_eq!(report["result"]["oracle"]["verdict"], "consistent");
}

#[test]
fn classify_and_dihedral() {
    let report = json(&coxdom(&["classify", &data("tilde_a1.json"), "--x", "3,2"]));
    assert_eq!(report["result"]["n"], 2);
    assert_eq!(report["result"]["word"], "r_a·r_b");
    assert_eq!(report["result"]["simple"], "a");

    let report = json(&coxdom(&["dihedral", &data("hyperbolic_q32.json"), "--x", "3,8", "--y", "1,3"]));
    assert_eq!(report["result"]["q"], "3/2");
    assert_eq!(report["result"]["consecutive"], true);
    assert_eq!(report["result"]["opposite_inner"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(coxdom(&["validate", &data("bad_weight.json")]).status.code(), Some(2));
    assert_eq!(coxdom(&["validate", "/nonexistent/datum.json"]).status.code(), Some(2));
    assert_eq!(coxdom(&["roots", &data("a2.json"), "--bogus"]).status.code(), Some(1));
    assert_eq!(coxdom(&["classify", &data("a2.json"), "--x", "1,-1"]).status.code(), Some(1));
    assert_eq!(
        coxdom(&["elementary", &data("tilde_a2.json"), "--level-cap", "4"]).status.code(),
        Some(3)
    );
    assert_eq!(coxdom(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = coxdom(&["hierarchy", &data("tilde_a2.json"), "--levels", "2", "--output", path.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let single = coxdom(&["hierarchy", &data("tilde_a2.json"), "--levels", "2", "--threads", "1"]);
    assert_eq!(single.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn emitted_roots_reparse() {
    for file in ["universal3.json", "hyperbolic_q32.json", "b3.json"] {
        let report = json(&coxdom(&["roots", &data(file), "--max-depth", "5"]));
        let text = std::fs::read_to_string(data(file)).unwrap();
        let d = CoxeterDatum::parse(&text).unwrap();
        assert_eq!(report["backend"], format!("{:?}", d.backend()).to_lowercase());
        let roots = report["result"]["roots"].as_array().unwrap();
        assert!(!roots.is_empty());
        for r in roots {
            let x = Root::parse(&d, &coeffs(&r["coefficients"])).unwrap();
            assert!(coxdom::roots::is_positive(&d, &x).unwrap());
            assert!(is_unit(&d, &x).unwrap(), "{x}");
            for c in x.coeffs() {
                assert_eq!(Scalar::parse(&c.to_string(), d.backend()).unwrap(), *c);
            }
        }
    }
}

#[test]
fn csv_schema() {
    let out = coxdom(&["roots", &data("tilde_a1.json"), "--max-depth", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "row,depth,n,c_a,c_b,dominated_count,dominated_indices");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[5], "4,3,2,3,2,2,0;2");
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_coxdom"))
        .args(["elementary", &data("tilde_a2.json")])
        .env("COXDOM_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(json(&out)["result"]["count"], 6);
    let out = Command::new(env!("CARGO_BIN_EXE_coxdom"))
        .args(["elementary", &data("tilde_a2.json")])
        .env("COXDOM_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_passes_on_universal3() {
    let out = coxdom(&["check", &data("universal3.json"), "--levels", "2", "--law-depth", "5", "--oracle-radius", "6"]);
    let report = json(&out);
    assert_eq!(report["result"]["passed"], true);
    assert_eq!(report["result"]["sizes"], serde_json::json!([3, 6, 12]));
    let laws = report["result"]["laws"]["outcomes"].as_array().unwrap();
    assert!(laws.len() >= 15);
}

#[test]
fn timestamp_only_on_request() {
    let plain = json(&coxdom(&["validate", &data("a2.json")]));
    assert!(plain["timestamp"].is_null());
    assert_eq!(plain["result"]["gram"], serde_json::json!([["1", "-1/2"], ["-1/2", "1"]]));
    let stamped = json(&coxdom(&["validate", &data("a2.json"), "--timestamp"]));
    assert!(stamped["timestamp"].as_str().unwrap().starts_with("unix:"));
}
