use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use shadowlat::arith::q;
use shadowlat::constructions::{hexacode, CodeData};
use shadowlat::extremal::{solve_extremal, ExtremalProblem};
use shadowlat::lattice::{min_norm, GramLattice, LatticeData};
use shadowlat::qseries::QSeries;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlat"))
        .args(args)
        .env_remove("SHADOWLAT_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (serde_json::from_str(&stdout(&o)).expect("valid JSON"), o.status.code().unwrap())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("shadowlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bound_spot_values() {
    for (nn, n, b) in [(1, 23, 3), (1, 24, 4), (1, 48, 6), (2, 16, 4), (3, 10, 3), (23, 2, 4)] {
        let o = run(&["bound", &nn.to_string(), &n.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), b.to_string());
    }
}

#[test]
fn infeasible_extremal_exits_one_with_reason() {
    let o = run(&["extremal", "3", "14"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("shadow coefficient 7/2"));
}

#[test]
fn extremal_json_round_trips() {
    let (v, code) = json(&["--order", "12", "extremal", "3", "14"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "Infeasible");
    assert_eq!(v["c"], serde_json::json!(["1", "-14", "28", "-56"]));
    let theta: QSeries = serde_json::from_value(v["theta"].clone()).unwrap();
    let shadow: QSeries = serde_json::from_value(v["shadow"].clone()).unwrap();
    let s = solve_extremal(&ExtremalProblem::new(3, 14).unwrap(), 4, 12).unwrap();
    assert_eq!((theta, shadow), (s.theta, s.shadow));
    let (v, code) = json(&["--order", "12", "extremal", "1", "24"]);
    assert_eq!((v["verdict"].as_str(), code), (Some("Feasible"), 0));
}

#[test]
fn identities_pass() {
    let o = run(&["verify", "identities", "--N", "1", "--order", "48"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (v, code) = json(&["verify", "identities", "--N", "2", "--order", "16"]);
    assert_eq!(code, 0);
    assert!(v.as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "1"]).status.code(), Some(2));
    assert_eq!(run(&["--order", "4", "bound", "1", "8"]).status.code(), Some(2));
    assert_eq!(run(&["--tolerance", "0.1", "bound", "1", "8"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "4", "8"]).status.code(), Some(2));
    assert_eq!(run(&["theta", "@NoSuchLattice"]).status.code(), Some(2));
    assert_eq!(run(&["theta", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn order_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_shadowlat")).args(["theta", "@E8"]).env("SHADOWLAT_ORDER", "9").output().unwrap();
    assert!(stdout(&o).trim().ends_with("O(q^9)"), "{}", stdout(&o));
    // an explicit flag wins
    let o = Command::new(env!("CARGO_BIN_EXE_shadowlat"))
        .args(["theta", "@E8", "--order", "11"])
        .env("SHADOWLAT_ORDER", "9")
        .output()
        .unwrap();
    assert!(stdout(&o).trim().ends_with("O(q^11)"));
}

#[test]
fn scan_flags_level_two() {
    let (v, code) = json(&["scan", "2", "--max", "34"]);
    assert_eq!(code, 0);
    assert_eq!(v["flagged"], serde_json::json!([2, 6, 18, 34]));
}

#[test]
fn construction_a_from_a_code_file() {
    let path = scratch("hexacode.json");
    std::fs::write(&path, serde_json::to_string(&CodeData::from_f4(&hexacode())).unwrap()).unwrap();
    let (v, code) = json(&["construct", "a4", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let d: LatticeData = serde_json::from_value(v).unwrap();
    let l = GramLattice::from_data(&d).unwrap();
    assert_eq!((l.dim(), min_norm(&l)), (12, q(4)));
    // the written lattice file is accepted as input
    let lpath = scratch("k12.json");
    std::fs::write(&lpath, serde_json::to_string(&d).unwrap()).unwrap();
    let (m, _) = json(&["modularity", lpath.to_str().unwrap()]);
    assert!(m["levels"].as_array().unwrap().contains(&Value::from(3)));
    // an F4 code is refused by the Z4 construction
    assert_eq!(run(&["construct", "az4", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn c_lattice_and_catalog() {
    let (v, _) = json(&["construct", "cN", "6"]);
    assert_eq!(v["gram"], serde_json::json!([["1", "0", "0", "0"], ["0", "2", "0", "0"], ["0", "0", "3", "0"], ["0", "0", "0", "6"]]));
    let (v, code) = json(&["catalog", "--list"]);
    assert_eq!(code, 0);
    assert!(v.as_array().unwrap().iter().any(|e| e["name"] == "E23"));
    assert_eq!(run(&["catalog"]).status.code(), Some(2));
}

#[test]
fn invariants_and_neighbor() {
    let (v, _) = json(&["invariants", "@E23"]);
    assert_eq!((v["det"].as_str(), v["oddity"].as_u64(), v["min"].as_str()), (Some("23"), Some(0), Some("4")));
    let (v, code) = json(&["neighbor", "@O2"]);
    assert_eq!(code, 0);
    let en = GramLattice::from_data(&serde_json::from_value(v).unwrap()).unwrap();
    assert!(en.is_even());
    assert_eq!((en.dim(), min_norm(&en)), (16, q(4)));
    // a lattice without a 2-modularity has no even neighbor
    assert_eq!(run(&["neighbor", "@E8"]).status.code(), Some(2));
}

#[test]
fn transforms_are_deterministic() {
    let a = run(&["verify", "transforms", "@E23", "--count", "6"]);
    let b = run(&["verify", "transforms", "@E23", "--count", "6"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    let c = run(&["verify", "transforms", "@E23", "--count", "6", "--seed", "9"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn randomized_law_suites() {
    let (v, code) = json(&["verify", "shadow-law", "--cases", "40"]);
    assert_eq!((code, v["failures"].as_array().unwrap().len()), (0, 0));
    let (v, code) = json(&["verify", "rescale", "--cases", "40"]);
    assert_eq!((code, v["cases"].as_u64()), (0, Some(40)));
    assert_eq!(run(&["verify", "rescale", "@E23"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "shadow-law", "@C3"]).status.code(), Some(0));
    // even determinant is outside the law's hypothesis
    assert_eq!(run(&["verify", "shadow-law", "@C2"]).status.code(), Some(2));
}

#[test]
fn shadow_of_an_odd_lattice() {
    let (v, _) = json(&["--order", "8", "shadow", "@C1"]);
    assert_eq!(v["min"], "1/4");
}
