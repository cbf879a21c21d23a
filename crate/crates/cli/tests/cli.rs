use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_grouptensor"));
    c.env_remove("GROUPTENSOR_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(v["schema"], "grouptensor/v1", "{args:?}");
    v
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn report_psl2_5() {
    let v = json(&["report", "--group", "psl2:5"]);
    let r = &v["reports"][0];
    let rows: Vec<(String, u64)> = r["per_ell"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| (row["ell"].to_string().trim_matches('"').to_string(), row["dim_semisimple"].as_u64().unwrap()))
        .collect();
    let expect = [("2", 25), ("3", 35), ("5", 35), ("coprime", 60)];
    assert_eq!(rows.len(), expect.len());
    for ((a, b), (c, d)) in rows.iter().zip(expect) {
        assert_eq!((a.as_str(), *b), (c, d));
    }
    assert_eq!(r["sr_group_lower"], 25);
    assert_eq!(r["matching_upper"], 60);
    assert_eq!(r["vacuous_flags"]["matching_upper"], true);
    assert_eq!(r["D_lower"], 2);
}

#[test]
fn report_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out = run(&["report", "--group", "cyclic:6", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("group,order,ell,"));
    assert_eq!(code(&["report", "--group", "cyclic:6", "--format", "xml"]), 1);
    let bad = dir.path().join("missing/r.json");
    let out = run(&["report", "--group", "cyclic:2", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
}

#[test]
fn group_and_classes() {
    let g = json(&["group", "--group", "prod:cyclic:2,cyclic:3", "--elements"]);
    assert_eq!(g["order"], 6);
    assert_eq!(g["abelian"], true);
    assert_eq!(g["elements"].as_array().unwrap().len(), 6);
    let c = json(&["classes", "--group", "psl2:5", "--ell", "2"]);
    assert_eq!(c["classes"].as_array().unwrap().len(), 5);
    assert_eq!(c["ell_regular_count"], 4);
    let first = &c["classes"][0];
    assert!(first["rep"].is_u64() && first["size"] == 1 && first["order"] == 1);
    assert_eq!(code(&["classes", "--group", "psl2:5", "--ell", "4"]), 1);
}

#[test]
fn semisimple_and_oracle() {
    let s = json(&["semisimple", "--group", "cyclic:9", "--ell", "3"]);
    assert_eq!(s["dim_semisimple"], 1);
    assert_eq!(s["dim_radical"], 8);
    assert_eq!(s["simples"][0]["d"], 1);
    let s = json(&["semisimple", "--group", "psl2:5", "--ell", "7", "--seed", "9"]);
    assert_eq!(s["dim_semisimple"], 60);
    let r = json(&["radical-oracle", "--group", "cyclic:4", "--ell", "2"]);
    assert_eq!(r["dim_radical"], 3);
    assert_eq!(code(&["radical-oracle", "--group", "sl2:5", "--ell", "2"]), 2);
    assert_eq!(code(&["semisimple", "--group", "cyclic:4", "--ell", "4"]), 1);
}

#[test]
fn matching_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.json");
    let f = file.to_str().unwrap();
    let h = json(&["matching", "heuristic", "--group", "psl2:5", "--seed", "3", "--iters", "20", "--file", f]);
    let m = h["m"].as_u64().unwrap();
    assert!(m >= 1);
    let v = json(&["matching", "verify", "--file", f, "--group", "psl2:5"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["m"], m);
    assert_eq!(code(&["matching", "verify", "--file", f, "--group", "psl2:7"]), 1);

    let mut raw: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let a0 = raw["a"][0].clone();
    raw["a"].as_array_mut().unwrap().push(a0.clone());
    raw["b"].as_array_mut().unwrap().push(a0.clone());
    raw["c"].as_array_mut().unwrap().push(a0);
    std::fs::write(&file, raw.to_string()).unwrap();
    assert_eq!(code(&["matching", "verify", "--file", f]), 1);
    assert_eq!(code(&["matching", "verify", "--file", "/nonexistent/m.json"]), 1);

    let e = json(&["matching", "exact", "--group", "cyclic:7", "--file", f]);
    assert_eq!(e["m"], 3);
    assert_eq!(json(&["matching", "verify", "--file", f])["valid"], true);
    assert_eq!(code(&["matching", "exact", "--group", "psl2:5"]), 2);
    assert_eq!(code(&["matching", "exact", "--group", "psl2:5", "--exact-matching-cap", "4"]), 2);

    let b = json(&["matching", "bound", "--group", "psl2:5"]);
    assert_eq!(b["matching_upper"], 60);
    assert_eq!(b["vacuous"], true);
    assert!(b["gowers_constant"].as_str().unwrap().contains("|G|^3/D"));
}

#[test]
fn slicerank_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let p = path.to_str().unwrap();
    std::fs::write(&path, r#"{"dims":[3,3,3],"char":2,"entries":[[0,0,0,1],[1,1,1,1],[2,2,2,1]]}"#).unwrap();
    let e = json(&["slicerank", "exact", "--tensor", p]);
    assert_eq!(e["slice_rank"], 3);
    assert_eq!(e["slices"].as_array().unwrap().len(), 3);

    let t = dir.path().join("z2.json");
    let out = run(&["slicerank", "tensor", "--group", "cyclic:2", "--ell", "2", "--out", t.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&["slicerank", "exact", "--tensor", t.to_str().unwrap()])["slice_rank"], 2);

    let b = json(&["slicerank", "bounds", "--group", "psl2:5", "--ell", "2"]);
    assert_eq!(b["semisimple_lower"], 25);
    assert!(b["lower"].as_u64().unwrap() >= 25);
    assert_eq!(b["upper"], 60);

    std::fs::write(&path, r#"{"dims":[2,2,2],"char":2,"entries":[[0,0,5,1]]}"#).unwrap();
    assert_eq!(code(&["slicerank", "exact", "--tensor", p]), 1);
    std::fs::write(&path, r#"{"dims":[20,20,20],"char":2,"entries":[]}"#).unwrap();
    assert_eq!(code(&["slicerank", "exact", "--tensor", p]), 2);
}

#[test]
fn clp_cp_gap_probe() {
    let c = json(&["clp", "--p", "3", "--n", "4"]);
    assert_eq!((c["count"].as_u64(), c["bound"].as_u64()), (Some(15), Some(45)));
    let cp = json(&["cp", "--p", "3", "--tol", "1e-6"]);
    let x = cp["c_p"].as_f64().unwrap();
    assert!((2.75..=2.76).contains(&x));
    assert_eq!(code(&["clp", "--p", "4", "--n", "2"]), 1);
    assert_eq!(code(&["clp", "--p", "3", "--n", "200"]), 2);

    let g = json(&["gap", "--p", "100003"]);
    assert_eq!(g["ratio_exceeds_one"], true);
    let s = json(&["gap", "--scan", "--limit", "30000"]);
    assert_eq!(s["crossover"], 27689);
    assert_eq!(code(&["gap", "--p", "15"]), 1);
    assert_eq!(code(&["gap"]), 1);

    let p = json(&["probe", "--groups", "psl2:5", "cyclic:4"]);
    assert_eq!(p["rows"][0]["min_dim_semisimple"], 25);
    assert_eq!(p["rows"][1]["ratio"], 0.25);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("caps.toml");
    std::fs::write(&cfg, "modrep_cap = 10\n").unwrap();
    let with_cfg = |args: &[&str]| bin().env("GROUPTENSOR_CONFIG", &cfg).args(args).output().unwrap();
    assert_eq!(with_cfg(&["semisimple", "--group", "psl2:5", "--ell", "2"]).status.code(), Some(2));
    let ok = with_cfg(&["semisimple", "--group", "psl2:5", "--ell", "2", "--modrep-cap", "100"]);
    assert!(ok.status.success());

    std::fs::write(&cfg, "no_such_cap = 1\n").unwrap();
    assert_eq!(with_cfg(&["gap", "--p", "5"]).status.code(), Some(1));
    let missing = bin()
        .env("GROUPTENSOR_CONFIG", Path::new("/nonexistent/caps.toml"))
        .args(["gap", "--p", "5"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn help_version_and_usage_errors() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["matching", "--help"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["semisimple", "--group", "psl2:5"]), 1);
    assert_eq!(code(&["semisimple", "--group", "psl2:5", "--ell", "x"]), 1);
    assert_eq!(code(&["group", "--group", "dihedral:4"]), 1);
    assert_eq!(code(&["group", "--group", "cyclic:100000"]), 2);
}
