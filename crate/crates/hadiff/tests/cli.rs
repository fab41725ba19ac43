use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hadiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadiff"))
        .args(args)
        .env_remove("HADIFF_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, n: usize, r: usize) -> PathBuf {
    let p = dir.path().join(format!("arr_{n}_{r}.json"));
    let o = hadiff(&["gen", "--n", &n.to_string(), "--r", &r.to_string(), "--seed", "3", "--out", s(&p)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn gen_is_seeded_and_generic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, 3, 6);
    let again = hadiff(&["gen", "--n", "3", "--r", "6", "--seed", "3"]);
    assert_eq!(std::fs::read(&a).unwrap(), again.stdout);
    let o = hadiff(&["check-generic", s(&a)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["generic"], Value::Bool(true));
}

#[test]
fn non_generic_input_is_a_check_failure() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"n": 3, "forms": [[1,0,0],[0,1,0],[1,1,0],[0,0,1]]}"#).unwrap();
    let o = hadiff(&["check-generic", s(&p)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["witness"], serde_json::json!([0, 1, 2]));
    // Other commands refuse it as input.
    assert_eq!(code(&hadiff(&["resolve", "--m", "1", s(&p)])), 3);
}

#[test]
fn malformed_input_exits_3() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(code(&hadiff(&["check-generic", s(&p)])), 3);
    assert_eq!(code(&hadiff(&["check-generic", "/nonexistent/file.json"])), 3);
    assert_eq!(code(&hadiff(&["frobnicate"])), 3);
}

#[test]
fn basis_then_saito_check() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, 3, 4);
    let ops = dir.path().join("ops.json");
    let o = hadiff(&["basis", "--m", "3", s(&a), "--seed", "1", "--out", s(&ops)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let b = read_json(&ops);
    assert_eq!(b["case"], "Free_gt");
    assert_eq!(b["extension_forms"].as_array().unwrap().len(), 1);
    assert_eq!(b["ops"].as_array().unwrap().len(), 10);
    let o = hadiff(&["saito-check", s(&a), s(&ops)]);
    assert_eq!(code(&o), 0);
    let rep = stdout_json(&o);
    assert_eq!(rep["basis"], Value::Bool(true));
    // r t_m = 4 * C(4, 2).
    assert_eq!(rep["det_degree"], 24);

    // Multiplying one operator by x_1 keeps it in D^(m)(A) but adds a
    // factor of det that is not a form of the arrangement.
    let mut tampered = b.clone();
    for t in tampered["ops"][0]["terms"].as_array_mut().unwrap() {
        for term in t["poly"]["terms"].as_array_mut().unwrap() {
            term["e"][0] = Value::from(term["e"][0].as_u64().unwrap() + 1);
        }
    }
    let bad = dir.path().join("bad_ops.json");
    std::fs::write(&bad, serde_json::to_string(&tampered).unwrap()).unwrap();
    let o = hadiff(&["saito-check", s(&a), s(&bad)]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["basis"], Value::Bool(false));
}

#[test]
fn basis_refuses_non_free_case() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, 3, 5);
    assert_eq!(code(&hadiff(&["basis", "--m", "1", s(&a)])), 3);
}

#[test]
fn resolve_and_verify() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, 3, 5);
    let out = dir.path().join("res.json");
    let o = hadiff(&["resolve", "--m", "1", s(&a), "--verify", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let res = read_json(&out);
    assert_eq!(res["betti"], serde_json::json!([4, 2]));
    assert_eq!(res["ranks"], serde_json::json!([3, 4, 2]));
    assert_eq!(res["regularity"], 2);
    assert_eq!(res["report"]["passed"], Value::Bool(true));
    assert_eq!(res["modules"][1]["labels"].as_array().unwrap().len(), 4);
    // Free case is not resolvable here.
    assert_eq!(code(&hadiff(&["resolve", "--m", "3", s(&a)])), 3);
}

#[test]
fn jet_presentations_and_resolution() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, 3, 5);
    let out = dir.path().join("jet.json");
    let o = hadiff(&["jet", "--m", "1", s(&a), "--verify", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(&out);
    assert_eq!(j["transpose_identity"], Value::Bool(true));
    let coker = &j["coker_presentation"];
    let jet = &j["jet_presentation"];
    assert_eq!(coker["row_labels"], jet["col_labels"]);
    assert_eq!(coker["matrix"]["rows"], jet["matrix"]["cols"]);
    assert_eq!(j["resolution"]["projective_dimension"], 3);
    assert_eq!(j["resolution"]["regularity"], 0);
    assert_eq!(j["resolution"]["report"]["passed"], Value::Bool(true));
}

#[test]
fn empty_grid_exits_0() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("grid.json");
    std::fs::write(&cfg, r#"{"points": []}"#).unwrap();
    let o = hadiff(&["grid", s(&cfg)]);
    assert_eq!(code(&o), 0);
    let rep = stdout_json(&o);
    assert_eq!(rep["total"], 0);
    assert_eq!(rep["records"], serde_json::json!([]));
}

#[test]
fn grid_records_injected_failure_and_renders_report() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("grid.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 5, "points": [
            {"n": 3, "r": 5, "m": 1},
            {"n": 3, "r": 4, "m": 1, "forms": [[1,0,0],[0,1,0],[1,1,0],[0,0,1]]}
        ]}"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let o = Command::new(env!("CARGO_BIN_EXE_hadiff"))
        .args(["grid", s(&cfg), "--out", s(&out)])
        .env("HADIFF_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("2 points, 1 failed"), "{table}");
    let rep = read_json(&out);
    assert_eq!(rep["records"][0]["passed"], Value::Bool(true));
    assert_eq!(rep["records"][1]["generic"], Value::Bool(false));

    let svg_dir = dir.path().join("svg");
    let o = hadiff(&["report", s(&out), "--svg-dir", s(&svg_dir)]);
    assert_eq!(code(&o), 2);
    for name in ["betti_n3_r5_m1.svg", "jet_betti_n3_r5_m1.svg", "hilbert_n3_r5_m1.svg"] {
        let body = std::fs::read_to_string(svg_dir.join(name)).unwrap();
        assert!(body.starts_with("<svg"), "{name}");
    }
}
