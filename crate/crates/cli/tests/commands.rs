use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use surface_cyclic::fixtures;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_surface-cyclic"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_first_bead() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", r#"{"n":42,"g0":0,"pairs":[[2,21],[19,42],[19,42]]}"#);
    let out = run(&["validate", "--dataset", s(&d), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    let bad = write(&dir, "bad.json", r#"{"n":6,"g0":0,"pairs":[[1,2],[1,3]]}"#);
    let out = run(&["validate", "--dataset", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["valid"], false);
    let listed: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert!(listed.contains(&"iv") && listed.contains(&"v"));
}

#[test]
fn enumerate_is_deterministic_across_jobs() {
    let out = run(&["enumerate", "--n", "2", "--g", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["count"], 2);
    let one = run(&["enumerate", "--n", "12", "--g", "5", "--jobs", "1"]);
    let four = run(&["enumerate", "--n", "12", "--g", "5", "--jobs", "4"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn fix_on_example_necklace() {
    let dir = TempDir::new().unwrap();
    let body = serde_json::to_string(&fixtures::example_necklace()).unwrap();
    let n = write(&dir, "n.json", &body);
    let out = run(&["fix", "--necklace", s(&n), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["dim"], 4);
    assert_eq!(v["num_bounded"], 10);
    assert_eq!(v["den_free"], 5);
}

#[test]
fn decompose_then_fix_agree() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", r#"{"n":42,"g0":1,"pairs":[[5,6],[1,6]]}"#);
    let out = run(&["decompose", "--dataset", s(&d)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["genus_trace"].as_array().unwrap().last().unwrap(), 36);
    let necklace = write(&dir, "n.json", &v["necklace"].to_string());
    let by_necklace = stdout_json(&run(&["fix", "--necklace", s(&necklace)]));
    let by_dataset = stdout_json(&run(&["fix", "--dataset", s(&d)]));
    assert_eq!(by_necklace["dim"], 4);
    assert_eq!(by_necklace, by_dataset);
}

#[test]
fn compose_script_trace() {
    let dir = TempDir::new().unwrap();
    let script = write(
        &dir,
        "s.json",
        r#"[{"op":"add","left":{"n":42,"g0":1,"pairs":[[5,6],[1,6]]},"g":3},{"op":"sub","g":3}]"#,
    );
    let out = run(&["compose", "--script", s(&script), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["genus_trace"], serde_json::json!([162, 36]));
}

#[test]
fn polygon_writes_artifacts() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", r#"{"n":14,"g0":0,"pairs":[[1,2],[1,7],[5,14]]}"#);
    let svg = dir.path().join("p.svg");
    let metrics = dir.path().join("m.json");
    let out = run(&[
        "polygon",
        "--dataset",
        s(&d),
        "--svg",
        s(&svg),
        "--metrics",
        s(&metrics),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&metrics).unwrap()).unwrap();
    for key in [
        "sides",
        "theta",
        "angles",
        "side_length",
        "radii",
        "area",
        "genus_check",
    ] {
        assert!(m.get(key).is_some(), "{key}");
    }
    assert!((m["area"].as_f64().unwrap() - 8.0 * std::f64::consts::PI).abs() < 1e-9);
    let first = std::fs::read(&svg).unwrap();
    run(&["polygon", "--dataset", s(&d), "--svg", s(&svg)]);
    assert_eq!(first, std::fs::read(&svg).unwrap());
}

#[test]
fn fatgraph_torus_theorem() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", r#"{"vertices":[[0,1,2,3]],"edges":[[0,2],[1,3]]}"#);
    let out = run(&["fatgraph", "--graph", s(&g), "--auts", "--signature", "--check-theorem"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["signature"]["cone_orders"], serde_json::json!([2, 4, 4]));
    assert_eq!(v["theorem"]["irreducible"], true);
}

#[test]
fn certificate_reports_two_orbit_sum() {
    let out = run(&["certificate", "--g", "5", "--n", "12", "--cones", "6,12,12"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["feasible"], false);
    assert_eq!(v["required_vertices"], 9);
    assert!(v["vertex_candidate_sums"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x == "12/6+12/12=3"));
}

#[test]
fn errors_and_usage() {
    let dir = TempDir::new().unwrap();
    let junk = write(&dir, "j.json", "{not json");
    let out = run(&["classify", "--dataset", s(&junk)]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "parse");

    let missing = run(&["classify", "--dataset", s(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(1));

    let nonhyp = write(&dir, "r.json", r#"{"n":5,"g0":1,"rot":2}"#);
    let out = run(&["polygon", "--dataset", s(&nonhyp)]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--n", "x", "--g", "2"]).status.code(), Some(2));
}
