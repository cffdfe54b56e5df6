mod common;

use common::{lococo, Workspace};
use lococo_core::models;
use lococo_core::{ExactMatrix, ExactScalar};
use serde_json::json;

fn q(v: i64) -> ExactScalar {
    ExactScalar::from_i64(v)
}

#[test]
fn ranges_examples() {
    assert_eq!(
        lococo(&["ranges", "--n", "6", "--mu", "1,1,1"]).json(),
        json!({"i": 3, "degrees": [3], "vanishes": false})
    );
    assert_eq!(
        lococo(&["ranges", "--n", "5", "--mu", "1,1,1"]).json(),
        json!({"i": 3, "degrees": [], "vanishes": true})
    );
    assert_eq!(lococo(&["ranges", "--n", "3", "--mu", "0,0"]).json()["degrees"], json!([0, 1, 2, 3]));
    let table = lococo(&["ranges", "--n", "4"]).json();
    assert_eq!(table["weights"].as_array().unwrap().len(), 9);
}

#[test]
fn malformed_weights_exit_two() {
    for mu in ["1,x", "1,2", "1,1,1,1", "-1"] {
        let out = lococo(&["ranges", "--n", "5", "--mu", mu]);
        assert_eq!(out.code, 2, "{mu}");
        assert!(out.error_json()["error"].is_string());
    }
    assert_eq!(lococo(&["ranges"]).code, 2);
    assert_eq!(lococo(&["no-such-command"]).code, 2);
    assert_eq!(lococo(&["--help"]).code, 0);
}

#[test]
fn branch_lists_interlacing_partitions() {
    let out = lococo(&["branch", "--mu", "2,1"]).json();
    let nus: Vec<&str> = out["branches"].as_array().unwrap().iter().map(|b| b["nu"].as_str().unwrap()).collect();
    assert_eq!(nus, ["(2,1)", "(2)", "(1,1)", "(1)"]);
}

#[test]
fn invariant_examples() {
    let ws = Workspace::new();
    let out = lococo(&["invariant", "--n", "3", "--mu", "1", "--x", "e"]).json();
    assert_eq!(out["terms"], json!([{"index": [0], "coeff": "1"}]));
    assert_eq!(out["nonzero"], json!(true));
    let one = ws.write("e1.json", r#"[["1","0","0","0"]]"#);
    let out = lococo(&["invariant", "--n", "3", "--mu", "1,1", "--x", &one]);
    assert_eq!(out.code, 2);
    assert!(out.error_json()["error"].as_str().unwrap().contains("dim(X) ≥ i(μ)"));
    let two = ws.write("e12.json", r#"{"vectors": [["1","0","0","0"], ["0","1","0","0"]]}"#);
    assert_eq!(lococo(&["invariant", "--n", "3", "--mu", "1,1", "--x", &two]).json()["nonzero"], json!(true));
}

#[test]
fn pair_examples() {
    let ws = Workspace::new();
    assert_eq!(lococo(&["pair", "--n", "4", "--mu", "1", "--x", "e", "--y", "u"]).json()["pairing"], "1");
    assert_eq!(lococo(&["pair", "--n", "4", "--mu", "1,1", "--x", "e", "--y", "u"]).json()["pairing"], "1/2");
    let z = ws.write("z.json", r#"[["0","0","0","0","0"]]"#);
    assert_eq!(lococo(&["pair", "--n", "4", "--mu", "1", "--x", "e", "--y", &z]).json()["pairing"], "0");
    let out = lococo(&["pair", "--n", "4", "--mu", "1", "--x", "e", "--y", "u", "--sqrt", "2"]);
    assert_eq!(out.code, 2);
}

#[test]
fn homology_examples() {
    let ws = Workspace::new();
    let circle = ws.complex("circle.json", &models::circle(3));
    let mono = ws.system("mono.json", &models::circle_system(3, &ExactMatrix::from_i64(&[&[2]])));
    assert_eq!(
        lococo(&["homology", "--complex", &circle, "--system", &mono]).json(),
        json!({"H0": 0, "H1": 0})
    );
    assert_eq!(lococo(&["homology", "--complex", &circle]).json(), json!({"H0": 1, "H1": 1}));
    let torus = ws.complex("torus.json", &models::torus(&[3, 3]));
    assert_eq!(
        lococo(&["homology", "--complex", &torus]).json(),
        json!({"H0": 1, "H1": 2, "H2": 1})
    );
    let h1 = lococo(&["homology", "--complex", &torus, "--deg", "1"]).json();
    assert_eq!(h1["representatives"].as_array().unwrap().len(), 2);
    assert_eq!(
        lococo(&["cohomology", "--complex", &circle, "--system", &mono]).json(),
        json!({"H^0": 0, "H^1": 0})
    );
}

#[test]
fn invalid_files_exit_two() {
    let ws = Workspace::new();
    let circle = ws.complex("circle.json", &models::circle(3));
    let bad = ws.write("bad.json", r#"{"rank": 1, "edges": [{"from": 0, "to": 1, "matrix": [["0"]]}]}"#);
    let out = lococo(&["homology", "--complex", &circle, "--system", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.error_json()["error"].as_str().unwrap().contains("(0,1)"));
    let garbage = ws.write("garbage.json", "{not json");
    assert_eq!(lococo(&["homology", "--complex", &garbage]).code, 2);
    let missing = ws.path("missing.json");
    assert_eq!(lococo(&["homology", "--complex", missing.to_str().unwrap()]).code, 2);
}

#[test]
fn cup_and_dual_on_the_torus() {
    let ws = Workspace::new();
    let x = models::torus(&[3, 3]);
    let file = ws.complex("torus.json", &x);
    let a = lococo_core::formats::CochainFile {
        degree: 1,
        terms: x
            .simplices(1)
            .iter()
            .filter(|s| models::grid_coords(&[3, 3], s[0])[0] == 0 && models::grid_coords(&[3, 3], s[1])[0] == 1)
            .map(|s| lococo_core::formats::CochainTerm {
                simplex: s.clone(),
                value: vec![q(1)],
            })
            .collect(),
    };
    let fa = ws.write_json("a.json", &a);
    let out = lococo(&["cup", "--complex", &file, "--a", &fa, "--b", &fa]).json();
    assert_eq!(out["degree"], 2);
    assert_eq!(out["cocycle"], true);
    let d = lococo(&["dual", "--complex", &file, "--cochain", &fa]).json();
    assert_eq!(d["kind"], "chain");
    let cycle = ws.cycle("c.json", &models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(1)]));
    let pd = lococo(&["dual", "--complex", &file, "--cycle", &cycle]).json();
    assert_eq!(pd["degree"], 1);
}

#[test]
fn intersect_torus_coordinate_circles() {
    let ws = Workspace::new();
    let dims = [3, 3];
    let torus = ws.complex("torus.json", &models::torus(&dims));
    let a = ws.cycle("a.json", &models::circle_cycle(&dims, &[0, 0], 0, vec![q(1)]));
    let b = ws.cycle("b.json", &models::circle_cycle(&dims, &[0, 0], 1, vec![q(1)]));
    let ab = lococo(&["intersect", "--complex", &torus, "--cycle1", &a, "--cycle2", &b, "--check"]);
    assert_eq!(ab.code, 0, "{}", ab.stderr);
    let ab = ab.json();
    assert_eq!(ab["points"], json!([{"vertex": 0, "sign": 1, "coeff": "1"}]));
    assert_eq!(ab["evaluation"], "1");
    assert_eq!(ab["agrees_with_cup_product"], true);
    let ba = lococo(&["intersect", "--complex", &torus, "--cycle1", &b, "--cycle2", &a]).json();
    assert_eq!(ba["points"][0]["sign"], -1);
}

#[test]
fn disjoint_and_non_transverse_cycles() {
    let ws = Workspace::new();
    let dims = [3, 3];
    let torus = ws.complex("torus.json", &models::torus(&dims));
    let a = ws.cycle("a.json", &models::circle_cycle(&dims, &[0, 0], 0, vec![q(1)]));
    let parallel = ws.cycle("p.json", &models::circle_cycle(&dims, &[0, 1], 0, vec![q(1)]));
    let out = lococo(&["intersect", "--complex", &torus, "--cycle1", &a, "--cycle2", &parallel]).json();
    assert_eq!(out["points"], json!([]));
    assert_eq!(out["chain"], json!([]));
    let out = lococo(&["intersect", "--complex", &torus, "--cycle1", &a, "--cycle2", &a]);
    assert_eq!(out.code, 3);
    assert!(out.error_json()["violation"].is_string());
}

#[test]
fn twisted_intersection_with_explicit_pairing() {
    let ws = Workspace::new();
    let dims = [3, 3];
    let x = models::torus(&dims);
    let torus = ws.complex("torus.json", &x);
    let f = models::torus_system(&dims, &[ExactMatrix::from_i64(&[&[1]]), ExactMatrix::from_i64(&[&[-1]])]);
    let sf = ws.system("f.json", &f);
    let a = ws.cycle("a.json", &models::circle_cycle(&dims, &[0, 1], 0, vec![q(3)]));
    let b = ws.cycle("b.json", &models::circle_cycle(&dims, &[2, 0], 1, vec![q(0)]));
    let pairing = ws.write("nu.json", r#"{"left": 1, "right": 1, "matrix": [["2"]]}"#);
    let out = lococo(&[
        "intersect", "--complex", &torus, "--f", &sf, "--g", &sf, "--pairing", &pairing, "--cycle1", &a, "--cycle2", &b,
        "--check",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = out.json();
    assert_eq!(out["agrees_with_cup_product"], true);
    assert_eq!(out["evaluation"], serde_json::Value::Null);
}

#[test]
fn group_homology_builtins_and_files() {
    assert_eq!(
        lococo(&["group-homology", "--group", "S3", "--rep", "standard"]).json(),
        json!({"order": 6, "rank": 2, "H0": 0, "H1": 0, "H2": 0, "H3": 0})
    );
    assert_eq!(lococo(&["group-homology", "--group", "Z/2", "--rep", "trivial:2", "--deg", "0"]).json()["H0"], 2);
    assert_eq!(lococo(&["group-homology", "--group", "Z/3", "--rep", "sign"]).code, 2);
    let ws = Workspace::new();
    let g = ws.write("g.json", r#"{"order": 2, "table": [[0, 1], [1, 0]]}"#);
    let r = ws.write("r.json", r#"{"rank": 1, "field": "Q", "matrices": [[["1"]], [["-1"]]]}"#);
    assert_eq!(lococo(&["group-homology", "--group", &g, "--rep", &r]).json()["H0"], 0);
    assert_eq!(lococo(&["group-homology", "--group", "S3", "--deg", "5"]).code, 3);
}

#[test]
fn search_exit_codes_and_replay() {
    let ok = lococo(&["search", "complementary", "--n", "2", "--k", "1", "--mu", "1", "--seed", "17"]);
    assert_eq!(ok.code, 0);
    let v = ok.json();
    assert_eq!(v["seed"], 17);
    assert!(v["verification"].as_array().unwrap().iter().all(|c| c["result"] == "pass"));
    let again = lococo(&["search", "complementary", "--n", "2", "--k", "1", "--mu", "1", "--seed", "17"]);
    assert_eq!(again.stdout, ok.stdout);
    let infeasible = lococo(&["search", "complementary", "--n", "5", "--k", "2", "--mu", "1,1,1", "--seed", "1"]);
    assert_eq!(infeasible.code, 3);
    let exhausted = lococo(&["search", "complementary", "--n", "2", "--k", "1", "--mu", "1", "--seed", "9", "--trials", "0"]);
    assert_eq!(exhausted.code, 4);
    assert_eq!(exhausted.error_json()["seed"], 9);
    let generated = lococo(&["search", "complementary", "--n", "2", "--k", "1", "--mu", "1"]).json();
    assert!(generated["seed"].is_u64());
}

#[test]
fn cup_search_examples() {
    let ok = lococo(&["search", "cup", "--n", "6", "--q1", "1", "--q2", "2", "--mu2", "1", "--seed", "3"]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert_eq!(ok.json()["verification"].as_array().unwrap().len(), 4);
    let bad = lococo(&["search", "cup", "--n", "6", "--q1", "1", "--q2", "3", "--mu2", "1", "--seed", "3"]);
    assert_eq!(bad.code, 3);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lococo");
    let out = std::process::Command::new(bin).args(["ranges", "--n", "6", "--mu", "1,1,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["degrees"], json!([3]));
    let out = std::process::Command::new(bin).args(["ranges", "--n", "6", "--mu", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
