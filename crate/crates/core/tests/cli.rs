//! The `kdg` command line, driven in-process.

use std::path::PathBuf;

use kdg::cli;
use kdg::invariants::{Classification, InvariantReport};
use kdg::rational::rat;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kdg").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kdg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const MINUS_THREE: &str = r#"{"vertices":[{"id":"a","genus":0,"self":-3}],"edges":[]}"#;

#[test]
fn compute_single_minus_three_curve() {
    let p = write_temp("x.json", MINUS_THREE);
    let (code, out, _) = run(&["compute", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("1/3"), "{out}");
    assert!(out.contains("rational-triple"), "{out}");
    assert!(out.contains("numerical index 3"), "{out}");
}

#[test]
fn compute_json_parses_back() {
    let p = write_temp("xj.json", MINUS_THREE);
    let (code, out, _) = run(&["compute", p.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let r: InvariantReport = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(r.k_squared, rat(1, 3));
    assert_eq!(r.classification, Classification::RationalTriple);
    assert_eq!(r.z_squared, -3);
    // repeated runs give identical bytes
    assert_eq!(run(&["compute", p.to_str().unwrap(), "--json"]).1, out);
}

#[test]
fn compute_writes_dot() {
    let p = write_temp("xd.json", MINUS_THREE);
    let dot = p.with_extension("dot");
    let (code, _, _) = run(&["compute", p.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(dot).unwrap().contains("graph"));
}

#[test]
fn exit_codes() {
    let minus_one = write_temp("m1.json", r#"{"vertices":[{"id":"a","genus":0,"self":-1}]}"#);
    let (code, _, err) = run(&["compute", minus_one.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INVALID_GRAPH);
    assert!(err.contains("(-1)-curve"), "{err}");

    let garbage = write_temp("bad.json", "{not json");
    assert_eq!(run(&["compute", garbage.to_str().unwrap()]).0, cli::EXIT_INVALID_GRAPH);
    assert_eq!(run(&["compute", "/nonexistent/graph.json"]).0, cli::EXIT_INVALID_GRAPH);
    assert_eq!(run(&["frobnicate"]).0, cli::EXIT_INVALID_GRAPH);

    // (-2)-(-2) with a double edge is semidefinite
    let singular = write_temp(
        "sing.json",
        r#"{"vertices":[{"id":"a","genus":0,"self":-2},{"id":"b","genus":0,"self":-2}],"edges":[{"a":"a","b":"b","m":2}]}"#,
    );
    assert_eq!(run(&["compute", singular.to_str().unwrap()]).0, cli::EXIT_NOT_NEGATIVE_DEFINITE);

    assert_eq!(run(&["family", "I", "--params", "n=0"]).0, cli::EXIT_PRECONDITION);
    assert_eq!(run(&["family", "nope"]).0, cli::EXIT_PRECONDITION);
    let (code, _, _) = run(&["enumerate", "--max-vertices", "9", "--min-self", "-3"]);
    assert_eq!(code, cli::EXIT_PRECONDITION);
}

#[test]
fn family_prints_loadable_graph() {
    let (code, out, _) = run(&["family", "II", "--params", "n=2,s=3"]);
    assert_eq!(code, 0);
    let g = kdg::WeightedDualGraph::from_json(&out).unwrap();
    assert!(g.validate().is_admissible());
}

#[test]
fn sweep_csv_matches_closed_form() {
    let (code, out, _) = run(&["sweep", "IV", "--param", "n", "--range", "0..6", "--csv"]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,k2_exact,k2_decimal,closed_form,match");
    assert_eq!(lines.len(), 8);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn limit_reports_mobius_agreement() {
    let (_, g, _) = run(&["family", "VI", "--params", "n=2"]);
    let p = write_temp("vi.json", &g);
    let (code, out, _) = run(&["limit", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("limit"), "{out}");
    assert!(out.contains("agree") && !out.contains("DISAGREE"), "{out}");
}

#[test]
fn limit_without_strings_is_a_precondition_error() {
    let p = write_temp("lim.json", MINUS_THREE);
    assert_eq!(run(&["limit", p.to_str().unwrap()]).0, cli::EXIT_PRECONDITION);
}

#[test]
fn enumerate_csv() {
    let (code, out, _) = run(&["enumerate", "--max-vertices", "2", "--min-self", "-3", "--jobs", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], kdg::enumeration::CSV_HEADER);
    assert_eq!(lines.len(), 6);
    assert!(lines.iter().any(|l| l.starts_with("0:-3|,1/3,")));

    let file = write_temp("enum.csv", "");
    let (code, out, _) = run(&[
        "enumerate", "--max-vertices", "3", "--min-self", "-4", "--out", file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("1/3"), "{out}");
    let written = std::fs::read_to_string(file).unwrap();
    assert!(written.starts_with(kdg::enumeration::CSV_HEADER));
}

#[test]
fn verify_suites_pass() {
    let (code, out, _) = run(&["verify", "--suite", "lemmas", "--trials", "20"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(" 0 failed"), "{out}");
    let (code, out, _) = run(&["verify", "--suite", "families"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(" 0 failed"), "{out}");
}
