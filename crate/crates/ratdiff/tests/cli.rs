mod common;

use std::process::Command;

use common::corpus_path;
use ratdiff::cli::run;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ratdiff").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(n: usize) -> String {
    corpus_path(n).display().to_string()
}

#[test]
fn analyze_example1_lists_sandwich_and_theorem_1() {
    let (code, out, _) = run_cli(&["analyze", &path(1)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let facts = v["comparability"].as_array().unwrap();
    assert!(facts.iter().any(|f| f["shape"] == "two_sided_linear"
        && f["provenance"]
            .as_array()
            .unwrap()
            .iter()
            .any(|p| p["id"] == 25)));
    let apps = v["applications"].as_array().unwrap();
    assert!(apps
        .iter()
        .any(|a| a["id"] == 1 && a["orientation"] == "direct"));
}

#[test]
fn analyze_text_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let (code, out, _) = run_cli(&[
        "analyze",
        &path(3),
        "--text",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("theorem 10 (iii): x bounded"));
    assert!(out.contains("y: unproven"));
    let json = std::fs::read_to_string(report).unwrap();
    assert_eq!(json, run_cli(&["analyze", &path(3)]).1);
}

#[test]
fn eta_example1() {
    let (code, out, _) = run_cli(&["eta", "--k", "2", "--source", "1", "--target", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("holds, eta_min=2\n"), "{out}");
}

#[test]
fn eta_json_and_failure() {
    let (code, out, _) = run_cli(&[
        "eta", "--k", "3", "--source", "2", "--target", "1,3", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["kind"], "cycle");
}

#[test]
fn eta_rejects_bad_lags() {
    let (code, _, err) = run_cli(&["eta", "--k", "2", "--source", "3", "--target", "1"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(
        run_cli(&["eta", "--k", "2", "--source", "x", "--target", "1"]).0,
        2
    );
}

#[test]
fn simulate_writes_exact_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let (code, out, _) = run_cli(&[
        "simulate",
        &path(3),
        "--steps",
        "2",
        "--mode",
        "exact",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"kind":"completed"}"#);
    let text = std::fs::read_to_string(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,x,y,x_num,x_den,y_num,y_den");
    assert!(lines[1].ends_with(",3,2,3,1"));
    assert!(lines[2].ends_with(",5,1"));
}

#[test]
fn simulate_with_init_file_and_zero_denominator() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("sys.json");
    std::fs::write(
        &doc,
        r#"{"k":1,
            "x":{"num":{"const":0,"x":[1],"y":[0]},"den":{"const":0,"x":[1],"y":[0]}},
            "y":{"num":{"const":1,"x":[0],"y":[0]},"den":{"const":1,"x":[0],"y":[0]}}}"#,
    )
    .unwrap();
    let init = dir.path().join("init.json");
    std::fs::write(&init, r#"{"x":[0],"y":[1]}"#).unwrap();
    let csv = dir.path().join("t.csv");
    let (code, out, _) = run_cli(&[
        "simulate",
        doc.to_str().unwrap(),
        "--steps",
        "5",
        "--init",
        init.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains(r#""kind":"zero_denominator""#), "{out}");
    assert!(out.contains(r#""n":1"#));
}

#[test]
fn simulate_without_init_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("sys.json");
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(corpus_path(1)).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("init");
    std::fs::write(&doc, v.to_string()).unwrap();
    let csv = dir.path().join("t.csv");
    let (code, _, err) = run_cli(&[
        "simulate",
        doc.to_str().unwrap(),
        "--steps",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("initial conditions"));
}

#[test]
fn malformed_documents_report_paths() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("bad.json");
    std::fs::write(
        &doc,
        r#"{"k":2,"x":{"num":{"const":1,"x":[1,0,0],"y":[0,0]},"den":{"const":1,"x":[0,0],"y":[0,1]}},
            "y":{"num":{"const":1,"x":[1,0],"y":[0,0]},"den":{"const":1,"x":[0,0],"y":[0,1]}}}"#,
    )
    .unwrap();
    let (code, _, err) = run_cli(&["analyze", doc.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/x/num/x"), "{err}");
    assert_eq!(run_cli(&["analyze", "/nonexistent/file.json"]).0, 2);
}

#[test]
fn verify_example3_flags_only_y() {
    let (code, out, _) = run_cli(&[
        "verify",
        &path(3),
        "--trials",
        "3",
        "--steps",
        "4000",
        "--seed",
        "7",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["claimed_bounded"], serde_json::json!(["x"]));
    for t in v["trials"].as_array().unwrap() {
        assert_eq!(t["x"]["kind"]["kind"], "stabilized", "{t}");
        assert_eq!(t["y"]["kind"]["kind"], "diverging", "{t}");
    }
}

#[test]
fn verify_flags_false_user_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("sys.json");
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(corpus_path(6)).unwrap()).unwrap();
    v["asserted_comparability"] =
        serde_json::json!([{"shape":"one_sided_linear","direction":"original","constants":[0]}]);
    std::fs::write(&doc, v.to_string()).unwrap();
    let (code, out, _) = run_cli(&[
        "verify",
        doc.to_str().unwrap(),
        "--trials",
        "2",
        "--steps",
        "50",
        "--seed",
        "1",
        "--positive-init",
    ]);
    assert_eq!(code, 1);
    assert!(
        out.contains("one_sided_linear/original violated at n = 1"),
        "{out}"
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ratdiff");
    let ok = Command::new(bin)
        .args(["eta", "--k", "2", "--source", "1", "--target", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&ok.stdout).lines().next(),
        Some("holds, eta_min=2")
    );
    let bad = Command::new(bin).args(["analyze"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}
