//! Analyzes every corpus file and prints which theorems apply.

use std::fs;

use ratdiff::engine::{analyze_with, AnalysisInputs};
use ratdiff::io::parse_document;
use ratdiff::rules::Sequence;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus");
    let mut paths: Vec<_> = fs::read_dir(dir)
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .collect();
    paths.sort();
    for path in paths {
        let doc = parse_document(&fs::read_to_string(&path).expect("readable")).expect("valid");
        let report = analyze_with(
            &doc.system,
            &AnalysisInputs {
                user_facts: doc.facts.clone(),
                asserted_bounds: doc.asserted_bounds.clone(),
                empirical_bounds: Vec::new(),
            },
        );
        let labels: Vec<String> = report.applications.iter().map(|a| a.label()).collect();
        let verdict = |s| format!("{:?}", report.verdict(s).status);
        println!(
            "{}: x {}, y {}\n    {}",
            path.file_name().unwrap().to_string_lossy(),
            verdict(Sequence::X),
            verdict(Sequence::Y),
            labels.join(", ")
        );
    }
}
