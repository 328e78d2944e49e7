//! Seeded random trials against the analysis of a corpus system.

use ratdiff::cli::{verify, VerifyOptions};
use ratdiff::engine::{analyze_with, AnalysisInputs};
use ratdiff::io::parse_document;
use ratdiff::simulate::BoundKind;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/ex03.json").into());
    let doc = parse_document(&std::fs::read_to_string(&path).expect("readable")).expect("valid");
    let report = analyze_with(
        &doc.system,
        &AnalysisInputs {
            user_facts: doc.facts.clone(),
            ..Default::default()
        },
    );
    let opts = VerifyOptions {
        trials: 5,
        steps: 20_000,
        seed: 7,
        positive_init: true,
        burn_in: 10_000,
    };
    let summary = verify(&doc, &report, &opts);
    let short = |k: &BoundKind| match k {
        BoundKind::Stabilized { max_value, .. } => format!("stabilized ≤ {max_value:.4}"),
        BoundKind::Diverging { .. } => "diverging".to_string(),
        BoundKind::Inconclusive { .. } => "inconclusive".to_string(),
    };
    println!("claimed bounded: {:?}", summary.claimed_bounded);
    for t in &summary.trials {
        println!(
            "trial {}: x {}, y {}",
            t.index,
            short(&t.x.kind),
            short(&t.y.kind)
        );
    }
    println!("violations: {}", summary.violations);
}
