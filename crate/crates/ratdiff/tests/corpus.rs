mod common;

use common::{all_corpus, corpus};
use ratdiff::comparability::{Direction, Shape, Source};
use ratdiff::engine::{analyze_with, AnalysisInputs, AnalysisReport, Orientation, VerdictStatus};
use ratdiff::io::{parse_document, to_canonical_json, SystemDocument};
use ratdiff::rules::Sequence;

fn report(doc: &SystemDocument) -> AnalysisReport {
    analyze_with(
        &doc.system,
        &AnalysisInputs {
            user_facts: doc.facts.clone(),
            asserted_bounds: doc.asserted_bounds.clone(),
            empirical_bounds: Vec::new(),
        },
    )
}

fn applied(r: &AnalysisReport, id: u8, case: Option<&str>, o: Orientation) -> bool {
    r.find(id, case, o).is_some()
}

fn fact_source(r: &AnalysisReport, shape: Shape, dir: Direction) -> Option<Vec<Source>> {
    r.comparability
        .get(shape, dir)
        .map(|f| f.provenance.clone())
}

#[test]
fn every_corpus_file_round_trips_canonically() {
    for (n, doc) in all_corpus() {
        let text = to_canonical_json(&doc);
        let again = parse_document(&text).unwrap_or_else(|e| panic!("ex{n}: {e}"));
        assert_eq!(again, doc, "ex{n}");
        assert_eq!(to_canonical_json(&again), text, "ex{n}");
    }
}

#[test]
fn example1_linear_sandwich_and_theorem_1() {
    let r = report(&corpus(1));
    let src = fact_source(&r, Shape::TwoSidedLinear, Direction::Original).unwrap();
    assert!(src.contains(&Source::Theorem(25)));
    assert!(applied(&r, 1, None, Orientation::Direct));
    let app = r.find(1, None, Orientation::Direct).unwrap();
    assert_eq!(app.eta_evidence[0].decision.eta_min, Some(2));
}

#[test]
fn example2_theorem_3_iii_with_asserted_sandwich() {
    let doc = corpus(2);
    assert!(applied(&report(&doc), 3, Some("iii"), Orientation::Direct));
    let bare = analyze_with(&doc.system, &AnalysisInputs::default());
    assert!(!applied(&bare, 3, Some("iii"), Orientation::Direct));
}

#[test]
fn example3_theorem_10_iii_covers_x_only() {
    let r = report(&corpus(3));
    assert!(applied(&r, 10, Some("iii"), Orientation::Direct));
    assert_eq!(r.verdict(Sequence::X).status, VerdictStatus::ProvenBounded);
    assert_eq!(r.verdict(Sequence::Y).status, VerdictStatus::Unproven);
}

#[test]
fn example4_theorem_6() {
    assert!(applied(&report(&corpus(4)), 6, None, Orientation::Direct));
}

#[test]
fn example5_theorem_16_with_asserted_affine_bound() {
    assert!(applied(&report(&corpus(5)), 16, None, Orientation::Direct));
}

#[test]
fn examples_6_and_7_affine_sandwich() {
    for (n, id) in [(6, 20), (7, 21)] {
        let r = report(&corpus(n));
        let src = fact_source(&r, Shape::TwoSidedAffine, Direction::Original).unwrap();
        assert!(src.contains(&Source::Theorem(27)), "ex{n}");
        assert!(applied(&r, id, None, Orientation::Direct), "ex{n}");
    }
}

#[test]
fn example8_padded_strict_sandwich_and_theorem_22_i() {
    let r = report(&corpus(8));
    let f = r
        .comparability
        .get(Shape::TwoSidedAffine, Direction::Original)
        .unwrap();
    assert!(f.provenance.contains(&Source::Theorem(27)));
    // M₂ = M₁ > 0 and M₄ = M₁M₆ + M₂ > M₂, so the computed constants are strict already.
    assert!(f.supports_strict_affine());
    assert!(f.strict_affine || f.padded_constants.is_some());
    assert!(applied(&r, 22, Some("i"), Orientation::Direct));
}

#[test]
fn example9_swapped_linear_bound_and_theorem_14_ii() {
    let r = report(&corpus(9));
    let src = fact_source(&r, Shape::OneSidedLinear, Direction::Swapped).unwrap();
    assert!(src.contains(&Source::Theorem(24)));
    assert!(applied(&r, 14, Some("ii"), Orientation::Swapped));
}

#[test]
fn example10_theorem_22_ii_with_asserted_strict_sandwich() {
    let doc = corpus(10);
    assert!(applied(&report(&doc), 22, Some("ii"), Orientation::Direct));
    let bare = analyze_with(&doc.system, &AnalysisInputs::default());
    assert!(!applied(&bare, 22, Some("ii"), Orientation::Direct));
}

#[test]
fn asserted_facts_make_conclusions_conditional() {
    use ratdiff::comparability::Rigor;
    for n in [2, 4, 10] {
        let r = report(&corpus(n));
        assert_eq!(
            r.verdict(Sequence::X).rigor,
            Some(Rigor::ConditionalOnAssertion),
            "ex{n}"
        );
    }
    assert_eq!(
        report(&corpus(1)).verdict(Sequence::X).rigor,
        Some(Rigor::Rigorous)
    );
}
