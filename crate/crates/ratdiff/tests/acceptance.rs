//! Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::{all_corpus, corpus, corpus_path, random_system};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratdiff::cli::{run, trial_init, verify, VerifyOptions};
use ratdiff::comparability::{
    check_affine_bound, check_linear_bound, ComparabilityFact, Direction, Shape, Source,
};
use ratdiff::engine::{
    analyze, analyze_with, AnalysisInputs, AnalysisReport, Orientation, VerdictStatus,
};
use ratdiff::eta::oracle::{eta_oracle, OracleVerdict};
use ratdiff::eta::{eta_decide, EtaQuery};
use ratdiff::io::SystemDocument;
use ratdiff::model::{swap_system, IndexSet, RationalSystem};
use ratdiff::number::{int, rat, Rational};
use ratdiff::rules::Sequence;
use ratdiff::simulate::{
    simulate, validate_certificate, CertificateCheck, InitialConditions, Trajectory,
    TrajectoryStatus,
};

struct Outcome {
    problems: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            problems: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }
}

fn inputs(doc: &SystemDocument) -> AnalysisInputs {
    AnalysisInputs {
        user_facts: doc.facts.clone(),
        asserted_bounds: doc.asserted_bounds.clone(),
        empirical_bounds: Vec::new(),
    }
}

fn has_source(r: &AnalysisReport, shape: Shape, dir: Direction, id: u8) -> bool {
    r.comparability
        .get(shape, dir)
        .is_some_and(|f| f.provenance.contains(&Source::Theorem(id)))
}

fn corpus_reproduction() -> Outcome {
    use Orientation::{Direct, Swapped};
    let mut o = Outcome::new();
    let docs = all_corpus();
    let reports: Vec<AnalysisReport> = docs
        .iter()
        .map(|(_, d)| analyze_with(&d.system, &inputs(d)))
        .collect();
    let r = |n: usize| &reports[n - 1];
    let app =
        |n: usize, id: u8, case: Option<&str>, or: Orientation| r(n).find(id, case, or).is_some();

    o.check(
        has_source(r(1), Shape::TwoSidedLinear, Direction::Original, 25),
        || "ex1: no theorem 25 fact".into(),
    );
    o.check(app(1, 1, None, Direct), || {
        "ex1: theorem 1 not applied".into()
    });
    o.check(app(2, 3, Some("iii"), Direct), || {
        "ex2: theorem 3 (iii) not applied".into()
    });
    o.check(app(3, 10, Some("iii"), Direct), || {
        "ex3: theorem 10 (iii) not applied".into()
    });
    o.check(
        r(3).verdict(Sequence::X).status == VerdictStatus::ProvenBounded
            && r(3).verdict(Sequence::Y).status == VerdictStatus::Unproven,
        || "ex3: verdicts should cover x only".into(),
    );
    o.check(app(4, 6, None, Direct), || {
        "ex4: theorem 6 not applied".into()
    });
    o.check(app(5, 16, None, Direct), || {
        "ex5: theorem 16 not applied".into()
    });
    for (n, id) in [(6, 20), (7, 21)] {
        o.check(
            has_source(r(n), Shape::TwoSidedAffine, Direction::Original, 27),
            || format!("ex{n}: no theorem 27 fact"),
        );
        o.check(app(n, id, None, Direct), || {
            format!("ex{n}: theorem {id} not applied")
        });
    }
    let strict = r(8)
        .comparability
        .get(Shape::TwoSidedAffine, Direction::Original)
        .is_some_and(|f| f.provenance.contains(&Source::Theorem(27)) && f.supports_strict_affine());
    o.check(strict, || "ex8: no strict theorem 27 fact".into());
    o.check(app(8, 22, Some("i"), Direct), || {
        "ex8: theorem 22 (i) not applied".into()
    });
    o.check(
        has_source(r(9), Shape::OneSidedLinear, Direction::Swapped, 24),
        || "ex9: no swapped theorem 24 fact".into(),
    );
    o.check(app(9, 14, Some("ii"), Swapped), || {
        "ex9: swapped theorem 14 (ii) not applied".into()
    });
    o.check(app(10, 22, Some("ii"), Direct), || {
        "ex10: theorem 22 (ii) not applied".into()
    });
    o
}

fn eta_values() -> Outcome {
    let mut o = Outcome::new();
    let cases: [(&[usize], &[usize], usize); 4] = [
        (&[1], &[2], 2),
        (&[1, 2], &[1, 2], 1),
        (&[2], &[1, 2], 1),
        (&[1, 2], &[2], 2),
    ];
    for (s, t, want) in cases {
        let q = EtaQuery::new(2, s.iter().copied().collect(), t.iter().copied().collect()).unwrap();
        let got = eta_decide(&q).eta_min;
        o.check(got == Some(want), || {
            format!("S={s:?} T={t:?}: got {got:?}, want {want}")
        });
    }
    o
}

fn oracle_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let subset = |m: u32| -> IndexSet { (1..=3).filter(|i| m & (1 << (i - 1)) != 0).collect() };
    let mut determined = 0;
    for s in 0..8 {
        for t in 0..8 {
            let q = EtaQuery::new(3, subset(s), subset(t)).unwrap();
            let d = eta_decide(&q);
            match eta_oracle(&q, 9) {
                OracleVerdict::Determined { eta_min } => {
                    determined += 1;
                    o.check(d.eta_min == Some(eta_min), || {
                        format!(
                            "S={} T={}: decider {:?}, oracle {eta_min}",
                            subset(s),
                            subset(t),
                            d.eta_min
                        )
                    });
                }
                OracleVerdict::Undetermined { .. } => o.check(!d.holds, || {
                    format!(
                        "S={} T={}: oracle never hits, decider holds",
                        subset(s),
                        subset(t)
                    )
                }),
                OracleVerdict::BudgetExceeded { .. } => o.problems.push(format!(
                    "S={} T={}: oracle budget exceeded",
                    subset(s),
                    subset(t)
                )),
            }
        }
    }
    o.detail = format!("{determined}/64 determined by the oracle");
    o
}

/// Pairs (row on sys, row on swap(sys)) whose applicability must coincide.
type RowRef = (u8, Option<&'static str>);

const SWAP_PAIRS: [(RowRef, RowRef); 5] = [
    ((2, None), (1, None)),
    ((21, None), (20, None)),
    ((4, Some("i")), (3, Some("ii"))),
    ((4, Some("ii")), (3, Some("iii"))),
    ((4, Some("iii")), (3, Some("i"))),
];

fn swap_mismatches(sys: &RationalSystem, facts: &[ComparabilityFact]) -> Vec<String> {
    let flipped: Vec<ComparabilityFact> = facts.iter().map(|f| f.flipped()).collect();
    let a = analyze(sys, facts);
    let b = analyze(&swap_system(sys), &flipped);
    SWAP_PAIRS
        .iter()
        .filter(|((i, c), (j, d))| {
            a.find(*i, *c, Orientation::Direct).is_some()
                != b.find(*j, *d, Orientation::Direct).is_some()
        })
        .map(|((i, c), (j, d))| format!("{i} {c:?} vs swapped {j} {d:?}"))
        .collect()
}

fn swap_suite() -> Outcome {
    let mut o = Outcome::new();
    for (n, doc) in all_corpus() {
        for m in swap_mismatches(&doc.system, &doc.facts) {
            o.problems.push(format!("ex{n}: {m}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut applicable = 0;
    for i in 0..1000 {
        let sys = random_system(&mut rng, 3);
        let r = analyze(&sys, &[]);
        if SWAP_PAIRS
            .iter()
            .any(|((id, c), _)| r.find(*id, *c, Orientation::Direct).is_some())
        {
            applicable += 1;
        }
        for m in swap_mismatches(&sys, &[]) {
            o.problems.push(format!("random system {i}: {m}"));
        }
    }
    o.detail = format!("1000 random systems, {applicable} with a paired row applicable");
    o
}

/// Theorem 24 and 26 certificates for a corpus system, in both directions.
fn computed_certificates(sys: &RationalSystem) -> Vec<ComparabilityFact> {
    let sw = swap_system(sys);
    [check_linear_bound(sys), check_affine_bound(sys)]
        .into_iter()
        .flatten()
        .chain(
            [check_linear_bound(&sw), check_affine_bound(&sw)]
                .into_iter()
                .flatten()
                .map(|f| f.flipped()),
        )
        .filter(|f| f.constants.values().is_some())
        .collect()
}

fn certificate_soundness() -> Outcome {
    let mut o = Outcome::new();
    let mut float_runs = 0;
    let mut exact_runs = 0;
    let mut exact_stopped = Vec::new();
    for (n, doc) in all_corpus() {
        let facts = computed_certificates(&doc.system);
        if facts.is_empty() {
            continue;
        }
        let mut first_stop: Option<usize> = None;
        for trial in 0..100 {
            let init = trial_init(doc.system.k, 5, trial, false);
            let t: Trajectory<f64> = simulate(&doc.system, &init, 10_000);
            o.check(t.is_completed(), || {
                format!("ex{n} trial {trial}: float run stopped: {:?}", t.status)
            });
            let e: Trajectory<Rational> = simulate(&doc.system, &init, 200);
            match e.status {
                TrajectoryStatus::Completed => exact_runs += 1,
                TrajectoryStatus::Overflow { n: at } => {
                    first_stop = Some(first_stop.map_or(at, |s| s.min(at)));
                }
                other => o
                    .problems
                    .push(format!("ex{n} trial {trial}: exact run stopped: {other:?}")),
            }
            for f in &facts {
                let label = format!("{} ({:?})", f.key(), f.provenance);
                match validate_certificate(&t, f) {
                    CertificateCheck::Holds => {}
                    bad => o
                        .problems
                        .push(format!("ex{n} trial {trial}: {label} float {bad:?}")),
                }
                match validate_certificate(&e, f) {
                    CertificateCheck::Holds => {}
                    bad => o
                        .problems
                        .push(format!("ex{n} trial {trial}: {label} exact {bad:?}")),
                }
            }
            float_runs += 1;
        }
        if let Some(at) = first_stop {
            exact_stopped.push(format!("ex{n} (digit budget exceeded from n = {at})"));
        }
    }
    if !exact_stopped.is_empty() {
        o.problems.push(format!(
            "exact mode cannot reach 200 steps: {}",
            exact_stopped.join(", ")
        ));
    }
    o.detail = format!(
        "{float_runs} float runs of 10000 steps, {exact_runs} exact runs reached 200 steps; \
         certificates checked on every generated term"
    );
    o
}

fn cross_check() -> Outcome {
    let mut o = Outcome::new();
    let opts = VerifyOptions {
        trials: 10,
        steps: 20_000,
        seed: 7,
        positive_init: false,
        burn_in: 10_000,
    };
    for (n, expect_y_diverging) in [(3, true), (1, false)] {
        let doc = corpus(n);
        let report = analyze_with(&doc.system, &inputs(&doc));
        let summary = verify(&doc, &report, &opts);
        o.check(summary.violations == 0, || {
            format!("ex{n}: {} violations", summary.violations)
        });
        for t in &summary.trials {
            o.check(t.x.is_stabilized(), || {
                format!("ex{n} trial {}: x {:?}", t.index, t.x.kind)
            });
            let ok = if expect_y_diverging {
                t.y.is_diverging()
            } else {
                t.y.is_stabilized()
            };
            o.check(ok, || format!("ex{n} trial {}: y {:?}", t.index, t.y.kind));
        }
    }
    o
}

fn micro_oracles() -> Outcome {
    let mut o = Outcome::new();
    let ex3 = corpus(3);
    let t: Trajectory<Rational> = simulate(&ex3.system, &InitialConditions::constant(2, int(1)), 2);
    o.check(t.x.first() == Some(&rat(3, 2)), || {
        format!("ex3 x1 = {:?}", t.x.first())
    });
    o.check(t.y.first() == Some(&int(3)), || {
        format!("ex3 y1 = {:?}", t.y.first())
    });
    o.check(t.y.get(1) == Some(&int(5)), || {
        format!("ex3 y2 = {:?}", t.y.get(1))
    });
    let ex1 = corpus(1);
    let t: Trajectory<Rational> =
        simulate(&ex1.system, &InitialConditions::constant(2, int(1)), 1000);
    o.check(t.is_completed() && t.len() == 1000, || {
        format!("ex1 run: {:?}", t.status)
    });
    o.check(t.x.iter().chain(&t.y).all(|v| *v == int(1)), || {
        "ex1 trajectory is not constant 1".into()
    });
    o
}

fn cli_output(args: &[String]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("ratdiff".to_string()).chain(args.iter().cloned()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let dir = std::env::temp_dir().join(format!("ratdiff-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for n in 1..=10 {
        let path = corpus_path(n).display().to_string();
        let args = vec!["analyze".to_string(), path.clone()];
        o.check(cli_output(&args) == cli_output(&args), || {
            format!("ex{n}: analyze differs")
        });
        let verify_args: Vec<String> = [
            "verify", &path, "--trials", "3", "--steps", "2000", "--seed", "11",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        o.check(cli_output(&verify_args) == cli_output(&verify_args), || {
            format!("ex{n}: verify differs")
        });
        let csv = |tag: &str| -> Vec<u8> {
            let out = dir.join(format!("ex{n}-{tag}.csv"));
            let args: Vec<String> = [
                "simulate",
                &path,
                "--steps",
                "500",
                "--out",
                out.to_str().unwrap(),
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            cli_output(&args);
            std::fs::read(out).unwrap_or_default()
        };
        o.check(csv("a") == csv("b"), || {
            format!("ex{n}: simulate CSV differs")
        });
    }
    let _ = std::fs::remove_dir_all(&dir);
    o
}

fn main() {
    type Criterion = (u32, &'static str, Duration, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (
            1,
            "example corpus reproduction",
            Duration::from_secs(1),
            corpus_reproduction,
        ),
        (2, "eta values", Duration::from_millis(10), eta_values),
        (
            3,
            "oracle equivalence k=3",
            Duration::from_secs(5),
            oracle_equivalence,
        ),
        (
            4,
            "swap metamorphic suite",
            Duration::from_secs(30),
            swap_suite,
        ),
        (
            5,
            "certificate soundness",
            Duration::from_secs(60),
            certificate_soundness,
        ),
        (
            6,
            "boundedness/divergence cross-check",
            Duration::from_secs(60),
            cross_check,
        ),
        (7, "simulator micro-oracles", Duration::MAX, micro_oracles),
        (8, "determinism", Duration::MAX, determinism),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if elapsed > limit {
            outcome
                .problems
                .push(format!("took {elapsed:.2?}, limit {limit:.2?}"));
        }
        let status = if outcome.problems.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("{status} criterion {id}: {name} [{elapsed:.2?}]");
        if !outcome.detail.is_empty() {
            line.push_str(&format!(" {}", outcome.detail));
        }
        println!("{line}");
        for p in outcome.problems.iter().take(10) {
            println!("    {p}");
        }
        if outcome.problems.len() > 10 {
            println!("    ... {} more", outcome.problems.len() - 10);
        }
        if status == "FAIL" {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
