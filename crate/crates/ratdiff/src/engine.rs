//! Evaluates the hypothesis table against a system, in both orientations, and
//! chains conclusions to a fixed point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::comparability::{
    derive_comparability, ComparabilityFact, ComparabilityFacts, Direction, FactKey, Rigor, Shape,
};
use crate::eta::{eta_decide, EtaDecision, EtaQuery};
use crate::model::{swap_system, Constant, Group, IndexSet, RationalSystem};
use crate::number::format_rational;
use crate::rules::{
    theorem_catalogue, Conclusion, Sequence, Side, SignRequirement, TheoremHypotheses,
};

/// Whether a row was evaluated on the system as given or on its swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Direct,
    Swapped,
}

impl Orientation {
    pub fn name(self) -> &'static str {
        match self {
            Orientation::Direct => "direct",
            Orientation::Swapped => "swapped",
        }
    }
}

/// Names an application inside a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ApplicationRef {
    pub id: u8,
    pub case: Option<&'static str>,
    pub orientation: Orientation,
}

impl ApplicationRef {
    pub fn label(&self) -> String {
        let mut s = self.id.to_string();
        if let Some(c) = self.case {
            let _ = write!(s, " ({c})");
        }
        if self.orientation == Orientation::Swapped {
            s.push_str(" swapped");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "application")]
pub enum BoundSource {
    Application(ApplicationRef),
    UserAsserted,
    Empirical,
}

/// A bound on one sequence available as input to rows that need it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundFact {
    pub sequence: Sequence,
    pub side: Side,
    pub source: BoundSource,
    pub rigor: Rigor,
}

/// Best-known bound per (sequence, side).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundKnowledge {
    bounds: BTreeMap<(Sequence, Side), BoundFact>,
}

impl BoundKnowledge {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `fact` if it is strictly more trustworthy than what is known; returns
    /// whether it was recorded.
    pub fn offer(&mut self, fact: BoundFact) -> bool {
        let key = (fact.sequence, fact.side);
        match self.bounds.get(&key) {
            Some(old) if old.rigor >= fact.rigor => false,
            _ => {
                self.bounds.insert(key, fact);
                true
            }
        }
    }

    pub fn get(&self, sequence: Sequence, side: Side) -> Option<&BoundFact> {
        self.bounds.get(&(sequence, side))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BoundFact> {
        self.bounds.values()
    }

    /// The same knowledge with x and y exchanged.
    pub fn swapped(&self) -> Self {
        BoundKnowledge {
            bounds: self
                .bounds
                .values()
                .map(|b| {
                    let f = BoundFact {
                        sequence: b.sequence.other(),
                        ..*b
                    };
                    ((f.sequence, f.side), f)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaEvidence {
    pub source: String,
    pub target: String,
    pub source_set: IndexSet,
    pub target_set: IndexSet,
    pub decision: EtaDecision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremApplication {
    pub id: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<&'static str>,
    pub orientation: Orientation,
    /// Stated for the original system.
    pub conclusion: Conclusion,
    /// Keys of facts in the report's comparability list.
    pub facts_used: Vec<FactKey>,
    pub bounds_used: Vec<BoundFact>,
    pub eta_evidence: Vec<EtaEvidence>,
    /// Each satisfied hypothesis, written with the parameter names of the evaluated frame.
    pub checks: Vec<String>,
    pub rigor: Rigor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl TheoremApplication {
    pub fn reference(&self) -> ApplicationRef {
        ApplicationRef {
            id: self.id,
            case: self.case,
            orientation: self.orientation,
        }
    }

    pub fn label(&self) -> String {
        self.reference().label()
    }
}

fn fmt_set(s: &IndexSet) -> String {
    s.to_string()
}

/// Evaluates one row against `sys` as given. `facts` and `bounds` must describe `sys`.
pub fn evaluate_theorem(
    sys: &RationalSystem,
    row: &TheoremHypotheses,
    facts: &ComparabilityFacts,
    bounds: &BoundKnowledge,
) -> Option<TheoremApplication> {
    let mut checks = Vec::new();
    let mut rigor = Rigor::Rigorous;

    for &(c, req) in &row.signs {
        let positive = sys.is_positive(c);
        match req {
            SignRequirement::Positive if positive => checks.push(format!("{} > 0", c.symbol())),
            SignRequirement::Zero if !positive => checks.push(format!("{} = 0", c.symbol())),
            _ => return None,
        }
    }
    for (a, b) in &row.subsets {
        let (sa, sb) = (a.eval(sys), b.eval(sys));
        if !sa.is_subset(&sb) {
            return None;
        }
        checks.push(format!("{a} ⊆ {b}: {} ⊆ {}", fmt_set(&sa), fmt_set(&sb)));
    }
    for e in &row.nonempty {
        let s = e.eval(sys);
        if s.is_empty() {
            return None;
        }
        checks.push(format!("{e} ≠ ∅: {}", fmt_set(&s)));
    }

    let mut facts_used = Vec::new();
    if let Some(req) = row.comparability {
        let fact = facts.get(req.shape, Direction::Original)?;
        if req.strict && !fact.supports_strict_affine() {
            return None;
        }
        rigor = rigor.min(fact.rigor);
        facts_used.push(fact.key());
        let strict = if req.strict { " (strict)" } else { "" };
        checks.push(format!("{}{strict}: {}", req.shape.name(), fact.describe()));
    }

    let mut bounds_used = Vec::new();
    for &side in &row.bounds_required {
        let b = bounds.get(Sequence::Y, side)?;
        rigor = rigor.min(b.rigor);
        bounds_used.push(*b);
        checks.push(format!("y bounded {}", side.name()));
    }

    let mut eta_evidence = Vec::new();
    for req in &row.eta {
        let source_set = req.source.eval(sys);
        let target_set = req.target.eval(sys);
        let query = EtaQuery::new(sys.k, source_set.clone(), target_set.clone()).ok()?;
        let decision = eta_decide(&query);
        if !decision.holds {
            return None;
        }
        checks.push(format!("η({} → {}): {decision}", req.source, req.target));
        eta_evidence.push(EtaEvidence {
            source: req.source.to_string(),
            target: req.target.to_string(),
            source_set,
            target_set,
            decision,
        });
    }

    Some(TheoremApplication {
        id: row.id,
        case: row.case,
        orientation: Orientation::Direct,
        conclusion: row.conclusion,
        facts_used,
        bounds_used,
        eta_evidence,
        checks,
        rigor,
        note: row.note,
    })
}

/// Evaluates a row in the given orientation; results are expressed for the original system.
pub fn evaluate_oriented(
    sys: &RationalSystem,
    row: &TheoremHypotheses,
    facts: &ComparabilityFacts,
    bounds: &BoundKnowledge,
    orientation: Orientation,
) -> Option<TheoremApplication> {
    match orientation {
        Orientation::Direct => evaluate_theorem(sys, row, facts, bounds),
        Orientation::Swapped => {
            let swapped = swap_system(sys);
            let mut app = evaluate_theorem(&swapped, row, &facts.swapped(), &bounds.swapped())?;
            app.orientation = Orientation::Swapped;
            app.conclusion = app.conclusion.flipped();
            app.facts_used = app.facts_used.iter().map(|k| k.flipped()).collect();
            for b in &mut app.bounds_used {
                b.sequence = b.sequence.other();
            }
            Some(app)
        }
    }
}

/// Everything besides the system that feeds an analysis.
#[derive(Debug, Clone, Default)]
pub struct AnalysisInputs {
    pub user_facts: Vec<ComparabilityFact>,
    pub asserted_bounds: Vec<(Sequence, Side)>,
    /// Bounds observed in simulation; never rigorous.
    pub empirical_bounds: Vec<(Sequence, Side)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemSummary {
    pub k: usize,
    pub constants: BTreeMap<&'static str, String>,
    pub index_sets: BTreeMap<&'static str, IndexSet>,
}

impl SystemSummary {
    pub fn of(sys: &RationalSystem) -> Self {
        let constants = [Constant::Alpha, Constant::A, Constant::P, Constant::Q]
            .into_iter()
            .map(|c| (c.symbol(), format_rational(sys.constant(c))))
            .collect();
        let index_sets = Group::ALL
            .into_iter()
            .map(|g| (g.symbol(), sys.index_set(g)))
            .collect();
        SystemSummary {
            k: sys.k,
            constants,
            index_sets,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    ProvenBounded,
    Unproven,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub sequence: Sequence,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rigor: Option<Rigor>,
    pub by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub system: SystemSummary,
    pub comparability: ComparabilityFacts,
    pub asserted_bounds: Vec<BoundFact>,
    pub applications: Vec<TheoremApplication>,
    pub verdicts: Vec<SequenceVerdict>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn applications_of(&self, id: u8) -> impl Iterator<Item = &TheoremApplication> {
        self.applications.iter().filter(move |a| a.id == id)
    }

    pub fn find(
        &self,
        id: u8,
        case: Option<&str>,
        orientation: Orientation,
    ) -> Option<&TheoremApplication> {
        self.applications
            .iter()
            .find(|a| a.id == id && a.case == case && a.orientation == orientation)
    }

    pub fn verdict(&self, s: Sequence) -> &SequenceVerdict {
        self.verdicts
            .iter()
            .find(|v| v.sequence == s)
            .expect("both sequences have a verdict")
    }
}

/// Analysis with user-asserted comparability facts only.
pub fn analyze(sys: &RationalSystem, user_facts: &[ComparabilityFact]) -> AnalysisReport {
    analyze_with(
        sys,
        &AnalysisInputs {
            user_facts: user_facts.to_vec(),
            ..AnalysisInputs::default()
        },
    )
}

pub fn analyze_with(sys: &RationalSystem, inputs: &AnalysisInputs) -> AnalysisReport {
    let facts = derive_comparability(sys, &inputs.user_facts);
    let rows = theorem_catalogue();

    let mut knowledge = BoundKnowledge::new();
    for &(sequence, side) in &inputs.asserted_bounds {
        knowledge.offer(BoundFact {
            sequence,
            side,
            source: BoundSource::UserAsserted,
            rigor: Rigor::ConditionalOnAssertion,
        });
    }
    for &(sequence, side) in &inputs.empirical_bounds {
        knowledge.offer(BoundFact {
            sequence,
            side,
            source: BoundSource::Empirical,
            rigor: Rigor::Empirical,
        });
    }
    let asserted_bounds: Vec<BoundFact> = knowledge.iter().copied().collect();

    let mut found: BTreeMap<ApplicationRef, TheoremApplication> = BTreeMap::new();
    loop {
        let mut changed = false;
        for row in &rows {
            for orientation in [Orientation::Direct, Orientation::Swapped] {
                let Some(app) = evaluate_oriented(sys, row, &facts, &knowledge, orientation) else {
                    continue;
                };
                let key = app.reference();
                let better = found.get(&key).is_none_or(|old| app.rigor > old.rigor);
                if better {
                    found.insert(key, app);
                    changed = true;
                }
            }
        }
        for app in found.values() {
            for s in [Sequence::X, Sequence::Y] {
                if app.conclusion.covers(s) {
                    changed |= knowledge.offer(BoundFact {
                        sequence: s,
                        side: Side::Above,
                        source: BoundSource::Application(app.reference()),
                        rigor: app.rigor,
                    });
                }
            }
        }
        if !changed {
            break;
        }
    }

    let applications: Vec<TheoremApplication> = found.into_values().collect();
    let verdicts = [Sequence::X, Sequence::Y]
        .into_iter()
        .map(|s| {
            let by: Vec<&TheoremApplication> = applications
                .iter()
                .filter(|a| a.conclusion.covers(s))
                .collect();
            SequenceVerdict {
                sequence: s,
                status: if by.is_empty() {
                    VerdictStatus::Unproven
                } else {
                    VerdictStatus::ProvenBounded
                },
                rigor: by.iter().map(|a| a.rigor).max(),
                by: by.iter().map(|a| a.label()).collect(),
            }
        })
        .collect();

    let mut notes = vec![
        "bounds hold for n > N with an unspecified N; empirical checks use a burn-in".to_string(),
        "computed comparability constants are eventual: they omit any adjustment for the \
         initial conditions of a particular trajectory"
            .to_string(),
    ];
    if applications
        .iter()
        .any(|a| a.orientation == Orientation::Swapped)
    {
        notes.push(
            "checks of swapped applications use the parameter names of the swapped system".into(),
        );
    }
    if facts.iter().any(|f| f.padded_constants.is_some()) {
        notes.push(
            "two-sided affine facts that are not strict carry padded constants M₂ + 1, M₄ + 2"
                .into(),
        );
    }

    AnalysisReport {
        system: SystemSummary::of(sys),
        comparability: facts,
        asserted_bounds,
        applications,
        verdicts,
        notes,
    }
}

fn rigor_name(r: Rigor) -> &'static str {
    match r {
        Rigor::Rigorous => "rigorous",
        Rigor::ConditionalOnAssertion => "conditional on assertion",
        Rigor::Empirical => "empirical",
    }
}

/// Plain-text rendering of a report.
pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let sys = &report.system;
    let _ = writeln!(out, "order k = {}", sys.k);
    let consts: Vec<String> = sys
        .constants
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect();
    let _ = writeln!(out, "constants: {}", consts.join(", "));
    let sets: Vec<String> = sys
        .index_sets
        .iter()
        .map(|(k, v)| format!("I_{k} = {v}"))
        .collect();
    let _ = writeln!(out, "index sets: {}", sets.join(", "));

    let _ = writeln!(out, "\ncomparability:");
    if report.comparability.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for f in report.comparability.iter() {
        let sources: Vec<String> = f.provenance.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "  {}: {}  [{}; {}]",
            f.key(),
            f.describe(),
            sources.join(", "),
            rigor_name(f.rigor)
        );
        if let Some(p) = &f.padded_constants {
            let _ = writeln!(out, "    strict variant constants {p}");
        }
        if !f.derived_from.is_empty() {
            let from: Vec<String> = f.derived_from.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(out, "    derived from {}", from.join(", "));
        }
    }

    let _ = writeln!(out, "\napplications:");
    if report.applications.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for a in &report.applications {
        let concl = match a.conclusion {
            Conclusion::BothBounded => "x and y bounded",
            Conclusion::XBounded => "x bounded",
            Conclusion::YBounded => "y bounded",
        };
        let _ = writeln!(
            out,
            "  theorem {}: {concl} ({})",
            a.label(),
            rigor_name(a.rigor)
        );
        for c in &a.checks {
            let _ = writeln!(out, "    {c}");
        }
    }

    let _ = writeln!(out, "\nverdicts:");
    for v in &report.verdicts {
        match v.status {
            VerdictStatus::ProvenBounded => {
                let _ = writeln!(
                    out,
                    "  {}: bounded ({}) by {}",
                    v.sequence.name(),
                    rigor_name(v.rigor.unwrap_or(Rigor::Rigorous)),
                    v.by.join(", ")
                );
            }
            VerdictStatus::Unproven => {
                let _ = writeln!(out, "  {}: unproven", v.sequence.name());
            }
        }
    }
    for n in &report.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

/// Whether `report` contains a fact with the given key.
pub fn has_fact(report: &AnalysisReport, shape: Shape, direction: Direction) -> bool {
    report.comparability.contains(shape, direction)
}
