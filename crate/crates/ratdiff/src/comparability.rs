//! Inequalities linking the two sequences, with explicit constants.
//!
//! Shapes, written for the original orientation (swapped orientation exchanges x and y):
//!
//! | shape              | constants        | inequality                          |
//! |--------------------|------------------|-------------------------------------|
//! | `OneSidedLinear`   | `[M₁]`           | `y ≤ M₁x`                           |
//! | `TwoSidedLinear`   | `[M₁, M₂]`       | `M₁y ≤ x ≤ M₂y`                     |
//! | `OneSidedAffine`   | `[M₁, M₂]`       | `y ≤ M₁x + M₂`                      |
//! | `TwoSidedAffine`   | `[M₁, M₂, M₃, M₄]` | `x ≤ M₁y + M₂ ≤ M₃x + M₄`         |
//!
//! Computed constants are eventual ones: they exclude any adjustment for a finite
//! initial segment of a particular trajectory.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::model::{swap_system, Constant, Group, IndexSet, RationalSystem};
use crate::number::{format_rational, is_positive, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    OneSidedLinear,
    TwoSidedLinear,
    OneSidedAffine,
    TwoSidedAffine,
}

impl Shape {
    pub const ALL: [Shape; 4] = [
        Shape::OneSidedLinear,
        Shape::TwoSidedLinear,
        Shape::OneSidedAffine,
        Shape::TwoSidedAffine,
    ];

    /// Number of named constants.
    pub fn arity(self) -> usize {
        match self {
            Shape::OneSidedLinear => 1,
            Shape::TwoSidedLinear | Shape::OneSidedAffine => 2,
            Shape::TwoSidedAffine => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::OneSidedLinear => "one_sided_linear",
            Shape::TwoSidedLinear => "two_sided_linear",
            Shape::OneSidedAffine => "one_sided_affine",
            Shape::TwoSidedAffine => "two_sided_affine",
        }
    }

    pub fn parse(s: &str) -> Option<Shape> {
        Shape::ALL.into_iter().find(|sh| sh.name() == s)
    }
}

/// Orientation of a fact: as written, or with x and y exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Original,
    Swapped,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Original => Direction::Swapped,
            Direction::Swapped => Direction::Original,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Original => "original",
            Direction::Swapped => "swapped",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "original" => Some(Direction::Original),
            "swapped" => Some(Direction::Swapped),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FactKey {
    pub shape: Shape,
    pub direction: Direction,
}

impl FactKey {
    pub fn new(shape: Shape, direction: Direction) -> Self {
        FactKey { shape, direction }
    }

    pub fn flipped(self) -> Self {
        FactKey::new(self.shape, self.direction.flip())
    }
}

impl fmt::Display for FactKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.shape.name(), self.direction.name())
    }
}

/// Concrete constants, or only the knowledge that suitable constants exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constants {
    Existential,
    Values(Vec<Rational>),
}

impl Constants {
    pub fn values(&self) -> Option<&[Rational]> {
        match self {
            Constants::Existential => None,
            Constants::Values(v) => Some(v),
        }
    }

    pub fn is_existential(&self) -> bool {
        matches!(self, Constants::Existential)
    }
}

impl Serialize for Constants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Constants::Existential => s.serialize_str("existential"),
            Constants::Values(v) => s.collect_seq(v.iter().map(format_rational)),
        }
    }
}

impl fmt::Display for Constants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constants::Existential => write!(f, "existential"),
            Constants::Values(v) => {
                let items: Vec<String> = v.iter().map(format_rational).collect();
                write!(f, "[{}]", items.join(", "))
            }
        }
    }
}

/// Where a fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "id")]
pub enum Source {
    Theorem(u8),
    UserAsserted,
    Empirical,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Theorem(id) => write!(f, "theorem {id}"),
            Source::UserAsserted => write!(f, "user asserted"),
            Source::Empirical => write!(f, "empirical"),
        }
    }
}

/// How much a conclusion can be trusted; ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigor {
    Empirical,
    ConditionalOnAssertion,
    Rigorous,
}

impl Source {
    pub fn rigor(self) -> Rigor {
        match self {
            Source::Theorem(_) => Rigor::Rigorous,
            Source::UserAsserted => Rigor::ConditionalOnAssertion,
            Source::Empirical => Rigor::Empirical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparabilityFact {
    pub shape: Shape,
    pub direction: Direction,
    pub constants: Constants,
    /// For `TwoSidedAffine`: whether the constants already satisfy `M₄ > M₂ > 0`.
    pub strict_affine: bool,
    /// For `TwoSidedAffine` facts that are not strict: `M₂ + 1`, `M₄ + 2`, which are.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub padded_constants: Option<Constants>,
    pub provenance: Vec<Source>,
    /// Facts this one was derived from, empty for facts produced directly.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub derived_from: Vec<FactKey>,
    /// Sign case used to pick the constant formula.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub rigor: Rigor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ComparabilityFact {
    pub fn new(shape: Shape, direction: Direction, constants: Constants, source: Source) -> Self {
        let strict_affine = shape == Shape::TwoSidedAffine && strictly_affine(&constants);
        ComparabilityFact {
            shape,
            direction,
            constants,
            strict_affine,
            padded_constants: None,
            provenance: vec![source],
            derived_from: Vec::new(),
            case: None,
            rigor: source.rigor(),
            note: None,
        }
    }

    /// A user-supplied fact; `strict` marks an existential two-sided affine fact as strict.
    pub fn asserted(
        shape: Shape,
        direction: Direction,
        constants: Constants,
        strict: bool,
    ) -> Self {
        let mut f = ComparabilityFact::new(shape, direction, constants, Source::UserAsserted);
        if shape == Shape::TwoSidedAffine && strict && f.constants.is_existential() {
            f.strict_affine = true;
        }
        f
    }

    pub fn key(&self) -> FactKey {
        FactKey::new(self.shape, self.direction)
    }

    /// The same inequality described from the swapped system's point of view.
    pub fn flipped(&self) -> Self {
        let mut f = self.clone();
        f.direction = f.direction.flip();
        f.derived_from = f.derived_from.iter().map(|k| k.flipped()).collect();
        f
    }

    /// Whether the fact can serve where `M₄ > M₂ > 0` is demanded.
    pub fn supports_strict_affine(&self) -> bool {
        self.shape == Shape::TwoSidedAffine
            && (self.strict_affine || self.padded_constants.is_some())
    }

    /// Human-readable inequality.
    pub fn describe(&self) -> String {
        let (u, v) = match self.direction {
            Direction::Original => ("x", "y"),
            Direction::Swapped => ("y", "x"),
        };
        let c = |i: usize| match &self.constants {
            Constants::Existential => format!("M{}", i + 1),
            Constants::Values(vals) => format_rational(&vals[i]),
        };
        match self.shape {
            Shape::OneSidedLinear => format!("{v} ≤ {}·{u}", c(0)),
            Shape::TwoSidedLinear => format!("{}·{v} ≤ {u} ≤ {}·{v}", c(0), c(1)),
            Shape::OneSidedAffine => format!("{v} ≤ {}·{u} + {}", c(0), c(1)),
            Shape::TwoSidedAffine => {
                format!("{u} ≤ {}·{v} + {} ≤ {}·{u} + {}", c(0), c(1), c(2), c(3))
            }
        }
    }
}

fn strictly_affine(c: &Constants) -> bool {
    match c {
        Constants::Existential => false,
        Constants::Values(v) => v.len() == 4 && is_positive(&v[1]) && v[3] > v[1],
    }
}

/// At most one fact per (shape, direction).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComparabilityFacts {
    facts: BTreeMap<FactKey, ComparabilityFact>,
}

impl ComparabilityFacts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, shape: Shape, direction: Direction) -> Option<&ComparabilityFact> {
        self.facts.get(&FactKey::new(shape, direction))
    }

    pub fn contains(&self, shape: Shape, direction: Direction) -> bool {
        self.get(shape, direction).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComparabilityFact> {
        self.facts.values()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Inserts unless a fact with the same key is present; returns whether it was added.
    pub fn insert_new(&mut self, fact: ComparabilityFact) -> bool {
        use std::collections::btree_map::Entry;
        match self.facts.entry(fact.key()) {
            Entry::Vacant(e) => {
                e.insert(fact);
                true
            }
            Entry::Occupied(_) => false,
        }
    }

    /// The same facts viewed from the swapped system.
    pub fn swapped(&self) -> Self {
        ComparabilityFacts {
            facts: self
                .facts
                .values()
                .map(|f| {
                    let g = f.flipped();
                    (g.key(), g)
                })
                .collect(),
        }
    }

    pub fn to_vec(&self) -> Vec<ComparabilityFact> {
        self.facts.values().cloned().collect()
    }
}

impl Serialize for ComparabilityFacts {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.facts.values())
    }
}

// ---------------------------------------------------------------------------
// Hypotheses

struct Sets {
    beta: IndexSet,
    gamma: IndexSet,
    b: IndexSet,
    c: IndexSet,
    delta: IndexSet,
    epsilon: IndexSet,
    d: IndexSet,
    e: IndexSet,
}

impl Sets {
    fn of(sys: &RationalSystem) -> Sets {
        Sets {
            beta: sys.index_set(Group::Beta),
            gamma: sys.index_set(Group::Gamma),
            b: sys.index_set(Group::B),
            c: sys.index_set(Group::C),
            delta: sys.index_set(Group::Delta),
            epsilon: sys.index_set(Group::Epsilon),
            d: sys.index_set(Group::D),
            e: sys.index_set(Group::E),
        }
    }
}

struct Signs {
    alpha: bool,
    a: bool,
    p: bool,
    q: bool,
}

impl Signs {
    fn of(sys: &RationalSystem) -> Signs {
        Signs {
            alpha: sys.is_positive(Constant::Alpha),
            a: sys.is_positive(Constant::A),
            p: sys.is_positive(Constant::P),
            q: sys.is_positive(Constant::Q),
        }
    }
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

/// Hypotheses for `y ≤ Mx`.
pub fn linear_bound_hypotheses(sys: &RationalSystem) -> bool {
    let s = Sets::of(sys);
    let g = Signs::of(sys);
    s.delta.is_subset(&s.beta)
        && s.b.is_subset(&s.d)
        && s.epsilon.is_subset(&s.gamma)
        && s.c.is_subset(&s.e)
        && implies(g.a, g.q)
        && implies(g.p, g.alpha)
}

/// Hypotheses for `M₁y ≤ x ≤ M₂y`.
pub fn linear_sandwich_hypotheses(sys: &RationalSystem) -> bool {
    let s = Sets::of(sys);
    let g = Signs::of(sys);
    s.beta == s.delta
        && s.b == s.d
        && s.gamma == s.epsilon
        && s.c == s.e
        && g.alpha == g.p
        && g.a == g.q
}

/// Hypotheses for `y ≤ M₁x + M₂`.
pub fn affine_bound_hypotheses(sys: &RationalSystem) -> bool {
    let s = Sets::of(sys);
    let g = Signs::of(sys);
    s.delta.is_subset(&s.beta.union(&s.b))
        && s.b.is_subset(&s.d)
        && s.epsilon.is_subset(&s.gamma.union(&s.c))
        && s.c.is_subset(&s.e)
        && implies(g.a, g.q)
        && implies(g.p, g.alpha || g.a)
}

/// Hypotheses for `x ≤ M₁y + M₂ ≤ M₃x + M₄`.
pub fn affine_sandwich_hypotheses(sys: &RationalSystem) -> bool {
    let s = Sets::of(sys);
    let g = Signs::of(sys);
    s.delta.is_subset(&s.beta.union(&s.b))
        && s.beta.is_subset(&s.delta.union(&s.d))
        && s.b == s.d
        && s.epsilon.is_subset(&s.gamma.union(&s.c))
        && s.gamma.is_subset(&s.epsilon.union(&s.e))
        && s.c == s.e
        && g.a == g.q
        && implies(g.p, g.alpha || g.a)
        && implies(g.alpha, g.p || g.q)
}

// ---------------------------------------------------------------------------
// Constant formulas

/// Which scalar constants enter the extremal terms in one sign case.
struct CaseTerms {
    label: &'static str,
    /// `A` in the max over the x-denominator.
    a: bool,
    /// `p` in the max over the y-numerator.
    p: bool,
    /// `α` (or `α + A`) in the min over the x-numerator.
    alpha: bool,
    /// `q` in the min over the y-denominator.
    q: bool,
}

const fn case(label: &'static str, a: bool, p: bool, alpha: bool, q: bool) -> CaseTerms {
    CaseTerms {
        label,
        a,
        p,
        alpha,
        q,
    }
}

/// Sign cases for `y ≤ Mx`, in listing order.
fn linear_bound_case(g: &Signs) -> CaseTerms {
    match (g.a, g.q, g.p, g.alpha) {
        (true, _, true, _) => case("A>0, p>0", true, true, true, true),
        (true, _, false, true) => case("A>0, p=0, α>0", true, false, true, true),
        (true, _, false, false) => case("A>0, p=0, α=0", true, false, false, true),
        (false, true, true, _) => case("A=0, q>0, p>0", false, true, true, true),
        (false, true, false, false) => case("A=0, q>0, p=0, α=0", false, false, false, true),
        (false, false, true, _) => case("A=0, q=0, p>0", false, true, true, false),
        (false, false, false, false) => case("A=0, q=0, p=0, α=0", false, false, false, false),
        (false, true, false, true) => case("A=0, q>0, p=0, α>0", false, false, true, true),
        (false, false, false, true) => case("A=0, q=0, p=0, α>0", false, false, true, false),
    }
}

/// Sign cases for `y ≤ M₁x + M₂`, in listing order.
fn affine_bound_case(g: &Signs) -> CaseTerms {
    match (g.a, g.q, g.p, g.alpha) {
        (true, _, true, _) => case("A>0, p>0", true, true, true, true),
        (true, _, false, _) => case("A>0, p=0", true, false, true, true),
        (false, true, true, _) => case("A=0, q>0, p>0", false, true, true, true),
        (false, true, false, false) => case("A=0, q>0, p=0, α=0", false, false, false, true),
        (false, false, true, _) => case("A=0, q=0, p>0", false, true, true, false),
        (false, false, false, false) => case("A=0, q=0, p=0, α=0", false, false, false, false),
        (false, true, false, true) => case("A=0, q>0, p=0, α>0", false, false, true, true),
        (false, false, false, true) => case("A=0, q=0, p=0, α>0", false, false, true, false),
    }
}

fn over<'a>(
    sys: &'a RationalSystem,
    g: Group,
    set: &'a IndexSet,
) -> impl Iterator<Item = Rational> + 'a {
    set.iter().map(move |i| sys.coefficients(g).lag(i).clone())
}

fn extreme(
    constant: Option<Rational>,
    rest: impl Iterator<Item = Rational>,
    pick_max: bool,
) -> Option<Rational> {
    constant
        .into_iter()
        .chain(rest)
        .reduce(|a, b| if (b > a) == pick_max { b } else { a })
}

fn ratio(top: [Option<Rational>; 2], bottom: [Option<Rational>; 2]) -> Constants {
    match (top, bottom) {
        ([Some(t1), Some(t2)], [Some(b1), Some(b2)]) => {
            Constants::Values(vec![(t1 * t2) / (b1 * b2)])
        }
        _ => Constants::Existential,
    }
}

/// `max(A?, B, C) · max(p?, δ, ε) / (min(α?, β, γ) · min(q?, D, E))` for the sign case.
fn linear_bound_constant(sys: &RationalSystem) -> (Constants, &'static str) {
    let s = Sets::of(sys);
    let t = linear_bound_case(&Signs::of(sys));
    let pick = |flag: bool, c: Constant| flag.then(|| sys.constant(c).clone());
    let x_den = extreme(
        pick(t.a, Constant::A),
        over(sys, Group::B, &s.b).chain(over(sys, Group::C, &s.c)),
        true,
    );
    let y_num = extreme(
        pick(t.p, Constant::P),
        over(sys, Group::Delta, &s.delta).chain(over(sys, Group::Epsilon, &s.epsilon)),
        true,
    );
    let x_num = extreme(
        pick(t.alpha, Constant::Alpha),
        over(sys, Group::Beta, &s.beta).chain(over(sys, Group::Gamma, &s.gamma)),
        false,
    );
    let y_den = extreme(
        pick(t.q, Constant::Q),
        over(sys, Group::D, &s.d).chain(over(sys, Group::E, &s.e)),
        false,
    );
    (ratio([x_den, y_num], [x_num, y_den]), t.label)
}

/// Same as the linear constant but the x-numerator minimum runs over `α + A`,
/// `β_i + B_i` on `I_β ∪ I_B` and `γ_i + C_i` on `I_γ ∪ I_C`.
fn affine_bound_constant(sys: &RationalSystem) -> (Constants, &'static str) {
    let s = Sets::of(sys);
    let t = affine_bound_case(&Signs::of(sys));
    let pick = |flag: bool, c: Constant| flag.then(|| sys.constant(c).clone());
    let lag = |g: Group, i: usize| sys.coefficients(g).lag(i).clone();
    let x_den = extreme(
        pick(t.a, Constant::A),
        over(sys, Group::B, &s.b).chain(over(sys, Group::C, &s.c)),
        true,
    );
    let y_num = extreme(
        pick(t.p, Constant::P),
        over(sys, Group::Delta, &s.delta).chain(over(sys, Group::Epsilon, &s.epsilon)),
        true,
    );
    let alpha_plus_a = t
        .alpha
        .then(|| sys.constant(Constant::Alpha) + sys.constant(Constant::A));
    let beta_b = s.beta.union(&s.b);
    let gamma_c = s.gamma.union(&s.c);
    let x_num = extreme(
        alpha_plus_a,
        beta_b
            .iter()
            .map(|i| lag(Group::Beta, i) + lag(Group::B, i))
            .chain(
                gamma_c
                    .iter()
                    .map(|i| lag(Group::Gamma, i) + lag(Group::C, i)),
            )
            .collect::<Vec<_>>()
            .into_iter(),
        false,
    );
    let y_den = extreme(
        pick(t.q, Constant::Q),
        over(sys, Group::D, &s.d).chain(over(sys, Group::E, &s.e)),
        false,
    );
    (ratio([x_den, y_num], [x_num, y_den]), t.label)
}

/// `y ≤ Mx` when its hypotheses hold.
pub fn check_linear_bound(sys: &RationalSystem) -> Option<ComparabilityFact> {
    if !linear_bound_hypotheses(sys) {
        return None;
    }
    let (constants, label) = linear_bound_constant(sys);
    let mut f = ComparabilityFact::new(
        Shape::OneSidedLinear,
        Direction::Original,
        constants,
        Source::Theorem(24),
    );
    f.case = Some(label.to_string());
    Some(f)
}

/// `M₁y ≤ x ≤ M₂y` when its hypotheses hold; `M₁` is the reciprocal of the `y ≤ Mx`
/// constant and `M₂` the `y ≤ Mx` constant of the swapped system.
pub fn check_linear_sandwich(sys: &RationalSystem) -> Option<ComparabilityFact> {
    if !linear_sandwich_hypotheses(sys) {
        return None;
    }
    let down = check_linear_bound(sys)?;
    let up = check_linear_bound(&swap_system(sys))?;
    let constants = match (down.constants.values(), up.constants.values()) {
        (Some([m3]), Some([m2])) => Constants::Values(vec![m3.recip(), m2.clone()]),
        _ => Constants::Existential,
    };
    Some(ComparabilityFact::new(
        Shape::TwoSidedLinear,
        Direction::Original,
        constants,
        Source::Theorem(25),
    ))
}

/// `y ≤ M₁x + M₂` when its hypotheses hold, with `M₂ = M₁`.
pub fn check_affine_bound(sys: &RationalSystem) -> Option<ComparabilityFact> {
    if !affine_bound_hypotheses(sys) {
        return None;
    }
    let (constants, label) = affine_bound_constant(sys);
    let constants = match constants {
        Constants::Values(v) => Constants::Values(vec![v[0].clone(), v[0].clone()]),
        Constants::Existential => Constants::Existential,
    };
    let mut f = ComparabilityFact::new(
        Shape::OneSidedAffine,
        Direction::Original,
        constants,
        Source::Theorem(26),
    );
    f.case = Some(label.to_string());
    f.note = Some("eventual bound y ≤ M₁(x + 1), so M₂ = M₁".to_string());
    Some(f)
}

/// `x ≤ M₁y + M₂ ≤ M₃x + M₄` when its hypotheses hold, composed from the affine bounds
/// of the system (`M₅`, `M₆`) and of its swap (`M₁`, `M₂`): `M₃ = M₁M₅`, `M₄ = M₁M₆ + M₂`.
pub fn check_affine_sandwich(sys: &RationalSystem) -> Option<ComparabilityFact> {
    if !affine_sandwich_hypotheses(sys) {
        return None;
    }
    let forward = check_affine_bound(sys)?;
    let backward = check_affine_bound(&swap_system(sys))?;
    let constants = match (forward.constants.values(), backward.constants.values()) {
        (Some([m5, m6]), Some([m1, m2])) => {
            Constants::Values(vec![m1.clone(), m2.clone(), m1 * m5, m1 * m6 + m2])
        }
        _ => Constants::Existential,
    };
    let mut f = ComparabilityFact::new(
        Shape::TwoSidedAffine,
        Direction::Original,
        constants,
        Source::Theorem(27),
    );
    f.note = Some("composed from eventual affine bounds".to_string());
    Some(f)
}

// ---------------------------------------------------------------------------
// Aggregation

fn positive_or_existential(c: &Constants, i: usize) -> bool {
    match c {
        Constants::Existential => true,
        Constants::Values(v) => is_positive(&v[i]),
    }
}

fn map_constants(
    inputs: &[&Constants],
    f: impl FnOnce(&[&[Rational]]) -> Vec<Rational>,
) -> Constants {
    let vals: Option<Vec<&[Rational]>> = inputs.iter().map(|c| c.values()).collect();
    match vals {
        Some(v) => Constants::Values(f(&v)),
        None => Constants::Existential,
    }
}

fn derived(
    shape: Shape,
    direction: Direction,
    constants: Constants,
    from: &[&ComparabilityFact],
) -> ComparabilityFact {
    let mut provenance: Vec<Source> = Vec::new();
    for f in from {
        for s in &f.provenance {
            if !provenance.contains(s) {
                provenance.push(*s);
            }
        }
    }
    let rigor = from
        .iter()
        .map(|f| f.rigor)
        .min()
        .unwrap_or(Rigor::Rigorous);
    let strict_affine = shape == Shape::TwoSidedAffine && strictly_affine(&constants);
    ComparabilityFact {
        shape,
        direction,
        constants,
        strict_affine,
        padded_constants: None,
        provenance,
        derived_from: from.iter().map(|f| f.key()).collect(),
        case: None,
        rigor,
        note: None,
    }
}

/// One round of the derivation rules; returns candidate facts.
fn derivations(facts: &ComparabilityFacts) -> Vec<ComparabilityFact> {
    use Shape::*;
    let mut out = Vec::new();
    for d in [Direction::Original, Direction::Swapped] {
        let e = d.flip();
        if let Some(t) = facts.get(TwoSidedLinear, d) {
            // M₁y ≤ x ≤ M₂y  ⇒  x/M₂ ≤ y ≤ x/M₁,  y ≤ x/M₁,  x ≤ M₂y
            if positive_or_existential(&t.constants, 0) && positive_or_existential(&t.constants, 1)
            {
                let c = map_constants(&[&t.constants], |v| vec![v[0][1].recip(), v[0][0].recip()]);
                out.push(derived(TwoSidedLinear, e, c, &[t]));
            }
            if positive_or_existential(&t.constants, 0) {
                let c = map_constants(&[&t.constants], |v| vec![v[0][0].recip()]);
                out.push(derived(OneSidedLinear, d, c, &[t]));
            }
            let c = map_constants(&[&t.constants], |v| vec![v[0][1].clone()]);
            out.push(derived(OneSidedLinear, e, c, &[t]));
        }
        if let (Some(a), Some(b)) = (facts.get(OneSidedLinear, d), facts.get(OneSidedLinear, e)) {
            // y ≤ m x and x ≤ m' y  ⇒  y/m ≤ x ≤ m' y
            if positive_or_existential(&a.constants, 0) && positive_or_existential(&b.constants, 0)
            {
                let c = map_constants(&[&a.constants, &b.constants], |v| {
                    vec![v[0][0].recip(), v[1][0].clone()]
                });
                out.push(derived(TwoSidedLinear, d, c, &[a, b]));
            }
        }
        if let Some(a) = facts.get(OneSidedLinear, d) {
            let c = map_constants(&[&a.constants], |v| vec![v[0][0].clone(), Rational::zero()]);
            out.push(derived(OneSidedAffine, d, c, &[a]));
        }
        if let Some(t) = facts.get(TwoSidedAffine, d) {
            // x ≤ M₁y + M₂ ≤ M₃x + M₄  ⇒  x ≤ M₁y + M₂  and  y ≤ (M₃/M₁)x + (M₄ − M₂)/M₁
            let c = map_constants(&[&t.constants], |v| vec![v[0][0].clone(), v[0][1].clone()]);
            out.push(derived(OneSidedAffine, e, c, &[t]));
            if positive_or_existential(&t.constants, 0) {
                let c = map_constants(&[&t.constants], |v| {
                    let m = &v[0];
                    vec![&m[2] / &m[0], (&m[3] - &m[1]) / &m[0]]
                });
                out.push(derived(OneSidedAffine, d, c, &[t]));
            }
        }
        if let (Some(a), Some(b)) = (facts.get(OneSidedAffine, d), facts.get(OneSidedAffine, e)) {
            // y ≤ a x + b and x ≤ c y + e  ⇒  x ≤ c y + e ≤ ca x + cb + e
            if positive_or_existential(&a.constants, 0) && positive_or_existential(&b.constants, 0)
            {
                let c = map_constants(&[&a.constants, &b.constants], |v| {
                    let (a0, b0) = (&v[0][0], &v[0][1]);
                    let (c0, e0) = (&v[1][0], &v[1][1]);
                    vec![c0.clone(), e0.clone(), c0 * a0, c0 * b0 + e0]
                });
                out.push(derived(TwoSidedAffine, d, c, &[a, b]));
            }
        }
    }
    out
}

fn merge(existing: &mut ComparabilityFact, incoming: ComparabilityFact) {
    // theorem facts keep their provenance first; user constants replace computed ones
    for s in &incoming.provenance {
        if !existing.provenance.contains(s) {
            existing.provenance.push(*s);
        }
    }
    existing.provenance.sort();
    if !incoming.constants.is_existential() {
        let user_side = incoming.provenance.contains(&Source::UserAsserted)
            || existing.constants.is_existential();
        if user_side {
            existing.constants = incoming.constants;
            existing.strict_affine =
                existing.shape == Shape::TwoSidedAffine && strictly_affine(&existing.constants);
        }
    }
    existing.strict_affine |= incoming.strict_affine && existing.constants.is_existential();
    existing.rigor = existing.rigor.max(incoming.rigor);
}

/// All facts for `sys`: the four checks on the system and on its swap, merged with the
/// user's facts, closed under the elementary implications between shapes, and with a
/// strict variant (`M₂ + 1`, `M₄ + 2`) attached to every non-strict two-sided affine fact.
pub fn derive_comparability(
    sys: &RationalSystem,
    user: &[ComparabilityFact],
) -> ComparabilityFacts {
    let swapped = swap_system(sys);
    let mut base: Vec<ComparabilityFact> = Vec::new();
    for (direction, s) in [(Direction::Original, sys), (Direction::Swapped, &swapped)] {
        let checks = [
            check_linear_bound(s),
            check_linear_sandwich(s),
            check_affine_bound(s),
            check_affine_sandwich(s),
        ];
        for f in checks.into_iter().flatten() {
            base.push(if direction == Direction::Swapped {
                f.flipped()
            } else {
                f
            });
        }
    }

    let mut facts = ComparabilityFacts::new();
    for f in base {
        facts.insert_new(f);
    }
    for u in user {
        match facts.facts.get_mut(&u.key()) {
            Some(existing) => merge(existing, u.clone()),
            None => {
                facts.insert_new(u.clone());
            }
        }
    }

    loop {
        let mut added = false;
        for f in derivations(&facts) {
            added |= facts.insert_new(f);
        }
        if !added {
            break;
        }
    }

    for f in facts.facts.values_mut() {
        if f.shape == Shape::TwoSidedAffine && !f.strict_affine {
            f.padded_constants = Some(match &f.constants {
                Constants::Existential => Constants::Existential,
                Constants::Values(v) => Constants::Values(vec![
                    v[0].clone(),
                    &v[1] + Rational::one(),
                    v[2].clone(),
                    &v[3] + Rational::from_integer(2.into()),
                ]),
            });
        }
    }
    facts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn set(
        sys: RationalSystem,
        groups: &[(Group, usize)],
        constants: &[Constant],
    ) -> RationalSystem {
        let mut s = sys;
        for &(g, i) in groups {
            s = s.with_lag(g, i, int(1));
        }
        for &c in constants {
            s = s.with_constant(c, int(1));
        }
        s
    }

    fn example1() -> RationalSystem {
        use Group::*;
        set(
            RationalSystem::zeros(2),
            &[(Beta, 1), (C, 2), (Delta, 1), (E, 2)],
            &[Constant::Alpha, Constant::A, Constant::P, Constant::Q],
        )
    }

    fn example3() -> RationalSystem {
        use Group::*;
        set(
            RationalSystem::zeros(2),
            &[
                (Beta, 1),
                (Gamma, 1),
                (B, 2),
                (C, 1),
                (Delta, 2),
                (Epsilon, 1),
            ],
            &[Constant::Alpha, Constant::P, Constant::Q],
        )
    }

    #[test]
    fn linear_bound_on_example1_is_one() {
        let f = check_linear_bound(&example1()).unwrap();
        assert_eq!(f.constants, Constants::Values(vec![int(1)]));
        assert_eq!(f.case.as_deref(), Some("A>0, p>0"));
        assert!(check_linear_bound(&example3()).is_none());
    }

    #[test]
    fn sandwich_on_example1() {
        let f = check_linear_sandwich(&example1()).unwrap();
        assert_eq!(f.constants, Constants::Values(vec![int(1), int(1)]));
        assert!(check_linear_sandwich(&example3()).is_none());
    }

    #[test]
    fn closure_contains_both_orientations() {
        let facts = derive_comparability(&example1(), &[]);
        for shape in Shape::ALL {
            for d in [Direction::Original, Direction::Swapped] {
                assert!(facts.contains(shape, d), "missing {shape:?}/{d:?}");
            }
        }
        let tsa = facts
            .get(Shape::TwoSidedAffine, Direction::Original)
            .unwrap();
        assert!(tsa.supports_strict_affine());
    }

    #[test]
    fn user_constants_win() {
        let user = ComparabilityFact::asserted(
            Shape::OneSidedLinear,
            Direction::Original,
            Constants::Values(vec![int(5)]),
            false,
        );
        let facts = derive_comparability(&example1(), &[user]);
        let f = facts
            .get(Shape::OneSidedLinear, Direction::Original)
            .unwrap();
        assert_eq!(f.constants, Constants::Values(vec![int(5)]));
        assert_eq!(
            f.provenance,
            vec![Source::Theorem(24), Source::UserAsserted]
        );
        assert_eq!(f.rigor, Rigor::Rigorous);
    }
}
