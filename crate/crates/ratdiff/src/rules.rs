//! Hypothesis table for the boundedness theorems, one row per theorem case.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::comparability::Shape;
use crate::model::{Constant, Group, IndexSet, RationalSystem};

/// Expression over the eight index sets closed under union and difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Base(Group),
    Union(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    pub fn union(self, other: SetExpr) -> SetExpr {
        SetExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: SetExpr) -> SetExpr {
        SetExpr::Diff(Box::new(self), Box::new(other))
    }

    pub fn eval(&self, sys: &RationalSystem) -> IndexSet {
        match self {
            SetExpr::Base(g) => sys.index_set(*g),
            SetExpr::Union(a, b) => a.eval(sys).union(&b.eval(sys)),
            SetExpr::Diff(a, b) => a.eval(sys).difference(&b.eval(sys)),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::Base(g) => write!(f, "I_{}", g.symbol()),
            SetExpr::Union(a, b) => write!(f, "{a}∪{b}"),
            SetExpr::Diff(a, b) => write!(f, "({a}∖{b})"),
        }
    }
}

impl Serialize for SetExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn set(g: Group) -> SetExpr {
    SetExpr::Base(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRequirement {
    Positive,
    Zero,
}

/// Which sequence a statement is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sequence {
    X,
    Y,
}

impl Sequence {
    pub fn other(self) -> Sequence {
        match self {
            Sequence::X => Sequence::Y,
            Sequence::Y => Sequence::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sequence::X => "x",
            Sequence::Y => "y",
        }
    }

    pub fn parse(s: &str) -> Option<Sequence> {
        match s {
            "x" => Some(Sequence::X),
            "y" => Some(Sequence::Y),
            _ => None,
        }
    }
}

/// Side of a bound: above by a constant, or below by a positive constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        match s {
            "above" => Some(Side::Above),
            "below" => Some(Side::Below),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    BothBounded,
    XBounded,
    YBounded,
}

impl Conclusion {
    /// The same conclusion read in the other orientation.
    pub fn flipped(self) -> Conclusion {
        match self {
            Conclusion::BothBounded => Conclusion::BothBounded,
            Conclusion::XBounded => Conclusion::YBounded,
            Conclusion::YBounded => Conclusion::XBounded,
        }
    }

    pub fn covers(self, s: Sequence) -> bool {
        matches!(
            (self, s),
            (Conclusion::BothBounded, _)
                | (Conclusion::XBounded, Sequence::X)
                | (Conclusion::YBounded, Sequence::Y)
        )
    }
}

/// Comparability a row needs, always stated for the original orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComparabilityRequirement {
    pub shape: Shape,
    /// Requires `M₄ > M₂ > 0` for the two-sided affine shape.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaRequirement {
    pub source: SetExpr,
    pub target: SetExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremHypotheses {
    pub id: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<&'static str>,
    pub signs: Vec<(Constant, SignRequirement)>,
    /// Pairs `(a, b)` meaning `a ⊆ b`.
    pub subsets: Vec<(SetExpr, SetExpr)>,
    pub nonempty: Vec<SetExpr>,
    pub eta: Vec<EtaRequirement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparability: Option<ComparabilityRequirement>,
    /// Bounds on `y` the row takes as input.
    pub bounds_required: Vec<Side>,
    pub conclusion: Conclusion,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl TheoremHypotheses {
    /// `"14 (ii)"`, or just `"7"` for rows without cases.
    pub fn label(&self) -> String {
        match self.case {
            Some(c) => format!("{} ({c})", self.id),
            None => self.id.to_string(),
        }
    }
}

struct Row(TheoremHypotheses);

fn row(id: u8, conclusion: Conclusion) -> Row {
    Row(TheoremHypotheses {
        id,
        case: None,
        signs: Vec::new(),
        subsets: Vec::new(),
        nonempty: Vec::new(),
        eta: Vec::new(),
        comparability: None,
        bounds_required: Vec::new(),
        conclusion,
        note: None,
    })
}

impl Row {
    fn case(mut self, c: &'static str) -> Self {
        self.0.case = Some(c);
        self
    }

    fn positive(mut self, c: Constant) -> Self {
        self.0.signs.push((c, SignRequirement::Positive));
        self
    }

    fn zero(mut self, c: Constant) -> Self {
        self.0.signs.push((c, SignRequirement::Zero));
        self
    }

    fn subset(mut self, a: SetExpr, b: SetExpr) -> Self {
        self.0.subsets.push((a, b));
        self
    }

    fn nonempty(mut self, a: SetExpr) -> Self {
        self.0.nonempty.push(a);
        self
    }

    fn eta(mut self, source: SetExpr, target: SetExpr) -> Self {
        self.0.eta.push(EtaRequirement { source, target });
        self
    }

    fn needs(mut self, shape: Shape) -> Self {
        self.0.comparability = Some(ComparabilityRequirement {
            shape,
            strict: false,
        });
        self
    }

    fn needs_strict_affine(mut self) -> Self {
        self.0.comparability = Some(ComparabilityRequirement {
            shape: Shape::TwoSidedAffine,
            strict: true,
        });
        self
    }

    fn y_bounded(mut self, side: Side) -> Self {
        self.0.bounds_required.push(side);
        self
    }

    fn note(mut self, n: &'static str) -> Self {
        self.0.note = Some(n);
        self
    }
}

/// Every row of the table, ordered by theorem and case.
pub fn theorem_catalogue() -> Vec<TheoremHypotheses> {
    use Constant::{Alpha, A, P, Q};
    use Group::*;
    use Shape::*;
    let both = Conclusion::BothBounded;
    let x_only = Conclusion::XBounded;
    let bg = || set(Beta).union(set(Gamma));
    let bc = || set(B).union(set(C));
    let de = || set(Delta).union(set(Epsilon));
    let dd_ee = || set(D).union(set(E));
    let beta_gamma_minus_c = || set(Beta).union(set(Gamma).minus(set(C)));

    let rows = vec![
        // two-sided linear comparability
        row(1, both)
            .needs(TwoSidedLinear)
            .positive(A)
            .eta(bg(), bc()),
        row(2, both)
            .needs(TwoSidedLinear)
            .positive(Q)
            .eta(de(), dd_ee()),
        row(3, both)
            .case("i")
            .needs(TwoSidedLinear)
            .zero(A)
            .subset(bc(), bg())
            .nonempty(set(B))
            .eta(bg(), bc()),
        row(3, both)
            .case("ii")
            .needs(TwoSidedLinear)
            .zero(A)
            .zero(Q)
            .subset(dd_ee(), de())
            .nonempty(set(C))
            .eta(bg(), bc()),
        row(3, both)
            .case("iii")
            .needs(TwoSidedLinear)
            .zero(A)
            .positive(P)
            .positive(Q)
            .subset(dd_ee(), de())
            .nonempty(set(C))
            .eta(bg(), bc()),
        row(4, both)
            .case("i")
            .needs(TwoSidedLinear)
            .zero(Q)
            .zero(A)
            .subset(bc(), bg())
            .nonempty(set(D))
            .eta(de(), dd_ee()),
        row(4, both)
            .case("ii")
            .needs(TwoSidedLinear)
            .zero(Q)
            .positive(Alpha)
            .positive(A)
            .subset(bc(), bg())
            .nonempty(set(D))
            .eta(de(), dd_ee()),
        row(4, both)
            .case("iii")
            .needs(TwoSidedLinear)
            .zero(Q)
            .subset(dd_ee(), de())
            .nonempty(set(E))
            .eta(de(), dd_ee()),
        row(5, both)
            .needs(TwoSidedLinear)
            .zero(Q)
            .zero(P)
            .subset(de(), dd_ee()),
        row(6, both)
            .needs(TwoSidedLinear)
            .zero(A)
            .zero(Alpha)
            .subset(bg(), bc()),
        // no comparability
        row(7, x_only)
            .positive(A)
            .subset(set(Gamma), set(C))
            .eta(set(Beta), set(B)),
        row(8, x_only)
            .zero(A)
            .zero(Alpha)
            .subset(set(Beta), set(B))
            .subset(set(Gamma), set(C)),
        row(9, x_only)
            .y_bounded(Side::Above)
            .y_bounded(Side::Below)
            .nonempty(set(C))
            .eta(set(Beta), set(B)),
        row(10, x_only)
            .case("i")
            .zero(A)
            .subset(set(B), set(Beta))
            .subset(set(C), set(Gamma))
            .nonempty(set(B))
            .subset(set(Gamma), set(C))
            .eta(set(Beta), set(B))
            .note("I_γ ⊆ I_C, printed after the case list, is applied to every case"),
        row(10, x_only)
            .case("ii")
            .zero(A)
            .zero(Q)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .subset(set(Gamma), set(C))
            .eta(set(Beta), set(B))
            .note("I_γ ⊆ I_C, printed after the case list, is applied to every case"),
        row(10, x_only)
            .case("iii")
            .zero(A)
            .positive(P)
            .positive(Q)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .subset(set(Gamma), set(C))
            .eta(set(Beta), set(B))
            .note("I_γ ⊆ I_C, printed after the case list, is applied to every case"),
        row(11, x_only)
            .y_bounded(Side::Above)
            .positive(A)
            .eta(set(Beta), set(B)),
        row(12, both)
            .positive(A)
            .positive(Q)
            .subset(set(Gamma), set(C))
            .eta(set(Beta), set(B))
            .eta(set(Epsilon), set(E)),
        // one-sided linear comparability
        row(13, both)
            .needs(OneSidedLinear)
            .zero(A)
            .zero(Alpha)
            .subset(beta_gamma_minus_c(), set(B)),
        row(14, both)
            .case("i")
            .needs(OneSidedLinear)
            .zero(A)
            .positive(Q)
            .subset(set(B), set(Beta))
            .subset(set(C), set(Gamma))
            .nonempty(set(B))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        row(14, both)
            .case("ii")
            .needs(OneSidedLinear)
            .zero(A)
            .positive(Q)
            .positive(P)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        // one-sided affine comparability
        row(15, both)
            .needs(OneSidedAffine)
            .positive(A)
            .positive(Q)
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        row(16, both)
            .needs(OneSidedAffine)
            .positive(A)
            .eta(beta_gamma_minus_c(), set(B)),
        row(17, both)
            .case("i")
            .needs(OneSidedAffine)
            .zero(A)
            .subset(set(B), set(Beta))
            .subset(set(C), set(Gamma))
            .nonempty(set(B))
            .eta(beta_gamma_minus_c(), set(B)),
        row(17, both)
            .case("ii")
            .needs(OneSidedAffine)
            .zero(A)
            .zero(Q)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .eta(beta_gamma_minus_c(), set(B)),
        row(17, both)
            .case("iii")
            .needs(OneSidedAffine)
            .zero(A)
            .positive(P)
            .positive(Q)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .eta(beta_gamma_minus_c(), set(B))
            .note("q > 0 is stated in the case itself; the preamble only fixes A = 0"),
        row(18, both)
            .case("i")
            .needs(OneSidedAffine)
            .zero(A)
            .positive(Q)
            .subset(set(B), set(Beta))
            .subset(set(C), set(Gamma))
            .nonempty(set(B))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        row(18, both)
            .case("ii")
            .needs(OneSidedAffine)
            .zero(A)
            .positive(Q)
            .positive(P)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        row(19, both)
            .case("i")
            .needs(OneSidedAffine)
            .zero(A)
            .zero(Q)
            .subset(set(B), set(Beta))
            .subset(set(C), set(Gamma))
            .nonempty(set(B))
            .nonempty(set(D))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        row(19, both)
            .case("ii")
            .needs(OneSidedAffine)
            .zero(A)
            .zero(Q)
            .subset(set(D), set(Delta))
            .subset(set(E), set(Epsilon))
            .nonempty(set(C))
            .nonempty(set(E))
            .subset(set(Delta), set(D))
            .eta(set(Epsilon), dd_ee())
            .eta(set(Beta), set(B)),
        // two-sided affine comparability
        row(20, both)
            .needs(TwoSidedAffine)
            .positive(A)
            .eta(bg(), bc()),
        row(21, both)
            .needs(TwoSidedAffine)
            .positive(Q)
            .eta(de(), dd_ee()),
        row(22, both)
            .case("i")
            .needs_strict_affine()
            .zero(A)
            .subset(bc(), bg())
            .positive(Alpha)
            .nonempty(set(B))
            .eta(bg(), bc()),
        row(22, both)
            .case("ii")
            .needs_strict_affine()
            .zero(A)
            .subset(dd_ee(), de())
            .positive(P)
            .nonempty(set(C))
            .eta(bg(), bc()),
        row(23, both)
            .case("i")
            .needs_strict_affine()
            .zero(Q)
            .subset(bc(), bg())
            .positive(Alpha)
            .nonempty(set(D))
            .eta(de(), dd_ee()),
        row(23, both)
            .case("ii")
            .needs_strict_affine()
            .zero(Q)
            .subset(dd_ee(), de())
            .positive(P)
            .nonempty(set(E))
            .eta(de(), dd_ee()),
    ];
    rows.into_iter().map(|r| r.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_has_one_row_per_case() {
        let rows = theorem_catalogue();
        assert_eq!(rows.len(), 36);
        let ids: std::collections::BTreeSet<u8> = rows.iter().map(|r| r.id).collect();
        assert_eq!(ids, (1..=23).collect());
        let labels: Vec<String> = rows.iter().map(|r| r.label()).collect();
        let mut sorted = labels.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len());
    }

    #[test]
    fn set_expressions_print_readably() {
        let e = set(Group::Beta).union(set(Group::Gamma).minus(set(Group::C)));
        assert_eq!(e.to_string(), "I_β∪(I_γ∖I_C)");
    }
}
