//! System representation, index sets, validation and the role swap.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::number::{is_positive, Rational};

/// Coefficients of `z_{n-1} … z_{n-k}`; entry `i - 1` belongs to lag `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector(pub Vec<Rational>);

impl CoefficientVector {
    pub fn zeros(k: usize) -> Self {
        CoefficientVector(vec![Rational::zero(); k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of lag `i` (1-based).
    pub fn lag(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn index_set(&self) -> IndexSet {
        index_set(self)
    }
}

/// `constant + Σ x_i x_{n-i} + Σ y_i y_{n-i}`, one numerator or denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: Rational,
    pub x: CoefficientVector,
    pub y: CoefficientVector,
}

impl AffineForm {
    pub fn zeros(k: usize) -> Self {
        AffineForm {
            constant: Rational::zero(),
            x: CoefficientVector::zeros(k),
            y: CoefficientVector::zeros(k),
        }
    }

    /// True when every coefficient, the constant included, is zero.
    pub fn is_identically_zero(&self) -> bool {
        self.constant.is_zero()
            && self.x.0.iter().all(Zero::is_zero)
            && self.y.0.iter().all(Zero::is_zero)
    }

    fn swapped(&self) -> Self {
        AffineForm {
            constant: self.constant.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub num: AffineForm,
    pub den: AffineForm,
}

/// Order-`k` system
/// `x_n = (α + Σβ_i x_{n-i} + Σγ_i y_{n-i}) / (A + ΣB_j x_{n-j} + ΣC_j y_{n-j})`,
/// `y_n = (p + Σδ_i x_{n-i} + Σε_i y_{n-i}) / (q + ΣD_j x_{n-j} + ΣE_j y_{n-j})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSystem {
    pub k: usize,
    pub x: Equation,
    pub y: Equation,
}

/// The eight coefficient groups whose supports are the index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Group {
    Beta,
    Gamma,
    B,
    C,
    Delta,
    Epsilon,
    D,
    E,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Beta,
        Group::Gamma,
        Group::B,
        Group::C,
        Group::Delta,
        Group::Epsilon,
        Group::D,
        Group::E,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Group::Beta => "β",
            Group::Gamma => "γ",
            Group::B => "B",
            Group::C => "C",
            Group::Delta => "δ",
            Group::Epsilon => "ε",
            Group::D => "D",
            Group::E => "E",
        }
    }
}

/// The four scalar constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Constant {
    Alpha,
    A,
    P,
    Q,
}

impl Constant {
    pub fn symbol(self) -> &'static str {
        match self {
            Constant::Alpha => "α",
            Constant::A => "A",
            Constant::P => "p",
            Constant::Q => "q",
        }
    }
}

impl RationalSystem {
    /// All-zero system of order `k`; not valid until denominators get a positive entry.
    pub fn zeros(k: usize) -> Self {
        let eq = Equation {
            num: AffineForm::zeros(k),
            den: AffineForm::zeros(k),
        };
        RationalSystem {
            k,
            x: eq.clone(),
            y: eq,
        }
    }

    pub fn constant(&self, c: Constant) -> &Rational {
        match c {
            Constant::Alpha => &self.x.num.constant,
            Constant::A => &self.x.den.constant,
            Constant::P => &self.y.num.constant,
            Constant::Q => &self.y.den.constant,
        }
    }

    pub fn constant_mut(&mut self, c: Constant) -> &mut Rational {
        match c {
            Constant::Alpha => &mut self.x.num.constant,
            Constant::A => &mut self.x.den.constant,
            Constant::P => &mut self.y.num.constant,
            Constant::Q => &mut self.y.den.constant,
        }
    }

    pub fn coefficients(&self, g: Group) -> &CoefficientVector {
        match g {
            Group::Beta => &self.x.num.x,
            Group::Gamma => &self.x.num.y,
            Group::B => &self.x.den.x,
            Group::C => &self.x.den.y,
            Group::Delta => &self.y.num.x,
            Group::Epsilon => &self.y.num.y,
            Group::D => &self.y.den.x,
            Group::E => &self.y.den.y,
        }
    }

    pub fn coefficients_mut(&mut self, g: Group) -> &mut CoefficientVector {
        match g {
            Group::Beta => &mut self.x.num.x,
            Group::Gamma => &mut self.x.num.y,
            Group::B => &mut self.x.den.x,
            Group::C => &mut self.x.den.y,
            Group::Delta => &mut self.y.num.x,
            Group::Epsilon => &mut self.y.num.y,
            Group::D => &mut self.y.den.x,
            Group::E => &mut self.y.den.y,
        }
    }

    /// Builder-style setter for a constant.
    pub fn with_constant(mut self, c: Constant, value: Rational) -> Self {
        *self.constant_mut(c) = value;
        self
    }

    /// Builder-style setter for the coefficient of lag `lag` (1-based) in group `g`.
    pub fn with_lag(mut self, g: Group, lag: usize, value: Rational) -> Self {
        self.coefficients_mut(g).0[lag - 1] = value;
        self
    }

    pub fn index_set(&self, g: Group) -> IndexSet {
        index_set(self.coefficients(g))
    }

    pub fn is_positive(&self, c: Constant) -> bool {
        is_positive(self.constant(c))
    }

    pub fn swapped(&self) -> Self {
        swap_system(self)
    }
}

/// A set of lags in `{1..k}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexSet(pub BTreeSet<usize>);

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet(BTreeSet::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    fn from(items: [usize; N]) -> Self {
        IndexSet(items.into_iter().collect())
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet(iter.into_iter().collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let items: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Lags with strictly positive coefficient.
pub fn index_set(coeffs: &CoefficientVector) -> IndexSet {
    coeffs
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| is_positive(c))
        .map(|(i, _)| i + 1)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("min₊ needs at least one positive argument")]
pub struct MinPlusError;

/// Minimum over the strictly positive arguments.
pub fn min_plus(a: &Rational, b: &Rational) -> Result<Rational, MinPlusError> {
    match (is_positive(a), is_positive(b)) {
        (true, true) => Ok(a.min(b).clone()),
        (true, false) => Ok(a.clone()),
        (false, true) => Ok(b.clone()),
        (false, false) => Err(MinPlusError),
    }
}

/// Exchanges the two equations under the renaming β↔ε, B↔E, γ↔δ, C↔D, α↔p, A↔q.
pub fn swap_system(sys: &RationalSystem) -> RationalSystem {
    let swap_eq = |eq: &Equation| Equation {
        num: eq.num.swapped(),
        den: eq.den.swapped(),
    };
    RationalSystem {
        k: sys.k,
        x: swap_eq(&sys.y),
        y: swap_eq(&sys.x),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NegativeParameter,
    LengthMismatch { expected: usize, found: usize },
    ZeroOrder,
    DenominatorIdenticallyZero,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::NegativeParameter => write!(f, "negative parameter"),
            ViolationKind::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            ViolationKind::ZeroOrder => write!(f, "order k must be at least 1"),
            ViolationKind::DenominatorIdenticallyZero => write!(f, "denominator identically zero"),
        }
    }
}

/// A broken invariant, located by JSON pointer into the system document layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.kind)
    }
}

/// Checks every system invariant and reports all violations.
pub fn validate_system(sys: &RationalSystem) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if sys.k == 0 {
        out.push(Violation {
            path: "/k".into(),
            kind: ViolationKind::ZeroOrder,
        });
    }
    for (eq_name, eq) in [("x", &sys.x), ("y", &sys.y)] {
        for (part, form) in [("num", &eq.num), ("den", &eq.den)] {
            let base = format!("/{eq_name}/{part}");
            if form.constant.is_negative() {
                out.push(Violation {
                    path: format!("{base}/const"),
                    kind: ViolationKind::NegativeParameter,
                });
            }
            for (var, vec) in [("x", &form.x), ("y", &form.y)] {
                if vec.len() != sys.k {
                    out.push(Violation {
                        path: format!("{base}/{var}"),
                        kind: ViolationKind::LengthMismatch {
                            expected: sys.k,
                            found: vec.len(),
                        },
                    });
                }
                for (i, c) in vec.0.iter().enumerate() {
                    if c.is_negative() {
                        out.push(Violation {
                            path: format!("{base}/{var}/{i}"),
                            kind: ViolationKind::NegativeParameter,
                        });
                    }
                }
            }
            if part == "den" && form.is_identically_zero() {
                out.push(Violation {
                    path: base,
                    kind: ViolationKind::DenominatorIdenticallyZero,
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
