//! Trajectory generation in `f64` or exact rational arithmetic, empirical bound
//! detection, and checking of comparability facts along a trajectory.

use std::fmt::Debug;
use std::io::{self, Write};

use num_traits::{Signed, Zero};
use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::comparability::{ComparabilityFact, Constants, Direction, Shape};
use crate::model::{AffineForm, RationalSystem};
use crate::number::{decimal_digits, from_f64, to_f64, Rational};
use crate::rules::Sequence;

/// Denominators below this count as zero in float mode.
pub const FLOAT_ZERO_DENOMINATOR: f64 = 1e-300;
/// Float values above this count as overflow.
pub const FLOAT_OVERFLOW: f64 = 1e300;
/// Default cap on decimal digits of numerator or denominator in exact mode.
pub const DEFAULT_DIGIT_BUDGET: u64 = 4096;
/// Relative slack used when comparing floats.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Float,
    Exact,
}

/// Arithmetic a trajectory can be computed in.
pub trait Scalar: Clone + Debug + PartialEq {
    const MODE: Mode;
    fn from_rational(r: &Rational) -> Self;
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn denominator_vanishes(&self) -> bool;
    fn overflows(&self, digit_budget: u64) -> bool;
    fn to_f64(&self) -> f64;
    /// `lhs ≤ rhs`, with the mode's tolerance.
    fn at_most(lhs: &Self, rhs: &Self) -> bool;
    /// Extra CSV fields (numerator and denominator) in exact mode.
    fn exact_parts(&self) -> Option<(String, String)>;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn zero() -> Self {
        0.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn denominator_vanishes(&self) -> bool {
        *self < FLOAT_ZERO_DENOMINATOR
    }

    fn overflows(&self, _: u64) -> bool {
        !self.is_finite() || *self > FLOAT_OVERFLOW
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn at_most(lhs: &Self, rhs: &Self) -> bool {
        *lhs <= rhs + FLOAT_TOLERANCE * rhs.abs()
    }

    fn exact_parts(&self) -> Option<(String, String)> {
        None
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn zero() -> Self {
        Zero::zero()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn denominator_vanishes(&self) -> bool {
        self.is_zero()
    }

    fn overflows(&self, digit_budget: u64) -> bool {
        decimal_digits(self) > digit_budget
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }

    fn at_most(lhs: &Self, rhs: &Self) -> bool {
        lhs <= rhs
    }

    fn exact_parts(&self) -> Option<(String, String)> {
        Some((self.numer().to_string(), self.denom().to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitError {
    #[error("{which} initial conditions have length {found}, expected {expected}")]
    Length {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{which} initial condition at position {index} is negative")]
    Negative { which: &'static str, index: usize },
}

/// Values at indices `1−k … 0`; position 0 holds index `1−k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialConditions {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl InitialConditions {
    pub fn constant(k: usize, value: Rational) -> Self {
        InitialConditions {
            x: vec![value.clone(); k],
            y: vec![value; k],
        }
    }

    pub fn validate(&self, k: usize) -> Result<(), InitError> {
        for (which, v) in [("x", &self.x), ("y", &self.y)] {
            if v.len() != k {
                return Err(InitError::Length {
                    which,
                    expected: k,
                    found: v.len(),
                });
            }
            if let Some(index) = v.iter().position(Signed::is_negative) {
                return Err(InitError::Negative { which, index });
            }
        }
        Ok(())
    }
}

/// Uniform draws on `[low, high]` per entry, stored exactly as the drawn floats.
pub fn random_initial_conditions<R: Rng>(
    k: usize,
    rng: &mut R,
    low: f64,
    high: f64,
) -> InitialConditions {
    let dist = Uniform::new_inclusive(low, high);
    let mut draw = || -> Vec<Rational> {
        (0..k)
            .map(|_| from_f64(dist.sample(rng)).expect("finite draw"))
            .collect()
    };
    let x = draw();
    let y = draw();
    InitialConditions { x, y }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TrajectoryStatus {
    Completed,
    ZeroDenominator { n: usize, equation: Sequence },
    Overflow { n: usize },
}

/// Generated terms `x_1 … x_N`, `y_1 … y_N` plus the initial conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub k: usize,
    pub init_x: Vec<T>,
    pub init_y: Vec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub status: TrajectoryStatus,
}

impl<T: Scalar> Trajectory<T> {
    pub fn mode(&self) -> Mode {
        T::MODE
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    pub fn values(&self, which: Sequence) -> &[T] {
        match which {
            Sequence::X => &self.x,
            Sequence::Y => &self.y,
        }
    }

    fn init_values(&self, which: Sequence) -> &[T] {
        match which {
            Sequence::X => &self.init_x,
            Sequence::Y => &self.init_y,
        }
    }

    /// Value at index `n` (initial conditions for `n ≤ 0`).
    pub fn at(&self, which: Sequence, n: i64) -> &T {
        if n <= 0 {
            &self.init_values(which)[(n + self.k as i64 - 1) as usize]
        } else {
            &self.values(which)[n as usize - 1]
        }
    }
}

struct SparseForm<T> {
    constant: T,
    x: Vec<(usize, T)>,
    y: Vec<(usize, T)>,
}

impl<T: Scalar> SparseForm<T> {
    fn of(form: &AffineForm) -> Self {
        let nonzero = |v: &[Rational]| -> Vec<(usize, T)> {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i + 1, T::from_rational(c)))
                .collect()
        };
        SparseForm {
            constant: T::from_rational(&form.constant),
            x: nonzero(&form.x.0),
            y: nonzero(&form.y.0),
        }
    }

    /// Evaluates with `hx[len - i]` as the lag-`i` value.
    fn eval(&self, hx: &[T], hy: &[T]) -> T {
        let mut acc = self.constant.clone();
        for (lag, c) in &self.x {
            acc = acc.add(&c.mul(&hx[hx.len() - lag]));
        }
        for (lag, c) in &self.y {
            acc = acc.add(&c.mul(&hy[hy.len() - lag]));
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationLimits {
    pub digit_budget: u64,
}

impl Default for SimulationLimits {
    fn default() -> Self {
        SimulationLimits {
            digit_budget: DEFAULT_DIGIT_BUDGET,
        }
    }
}

/// Iterates both equations for `n = 1 … steps`.
pub fn simulate<T: Scalar>(
    sys: &RationalSystem,
    init: &InitialConditions,
    steps: usize,
) -> Trajectory<T> {
    simulate_with_limits(sys, init, steps, SimulationLimits::default())
}

pub fn simulate_with_limits<T: Scalar>(
    sys: &RationalSystem,
    init: &InitialConditions,
    steps: usize,
    limits: SimulationLimits,
) -> Trajectory<T> {
    let start = Trajectory {
        k: sys.k,
        init_x: init.x.iter().map(T::from_rational).collect(),
        init_y: init.y.iter().map(T::from_rational).collect(),
        x: Vec::with_capacity(steps),
        y: Vec::with_capacity(steps),
        status: TrajectoryStatus::Completed,
    };
    continue_with_limits(sys, start, steps, limits)
}

/// Generates `steps` more terms after those already in `traj`.
pub fn continue_simulation<T: Scalar>(
    sys: &RationalSystem,
    traj: Trajectory<T>,
    steps: usize,
) -> Trajectory<T> {
    continue_with_limits(sys, traj, steps, SimulationLimits::default())
}

pub fn continue_with_limits<T: Scalar>(
    sys: &RationalSystem,
    mut traj: Trajectory<T>,
    steps: usize,
    limits: SimulationLimits,
) -> Trajectory<T> {
    if !traj.is_completed() {
        return traj;
    }
    let forms = [
        SparseForm::<T>::of(&sys.x.num),
        SparseForm::<T>::of(&sys.x.den),
        SparseForm::<T>::of(&sys.y.num),
        SparseForm::<T>::of(&sys.y.den),
    ];
    // full histories, initial conditions first
    let mut hx: Vec<T> = traj.init_x.iter().chain(&traj.x).cloned().collect();
    let mut hy: Vec<T> = traj.init_y.iter().chain(&traj.y).cloned().collect();
    for _ in 0..steps {
        let n = traj.x.len() + 1;
        let den_x = forms[1].eval(&hx, &hy);
        if den_x.denominator_vanishes() {
            traj.status = TrajectoryStatus::ZeroDenominator {
                n,
                equation: Sequence::X,
            };
            break;
        }
        let den_y = forms[3].eval(&hx, &hy);
        if den_y.denominator_vanishes() {
            traj.status = TrajectoryStatus::ZeroDenominator {
                n,
                equation: Sequence::Y,
            };
            break;
        }
        let xn = forms[0].eval(&hx, &hy).div(&den_x);
        let yn = forms[2].eval(&hx, &hy).div(&den_y);
        if xn.overflows(limits.digit_budget) || yn.overflows(limits.digit_budget) {
            traj.status = TrajectoryStatus::Overflow { n };
            break;
        }
        hx.push(xn.clone());
        hy.push(yn.clone());
        traj.x.push(xn);
        traj.y.push(yn);
    }
    traj
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoundKind {
    /// No value after the burn-in exceeds the earlier maximum; `max_value` is the overall
    /// maximum, first reached at index `attained_at`.
    Stabilized {
        max_value: f64,
        attained_at: i64,
    },
    /// Maxima of the last windows, each at least 1.1 times the one before.
    Diverging {
        window_maxima: Vec<f64>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub kind: BoundKind,
    pub burn_in: usize,
}

impl BoundVerdict {
    pub fn is_stabilized(&self) -> bool {
        matches!(self.kind, BoundKind::Stabilized { .. })
    }

    pub fn is_diverging(&self) -> bool {
        matches!(self.kind, BoundKind::Diverging { .. })
    }
}

/// Number of equal windows the generated terms are cut into for divergence detection.
pub const DIVERGENCE_WINDOWS: usize = 10;
/// How many trailing windows must each grow.
pub const DIVERGENCE_TAIL: usize = 5;
pub const DIVERGENCE_RATIO: f64 = 1.1;

/// Empirical verdict on whether `which` stays bounded after index `burn_in`.
pub fn empirical_bound<T: Scalar>(
    traj: &Trajectory<T>,
    which: Sequence,
    burn_in: usize,
) -> BoundVerdict {
    let inconclusive = |reason: String| BoundVerdict {
        kind: BoundKind::Inconclusive { reason },
        burn_in,
    };
    if !traj.is_completed() {
        return inconclusive(format!("trajectory stopped early: {:?}", traj.status));
    }
    let values: Vec<f64> = traj.values(which).iter().map(T::to_f64).collect();
    if burn_in >= values.len() {
        return inconclusive(format!(
            "burn-in {burn_in} leaves no terms out of {}",
            values.len()
        ));
    }
    let init: Vec<f64> = traj.init_values(which).iter().map(T::to_f64).collect();
    let pre_max = init
        .iter()
        .chain(&values[..burn_in])
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let post_max = values[burn_in..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if post_max <= pre_max * (1.0 + FLOAT_TOLERANCE) {
        let max_value = pre_max.max(post_max);
        let attained_at = (1 - traj.k as i64..=values.len() as i64)
            .zip(init.iter().chain(&values))
            .find(|(_, v)| **v == max_value)
            .map(|(n, _)| n)
            .expect("maximum is attained");
        return BoundVerdict {
            kind: BoundKind::Stabilized {
                max_value,
                attained_at,
            },
            burn_in,
        };
    }
    let width = values.len() / DIVERGENCE_WINDOWS;
    if width > 0 {
        let offset = values.len() - width * DIVERGENCE_WINDOWS;
        let maxima: Vec<f64> = values[offset..]
            .chunks(width)
            .map(|w| w.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect();
        let tail = &maxima[DIVERGENCE_WINDOWS - DIVERGENCE_TAIL - 1..];
        if tail.windows(2).all(|w| w[1] >= DIVERGENCE_RATIO * w[0]) {
            return BoundVerdict {
                kind: BoundKind::Diverging {
                    window_maxima: tail[1..].to_vec(),
                },
                burn_in,
            };
        }
    }
    inconclusive("running maximum still grows but not geometrically across windows".into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CertificateCheck {
    Holds,
    ViolatedAt { n: usize },
    NotApplicable { reason: String },
}

/// Checks the fact's inequality at every generated index (initial conditions exempt).
pub fn validate_certificate<T: Scalar>(
    traj: &Trajectory<T>,
    fact: &ComparabilityFact,
) -> CertificateCheck {
    let Some(values) = fact.constants.values() else {
        return CertificateCheck::NotApplicable {
            reason: "constants are existential".into(),
        };
    };
    let m: Vec<T> = values.iter().map(T::from_rational).collect();
    let (u, v) = match fact.direction {
        Direction::Original => (&traj.x, &traj.y),
        Direction::Swapped => (&traj.y, &traj.x),
    };
    for (i, (u, v)) in u.iter().zip(v).enumerate() {
        let ok = match fact.shape {
            Shape::OneSidedLinear => T::at_most(v, &m[0].mul(u)),
            Shape::TwoSidedLinear => T::at_most(&m[0].mul(v), u) && T::at_most(u, &m[1].mul(v)),
            Shape::OneSidedAffine => T::at_most(v, &m[0].mul(u).add(&m[1])),
            Shape::TwoSidedAffine => {
                let middle = m[0].mul(v).add(&m[1]);
                T::at_most(u, &middle) && T::at_most(&middle, &m[2].mul(u).add(&m[3]))
            }
        };
        if !ok {
            return CertificateCheck::ViolatedAt { n: i + 1 };
        }
    }
    CertificateCheck::Holds
}

/// Validates every fact with concrete constants, returning `(fact key, result)` pairs.
pub fn validate_all<'a, T: Scalar>(
    traj: &Trajectory<T>,
    facts: impl IntoIterator<Item = &'a ComparabilityFact>,
) -> Vec<(String, CertificateCheck)> {
    facts
        .into_iter()
        .filter(|f| !matches!(f.constants, Constants::Existential))
        .map(|f| (f.key().to_string(), validate_certificate(traj, f)))
        .collect()
}

/// Writes `n,x,y` rows, plus exact numerator and denominator columns in exact mode.
pub fn write_csv<T: Scalar, W: Write>(traj: &Trajectory<T>, mut out: W) -> io::Result<()> {
    let exact = T::MODE == Mode::Exact;
    if exact {
        writeln!(out, "n,x,y,x_num,x_den,y_num,y_den")?;
    } else {
        writeln!(out, "n,x,y")?;
    }
    for (i, (x, y)) in traj.x.iter().zip(&traj.y).enumerate() {
        write!(out, "{},{:.16e},{:.16e}", i + 1, x.to_f64(), y.to_f64())?;
        if let (Some((xn, xd)), Some((yn, yd))) = (x.exact_parts(), y.exact_parts()) {
            write!(out, ",{xn},{xd},{yn},{yd}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
