//! Window-sum iteration condition.
//!
//! For a source set `S` and target set `T` inside `{1..k}`, the condition holds when
//! some `η` exists such that every sequence `c_1, c_2, …` over `S` has a window
//! `c_{N₁} + … + c_{N₂}` (with `N₁ ≤ N₂ ≤ η`) whose sum lies in `T`.
//!
//! The decider walks a subset automaton whose state is the set of suffix sums of the
//! symbols read so far. Sums above `k` are dropped: symbols are at least 1 and targets
//! at most `k`, so such a sum can never come back into range.

pub mod oracle;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::IndexSet;

/// Largest order the bitmask automaton supports.
pub const MAX_ETA_ORDER: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaQueryError {
    #[error("order k must be at least 1")]
    ZeroOrder,
    #[error("order {0} exceeds the supported maximum {MAX_ETA_ORDER}")]
    OrderTooLarge(usize),
    #[error("{which} set {set} is not contained in {{1..{k}}}")]
    OutOfRange {
        which: &'static str,
        set: IndexSet,
        k: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EtaQuery {
    k: usize,
    source: IndexSet,
    target: IndexSet,
}

impl EtaQuery {
    pub fn new(k: usize, source: IndexSet, target: IndexSet) -> Result<Self, EtaQueryError> {
        if k == 0 {
            return Err(EtaQueryError::ZeroOrder);
        }
        if k > MAX_ETA_ORDER {
            return Err(EtaQueryError::OrderTooLarge(k));
        }
        for (which, set) in [("source", &source), ("target", &target)] {
            if set.iter().any(|i| i == 0 || i > k) {
                return Err(EtaQueryError::OutOfRange {
                    which,
                    set: set.clone(),
                    k,
                });
            }
        }
        Ok(EtaQuery { k, source, target })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn source(&self) -> &IndexSet {
        &self.source
    }

    pub fn target(&self) -> &IndexSet {
        &self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EtaWitness {
    /// A longest sequence with no window sum in the target (lexicographically smallest).
    Surviving { sequence: Vec<usize> },
    /// Reading `prefix` then repeating `cycle` forever never produces a window sum in the
    /// target; `states` are the automaton states visited around the cycle.
    Cycle {
        prefix: Vec<usize>,
        cycle: Vec<usize>,
        states: Vec<IndexSet>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaDecision {
    pub holds: bool,
    pub eta_min: Option<usize>,
    pub witness: Option<EtaWitness>,
}

impl EtaDecision {
    /// Whether a user-supplied `η` is large enough.
    pub fn accepts(&self, eta: usize) -> bool {
        matches!(self.eta_min, Some(m) if eta >= m)
    }
}

impl fmt::Display for EtaDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eta_min {
            Some(m) => write!(f, "holds, eta_min={m}"),
            None => write!(f, "fails"),
        }
    }
}

fn to_mask(set: &IndexSet) -> u64 {
    set.iter().fold(0u64, |m, i| m | (1u64 << (i - 1)))
}

fn from_mask(mask: u64) -> IndexSet {
    (0..64)
        .filter(|b| mask & (1u64 << b) != 0)
        .map(|b| b + 1)
        .collect()
}

struct Automaton {
    full: u64,
    target: u64,
    symbols: Vec<usize>,
}

impl Automaton {
    fn step(&self, state: u64, c: usize) -> u64 {
        ((state << c) & self.full) | (1u64 << (c - 1))
    }

    fn hit(&self, state: u64) -> bool {
        state & self.target != 0
    }

    /// Non-hit successors in symbol order.
    fn successors(&self, state: u64) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.symbols
            .iter()
            .map(move |&c| (c, self.step(state, c)))
            .filter(|&(_, next)| !self.hit(next))
    }
}

enum Mark {
    Open,
    Done(usize),
}

/// Decides the window-sum condition and returns the minimal `η` or a failure cycle.
pub fn eta_decide(q: &EtaQuery) -> EtaDecision {
    if q.source.is_empty() {
        return EtaDecision {
            holds: true,
            eta_min: Some(1),
            witness: None,
        };
    }
    let full = (1u64 << q.k) - 1;
    let auto = Automaton {
        full,
        target: to_mask(&q.target),
        symbols: q.source.iter().collect(),
    };

    // Iterative depth-first search over non-hit states computing the longest path
    // length from each state; meeting an open state closes a cycle.
    let start = 0u64;
    let mut marks: HashMap<u64, Mark> = HashMap::new();
    // frames: (state, next symbol position, symbol used to enter this state)
    let mut stack: Vec<(u64, usize, Option<usize>)> = vec![(start, 0, None)];
    marks.insert(start, Mark::Open);
    while let Some(&mut (state, ref mut pos, _)) = stack.last_mut() {
        if *pos < auto.symbols.len() {
            let c = auto.symbols[*pos];
            *pos += 1;
            let next = auto.step(state, c);
            if auto.hit(next) {
                continue;
            }
            match marks.get(&next) {
                None => {
                    marks.insert(next, Mark::Open);
                    stack.push((next, 0, Some(c)));
                }
                Some(Mark::Open) => {
                    return failure(&stack, next, c);
                }
                Some(Mark::Done(_)) => {}
            }
        } else {
            let best = auto
                .successors(state)
                .map(|(_, next)| match marks.get(&next) {
                    Some(Mark::Done(len)) => len + 1,
                    _ => unreachable!("successor finished before its predecessor"),
                })
                .max()
                .unwrap_or(0);
            marks.insert(state, Mark::Done(best));
            stack.pop();
        }
    }

    let longest = |s: u64| match marks.get(&s) {
        Some(Mark::Done(len)) => *len,
        _ => unreachable!("every reachable state is finished"),
    };
    let mut sequence = Vec::new();
    let mut state = start;
    let mut remaining = longest(start);
    while remaining > 0 {
        let (c, next) = auto
            .successors(state)
            .find(|&(_, next)| longest(next) + 1 == remaining)
            .expect("a successor realizes the longest path");
        sequence.push(c);
        state = next;
        remaining -= 1;
    }
    EtaDecision {
        holds: true,
        eta_min: Some(longest(start) + 1),
        witness: Some(EtaWitness::Surviving { sequence }),
    }
}

fn failure(stack: &[(u64, usize, Option<usize>)], reentered: u64, closing: usize) -> EtaDecision {
    let at = stack
        .iter()
        .position(|&(s, _, _)| s == reentered)
        .expect("open state lies on the stack");
    let prefix: Vec<usize> = stack[1..=at].iter().filter_map(|f| f.2).collect();
    let mut cycle: Vec<usize> = stack[at + 1..].iter().filter_map(|f| f.2).collect();
    cycle.push(closing);
    let states = stack[at..].iter().map(|f| from_mask(f.0)).collect();
    EtaDecision {
        holds: false,
        eta_min: None,
        witness: Some(EtaWitness::Cycle {
            prefix,
            cycle,
            states,
        }),
    }
}

/// Whether the sequence has a window `[N₁, N₂]` with sum in `target`.
pub fn has_target_window(sequence: &[usize], target: &IndexSet) -> bool {
    (0..sequence.len()).any(|start| {
        let mut sum = 0;
        sequence[start..].iter().any(|&c| {
            sum += c;
            target.contains(sum)
        })
    })
}
