//! Exhaustive cross-check for the window-sum decider.
//!
//! Enumerates every sequence over the source set length by length and checks windows
//! directly, without the automaton. Only practical for small `k` and short lengths.

use serde::Serialize;

use super::{has_target_window, EtaQuery};

/// Default cap on the number of sequences the oracle will enumerate.
pub const DEFAULT_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleVerdict {
    /// Every sequence of length `eta_min` hits; some sequence of length `eta_min - 1` does not.
    Determined { eta_min: usize },
    /// Some sequence of length `max_len` still avoids the target.
    Undetermined { max_len: usize },
    /// Enumerating up to `max_len` would visit `required` sequences, above `budget`.
    BudgetExceeded { required: u128, budget: u128 },
}

pub fn eta_oracle(q: &EtaQuery, max_len: usize) -> OracleVerdict {
    eta_oracle_with_budget(q, max_len, DEFAULT_BUDGET)
}

pub fn eta_oracle_with_budget(q: &EtaQuery, max_len: usize, budget: u128) -> OracleVerdict {
    let symbols: Vec<usize> = q.source().iter().collect();
    let base = symbols.len() as u128;
    let mut required: u128 = 0;
    let mut count: u128 = 1;
    for _ in 1..=max_len {
        count = count.saturating_mul(base);
        required = required.saturating_add(count);
    }
    if required > budget {
        return OracleVerdict::BudgetExceeded { required, budget };
    }
    for len in 1..=max_len {
        if all_sequences_hit(&symbols, len, q) {
            return OracleVerdict::Determined { eta_min: len };
        }
    }
    OracleVerdict::Undetermined { max_len }
}

fn all_sequences_hit(symbols: &[usize], len: usize, q: &EtaQuery) -> bool {
    if symbols.is_empty() {
        return true;
    }
    let mut digits = vec![0usize; len];
    let mut seq = vec![0usize; len];
    loop {
        for (slot, &d) in seq.iter_mut().zip(&digits) {
            *slot = symbols[d];
        }
        if !has_target_window(&seq, q.target()) {
            return false;
        }
        // odometer increment
        let mut i = len;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < symbols.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}
