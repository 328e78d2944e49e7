#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use rand::Rng;
use ratdiff::io::{parse_document, SystemDocument};
use ratdiff::model::{validate_system, Constant, Group, RationalSystem};
use ratdiff::number::{rat, Rational};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_path(n: usize) -> PathBuf {
    corpus_dir().join(format!("ex{n:02}.json"))
}

pub fn corpus(n: usize) -> SystemDocument {
    let text = std::fs::read_to_string(corpus_path(n)).expect("corpus file");
    parse_document(&text).expect("corpus parses")
}

pub fn all_corpus() -> Vec<(usize, SystemDocument)> {
    (1..=10).map(|n| (n, corpus(n))).collect()
}

/// The parameter grid used for random systems.
pub fn grid_value(i: u8) -> Rational {
    match i % 4 {
        0 => rat(0, 1),
        1 => rat(1, 2),
        2 => rat(1, 1),
        _ => rat(2, 1),
    }
}

const CONSTANTS: [Constant; 4] = [Constant::Alpha, Constant::A, Constant::P, Constant::Q];

/// Builds a system from one grid index per constant and per (group, lag).
pub fn system_from_indices(k: usize, constants: &[u8], lags: &[u8]) -> RationalSystem {
    let mut sys = RationalSystem::zeros(k);
    for (c, &i) in CONSTANTS.iter().zip(constants) {
        sys = sys.with_constant(*c, grid_value(i));
    }
    let mut it = lags.iter();
    for g in Group::ALL {
        for lag in 1..=k {
            sys = sys.with_lag(g, lag, grid_value(*it.next().expect("enough lag draws")));
        }
    }
    sys
}

/// Random valid system with `k ≤ max_k` and parameters from the grid; zero half the time.
pub fn random_system<R: Rng>(rng: &mut R, max_k: usize) -> RationalSystem {
    loop {
        let k = rng.gen_range(1..=max_k);
        let mut draw = || -> u8 {
            if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(1..4)
            }
        };
        let constants: Vec<u8> = (0..4).map(|_| draw()).collect();
        let lags: Vec<u8> = (0..8 * k).map(|_| draw()).collect();
        let sys = system_from_indices(k, &constants, &lags);
        if validate_system(&sys).is_ok() {
            return sys;
        }
    }
}

/// Strategy for valid systems with `k ≤ max_k` on the parameter grid.
pub fn arb_system(max_k: usize) -> impl Strategy<Value = RationalSystem> {
    (1..=max_k)
        .prop_flat_map(|k| {
            let draw = prop_oneof![2 => Just(0u8), 1 => 1u8..4];
            (
                Just(k),
                proptest::collection::vec(draw.clone(), 4),
                proptest::collection::vec(draw, 8 * k),
            )
        })
        .prop_map(|(k, c, l)| system_from_indices(k, &c, &l))
        .prop_filter("denominators not identically zero", |s| {
            validate_system(s).is_ok()
        })
}
