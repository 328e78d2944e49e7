//! Decides the window-sum condition for a few source/target pairs.

use ratdiff::eta::{eta_decide, EtaQuery, EtaWitness};
use ratdiff::model::IndexSet;

fn main() {
    let cases: [(usize, &[usize], &[usize]); 4] = [
        (2, &[1], &[2]),
        (2, &[1, 2], &[2]),
        (3, &[2], &[1, 3]),
        (4, &[1, 2], &[3, 4]),
    ];
    for (k, s, t) in cases {
        let source: IndexSet = s.iter().copied().collect();
        let target: IndexSet = t.iter().copied().collect();
        let q = EtaQuery::new(k, source.clone(), target.clone()).expect("lags within order");
        let d = eta_decide(&q);
        print!("k={k} {source} -> {target}: {d}");
        match d.witness {
            Some(EtaWitness::Surviving { sequence }) if !sequence.is_empty() => {
                println!("  (longest miss {sequence:?})")
            }
            Some(EtaWitness::Cycle { prefix, cycle, .. }) => {
                println!("  ({prefix:?} then {cycle:?} forever)")
            }
            _ => println!(),
        }
    }
}
