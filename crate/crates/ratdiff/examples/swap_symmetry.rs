//! Shows how a theorem applied to the swapped system shows up in the report.

use ratdiff::engine::{analyze, Orientation};
use ratdiff::io::parse_document;
use ratdiff::model::{swap_system, Group};

fn main() {
    let text = include_str!("../corpus/ex09.json");
    let sys = parse_document(text).expect("valid").system;
    let swapped = swap_system(&sys);
    for g in Group::ALL {
        println!(
            "I_{} = {:<6} in the swapped system: {}",
            g.symbol(),
            sys.index_set(g).to_string(),
            swapped.index_set(g)
        );
    }
    let direct = analyze(&sys, &[]);
    let mirror = analyze(&swapped, &[]);
    for a in direct
        .applications
        .iter()
        .filter(|a| a.orientation == Orientation::Swapped)
    {
        let same = mirror.find(a.id, a.case, Orientation::Direct).is_some();
        println!(
            "{} on the system = {} on its swap: {same}",
            a.label(),
            a.reference().label().trim_end_matches(" swapped")
        );
    }
}
