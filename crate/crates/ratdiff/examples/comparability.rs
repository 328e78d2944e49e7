//! Derives comparability facts for a small system and checks them on a trajectory.

use ratdiff::comparability::derive_comparability;
use ratdiff::model::{Constant, Group, RationalSystem};
use ratdiff::number::int;
use ratdiff::simulate::{simulate, validate_certificate, InitialConditions, Trajectory};

fn main() {
    // x_n = (1 + x_{n-1}) / (1 + y_{n-2}),  y_n = (1 + x_{n-1}) / (1 + y_{n-2})
    let one = int(1);
    let sys = RationalSystem::zeros(2)
        .with_constant(Constant::Alpha, one.clone())
        .with_constant(Constant::A, one.clone())
        .with_constant(Constant::P, one.clone())
        .with_constant(Constant::Q, one.clone())
        .with_lag(Group::Beta, 1, one.clone())
        .with_lag(Group::C, 2, one.clone())
        .with_lag(Group::Delta, 1, one.clone())
        .with_lag(Group::E, 2, one);

    let facts = derive_comparability(&sys, &[]);
    let init = InitialConditions {
        x: vec![int(2), int(7)],
        y: vec![int(0), int(3)],
    };
    let t: Trajectory<f64> = simulate(&sys, &init, 1000);
    for f in facts.iter() {
        println!(
            "{:<28} {:<32} {:?}",
            f.key().to_string(),
            f.describe(),
            validate_certificate(&t, f)
        );
    }
}
