//! Runs the same system in float and exact mode and prints the first terms side by side.

use ratdiff::model::{Constant, Group, RationalSystem};
use ratdiff::number::{format_rational, int, Rational};
use ratdiff::simulate::{simulate, InitialConditions, Trajectory};

fn main() {
    // x_n = (1 + x_{n-1} + y_{n-1}) / (x_{n-2} + y_{n-1}),  y_n = 1 + x_{n-2} + y_{n-1}
    let one = int(1);
    let sys = RationalSystem::zeros(2)
        .with_constant(Constant::Alpha, one.clone())
        .with_constant(Constant::P, one.clone())
        .with_constant(Constant::Q, one.clone())
        .with_lag(Group::Beta, 1, one.clone())
        .with_lag(Group::Gamma, 1, one.clone())
        .with_lag(Group::B, 2, one.clone())
        .with_lag(Group::C, 1, one.clone())
        .with_lag(Group::Delta, 2, one.clone())
        .with_lag(Group::Epsilon, 1, one);
    let init = InitialConditions::constant(2, int(1));
    let exact: Trajectory<Rational> = simulate(&sys, &init, 8);
    let float: Trajectory<f64> = simulate(&sys, &init, 8);
    println!("{:>3} {:>24} {:>12} {:>10}", "n", "x exact", "x float", "y");
    for n in 0..exact.len() {
        println!(
            "{:>3} {:>24} {:>12.6} {:>10}",
            n + 1,
            format_rational(&exact.x[n]),
            float.x[n],
            format_rational(&exact.y[n])
        );
    }
}
