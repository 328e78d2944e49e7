//! Boundedness and comparability analysis for systems of two rational difference
//! equations of order `k` with non-negative parameters.

pub mod cli;
pub mod comparability;
pub mod engine;
pub mod eta;
pub mod io;
pub mod model;
pub mod number;
pub mod rules;
pub mod simulate;
