//! Shipped reference fixtures used across the test corpus and the CLI.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{IsingModel, ModelSpec, PottsModel, TabularModel};

/// Two states at energies (0, 1), unit proposal rate. The classical chain
/// on it has rates `(e^{-1}, 1)`.
pub fn two_state() -> TabularModel {
    TabularModel::path("two-state", alloc::vec![0.0, 1.0], 1.0).unwrap()
}

/// Three states on a path with energies (0, 2, 1), unit rates. Its barrier
/// from end to end sits at the middle state.
pub fn three_state_path() -> TabularModel {
    TabularModel::path("three-state-path", alloc::vec![0.0, 2.0, 1.0], 1.0).unwrap()
}

/// Four states with strictly increasing energies: a single well, so every
/// critical height is zero.
pub fn single_well_four() -> TabularModel {
    TabularModel::path("single-well-four", alloc::vec![0.0, 0.5, 1.2, 2.0], 1.0).unwrap()
}

/// Five states on a path forming a double well: deep well at state 0,
/// shallow well at state 4, and a broad barrier (states 1-3) of height 7.4
/// between them. Edge rate 0.1. The classical chain crosses the barrier on
/// a timescale of order `e^{7} / 0.1`, which is what the landscape-modified
/// dynamics shortcut.
pub fn double_well_five() -> TabularModel {
    TabularModel::path(
        "double-well-five",
        alloc::vec![0.0, 6.0, 7.4, 6.6, 0.4],
        0.1,
    )
    .unwrap()
}

/// The enumerable model corpus exercised by the cross-cutting suites:
/// tabular fixtures plus one small instance of each spin family.
pub fn corpus() -> Vec<Box<dyn ModelSpec>> {
    alloc::vec![
        Box::new(two_state()) as Box<dyn ModelSpec>,
        Box::new(three_state_path()),
        Box::new(single_well_four()),
        Box::new(double_well_five()),
        Box::new(IsingModel::hypercube(2, 1.0, 1.0).unwrap()),
        Box::new(IsingModel::complete(4, 1.0, 1.0).unwrap()),
        Box::new(PottsModel::new(3, 2, 1.0).unwrap()),
    ]
}
