//! Finite-state energy landscapes with symmetric proposal kernels.
//!
//! A model is an energy function over a packed state encoding plus a list
//! of proposal rates to neighboring states. All built-in kernels are
//! symmetric (`q(x, y) = q(y, x)` with identical floating-point values) and
//! irreducible, which is what the Metropolis construction requires.
//!
//! State encodings are bijective with `0..state_count` and documented per
//! model: Ising packs one bit per vertex (bit set means spin +1), Potts
//! packs base-`q` digits little-endian in vertex index, and tabular models
//! use their row index directly.

mod ising;
mod potts;
mod tabular;

pub mod reference;

pub use ising::{IsingGraph, IsingModel};
pub use potts::PottsModel;
pub use tabular::TabularModel;

use alloc::string::String;
use alloc::vec::Vec;

/// Default state-count cap for dense analysis and enumeration.
pub const DENSE_CAP: u64 = 8192;

/// Packed encoding of a configuration. The integer value doubles as the
/// dense state index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u64);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl core::fmt::Display for StateId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Errors from model construction and enumeration.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    /// Enumeration requested beyond the cap (count `None` means the space
    /// does not fit the packed encoding at all).
    OverCap { count: Option<u64>, cap: u64 },
    /// A model parameter out of its valid range.
    InvalidParameter(&'static str),
    /// Edge endpoint outside `0..states`.
    EdgeOutOfRange { i: usize, j: usize, states: usize },
    /// Self-loops are not proposal edges.
    SelfLoop { i: usize },
    /// Rates must be finite and positive.
    NonpositiveRate { i: usize, j: usize },
    /// The same undirected pair listed twice with conflicting rates.
    AsymmetricRate { i: usize, j: usize },
    /// The same undirected pair listed twice.
    DuplicateEdge { i: usize, j: usize },
    /// The proposal graph is not connected.
    Disconnected { components: usize },
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::OverCap { count: Some(n), cap } => {
                write!(f, "model has {n} states, above the cap of {cap}")
            }
            Self::OverCap { count: None, cap } => {
                write!(f, "state space does not fit the packed encoding (cap {cap})")
            }
            Self::InvalidParameter(why) => write!(f, "invalid model parameter: {why}"),
            Self::EdgeOutOfRange { i, j, states } => {
                write!(f, "edge ({i}, {j}) out of range for {states} states")
            }
            Self::SelfLoop { i } => write!(f, "self-loop edge at state {i}"),
            Self::NonpositiveRate { i, j } => write!(f, "non-positive rate on edge ({i}, {j})"),
            Self::AsymmetricRate { i, j } => {
                write!(f, "edge ({i}, {j}) listed with conflicting rates")
            }
            Self::DuplicateEdge { i, j } => write!(f, "edge ({i}, {j}) listed twice"),
            Self::Disconnected { components } => {
                write!(f, "proposal graph is disconnected ({components} components)")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

/// A finite-state energy landscape with a symmetric proposal kernel.
pub trait ModelSpec {
    fn name(&self) -> &str;

    /// Energy of a configuration.
    fn energy(&self, state: StateId) -> f64;

    /// Proposal neighbors `(y, q(x, y))` of a state. Kernels are symmetric
    /// and never list the state itself.
    fn neighbors(&self, state: StateId) -> Vec<(StateId, f64)>;

    /// Number of states when the space fits the packed encoding.
    fn state_count(&self) -> Option<u64>;

    /// A ground state and its energy, when known or computable.
    fn ground(&self) -> Option<(StateId, f64)>;
}

/// Iterate every state in encoding order, refusing spaces above `cap`.
pub fn enumerate_states(
    model: &(impl ModelSpec + ?Sized),
    cap: u64,
) -> Result<impl Iterator<Item = StateId>, ModelError> {
    let count = model.state_count();
    match count {
        Some(n) if n <= cap => Ok((0..n).map(StateId)),
        _ => Err(ModelError::OverCap { count, cap }),
    }
}

/// Exact `(h_min, h_max)` by enumeration.
pub fn energy_range(
    model: &(impl ModelSpec + ?Sized),
    cap: u64,
) -> Result<(f64, f64), ModelError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for s in enumerate_states(model, cap)? {
        let e = model.energy(s);
        if e < lo {
            lo = e;
        }
        if e > hi {
            hi = e;
        }
    }
    Ok((lo, hi))
}

pub(crate) fn display_name(kind: &str, detail: core::fmt::Arguments<'_>) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    let _ = write!(s, "{kind}{detail}");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_respects_cap() {
        let m = reference::three_state_path();
        let states: Vec<_> = enumerate_states(&m, 8).unwrap().collect();
        assert_eq!(states, alloc::vec![StateId(0), StateId(1), StateId(2)]);
        assert!(matches!(
            enumerate_states(&m, 2),
            Err(ModelError::OverCap { count: Some(3), cap: 2 })
        ));
    }

    #[test]
    fn energy_range_small_model() {
        let m = reference::three_state_path();
        assert_eq!(energy_range(&m, 8).unwrap(), (0.0, 2.0));
    }
}
