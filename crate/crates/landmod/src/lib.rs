//! Continuous-time Metropolis-Hastings sampling on modified energy landscapes.
//!
//! Given a finite state space with energy function `H` and a symmetric
//! proposal kernel, the classical Metropolis chain targets the Gibbs law
//! `mu ∝ exp(-H)`. This crate implements a family of chains that instead
//! target `mu_f ∝ exp(-psi(H))`, where `psi` damps energies above a
//! threshold `c` through a penalty function `f` and a penalty strength
//! `alpha`:
//!
//! ```text
//! psi(v) = ∫ du / (alpha * f((u - c)+) + 1)      (from H_min to v)
//! ```
//!
//! Damping shrinks energy barriers, so the modified chain can cross between
//! wells far faster than the classical one, at the price of sampling a
//! biased law. The crate provides the two standard corrections along with
//! the machinery to study all of it exactly on small models:
//!
//! - [`landscape`]: penalty functions, the transform `psi` in closed form,
//!   acceptance factors, and the reweighting function used for bias
//!   correction, each cross-checked against adaptive quadrature.
//! - [`models`]: bit-packed ferromagnetic spin systems (hypercube and
//!   complete-graph Ising, Potts on the 2-d torus) and tabular models for
//!   arbitrary finite chains.
//! - [`sim`]: exact continuous-time simulation of the homogeneous chain and
//!   of the annealed chain where `alpha` decays over time, via thinning
//!   against the proposal process.
//! - [`estimator`]: the self-normalized estimator that removes the sampling
//!   bias, with Chernoff-style stopping-time bounds and replica
//!   experiments.
//! - [`analysis`]: dense generators, stationary laws, spectral gaps, exact
//!   total-variation curves, critical heights via a union-find sweep, and
//!   every closed-form bound tying them together.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm`
//! feature when building without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("landmod requires either the `std` or the `libm` feature");

extern crate alloc;

pub(crate) mod math;
pub(crate) mod unionfind;

pub mod analysis;
pub mod estimator;
pub mod landscape;
pub mod models;
pub mod sim;

pub use landscape::{EnergyRef, LandscapeParams, PenaltyFunction};
pub use models::{ModelSpec, StateId};
pub use sim::{Schedule, Trajectory};
