//! Deterministic simulation engine treating natural selection as a
//! reinforcement learning loop: genotypes are policies, survival is a binary
//! reward, and selection plus mutation implement the update rule.
//!
//! The crate is organised bottom-up:
//!
//! * [`fitness`]: genotypes, populations, fitness landscapes, and the
//!   relative-fitness algebra.
//! * [`dynamics`]: survival trials, mutation, the breeder's-equation
//!   response, and the synchronous generation step.
//! * [`rl`]: tabular Q-learning against small discrete environments.
//! * [`games`]: the iterated prisoner's dilemma with memory-one strategies
//!   and a Q-learning player.
//! * [`scenarios`]: three packaged experiments (antibiotic dosing, mimicry
//!   evolution, learned cooperation) producing trajectory records.
//! * [`stream`]: reproducible random stream derivation so replicate `k` sees
//!   the same draws no matter how many replicates run beside it.
//!
//! Everything here is `no_std`-compatible (with `alloc`); file formats and
//! the command line live in the companion `evorl-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("evorl-core needs either the `std` feature (default) or `libm`");

pub mod dynamics;
pub mod error;
pub mod fitness;
pub mod games;
pub mod rl;
pub mod scenarios;
pub mod stream;

pub use error::{Error, Result};

#[cfg(feature = "std")]
pub(crate) fn sqrt(x: f64) -> f64 {
    x.sqrt()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
