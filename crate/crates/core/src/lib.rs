//! Approximation of monotone functions on the unit cube from point values.
//!
//! The crate provides
//!
//! - the sign-flipped Haar basis with dyadic index arithmetic ([`haar`]),
//! - Monte Carlo wavelet approximators: linear reconstruction, its sign,
//!   and the level-set averaged generalization for `[-1,1]`-valued inputs
//!   ([`wavelet`]),
//! - the deterministic interior-lattice algorithm ([`grid`]),
//! - monotone test families used by the lower-bound constructions
//!   ([`functions`]),
//! - exact and sampled `L1` distances and coefficient oracles ([`metrics`]),
//! - evaluators for the upper and lower complexity bounds ([`bounds`]).

pub mod bounds;
pub mod budget;
pub mod combinatorics;
pub mod error;
pub mod functions;
pub mod grid;
pub mod haar;
pub mod metrics;
pub mod rng;
pub mod sum;
pub mod wavelet;

pub use budget::Budget;
pub use error::{Error, Result};
pub use functions::{FamilySpec, Oracle};
pub use haar::MultiIndex;
