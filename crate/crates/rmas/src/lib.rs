//! Solver library for the Restricted Maximum Acyclic Subgraph problem (RMAS).
//!
//! An RMAS instance is a weighted directed multigraph where each node carries
//! a list of integer labels. A solution picks one label per node from its
//! list, and earns the weight of every edge whose head label strictly exceeds
//! its tail label.
//!
//! The library provides:
//! - the min/max coin-flip algorithm with a W/4 expectation guarantee and its
//!   conditional-expectation derandomization ([`simple_approx`]),
//! - an LP relaxation solved by an embedded two-phase simplex ([`lp`]),
//! - randomized rounding of the LP marginals with an lp²/(2W) guarantee and
//!   its derandomization ([`rounding`]),
//! - the combined deterministic solver certifying a 2√2 approximation
//!   ([`combined`]),
//! - brute-force oracles for exact optima and maximum directed cuts
//!   ([`exact`]),
//! - instance generators ([`generators`]) and an experiment harness
//!   ([`bench`]).

pub mod bench;
pub mod cli;
pub mod combined;
pub mod error;
pub mod exact;
pub mod generators;
pub mod instance;
pub mod lp;
pub mod rounding;
pub mod simple_approx;

pub use error::Error;
pub use instance::{Labeling, RmasInstance};
