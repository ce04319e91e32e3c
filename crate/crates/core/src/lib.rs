//! Simulation and analysis of two-tier weighted voting.
//!
//! Citizens are partitioned into constituencies, each constituency sends the
//! median of its members' ideal points to an assembly, and the assembly picks
//! the weighted median of its delegates. The crate computes exact power indices
//! of the top-tier weighted voting game, estimates by Monte Carlo how often each
//! delegate is the pivotal weighted median, and searches for weight allocation
//! rules that equalize the per-capita chance of deciding the outcome.
//!
//! Modules:
//! - [`game`]: weighted voting games, Shapley-Shubik and Banzhaf indices, the
//!   pivotal representative of a realized ideal-point vector.
//! - [`population`]: noise/shock distributions, constituency medians, and the
//!   closed-form asymptotic densities of those medians.
//! - [`pivot`]: Monte Carlo pivot probabilities and per-capita influence.
//! - [`allocation`]: power-law and Shapley-based weight rules, the inverse
//!   Shapley heuristic and the allocation exponent search.
//! - [`verify`]: statistical pass/fail checks of the limit results.
//! - [`stats`]: goodness-of-fit helpers used by the checks.
//! - [`stream`]: reproducible random stream derivation.

pub mod allocation;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod pivot;
pub mod population;
pub mod stats;
pub mod stream;
pub mod verify;

pub use error::{Error, Result};
pub use game::{Coalition, IndexKind, PowerIndexVector, WeightedVotingGame};
pub use pivot::{InfluenceProfile, PivotDirection, PivotEstimate};
pub use population::{ConstituencyPartition, DistributionSpec, PreferenceModel};
