//! Schmidt-number lower bounds and entanglement detectors for bipartite
//! states, plus a PPT family construction with certified Schmidt number.
//!
//! The crate is organized in three layers:
//!
//! * [`statespace`] — bipartite states over `C^k ⊗ C^m` and the structural
//!   maps on them (flip, symmetrization, partial transpose, marginals,
//!   numerical rank, Schmidt decomposition);
//! * [`bounds`] — rank-based lower bounds on the Schmidt number and
//!   entanglement detectors, each returning a replayable certificate;
//! * [`constructions`] — the PPT family `Id + F + ε·vv̄ᵗ` of prescribed
//!   Schmidt number `n` (for `2n ≤ k`), the product decomposition of
//!   `Id + F`, and seeded random-state generators.
//!
//! States are plain positive-semidefinite Hermitian matrices; no trace
//! normalization is assumed or applied anywhere.

pub mod bounds;
pub mod constructions;
mod eigen;
pub mod error;
pub mod statespace;

pub use error::{Error, Result};
pub use statespace::{BipartiteState, PureVector, Side, Sign, ToleranceConfig};
