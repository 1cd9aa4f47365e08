//! Decides AF embeddability of the C*-algebra of the shift groupoid of a
//! finite directed graph, and computes the ordered invariants behind the
//! decision: zeroth groupoid homology and K₀ through traces.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: multigraphs, paths, the cycle-with-entrance test;
//! - [`dynamics`]: cylinder functions and the transfer operator `σ*`;
//! - [`linalg`]: exact rationals, Smith normal form, exact feasibility;
//! - [`homology`]: boundary maps of the truncated relations `R(σⁿ)` and H₀;
//! - [`ktheory`]: projections, traces and the map ν from K₀ to H₀;
//! - [`decision`]: the AF-embeddability verdict and its oracles;
//! - [`selftest`]: the seeded invariant battery driven by the CLI.

pub mod decision;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod homology;
pub mod ktheory;
pub mod linalg;
pub mod selftest;

pub use error::{Error, Result};
