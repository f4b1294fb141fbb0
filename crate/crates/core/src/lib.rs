//! Vertex percolation on Cayley graphs of the symmetric group.
//!
//! Any minimal set of transpositions generating S_n is the edge set of a
//! labeled tree on {1, .., n}; this crate builds the corresponding Cayley
//! graph implicitly over Lehmer ranks, percolates its vertices with a
//! deterministic seeded rule, decomposes the induced subgraph into
//! components, and compares the giant component against the survival
//! probability of the matching Galton-Watson process.
//!
//! Modules:
//! - [`permutation`]: S_n elements with composition and exact rank/unrank.
//! - [`generators`]: transposition trees, growth order, diameter bounds.
//! - [`cayley`]: the implicit graph, distances, balls, boundaries.
//! - [`percolation`]: seeded vertex selection and component reports.
//! - [`branching`]: survival solvers, process simulation, tail formulas.
//! - [`experiment`]: sweeps, CSV/JSON/SVG output, verification suites.

// Validation uses `!(x > 0.0)` so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branching;
pub mod cayley;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod percolation;
pub mod permutation;

pub use cayley::CayleyGraph;
pub use error::{Error, Result};
pub use generators::{TranspositionTree, TreeSpec};
pub use percolation::{ComponentReport, PercolationParams};
pub use permutation::{Permutation, Rank};
