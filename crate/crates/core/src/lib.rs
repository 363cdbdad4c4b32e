//! Exact word-measure expectations on symmetric groups.
//!
//! For a word `w` in a free group `F_r` and independent uniform permutations
//! `σ₁, …, σ_r ∈ S_N`, statistics such as the expected number of fixed points
//! of `w(σ₁, …, σ_r)` are rational functions of `N`. This crate computes them
//! exactly through Stallings core graphs, quotient lattices and Möbius
//! inversion, and ships the surrounding toolkit: primitivity ranks and
//! critical subgroups, the ring of stable class functions, brute-force and
//! Monte-Carlo oracles, and a spectral harness for random Schreier graphs.

pub mod characters;
pub mod combinatorics;
pub mod error;
pub mod graphs;
pub mod morphisms;
pub mod oracle;
pub mod phi;
pub mod schreier;
pub mod words;
pub mod wordstats;

pub use characters::{ClassFunction, IntPartition};
pub use error::{Error, Result};
pub use graphs::{Edge, GraphInvariants, LabeledGraph, MultiCoreGraph};
pub use morphisms::{GraphMorphism, VertexPartition};
pub use oracle::{OracleResult, OracleValue, Perm};
pub use phi::{LaurentSeries, LiftSum, RationalFnOfN};
pub use schreier::SchreierGraph;
pub use words::{CyclicWord, Letter, Word, WordOp};
pub use wordstats::{ClassExpectation, ExpectationReport};
