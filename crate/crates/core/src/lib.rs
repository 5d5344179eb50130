//! Degree-sequence realization for simple digraphs.
//!
//! The crate covers the classical Havel-Hakimi and Kleitman-Wang constructions,
//! the parallel Havel-Hakimi step that zeroes a vertex's in- and out-degree at
//! once, and the detection of C3-anchored sequences on which that step can fail
//! for some choices of maximal index sets. A brute-force [`oracle`] enumerates
//! realizations of small sequences and is used to cross-check everything else.
//!
//! Indices and vertex ids are 1-based throughout: index `i` of a degree
//! sequence is vertex `i` of its realizations.

pub mod anchored;
pub mod digraph_core;
pub mod fixtures;
pub mod hh_ops;
pub mod oracle;
pub mod realizer;
pub mod seq_core;

pub use anchored::{AnchorCase, AnchorReport};
pub use digraph_core::{ClassPartition, Digraph, DigraphBuilder, SwitchSet, VertexClass};
pub use hh_ops::{KwDirection, MaximalIndexPair, RealizeError, TiePolicy};
pub use realizer::{IndexOrder, Method, RealizeOptions};
pub use seq_core::{DegreePair, Direction, IndexSet, IntPairSeq, IntSeq, OrderedView, SlackProfile};
