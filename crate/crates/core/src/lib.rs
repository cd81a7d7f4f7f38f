//! Finite-scale invariants of graphed groupoids and graph sequences.
//!
//! The crate works with finite base spaces carrying the uniform measure.
//! It computes graphing cost, L-Lipschitz cost and combinatorial-cost tables,
//! subgroup ranks from Schreier graphs, averaged Betti numbers of fields of
//! simplicial complexes, Rips-complex image dimensions, and the integer
//! spectral bounds behind Lück-type approximation.

pub mod cost;
pub mod error;
pub mod generate;
pub mod graph;
pub mod group;
pub mod groupoid;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod lipschitz;
pub mod manifest;
pub mod rational;
pub mod spectral;

pub use cost::CostValue;
pub use error::{Error, Result};
pub use graph::UnlabeledGraph;
pub use group::{GroupPresentation, PermutationAction, SchreierGraph, Word};
pub use groupoid::{BaseSpace, Decomposition, Graphing, PartialBijection};
pub use homology::{FiberedComplex, FiniteComplex};
pub use manifest::SequenceManifest;
pub use rational::Rational;
pub use spectral::IntSymMatrix;
