//! Exact tooling for directional walks, partial order types and simultaneous
//! geometric embeddings.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] holds exact rational predicates (orientation, segment
//!   classification, affine maps) and deterministic perturbation.
//! * [`constraints`] models partial order types, their 3-uniform hypergraph
//!   and the constructive embedder for 2-degenerate instances.
//! * [`walk`] is the directional-walk data model.
//! * [`walk_reduction`] turns an arbitrary walk into an edge-repeat-free one
//!   and transports realizations in both directions.
//! * [`sge`] verifies simultaneous straight-line drawings.
//! * [`sge_reduction`] encodes a walk as an edge-disjoint SGE instance.
//! * [`search`] is realizability search: a grid oracle, simulated annealing
//!   with exact certification, and a realizable-walk sampler.
//! * [`io`] contains the JSON file formats.

pub mod constraints;
pub mod error;
pub mod geometry;
pub mod io;
pub mod search;
pub mod sge;
pub mod sge_reduction;
pub mod walk;
pub mod walk_reduction;

pub use error::{Error, Result};
pub use geometry::{Embedding, Orientation, Point, Rational};
