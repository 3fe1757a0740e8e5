//! Hypergraph subdivision via marked graded posets.
//!
//! A hypergraph is a finite family of nonempty vertex subsets. Unlike a
//! simplicial complex it need not be closed under taking faces, so its
//! homology is computed in embedded form: inside the chain complex of its
//! simplicial closure, restricted to the span of the hyperedges.
//!
//! The crate computes a subdivision of an arbitrary hypergraph that reduces
//! to barycentric subdivision on simplicial complexes, and verifies on the
//! chain level that subdivision preserves embedded homology: it constructs
//! an explicit subdivision chain map, a retraction onto the original
//! complex, and a chain homotopy between their composite and the identity,
//! then checks every identity as an exact integer (or prime-field) matrix
//! equation.

pub mod chains;
pub mod cli;
pub mod hypergraph;
pub mod invariance;
pub mod poset;
pub mod subdivision;
