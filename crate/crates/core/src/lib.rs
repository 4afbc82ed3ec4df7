//! Exact structure learning for chordal (decomposable) Markov networks.
//!
//! The pipeline scores every candidate clique from categorical data,
//! encodes the search for the best-scoring chordal structure as weighted
//! MaxSAT, and certifies whatever network comes back against an
//! independent graph-theoretic implementation.

pub mod chordal;
pub mod cli;
pub mod dataset;
pub mod encoder;
pub mod nodeset;
pub mod scoring;
pub mod solve;

pub use nodeset::NodeSet;
