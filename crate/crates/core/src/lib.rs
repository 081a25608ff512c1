//! Strong 3-query locally decodable codes and their recovery hypergraphs.
//!
//! A strong 3-query LDC is equivalent to a linear, edge-colored 3-uniform
//! hypergraph whose color classes are matchings and in which every even
//! subgraph carries an even number of edges of each color. This crate builds
//! such objects, checks them two independent ways (GF(2) elimination and brute
//! force), builds the cherry-induced signature graph, and grows rainbow trees
//! in it to extract certificates whenever the even-color condition fails.
//!
//! Modules:
//! - [`hypergraph`]: colored hypergraphs, augmentations, structural validation.
//! - [`gf2`]: packed bit vectors/matrices and the even-color oracle.
//! - [`ldc`]: linear strong LDC instances, encoding, local decoding, verification.
//! - [`generators`]: seeded positive, negative and random instances.
//! - [`signature`]: the signature graph and its counting/neighborhood bounds.
//! - [`witness`]: rainbow-tree growth, certificate extraction, the 2-query routine.
//! - [`format`]: the `.cheg` and `.sldc` text formats.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod format;
pub mod generators;
pub mod gf2;
pub mod hypergraph;
pub mod ldc;
pub mod signature;
pub mod witness;

pub use error::{Error, Result};
pub use hypergraph::{Augmentation, Color, ColoredGraph, ColoredHypergraph, HyperEdge, Vertex};

/// Exact non-negative rational used for matching densities.
pub type Rational = num_rational::Ratio<u64>;
