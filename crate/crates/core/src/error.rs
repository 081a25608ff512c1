use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The input violates a structural precondition (linearity, matchings, ...).
    #[error("structural failure: {0}")]
    Structural(String),

    #[error("instance has {edges} edges, brute force is limited to {limit}")]
    TooLarge { edges: usize, limit: usize },

    #[error("matching for color {0} is empty")]
    EmptyMatching(u32),

    #[error("edge index {0} does not exist in the hypergraph")]
    DanglingEdge(usize),

    #[error("generator gave up after {attempts} attempts: {reason}")]
    Exhausted { attempts: u32, reason: String },

    /// A condition that the theory guarantees was observed to fail.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
