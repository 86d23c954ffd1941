use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("net {0} does not exist")]
    InvalidNet(usize),
    #[error("vertex {0} does not exist")]
    InvalidVertex(usize),
    #[error("net {0} has no pins")]
    EmptyNet(usize),
    #[error("net {net} contains vertex {vertex} more than once")]
    DuplicatePin { net: usize, vertex: usize },
    #[error("weights must be positive ({what} {index} has weight 0)")]
    ZeroWeight { what: &'static str, index: usize },
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("block id {block} out of range for k = {k}")]
    InvalidBlock { block: usize, k: usize },
    #[error("k must be at least 1")]
    ZeroBlocks,
    #[error("vertex {vertex} lies outside blocks {i} and {j}")]
    VertexOutsidePair { vertex: usize, i: usize, j: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("node {0} is attached to both the source and the sink with infinite capacity")]
    SourceSinkOverlap(usize),
    #[error("instance too large for exhaustive search ({what})")]
    TooLarge { what: &'static str },
    #[error("invalid configuration: {0}")]
    Config(&'static str),
}
