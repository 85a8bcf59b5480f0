use thiserror::Error;

/// Errors surfaced by the library's fallible operations.
///
/// Dimension and modulus mismatches in low-level arithmetic are programmer
/// errors and panic instead; everything input-dependent goes through here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(String),
    #[error("modulus must be at least 5, got {0}")]
    ModulusTooSmall(String),
    #[error("modulus must be less than 2^127")]
    ModulusTooLarge,
    #[error("cannot invert zero")]
    ZeroInverse,
    #[error("denominator vanishes modulo p")]
    DenominatorVanishes,
    #[error("matrix is singular")]
    Singular,
    #[error("graph contains a directed cycle")]
    CyclicGraph,
    #[error("graph is not a BAP: {0}")]
    NotBap(&'static str),
    #[error("graph is not a DAG")]
    NotDag,
    #[error("graphs have different node counts: {0} vs {1}")]
    NodeCountMismatch(usize, usize),
    #[error("node index {0} out of range for graph with {1} nodes")]
    NodeOutOfRange(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0}")]
    DuplicateEdge(String),
    #[error("unknown node name: {0}")]
    UnknownNode(String),
    #[error("parse error at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("n must be at least 4, got {0}")]
    NTooSmall(usize),
    #[error("invalid nonadjacent node choice s={0} for n={1}")]
    InvalidExtremalNode(usize, usize),
    #[error("enumeration of {0} graphs refused without explicit override")]
    TooLarge(String),
    #[error("constraint size mismatch: {0}")]
    SizeMismatch(String),
    #[error("equivalence classes fail the transitivity re-check for graphs {0} and {1}")]
    InconsistentPartition(usize, usize),
    #[error("graph names do not match: {0}")]
    NameMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
