use thiserror::Error;

/// Errors raised while reading an edge-list document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: self-loop on vertex `{label}`")]
    SelfLoop { line: usize, label: String },
    #[error("line {line}: duplicate edge `{a} {b}` (first seen on line {first})")]
    DuplicateEdge {
        line: usize,
        a: String,
        b: String,
        first: usize,
    },
    #[error("line {line}: vertex `{label}` is declared but has no incident edge")]
    IsolatedVertex { line: usize, label: String },
    #[error("line {line}: edge count exceeds the limit of {limit}")]
    TooManyEdges { line: usize, limit: usize },
    #[error("line {line}: expected two vertex labels, found {found} tokens")]
    Malformed { line: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("vertex {0} given twice where two distinct vertices are required")]
    SameVertex(usize),
    #[error("{what}: size {actual} exceeds the limit of {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("payoff vector entry {index} is negative")]
    NegativeEntry { index: usize },
    #[error("payoff vector has {actual} entries, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("coalition contains edge {edge}, but the graph only has {edges} edges")]
    CoalitionOutOfRange { edge: usize, edges: usize },
    #[error("the graph is not population monotonic; no allocation scheme can be built")]
    NotPopulationMonotonic,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn size(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::SizeLimit {
            what,
            limit,
            actual,
        }
    }
}
