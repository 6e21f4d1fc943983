use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid node name {0:?}: names must match [A-Za-z0-9_]+")]
    InvalidNodeName(String),
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("arrows {0} -> {1} and {1} -> {0} both present")]
    DoubleArrow(String, String),
    #[error("directed cycle {}", .0.join(" -> "))]
    CycleDetected(Vec<String>),
    #[error("graph has {0} nodes, at most {max} supported", max = crate::nodeset::MAX_NODES)]
    TooManyNodes(usize),
    #[error("node set must be nonempty")]
    EmptyNodeSet,
    #[error("triplet sets are not pairwise disjoint or a side is empty")]
    TripletNotDisjoint,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("nodes {0} and {1} are adjacent")]
    NodesAdjacent(String, String),
    #[error("reversal of {0} -> {1} is not legal")]
    IllegalReversal(String, String),
    #[error("adding {0} -> {1} is not legal")]
    IllegalAdd(String, String),
    #[error("graphs are over different node sets")]
    NodeSetMismatch,
    #[error("graphs are not Markov equivalent")]
    NotEquivalent,
    #[error("size precondition violated: |E(K)| = {k} > |E(L)| = {l}")]
    SizePreconditionViolated { k: usize, l: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("inclusion I(K) ⊆ I(L) does not hold")]
    InclusionFails,
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("need at least 2 nodes")]
    TooFewNodes,
    #[error("{n} nodes exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
