use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node index {index} out of range for a graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),

    #[error("graph contains a directed cycle")]
    Cyclic,

    #[error("invalid arguments: {0}")]
    InvalidArgument(String),

    #[error("graphs with {0} nodes are beyond the supported size for this operation")]
    TooManyNodes(usize),

    #[error("independence structure is not realizable by any DAG")]
    Unrealizable,

    #[error("mixed node counts in input ({0} vs {1})")]
    MixedNodeCounts(usize, usize),

    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },

    #[error("conditioning event has probability zero")]
    ZeroProbabilityCondition,

    #[error("degenerate parameterization (division by zero); resample")]
    Degenerate,

    #[error("query kind {query} is not covered on graph {graph}")]
    Uncovered { graph: String, query: String },

    #[error("effect value {0} is too close to the decision boundary")]
    Ambiguous(f64),

    #[error("unknown variable token `{0}`")]
    UnknownVariable(String),

    #[error("resample budget exhausted after {0} attempts")]
    BudgetExhausted(usize),

    #[error("story is missing grammar form `{0}`")]
    MissingForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
