use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    InvalidVertex { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("adjacency is not symmetric at {0}-{1}")]
    Asymmetric(usize, usize),
    #[error("graph too large: order {order} exceeds the limit of {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

/// Malformed graph6 / sparse6 / edge-list input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

/// A search stopped before it could reach a verdict.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BudgetError {
    #[error("node budget of {0} exhausted")]
    Nodes(u64),
    #[error("time budget of {0:.1}s exhausted")]
    Time(f64),
    #[error("{count} candidate subsets exceed the limit of {limit}")]
    Combinatorial { count: u128, limit: u128 },
    #[error("closure produced more than {0} graphs")]
    ClosureSize(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
