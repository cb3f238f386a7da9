use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("arc index {0} out of range")]
    ArcOutOfRange(usize),
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex label `{0}`")]
    InvalidLabel(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("arc {0} is a loop and cannot be contracted")]
    ContractLoop(usize),
    #[error("cannot contract an empty vertex set")]
    EmptyContraction,
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is not Eulerian")]
    NotEulerian,
    #[error("arc {0} is not a bridge")]
    NotABridge(usize),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("invalid configuration literal: {0}")]
    ConfigLiteral(String),
    #[error("vertex `{0}` is the sink and never fires")]
    SinkFiring(String),
    #[error("vertex `{0}` is not firable")]
    NotFirable(String),
    #[error("configuration is not stable")]
    NotStable,
    #[error("configuration is not recurrent")]
    NotRecurrent,
    #[error("stabilization did not terminate within {bound} firings")]
    NonTerminating { bound: u128 },

    #[error("size cap exceeded: {what} is {size}, cap is {cap}; try a smaller instance")]
    SizeCap {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("sum sequences differ between sink `{sink_a}` {seq_a:?} and sink `{sink_b}` {seq_b:?}")]
    SinkDependence {
        sink_a: String,
        seq_a: Vec<u64>,
        sink_b: String,
        seq_b: Vec<u64>,
    },
    #[error("pole at y = 0")]
    Pole,
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
