use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("message {message} is side information of both receiver {first} and receiver {second}")]
    NonDisjointSideInfo {
        message: String,
        first: String,
        second: String,
    },

    #[error("receiver {receiver} demands {message}, which it already holds")]
    DemandInOwnSideInfo { message: String, receiver: String },

    #[error("receiver {receiver} demands {message}, which is nobody's side information")]
    UnhousedDemandedMessage { message: String, receiver: String },

    #[error("receiver {0} has no side information")]
    EmptySideInfo(String),

    #[error("receiver {0} is declared twice")]
    DuplicateReceiver(String),

    #[error("not a generalized cycle: {0}")]
    NotGeneralizedCycle(String),

    #[error("graph is not Eulerian")]
    NotEulerian,

    #[error("vertex {0} has no incident edges")]
    IsolatedVertex(usize),

    #[error("vertex index {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("self-loop at vertex {0} is not permitted")]
    SelfLoop(usize),

    #[error("invalid supergraph cycle: {0}")]
    InvalidCycle(String),

    #[error("more than {0} simple cycles")]
    CycleLimitExceeded(usize),

    #[error("solver explored more than {0} search nodes")]
    SolverBudgetExceeded(u64),

    #[error("generalized-cycle search exceeded {0} candidates")]
    SearchLimitExceeded(u64),

    #[error("invalid generalized-cycle subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("invalid cycle packing: {0}")]
    InvalidPacking(String),

    #[error("packing has {found} cycles but the maximum is {maximum}")]
    PackingNotMaximum { found: usize, maximum: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("side-information graph has {edges} edges, oracle limit is {limit}")]
    TooLarge { edges: usize, limit: usize },

    #[error("unsupported field size {0}")]
    UnsupportedField(u32),

    #[error("minor search exceeded {0} nodes")]
    BudgetExceeded(u64),

    #[error("graph has {vertices} vertices, minor search limit is {limit}")]
    MinorVertexLimit { vertices: usize, limit: usize },

    #[error("problem is neither a generalized cycle nor demand-decomposable")]
    NotApplicable,

    #[error("generator gave up after {0} attempts")]
    RetryLimitExceeded(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a configured resource limit rather than bad input.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CycleLimitExceeded(_)
                | Error::SolverBudgetExceeded(_)
                | Error::SearchLimitExceeded(_)
                | Error::TooLarge { .. }
                | Error::BudgetExceeded(_)
                | Error::MinorVertexLimit { .. }
                | Error::RetryLimitExceeded(_)
        )
    }
}
