use thiserror::Error;

/// Every failure the library can report.
///
/// Input errors (malformed documents, unknown labels, bad parameters) are
/// distinguished from precondition failures of the solvers so that callers
/// such as the CLI can map them onto different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("agent labels must be non-empty")]
    EmptyLabel,
    #[error("seat graph shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("self loop on `{0}`")]
    SelfLoop(String),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for a seat graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("assignment is not a bijection: {0}")]
    InvalidAssignment(String),
    #[error("agents in a swap must differ (got {0} twice)")]
    SameAgent(usize),
    #[error("seat graph is not a cycle")]
    NotACycle,
    #[error("seat graph is not a path")]
    NotAPath,
    #[error("no insertion point for agent {agent}: co-approvers are not pairwise comparable")]
    NoInsertionPoint { agent: usize },
    #[error("blocking pair ({i}, {j}) straddles two paths of a minimal partition")]
    TypeTwoDetected { i: usize, j: usize },
    #[error("({i}, {j}) is not an adjacent blocking pair: {reason}")]
    NotABlockingPair { i: usize, j: usize, reason: String },
    #[error("exact DFVS limited to {budget} agents, instance has {n}; supply a feedback set")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("preference graph restricted to the non-excluded agents has a cycle")]
    NotAcyclic,
    #[error("feedback set of size {dfvs} does not fit on {leaves} leaves")]
    InsufficientLeaves { dfvs: usize, leaves: usize },
    #[error("instance with {n} agents exceeds the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

impl Error {
    /// True for failures of a solver precondition or a size budget, as opposed
    /// to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::InsufficientLeaves { .. }
                | Error::TooLarge { .. }
                | Error::NoInsertionPoint { .. }
                | Error::TypeTwoDetected { .. }
                | Error::InvariantViolated(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
