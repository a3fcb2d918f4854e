use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },

    #[error("{file}: unexpected header {found:?}, expected {expected:?}")]
    Header {
        file: String,
        found: Vec<String>,
        expected: Vec<String>,
    },

    #[error("bills:{line}: bill {bill_id} references unknown {field} {agent_id}")]
    DanglingReference {
        line: u64,
        bill_id: String,
        field: &'static str,
        agent_id: String,
    },

    #[error("{file}:{line}: duplicate {kind} id {id}")]
    DuplicateId {
        file: String,
        line: u64,
        kind: &'static str,
        id: String,
    },

    #[error("agents:{line}: agent {agent_id} has unknown region code {code}")]
    UnknownRegion {
        line: u64,
        agent_id: String,
        code: String,
    },

    #[error("invalid taxonomy: {0}")]
    Taxonomy(String),

    #[error("dataset has no bills")]
    EmptyDataset,

    #[error("infeasible synthesis config: {0}")]
    Infeasible(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("graph has no edges")]
    NoEdges,

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    Convergence { iterations: usize, residual: f64 },

    #[error("no centralization bound for {0}")]
    UnknownNormalization(String),

    #[error("no multi-transaction drawers")]
    NoMultiTransactionDrawers,

    #[error("role {role} has {found} actors, need at least {needed}")]
    RoleTooSmall {
        role: &'static str,
        found: usize,
        needed: usize,
    },

    #[error("drawer set is empty")]
    NoDrawers,

    #[error("discounter {0} has no drawers")]
    EmptyPortfolio(String),

    #[error("empty sample")]
    EmptySample,

    #[error("sample contains NaN")]
    NanInSample,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least {needed} observations, got {found}")]
    TooFewObservations { needed: usize, found: usize },

    #[error("zero variance")]
    DegenerateVariance,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{block}: {source}")]
    Block {
        block: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
