use thiserror::Error;

/// Every failure the library can report. The CLI maps each variant to an exit code
/// through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("zero polynomial not allowed in {0}")]
    ZeroPolynomial(&'static str),

    #[error("polynomial division by {0} is not exact")]
    InexactDivision(String),

    #[error("fiber reduction exhausted after {attempts} hyperplane candidates")]
    FiberReductionExhausted { attempts: usize },

    #[error("dimension not certified: {nvars} variables exceed the exhaustive search bound")]
    DimensionNotCertified { nvars: usize },

    #[error("relative boundary hull contains the image closure: {0}")]
    StrictnessViolated(String),

    #[error("prime {prime} has bad reduction for this input")]
    BadReduction { prime: u64 },

    #[error("point oracle disagreement: {0}")]
    OracleMismatch(String),

    #[error("pre-node FIFO is empty")]
    EmptyFifo,

    #[error("negative node {0} is not part of the graph")]
    NodeNotInGraph(usize),

    #[error("graph still has {0} pending pre-nodes")]
    PendingPreNodes(usize),

    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("orbit problem: {0}")]
    Orbit(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Exit code contract of the command line tool: 2 for malformed input,
    /// 3 for budget or search exhaustion, 4 for oracle disagreement, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnknownVariable(_)
            | Error::InvalidRing(_)
            | Error::InvalidProblem(_)
            | Error::Json(_)
            | Error::ZeroPolynomial(_)
            | Error::DimensionMismatch { .. } => 2,
            Error::FiberReductionExhausted { .. }
            | Error::DimensionNotCertified { .. }
            | Error::Budget(_) => 3,
            Error::OracleMismatch(_) => 4,
            _ => 1,
        }
    }

    /// Stable machine-readable identifier used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ContextMismatch(_) => "context_mismatch",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::InvalidRing(_) => "invalid_ring",
            Error::Parse { .. } => "parse",
            Error::ZeroPolynomial(_) => "zero_polynomial",
            Error::InexactDivision(_) => "inexact_division",
            Error::FiberReductionExhausted { .. } => "fiber_reduction_exhausted",
            Error::DimensionNotCertified { .. } => "dimension_not_certified",
            Error::StrictnessViolated(_) => "strictness_violated",
            Error::BadReduction { .. } => "bad_reduction",
            Error::OracleMismatch(_) => "oracle_mismatch",
            Error::EmptyFifo => "empty_fifo",
            Error::NodeNotInGraph(_) => "node_not_in_graph",
            Error::PendingPreNodes(_) => "pending_pre_nodes",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Orbit(_) => "orbit",
            Error::InvalidProblem(_) => "invalid_problem",
            Error::Budget(_) => "budget",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
