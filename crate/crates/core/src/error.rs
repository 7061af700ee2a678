use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("budget exceeded: {requested} items requested, budget is {budget}")]
    BudgetExceeded { requested: String, budget: u64 },
    #[error("too few codewords: have {have}, need {need}")]
    TooFewCodewords { have: u64, need: u64 },
    #[error("code has repeated codewords")]
    NotSimple,
    #[error("{k} does not divide {n}")]
    NotDivisible { n: usize, k: usize },
    #[error("code has {have} codewords but the network needs {need}")]
    CodeTooSmall { have: u64, need: u64 },
    #[error("receiver {receiver:?} only sees a {span_dim}-dimensional span, needs {needed}")]
    CodeInvalid {
        receiver: Vec<usize>,
        span_dim: usize,
        needed: usize,
    },
    #[error("receiver {receiver:?} has a singular decoding system")]
    SingularSystem { receiver: Vec<usize> },
    #[error("expected {expected} strings, got {got}")]
    WrongCount { expected: u64, got: u64 },
    #[error("string {index} has length {got}, expected {expected}")]
    WrongLength {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("generator has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("columns {columns:?} are linearly dependent")]
    IndependenceViolated { columns: Vec<usize> },
    #[error("missing exact value for {0}")]
    MissingExactValue(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("store conflict: {0}")]
    StoreConflict(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Stable snake_case name for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAPrimePower(_) => "not_a_prime_power",
            Error::Unsupported(_) => "unsupported",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidArgs(_) => "invalid_args",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::TooFewCodewords { .. } => "too_few_codewords",
            Error::NotSimple => "not_simple",
            Error::NotDivisible { .. } => "not_divisible",
            Error::CodeTooSmall { .. } => "code_too_small",
            Error::CodeInvalid { .. } => "code_invalid",
            Error::SingularSystem { .. } => "singular_system",
            Error::WrongCount { .. } => "wrong_count",
            Error::WrongLength { .. } => "wrong_length",
            Error::ZeroColumn(_) => "zero_column",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::IndependenceViolated { .. } => "independence_violated",
            Error::MissingExactValue(_) => "missing_exact_value",
            Error::Parse(_) => "parse",
            Error::StoreConflict(_) => "store_conflict",
            Error::Io(_) => "io",
        }
    }
}
