use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Header or schema declaration does not line up with the file.
    #[error("schema mismatch on column `{column}`: {reason}")]
    Schema { column: String, reason: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("row {row}: cannot parse `{value}` in column `{column}`")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("partition error: stratum {stratum} has {size} members, need at least {needed}")]
    Partition {
        stratum: String,
        size: usize,
        needed: usize,
    },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("training diverged at step {step}: non-finite loss")]
    Divergence { step: usize },

    #[error("feature arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A rate whose denominator is zero (e.g. no positives in a group).
    #[error("undefined rate: {0}")]
    UndefinedRate(String),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("degenerate pool: {0}")]
    DegeneratePool(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
