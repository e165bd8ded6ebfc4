use thiserror::Error;

/// Errors produced by series construction, the regression kernel and the
/// individual tests.
///
/// Inside the full battery every test-level error is converted into a
/// skipped row; only construction errors reach the caller.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("timestamps and values differ in length ({timestamps} vs {values})")]
    LengthMismatch { timestamps: usize, values: usize },

    #[error("series too short: {needed} observations required, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("timestamps must be strictly increasing (violated at position {position})")]
    NonMonotonicIndex { position: usize },

    #[error("non-finite value at position {position}")]
    NonFiniteValue { position: usize },

    #[error("design matrix is rank deficient (rank {rank} < {columns} columns)")]
    RankDeficient { rank: usize, columns: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lag {lag} too large for {len} observations")]
    LagTooLarge { lag: usize, len: usize },

    #[error("invalid segment count {0} (must be at least 2)")]
    BadK(usize),

    #[error("invalid seasonal period {0}")]
    BadPeriod(usize),

    #[error("segment {0} has zero spread")]
    DegenerateSegment(usize),

    #[error("segment {0} has zero variance")]
    ZeroVariance(usize),

    #[error("seasonal plus remainder component has zero variance")]
    DegenerateVariance,

    #[error("every phase group needs {needed} observations, the smallest has {got}")]
    GroupTooSmall { needed: usize, got: usize },

    #[error("all detrended values are tied")]
    AllTied,

    #[error("trend classification needs adf, kpss and pp under both specifications plus zivot_andrews: {0}")]
    WrongResultSet(String),

    #[error("invalid synthetic spec: {0}")]
    BadSpec(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),

    #[error("table format error: {0}")]
    TableFormat(String),

    #[error("failed to write {path}: {message}")]
    FileWriteError { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
