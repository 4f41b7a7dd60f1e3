use thiserror::Error;

/// Errors raised while assembling an attribute space.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("attribute space must contain at least one attribute")]
    NoAttributes,
    #[error("realization width must be at least 1")]
    ZeroWidth,
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("attribute `{attribute}` has duplicate realization `{realization}`")]
    DuplicateRealization {
        attribute: String,
        realization: String,
    },
    #[error("attribute `{attribute}` declares no realizations")]
    EmptyAttribute { attribute: String },
    #[error("attribute `{attribute}` has {count} realizations, exceeding width {p}")]
    TooManyRealizations {
        attribute: String,
        count: usize,
        p: usize,
    },
}

/// Errors raised by matrix construction and matching operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matrix must have at least one row")]
    EmptyMatrix,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("capability entry ({row},{col}) is {value}, expected 0 or 1")]
    NonBinaryEntry { row: usize, col: usize, value: i8 },
    #[error("dimension mismatch: {left_m}x{left_p} vs {right_m}x{right_p}")]
    DimensionMismatch {
        left_m: usize,
        left_p: usize,
        right_m: usize,
        right_p: usize,
    },
    #[error("registry contains no suppliers")]
    EmptyRegistry,
    #[error("series contains no tenders")]
    EmptySeries,
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
}
