use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus {got} is out of range (need g >= {min})")]
    GenusOutOfRange { got: u32, min: u32 },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("truncation margin violated: need precision {needed}, series has {available}")]
    TruncationMargin { needed: u32, available: u32 },

    #[error("requested term {0} lies outside the truncation")]
    OutOfTruncation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("incomplete table: missing entry {0}")]
    IncompleteTable(String),

    #[error("fixed-point iteration did not stabilise within {0} steps")]
    NoConvergence(u32),
}
