use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("root order {order} exceeds cap {cap}")]
    RootOrderExceeded { order: String, cap: u64 },
    #[error("projection by {steps} steps needs dimension > {steps}, got {dim}")]
    DimensionTooSmall { steps: usize, dim: usize },
    #[error("value {0} not present in index array")]
    NotPresent(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operation requires a symmetric coloring")]
    ModeMismatch,
    #[error("no trichromatic cell: {0}")]
    NoSolution(String),
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("target out of range: {0}")]
    TargetOutOfRange(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RootOrderExceeded { .. } => "root_order_exceeded",
            Error::DimensionTooSmall { .. } => "dimension_too_small",
            Error::NotPresent(_) => "not_present",
            Error::Parse(_) => "parse",
            Error::InvalidInput(_) => "invalid_input",
            Error::ModeMismatch => "mode_mismatch",
            Error::NoSolution(_) => "no_solution",
            Error::NotASolution(_) => "not_a_solution",
            Error::TargetOutOfRange(_) => "target_out_of_range",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
