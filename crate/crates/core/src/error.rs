use thiserror::Error;

/// Errors raised by the library. Budget overruns are kept distinct so that
/// callers can report them separately from invalid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} needs {needed} elements, budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero dimension vector")]
    ZeroDimension,
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("cycle is not composable at position {position}")]
    NotComposable { position: usize },
    #[error("open cycle: ends at `{end}` but starts at `{start}`")]
    OpenCycle { start: String, end: String },
    #[error("empty cycle")]
    EmptyCycle,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("subspace tuple is not closed under arrow `{0}`")]
    NotClosed(String),
    #[error("element is not equivariant under the scaling action")]
    NotEquivariant,
    #[error("potential is not homogeneous: cycle `{first}` has weight {first_weight}, cycle `{second}` has weight {second_weight}")]
    NotHomogeneous {
        first: String,
        first_weight: u64,
        second: String,
        second_weight: u64,
    },
    #[error("weight is zero on cycle `{0}`")]
    ZeroWeightCycle(String),
    #[error("invalid framing arrow `{0}`: exactly one endpoint must be the framing vertex")]
    InvalidFraming(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn budget(what: &'static str, needed: impl ToString, limit: u64) -> Error {
    Error::BudgetExceeded {
        what,
        needed: needed.to_string(),
        limit,
    }
}
