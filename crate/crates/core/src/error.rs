use thiserror::Error;

/// Errors raised by the algebra, calculus and certificate routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("word {0:?} has degree 1 and no standard factorization")]
    NoFactorization(String),
    #[error("word {0:?} is not a Lyndon word")]
    NotLyndon(String),
    #[error("unbound symbol {0:?}")]
    UnboundSymbol(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("operation is undefined on the zero element: {0}")]
    ZeroElement(&'static str),
    #[error("invalid division: {0}")]
    InvalidDivision(&'static str),
    #[error("shifted factors must be pairwise distinct, {0} repeats")]
    RepeatedShift(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("element has a degree-1 component and is not in L^2")]
    NotInL2,
    #[error("decomposition failed on homogeneous piece {witness}")]
    DecompositionFailure { witness: String },
    #[error("invalid line: {0}")]
    InvalidLine(&'static str),
    #[error("element {0} is not on the line")]
    OffLine(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("{message} at line {line}, column {column}")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("quantifier over {0:?} is missing a bound")]
    MissingBound(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("malformed json: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable tag, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "invalid-alphabet",
            Error::NoFactorization(_) => "no-factorization",
            Error::NotLyndon(_) => "not-lyndon",
            Error::UnboundSymbol(_) => "unbound-symbol",
            Error::RingMismatch(_) => "ring-mismatch",
            Error::AlgebraMismatch => "algebra-mismatch",
            Error::ZeroElement(_) => "zero-element",
            Error::InvalidDivision(_) => "invalid-division",
            Error::RepeatedShift(_) => "distinctness",
            Error::InconsistentInput(_) => "inconsistent-input",
            Error::NotInL2 => "not-in-l2",
            Error::DecompositionFailure { .. } => "decomposition-failure",
            Error::InvalidLine(_) => "invalid-line",
            Error::OffLine(_) => "off-line",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidWindow(_) => "invalid-window",
            Error::InvalidInstance(_) => "invalid-instance",
            Error::TooLarge(_) => "too-large",
            Error::Internal(_) => "internal",
            Error::Syntax { .. } => "syntax",
            Error::MissingBound(_) => "missing-bound",
            Error::Sort(_) => "sort",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
