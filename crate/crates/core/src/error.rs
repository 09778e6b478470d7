use thiserror::Error;

use crate::sexp::Loc;

/// A syntax error with the position it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: {msg}")]
pub struct ParseError {
    pub loc: Loc,
    pub msg: String,
}

impl ParseError {
    pub fn new(loc: Loc, msg: impl Into<String>) -> Self {
        ParseError { loc, msg: msg.into() }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("{loc}: duplicate name `{name}`")]
    DuplicateName { name: String, loc: Loc },

    #[error("{loc}: `{symbol}` refers to undeclared sort `{sort}`")]
    UnknownSort { symbol: String, sort: String, loc: Loc },

    #[error("{loc}: unknown operation `{name}`")]
    UnknownOp { name: String, loc: Loc },

    #[error("{loc}: argument {position} of `{op}` has sort `{found}`, expected `{expected}`")]
    SortError { op: String, position: usize, expected: String, found: String, loc: Loc },

    #[error("{loc}: `{op}` takes {expected} argument(s), given {found}")]
    ArityMismatch { op: String, expected: usize, found: usize, loc: Loc },

    #[error("{loc}: unbound variable `{name}`")]
    UnboundVariable { name: String, loc: Loc },

    #[error("sort violation: {0}")]
    SortViolation(String),

    #[error("no element available for sort `{0}`")]
    MissingSort(String),

    #[error("carrier of sort `{0}` is empty")]
    EmptyCarrier(String),

    #[error("not a congruence: `{op}` on {tuple:?} sends related arguments to unrelated results")]
    NotACongruence { op: String, tuple: Vec<usize> },

    #[error("signature is not action-separated: {0}")]
    NotActionSeparable(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),

    #[error("free algebra construction exceeded its budget: {0}")]
    BudgetExceeded(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
