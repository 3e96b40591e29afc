use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed scalar {0:?}")]
pub struct ScalarParseError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Scalar(#[from] ScalarParseError),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("duplicate identifier {0:?}")]
    Duplicate(String),
    #[error("malformed groupoid table: {0}")]
    Table(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("action is not by bijections: {0}")]
    BadAction(String),
    #[error("parent groupoid mismatch: {0}")]
    ParentMismatch(String),
    #[error("invalid {what}: {violations:?}")]
    Invalid {
        what: &'static str,
        violations: Vec<String>,
    },
    #[error("module does not have constant rank; rank function {0:?}")]
    NonConstantRank(Vec<(String, usize)>),
    #[error("points {0:?} and {1:?} lie in different fibers")]
    DifferentFibers(String, String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("{0}")]
    Json(String),
    #[error("nothing named {0:?} in the workspace")]
    UnknownName(String),
    #[error("{0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
