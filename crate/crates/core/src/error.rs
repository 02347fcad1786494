use thiserror::Error;

use crate::scalar::ScalarError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Scalar(#[from] ScalarError),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("semigroup of order {0} exceeds the isomorphism search cap of {1}")]
    SearchCapExceeded(usize, usize),
    #[error("semigroup `{0}` has no zero element")]
    NoZero(String),
    #[error("resonance violated: S_{p} * S_{q} contains lambda_{element}, outside the allowed subsets")]
    ResonanceViolated { p: usize, q: usize, element: usize },
    #[error("sign identification is inconsistent at lambda_{a} * lambda_{b}")]
    InconsistentPairing { a: usize, b: usize },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
