use thiserror::Error;

/// Errors raised by the library. Law-check failures are data, not errors,
/// and live in [`crate::laws::LawReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid datum: {0}")]
    Validation(String),
    #[error("generator index {index} out of range for rank {rank}")]
    Index { index: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vector is not a unit root: (t,t) = {0}")]
    NotUnit(String),
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("roots generate a finite dihedral subgroup: (x,y) = {0}")]
    FiniteDihedral(String),
    #[error("root does not lie in the plane of the frame: {0}")]
    NotInPlane(String),
    #[error("root matches no chain position of the frame: {0}")]
    NotInSubsystem(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
