use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{op} is not defined for {family}")]
    Unsupported { op: &'static str, family: String },
    #[error("rank must be at least 1")]
    InvalidRank,
    #[error("part size {part} occurs {multiplicity} times; {family} needs an even multiplicity")]
    Parity { part: usize, multiplicity: usize, family: String },
    #[error("partition sums to {sum}, expected {n}")]
    PartitionSum { sum: usize, n: usize },
    #[error("matrix does not lie in {0}")]
    NotInAlgebra(String),
    #[error("the zero element has no sl2 triple")]
    NoSl2,
    #[error("grading error: {0}")]
    Grading(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
