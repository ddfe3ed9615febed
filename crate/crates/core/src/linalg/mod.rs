//! Exact fields, sparse matrices and subspace arithmetic.

pub mod field;
pub mod sparse;
pub mod subspace;

pub use field::{q, q_frac, Field, FieldScalar, PrimeField, Rationals, Q};
pub use sparse::{QMatrix, SparseMatrix, SparseVec};
pub use subspace::{express_in_span, inverse, kernel, kernel_of_rows, rank, rref, solve_square, Echelon, SubspaceBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("{0} is not a prime below 2^63")]
    InvalidModulus(u64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
}
