//! Exact rational scalars and sparse linear algebra.

mod echelon;
mod rational;
mod sparse;

pub use echelon::{nullspace, rank, rref, solve, span_contains, span_eq, span_rank, Echelon};
pub(crate) use echelon::dense_to_sparse;
pub(crate) use sparse::canonical_row as sparse_canonical;
pub use rational::{q, ParseRationalError, Rational};
pub use sparse::{SparseMatrix, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("row {row} has {len} entries, expected {cols}")]
    RaggedRow { row: usize, len: usize, cols: usize },
    #[error("right-hand side has length {got}, expected {expected}")]
    RhsLength { expected: usize, got: usize },
    #[error("inconsistent system: row {row} reduces to 0 = nonzero")]
    Inconsistent { row: usize },
}
