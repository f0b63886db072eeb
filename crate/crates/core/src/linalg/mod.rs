//! Exact arithmetic and sparse linear algebra.

pub mod elimination;
pub mod field;
pub mod sparse;

pub use elimination::{
    column_space_basis, invert, kernel_basis, kernel_matrix, rank, same_span, solve_dense, solve_membership,
    span_contains, ColumnEchelon,
};
pub use field::{ExactField, FieldError, Scalar};
pub use sparse::{MatrixError, SparseMatrix, SparseVec};
