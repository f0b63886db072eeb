//! The Hochschild complex of an entwining structure, its cyclic and
//! invariant subcomplexes, and the cocyclic operators.

pub mod cocyclic;
pub mod cohomology;
pub mod operators;
pub mod space;

use thiserror::Error;

use crate::linalg::MatrixError;
use crate::structures::StructureError;

pub use cocyclic::{cocyclic_check, CocyclicOperators, CocyclicReport, IdentityVerdict};
pub use cohomology::{
    cohomology, cohomology_dims, cohomology_range, cyclic_basis, in_subcomplex, invariant_basis,
    is_coboundary, restrict, subcomplex_basis, CohomologyGroup, Preimage, Theory,
};
pub use operators::{
    chain_boundary, chain_degeneracy, chain_face, chain_rotation, codegeneracy, coface, cyclic_tau,
    faces_and_degeneracies, full_twist, hochschild_delta, LinearOperator,
};
pub use space::{Cochain, TensorSpace};

/// Default bound on the dimension of a cochain space.
pub const DEFAULT_SIZE_GUARD: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("operator spaces do not match")]
    SpaceMismatch,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} algebra slots, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{what} index {index} is out of range in degree {degree}")]
    OperatorIndex { what: &'static str, index: usize, degree: usize },
    #[error("cochain is not in the {0} subcomplex")]
    NotInSubcomplex(Theory),
    #[error("operator does not preserve the subspace (basis vector {basis_vector})")]
    NotPreserved { basis_vector: usize },
    #[error("cochain space of dimension {dim} exceeds the guard {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Refuses cochain spaces beyond `limit` basis elements.
pub fn check_size(
    s: &crate::structures::EntwiningStructure,
    n: usize,
    limit: usize,
) -> Result<(), ComplexError> {
    match TensorSpace::degree(s, n).checked_dim() {
        Some(d) if d <= limit => Ok(()),
        Some(d) => Err(ComplexError::TooLarge { dim: d, limit }),
        None => Err(ComplexError::TooLarge { dim: usize::MAX, limit }),
    }
}
