//! Algebras, coalgebras, entwining maps and the constructions built on them.

pub mod algebra;
pub mod constructions;
pub mod entwining;
pub mod morphism;

use thiserror::Error;

use crate::linalg::MatrixError;

pub use algebra::{FiniteAlgebra, FiniteCoalgebra};
pub use constructions::{matrix_extend, tensor_product, transport};
pub use entwining::{AxiomVerdict, EntwiningMap, EntwiningStructure, ValidationReport};
pub use morphism::{
    block_unit, inner_automorphism, psi_invariant_basis, unit_check, EntwiningMorphism, MorphismVerdict,
    UnitVerdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("{what}: expected dimension {expected}, got {got}")]
    DimensionMismatch { what: String, expected: usize, got: usize },
    #[error("{what}: index {index} out of range (dimension {bound})")]
    IndexOutOfRange { what: String, index: usize, bound: usize },
    #[error("structures or matrices live over different fields")]
    FieldMismatch,
    #[error("matrix size r must be at least 1")]
    ZeroMatrixSize,
    #[error("the algebra has no unit")]
    NotUnital,
    #[error("not a psi-invariant unit: {0}")]
    NotAUnit(String),
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("axiom {axiom} fails at {witness:?}")]
    AxiomFailure { axiom: String, witness: Vec<usize> },
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
