//! The truncated universal DGA, dg-entwining structures, entwined traces
//! and characters, and cochain functoriality along morphisms.

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::linalg::MatrixError;
use crate::structures::StructureError;

pub mod dg;
pub mod functorial;
pub mod trace;
pub mod universal;

pub use dg::{rho_hat, rho_hat_check, validate_dg_entwining, DgEntwining, DgReport, DgVerdict};
pub use functorial::{
    conjugation_check, pullback_cochain, pullback_matrix, pushforward_chain, vanishing_hypotheses_check,
    ConjugationDegree, ConjugationReport, VanishingVerdict,
};
pub use trace::{
    character, character_matrix, correspondence_check, trace_condition_matrix, trace_conditions,
    trace_from_cocycle, trace_lift_matrix, validate_trace, CorrespondenceReport, EntwinedTrace,
    TraceCondition, TraceReport,
};
pub use universal::{pass_through, OmegaWord, TruncatedOmega};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmegaError {
    #[error("degree {degree} exceeds the truncation degree {max}")]
    Truncated { degree: usize, max: usize },
    #[error("dimension of degree {degree} overflows")]
    TooLarge { degree: usize },
    #[error("malformed dg-entwining data: {0}")]
    Malformed(String),
    #[error("no base structure or map rho is attached")]
    NoBaseMap,
    #[error("cochain is not in the cyclic subcomplex")]
    NotCyclic,
    #[error("cochain is not a cyclic cocycle")]
    NotCocycle,
    #[error("trace fails {0}")]
    InvalidTrace(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("not a morphism of entwining structures: {0} fails")]
    NotAMorphism(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
