//! Command-line front end: argument definitions, file formats and the
//! commands themselves. The `entwine` binary is a thin wrapper over [`run`].

pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::complexes::{Theory, DEFAULT_SIZE_GUARD};
use crate::linalg::ExactField;

pub use commands::{run, Outcome};
pub use format::{CochainFile, FormatError, StructureFile, MAX_FILE_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Hochschild,
    Cyclic,
    Invariant,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Self {
        match t {
            TheoryArg::Hochschild => Theory::Hochschild,
            TheoryArg::Cyclic => Theory::Cyclic,
            TheoryArg::Invariant => Theory::Invariant,
        }
    }
}

/// Hochschild and cyclic cohomology of finite-dimensional entwining structures.
#[derive(Debug, Parser)]
#[command(name = "entwine", version)]
pub struct Cli {
    /// Coefficient field (`q` or `fp:P`), overriding the file's own.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<ExactField>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest cochain space (in basis elements) a command may build.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_GUARD)]
    pub max_dim_guard: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the algebra, coalgebra and entwining axioms.
    Validate { structure: PathBuf },
    /// Cohomology dimensions with cocycle and coboundary bases.
    Cohomology {
        structure: PathBuf,
        #[arg(long, value_enum, default_value_t = TheoryArg::Cyclic)]
        theory: TheoryArg,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Check the cocyclic module identities on the invariant cochains.
    CocyclicCheck {
        structure: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Check the Morita homotopy identities and compare dimensions with `M_r(A)`.
    Morita {
        structure: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Run beyond r ≤ 2, dimensions ≤ 2, degree ≤ 2.
        #[arg(long)]
        allow_large: bool,
    },
    /// Lift a cochain to an entwined trace and check the trace laws.
    TraceCheck { structure: PathBuf, cochain: PathBuf },
    /// Pair two cyclic cocycles into a cocycle of the tensor product structure.
    Pair { left: PathBuf, left_cochain: PathBuf, right: PathBuf, right_cochain: PathBuf },
    /// Check that conjugation by a psi-invariant unit acts trivially on cyclic cohomology.
    ConjugationCheck {
        structure: PathBuf,
        /// Coordinates of the unit, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
        /// Coordinates of its inverse, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        inverse: String,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
}

fn parse_field(s: &str) -> Result<ExactField, String> {
    s.parse().map_err(|e: crate::linalg::FieldError| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: FormatError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    /// A mathematical precondition failed; reported as a failed check.
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}
