//! Shared helpers for the integration tests: the shipped corpus, seeded
//! random structures and the dense reference implementation.

#![allow(dead_code)]

pub mod oracle;
pub mod random;

use std::path::PathBuf;

use entwine::cli::{CochainFile, StructureFile};
use entwine::complexes::{cohomology, Cochain, Theory};
use entwine::structures::EntwiningStructure;

/// Every valid structure in the corpus.
pub const CORPUS: &[&str] = &[
    "ground",
    "dual_numbers",
    "dual_numbers_grouplike",
    "dual_numbers_graded",
    "diagonal_divided_powers",
    "matrix_ground_r2",
];

/// Corpus structures with algebra and coalgebra of dimension at most 2.
pub const SMALL_CORPUS: &[&str] =
    &["ground", "dual_numbers", "dual_numbers_grouplike", "dual_numbers_graded", "diagonal_divided_powers"];

pub fn corpus_path(name: &str) -> PathBuf {
    let file = if name.ends_with(".json") { name.to_string() } else { format!("{name}.json") };
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(file)
}

pub fn corpus(name: &str) -> EntwiningStructure {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    StructureFile::parse(&text).and_then(|f| f.to_structure(None)).expect("corpus structure")
}

pub fn corpus_cochain(s: &EntwiningStructure, name: &str) -> Cochain {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    CochainFile::parse(&text).and_then(|f| f.to_cochain(s)).expect("corpus cochain")
}

pub fn named(names: &[&str]) -> Vec<(String, EntwiningStructure)> {
    names.iter().map(|n| (n.to_string(), corpus(n))).collect()
}

/// A basis of the cyclic cocycles in degree `n`.
pub fn cyclic_cocycles(s: &EntwiningStructure, n: usize) -> Vec<Cochain> {
    cohomology(s, Theory::Cyclic, n)
        .cocycle_basis
        .columns()
        .iter()
        .map(|v| Cochain::from_values(s, n, v.clone()).expect("cocycle"))
        .collect()
}
