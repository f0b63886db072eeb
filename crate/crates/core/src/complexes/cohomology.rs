//! Subcomplexes, cohomology dimensions and coboundary tests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::{kernel_matrix, rank, ColumnEchelon, SparseMatrix, SparseVec};
use crate::structures::EntwiningStructure;

use super::operators::{cyclic_tau, full_twist, hochschild_delta};
use super::space::{Cochain, TensorSpace};
use super::ComplexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    /// The full complex `C^•(A, C, ψ)`.
    Hochschild,
    /// The subcomplex `ker(τ - 1)`.
    Cyclic,
    /// The subcomplex fixed by the unsigned full twist.
    Invariant,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Hochschild => "hochschild",
            Theory::Cyclic => "cyclic",
            Theory::Invariant => "invariant",
        })
    }
}

impl FromStr for Theory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hochschild" => Ok(Theory::Hochschild),
            "cyclic" => Ok(Theory::Cyclic),
            "invariant" => Ok(Theory::Invariant),
            other => Err(format!("unknown theory `{other}`")),
        }
    }
}

fn minus_identity(m: &SparseMatrix) -> SparseMatrix {
    m.sub(&SparseMatrix::identity(m.field(), m.rows())).expect("square operator")
}

/// Basis of the invariant cochains: `ker(U - 1)` for the full twist `U`.
pub fn invariant_basis(s: &EntwiningStructure, n: usize) -> SparseMatrix {
    kernel_matrix(&minus_identity(&full_twist(s, n).matrix))
}

/// Basis of the cyclic cochains `ker(τ_n - 1)`.
pub fn cyclic_basis(s: &EntwiningStructure, n: usize) -> SparseMatrix {
    kernel_matrix(&minus_identity(&cyclic_tau(s, n).matrix))
}

/// Basis (as matrix columns) of the degree-`n` part of the chosen subcomplex.
pub fn subcomplex_basis(s: &EntwiningStructure, theory: Theory, n: usize) -> SparseMatrix {
    match theory {
        Theory::Hochschild => SparseMatrix::identity(s.field(), TensorSpace::degree(s, n).dim()),
        Theory::Cyclic => cyclic_basis(s, n),
        Theory::Invariant => invariant_basis(s, n),
    }
}

/// Expresses `op · source_basis` in the coordinates of `target_basis`.
/// Fails with the first source basis vector whose image leaves the span.
pub fn restrict(
    op: &SparseMatrix,
    source_basis: &SparseMatrix,
    target_basis: &SparseMatrix,
) -> Result<SparseMatrix, ComplexError> {
    let image = op.mul(source_basis)?;
    let e = ColumnEchelon::new(target_basis);
    let mut cols = Vec::with_capacity(image.cols());
    for (j, col) in image.columns().iter().enumerate() {
        match e.solve(col)? {
            Some(x) => cols.push(x),
            None => return Err(ComplexError::NotPreserved { basis_vector: j }),
        }
    }
    Ok(SparseMatrix::from_columns(op.field(), target_basis.cols(), cols)?)
}

#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub theory: Theory,
    pub degree: usize,
    pub dim: usize,
    /// Dimension of the degree-`n` cochain space of the subcomplex.
    pub cochain_dim: usize,
    /// Columns span the cocycles, in full cochain coordinates.
    pub cocycle_basis: SparseMatrix,
    /// Columns span the coboundaries, in full cochain coordinates.
    pub coboundary_basis: SparseMatrix,
}

/// Cohomology of a subcomplex in degrees `0..=max`, reusing each coboundary
/// matrix for two consecutive degrees.
pub fn cohomology_range(s: &EntwiningStructure, theory: Theory, max: usize) -> Vec<CohomologyGroup> {
    let bases: Vec<SparseMatrix> = (0..=max).map(|n| subcomplex_basis(s, theory, n)).collect();
    let images: Vec<SparseMatrix> = (0..=max)
        .map(|n| hochschild_delta(s, n).matrix.mul(&bases[n]).expect("basis lives in the cochain space"))
        .collect();
    let mut out = Vec::with_capacity(max + 1);
    let mut prev_boundaries = SparseMatrix::zero(s.field(), TensorSpace::degree(s, 0).dim(), 0);
    for n in 0..=max {
        let e = ColumnEchelon::new(&images[n]);
        let kernel =
            SparseMatrix::from_columns(s.field(), bases[n].cols(), e.kernel().to_vec()).expect("in range");
        let cocycles = bases[n].mul(&kernel).expect("shapes agree");
        let boundary_rank = prev_boundaries.cols();
        out.push(CohomologyGroup {
            theory,
            degree: n,
            dim: kernel.cols() - boundary_rank,
            cochain_dim: bases[n].cols(),
            cocycle_basis: cocycles,
            coboundary_basis: prev_boundaries,
        });
        prev_boundaries = images[n].select_columns(e.pivot_columns());
    }
    out
}

pub fn cohomology(s: &EntwiningStructure, theory: Theory, n: usize) -> CohomologyGroup {
    cohomology_range(s, theory, n).pop().expect("nonempty range")
}

/// Dimensions only, for degrees `0..=max`.
pub fn cohomology_dims(s: &EntwiningStructure, theory: Theory, max: usize) -> Vec<usize> {
    let bases: Vec<SparseMatrix> = (0..=max).map(|n| subcomplex_basis(s, theory, n)).collect();
    let ranks: Vec<usize> =
        (0..=max).map(|n| rank(&hochschild_delta(s, n).matrix.mul(&bases[n]).expect("shapes"))).collect();
    (0..=max).map(|n| bases[n].cols() - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
}

/// The outcome of a successful coboundary test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preimage {
    /// `g = δ g'` with `g'` in the subcomplex.
    Cochain(Cochain),
    /// `g = 0` in degree 0, where there is nothing to take a preimage in.
    Trivial,
}

/// Decides whether `g` is a coboundary inside the chosen subcomplex and
/// returns a preimage if so.
pub fn is_coboundary(
    s: &EntwiningStructure,
    theory: Theory,
    g: &Cochain,
) -> Result<Option<Preimage>, ComplexError> {
    let n = g.degree();
    if g.space != TensorSpace::degree(s, n) || g.field != s.field() {
        return Err(ComplexError::SpaceMismatch);
    }
    let basis = subcomplex_basis(s, theory, n);
    if !ColumnEchelon::new(&basis).contains(&g.values) {
        return Err(ComplexError::NotInSubcomplex(theory));
    }
    if n == 0 {
        return Ok(g.is_zero().then_some(Preimage::Trivial));
    }
    let prev = subcomplex_basis(s, theory, n - 1);
    let image = hochschild_delta(s, n - 1).matrix.mul(&prev)?;
    let Some(x) = ColumnEchelon::new(&image).solve(&g.values)? else {
        return Ok(None);
    };
    let values: SparseVec = prev.mul_vec(&x);
    Ok(Some(Preimage::Cochain(Cochain::from_values(s, n - 1, values)?)))
}

/// Whether `g` lies in the degree-`n` part of the subcomplex.
pub fn in_subcomplex(s: &EntwiningStructure, theory: Theory, g: &Cochain) -> bool {
    let basis = subcomplex_basis(s, theory, g.degree());
    ColumnEchelon::new(&basis).contains(&g.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactField;

    #[test]
    fn trivial_structure_dimensions() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        assert_eq!(cohomology_dims(&s, Theory::Cyclic, 4), vec![1, 0, 1, 0, 1]);
        assert_eq!(cohomology_dims(&s, Theory::Hochschild, 4), vec![1, 0, 0, 0, 0]);
        let groups = cohomology_range(&s, Theory::Cyclic, 4);
        let dims: Vec<usize> = groups.iter().map(|g| g.dim).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn degree_two_class_is_not_a_coboundary() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let g = Cochain::from_values(&s, 2, vec![(0, s.field().one())]).unwrap();
        assert_eq!(is_coboundary(&s, Theory::Cyclic, &g).unwrap(), None);
        let zero = Cochain::zero(&s, 0);
        assert_eq!(is_coboundary(&s, Theory::Cyclic, &zero).unwrap(), Some(Preimage::Trivial));
        let odd = Cochain::from_values(&s, 1, vec![(0, s.field().one())]).unwrap();
        assert!(is_coboundary(&s, Theory::Cyclic, &odd).is_err());
    }
}
