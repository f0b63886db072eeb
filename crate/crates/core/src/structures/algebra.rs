//! Finite-dimensional algebras and coalgebras given by structure constants.

use crate::linalg::sparse::{normalize, scale_vec};
use crate::linalg::{ExactField, Scalar, SparseMatrix, SparseVec};

use super::StructureError;

/// An associative algebra with basis `e_0..e_{dim-1}`; `e_i e_j` is stored at
/// `mul[i * dim + j]`. Non-unital algebras have `unit == None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    field: ExactField,
    dim: usize,
    mul: Vec<SparseVec>,
    unit: Option<SparseVec>,
}

impl FiniteAlgebra {
    /// Builds an algebra from `(i, j, k, θ)` entries meaning `θ e_k` occurs in `e_i e_j`.
    pub fn from_entries(
        field: ExactField,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        unit: Option<SparseVec>,
    ) -> Result<Self, StructureError> {
        let mut mul = vec![Vec::new(); dim * dim];
        for (i, j, k, v) in entries {
            for (what, idx) in [("left factor", i), ("right factor", j), ("product", k)] {
                if idx >= dim {
                    return Err(StructureError::IndexOutOfRange {
                        what: format!("algebra {what}"),
                        index: idx,
                        bound: dim,
                    });
                }
            }
            mul[i * dim + j].push((k, v));
        }
        let mul = mul.into_iter().map(normalize).collect();
        if let Some(u) = &unit {
            check_vec(u, dim, "algebra unit")?;
        }
        Ok(FiniteAlgebra { field, dim, mul, unit: unit.map(normalize) })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: ExactField) -> Self {
        Self::truncated_polynomial(field, 1)
    }

    /// `k[x]/(x^n)` with basis `1, x, .., x^{n-1}`.
    pub fn truncated_polynomial(field: ExactField, n: usize) -> Self {
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i + j < n)
            .map(|(i, j)| (i, j, i + j, field.one()));
        Self::from_entries(field, n, entries, Some(vec![(0, field.one())])).expect("in range")
    }

    /// `k[x]/(x^n - 1)`, the group algebra of the cyclic group of order `n`.
    pub fn cyclic_group_algebra(field: ExactField, n: usize) -> Self {
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j, (i + j) % n, field.one())));
        Self::from_entries(field, n, entries, Some(vec![(0, field.one())])).expect("in range")
    }

    /// The product algebra `k^n` of orthogonal idempotents.
    pub fn diagonal(field: ExactField, n: usize) -> Self {
        let entries = (0..n).map(|i| (i, i, i, field.one()));
        let unit = (0..n).map(|i| (i, field.one())).collect();
        Self::from_entries(field, n, entries, Some(unit)).expect("in range")
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    /// Forgets the unit.
    pub fn without_unit(&self) -> Self {
        FiniteAlgebra { unit: None, ..self.clone() }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i * self.dim + j]
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec {
        vec![(i, self.field.one())]
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (i, xi) in x {
            for (j, yj) in y {
                let w = xi * yj;
                for (k, t) in self.basis_product(*i, *j) {
                    acc.push((*k, &w * t));
                }
            }
        }
        normalize(acc)
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_multiplication(&self, x: &SparseVec) -> SparseMatrix {
        let cols = (0..self.dim).map(|j| self.multiply(x, &self.basis_vector(j))).collect();
        SparseMatrix::from_columns(self.field, self.dim, cols).expect("in range")
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_multiplication(&self, x: &SparseVec) -> SparseMatrix {
        let cols = (0..self.dim).map(|j| self.multiply(&self.basis_vector(j), x)).collect();
        SparseMatrix::from_columns(self.field, self.dim, cols).expect("in range")
    }

    /// Two-sided inverse of `x`, if it exists.
    pub fn inverse(&self, x: &SparseVec) -> Option<SparseVec> {
        let one = self.unit.as_ref()?;
        let y = crate::linalg::solve_membership(&self.left_multiplication(x), one).ok()??;
        (self.multiply(&y, x) == *one).then_some(y)
    }

    /// `(i, j, k, θ)` entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        let d = self.dim;
        self.mul
            .iter()
            .enumerate()
            .flat_map(move |(ij, v)| v.iter().map(move |(k, s)| (ij / d, ij % d, *k, s)))
    }

    pub(crate) fn first_associativity_failure(&self) -> Option<[usize; 3]> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.multiply(self.basis_product(i, j), &self.basis_vector(k));
                    let right = self.multiply(&self.basis_vector(i), self.basis_product(j, k));
                    if left != right {
                        return Some([i, j, k]);
                    }
                }
            }
        }
        None
    }

    pub(crate) fn first_unit_failure(&self) -> Option<usize> {
        let u = self.unit.as_ref()?;
        (0..self.dim).find(|&i| {
            let e = self.basis_vector(i);
            self.multiply(u, &e) != e || self.multiply(&e, u) != e
        })
    }
}

/// A coalgebra with basis `c_0..c_{dim-1}`; `comul[k]` is `Δ(c_k)` expressed
/// over the index `i * dim + j` of `c_i ⊗ c_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCoalgebra {
    field: ExactField,
    dim: usize,
    comul: Vec<SparseVec>,
    counit: Vec<Scalar>,
}

impl FiniteCoalgebra {
    /// Builds a coalgebra from `(k, i, j, w)` entries meaning `w c_i ⊗ c_j` occurs in `Δ(c_k)`.
    pub fn from_entries(
        field: ExactField,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>,
        counit: Vec<Scalar>,
    ) -> Result<Self, StructureError> {
        if counit.len() != dim {
            return Err(StructureError::DimensionMismatch {
                what: "coalgebra counit".into(),
                expected: dim,
                got: counit.len(),
            });
        }
        let mut comul = vec![Vec::new(); dim];
        for (k, i, j, v) in entries {
            for (what, idx) in [("source", k), ("left factor", i), ("right factor", j)] {
                if idx >= dim {
                    return Err(StructureError::IndexOutOfRange {
                        what: format!("coalgebra {what}"),
                        index: idx,
                        bound: dim,
                    });
                }
            }
            comul[k].push((i * dim + j, v));
        }
        Ok(FiniteCoalgebra { field, dim, comul: comul.into_iter().map(normalize).collect(), counit })
    }

    pub fn ground(field: ExactField) -> Self {
        Self::grouplike(field, 1)
    }

    /// `n` grouplike elements: `Δ(c_i) = c_i ⊗ c_i`, `ε(c_i) = 1`.
    pub fn grouplike(field: ExactField, n: usize) -> Self {
        let entries = (0..n).map(|i| (i, i, i, field.one()));
        Self::from_entries(field, n, entries, vec![field.one(); n]).expect("in range")
    }

    /// The dual of `k[x]/(x^n)`: `Δ(c_m) = Σ_{i+j=m} c_i ⊗ c_j`, `ε(c_m) = δ_{m0}`.
    pub fn divided_powers(field: ExactField, n: usize) -> Self {
        let entries = (0..n).flat_map(|m| (0..=m).map(move |i| (m, i, m - i, field.one())));
        let mut counit = vec![field.zero(); n];
        if n > 0 {
            counit[0] = field.one();
        }
        Self::from_entries(field, n, entries, counit).expect("in range")
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn comultiply_basis(&self, k: usize) -> &SparseVec {
        &self.comul[k]
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    pub fn comultiply(&self, x: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (k, s) in x {
            acc.extend(scale_vec(&self.comul[*k], s));
        }
        normalize(acc)
    }

    pub fn apply_counit(&self, x: &SparseVec) -> Scalar {
        let mut acc = self.field.zero();
        for (k, s) in x {
            acc += &(s * &self.counit[*k]);
        }
        acc
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> {
        let d = self.dim;
        self.comul
            .iter()
            .enumerate()
            .flat_map(move |(k, v)| v.iter().map(move |(ij, s)| (k, ij / d, ij % d, s)))
    }

    pub(crate) fn first_coassociativity_failure(&self) -> Option<usize> {
        let d = self.dim;
        (0..d).find(|&k| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (ij, w) in &self.comul[k] {
                let (i, j) = (ij / d, ij % d);
                for (pq, v) in &self.comul[i] {
                    left.push(((pq * d) + j, w * v));
                }
                for (pq, v) in &self.comul[j] {
                    right.push((i * d * d + pq, w * v));
                }
            }
            normalize(left) != normalize(right)
        })
    }

    pub(crate) fn first_counit_failure(&self) -> Option<usize> {
        let d = self.dim;
        (0..d).find(|&k| {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (ij, w) in &self.comul[k] {
                let (i, j) = (ij / d, ij % d);
                left.push((j, w * &self.counit[i]));
                right.push((i, w * &self.counit[j]));
            }
            let e = vec![(k, self.field.one())];
            normalize(left) != e || normalize(right) != e
        })
    }
}

fn check_vec(v: &SparseVec, dim: usize, what: &str) -> Result<(), StructureError> {
    match v.iter().find(|(i, _)| *i >= dim) {
        Some((i, _)) => {
            Err(StructureError::IndexOutOfRange { what: what.to_string(), index: *i, bound: dim })
        }
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers_are_associative_and_unital() {
        let a = FiniteAlgebra::truncated_polynomial(ExactField::Rationals, 2);
        assert_eq!(a.first_associativity_failure(), None);
        assert_eq!(a.first_unit_failure(), None);
        assert!(a.basis_product(1, 1).is_empty());
    }

    #[test]
    fn coalgebras_satisfy_their_laws() {
        let f = ExactField::Prime(5);
        for c in [FiniteCoalgebra::grouplike(f, 3), FiniteCoalgebra::divided_powers(f, 3)] {
            assert_eq!(c.first_coassociativity_failure(), None);
            assert_eq!(c.first_counit_failure(), None);
        }
    }

    #[test]
    fn inverse_in_group_algebra() {
        let f = ExactField::Rationals;
        let a = FiniteAlgebra::cyclic_group_algebra(f, 3);
        let g = a.basis_vector(1);
        assert_eq!(a.inverse(&g), Some(a.basis_vector(2)));
        let t = FiniteAlgebra::truncated_polynomial(f, 2);
        assert_eq!(t.inverse(&t.basis_vector(1)), None);
    }

    #[test]
    fn broken_product_is_detected() {
        let f = ExactField::Rationals;
        // e0 e0 = e1, everything else zero except e1 e0 = e0: (e0 e0) e0 = e1 e0 = e0, e0 (e0 e0) = e0 e1 = 0
        let a = FiniteAlgebra::from_entries(f, 2, [(0, 0, 1, f.one()), (1, 0, 0, f.one())], None).unwrap();
        assert_eq!(a.first_associativity_failure(), Some([0, 0, 0]));
    }
}
