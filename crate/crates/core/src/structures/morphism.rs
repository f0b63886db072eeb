//! Morphisms of entwining structures, ψ-invariant units and inner automorphisms.

use serde::Serialize;

use crate::linalg::sparse::normalize;
use crate::linalg::{kernel_matrix, SparseMatrix, SparseVec};

use super::constructions::{embed_entry, matrix_extend};
use super::entwining::EntwiningStructure;
use super::StructureError;

/// A pair `(α, γ)` with `α : A → A'` an algebra map (not necessarily unital)
/// and `γ : C → C'` a coalgebra map, compatible with ψ and ψ'.
#[derive(Debug, Clone)]
pub struct EntwiningMorphism {
    pub source: EntwiningStructure,
    pub target: EntwiningStructure,
    /// `dim A' × dim A`.
    pub alpha: SparseMatrix,
    /// `dim C' × dim C`.
    pub gamma: SparseMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismVerdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_law: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl MorphismVerdict {
    fn pass() -> Self {
        MorphismVerdict { passed: true, failed_law: None, witness: None }
    }

    fn fail(law: &str, witness: Vec<usize>) -> Self {
        MorphismVerdict { passed: false, failed_law: Some(law.to_string()), witness: Some(witness) }
    }
}

impl EntwiningMorphism {
    pub fn new(
        source: EntwiningStructure,
        target: EntwiningStructure,
        alpha: SparseMatrix,
        gamma: SparseMatrix,
    ) -> Result<Self, StructureError> {
        if alpha.shape() != (target.dim_a(), source.dim_a()) {
            return Err(StructureError::DimensionMismatch {
                what: "alpha".into(),
                expected: target.dim_a() * source.dim_a(),
                got: alpha.rows() * alpha.cols(),
            });
        }
        if gamma.shape() != (target.dim_c(), source.dim_c()) {
            return Err(StructureError::DimensionMismatch {
                what: "gamma".into(),
                expected: target.dim_c() * source.dim_c(),
                got: gamma.rows() * gamma.cols(),
            });
        }
        if source.field() != target.field()
            || alpha.field() != source.field()
            || gamma.field() != source.field()
        {
            return Err(StructureError::FieldMismatch);
        }
        Ok(EntwiningMorphism { source, target, alpha, gamma })
    }

    pub fn identity(s: &EntwiningStructure) -> Self {
        let f = s.field();
        EntwiningMorphism {
            source: s.clone(),
            target: s.clone(),
            alpha: SparseMatrix::identity(f, s.dim_a()),
            gamma: SparseMatrix::identity(f, s.dim_c()),
        }
    }

    /// `inc_p : A → M_r(A)`, `a ↦ a E_{pp}` (0-based `p`), with `γ = id`.
    pub fn inclusion(s: &EntwiningStructure, r: usize, p: usize) -> Result<Self, StructureError> {
        if p >= r {
            return Err(StructureError::IndexOutOfRange {
                what: "matrix position".into(),
                index: p,
                bound: r,
            });
        }
        let target = matrix_extend(s, r)?;
        let f = s.field();
        let cols = (0..s.dim_a()).map(|j| embed_entry(&vec![(j, f.one())], r, p, p)).collect();
        let alpha = SparseMatrix::from_columns(f, target.dim_a(), cols).expect("in range");
        Self::new(s.clone(), target, alpha, SparseMatrix::identity(f, s.dim_c()))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &EntwiningMorphism) -> Result<Self, StructureError> {
        if first.target != self.source {
            return Err(StructureError::Invalid("morphisms are not composable".into()));
        }
        Ok(EntwiningMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            alpha: self.alpha.mul(&first.alpha)?,
            gamma: self.gamma.mul(&first.gamma)?,
        })
    }

    /// Checks multiplicativity of α, the coalgebra-map laws for γ and
    /// `(α ⊗ γ) ∘ ψ = ψ' ∘ (γ ⊗ α)` on all basis elements.
    pub fn check(&self) -> MorphismVerdict {
        let (s, t) = (&self.source, &self.target);
        let (a, a2) = (s.algebra(), t.algebra());
        let (da, dc) = (s.dim_a(), s.dim_c());
        let dc2 = t.dim_c();
        for i in 0..da {
            for j in 0..da {
                let lhs = self.alpha.mul_vec(a.basis_product(i, j));
                let rhs = a2.multiply(self.alpha.column(i), self.alpha.column(j));
                if lhs != rhs {
                    return MorphismVerdict::fail("alpha-multiplicative", vec![i, j]);
                }
            }
        }
        for k in 0..dc {
            let mut lhs = Vec::new();
            for (ij, w) in s.coalgebra().comultiply_basis(k) {
                for (i2, v) in self.gamma.column(ij / dc) {
                    for (j2, u) in self.gamma.column(ij % dc) {
                        lhs.push((i2 * dc2 + j2, &(w * v) * u));
                    }
                }
            }
            if normalize(lhs) != t.coalgebra().comultiply(self.gamma.column(k)) {
                return MorphismVerdict::fail("gamma-comultiplicative", vec![k]);
            }
            if t.coalgebra().apply_counit(self.gamma.column(k)) != s.coalgebra().counit()[k] {
                return MorphismVerdict::fail("gamma-counital", vec![k]);
            }
        }
        for i in 0..dc {
            for j in 0..da {
                let mut lhs = Vec::new();
                for (p, q, w) in s.entwining().terms(i, j) {
                    for (p2, v) in self.alpha.column(p) {
                        for (q2, u) in self.gamma.column(q) {
                            lhs.push((p2 * dc2 + q2, &(w * v) * u));
                        }
                    }
                }
                let mut rhs = Vec::new();
                for (ci, v) in self.gamma.column(i) {
                    for (pq, u) in t.entwining().apply(*ci, self.alpha.column(j)) {
                        rhs.push((pq, v * &u));
                    }
                }
                if normalize(lhs) != normalize(rhs) {
                    return MorphismVerdict::fail("entwining-compatible", vec![i, j]);
                }
            }
        }
        MorphismVerdict::pass()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitVerdict {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

/// Whether `x` is a ψ-invariant unit with inverse `y`: `xy = yx = 1` and
/// `ψ(c ⊗ x) = x ⊗ c` for every basis element `c`.
pub fn unit_check(s: &EntwiningStructure, x: &SparseVec, y: &SparseVec) -> UnitVerdict {
    let a = s.algebra();
    let Some(one) = a.unit() else {
        return UnitVerdict { member: false, reason: Some("algebra is not unital".into()), witness: None };
    };
    if &a.multiply(x, y) != one || &a.multiply(y, x) != one {
        return UnitVerdict {
            member: false,
            reason: Some("y is not a two-sided inverse of x".into()),
            witness: None,
        };
    }
    let dc = s.dim_c();
    for i in 0..dc {
        let expected: SparseVec = x.iter().map(|(p, w)| (p * dc + i, w.clone())).collect();
        if s.entwining().apply(i, x) != normalize(expected) {
            return UnitVerdict {
                member: false,
                reason: Some("psi(c (x) x) != x (x) c".into()),
                witness: Some(i),
            };
        }
    }
    UnitVerdict { member: true, reason: None, witness: None }
}

/// Columns span the ψ-invariant elements `{x : ψ(c ⊗ x) = x ⊗ c for all c}`,
/// a subalgebra of `A` containing the ψ-invariant units.
pub fn psi_invariant_basis(s: &EntwiningStructure) -> SparseMatrix {
    let (da, dc) = (s.dim_a(), s.dim_c());
    let block = da * dc;
    let constraints = SparseMatrix::build_columns(s.field(), dc * block, da, |j| {
        let mut out = Vec::new();
        for i in 0..dc {
            for (k, w) in s.entwining().apply_basis(i, j) {
                out.push((i * block + k, w.clone()));
            }
            out.push((i * block + j * dc + i, -s.field().one()));
        }
        normalize(out)
    });
    kernel_matrix(&constraints)
}

/// The morphism `(φ_x, id_C)` with `φ_x(a) = x a y`.
pub fn inner_automorphism(
    s: &EntwiningStructure,
    x: &SparseVec,
    y: &SparseVec,
) -> Result<EntwiningMorphism, StructureError> {
    let v = unit_check(s, x, y);
    if !v.member {
        return Err(StructureError::NotAUnit(v.reason.unwrap_or_default()));
    }
    let a = s.algebra();
    let alpha = a.left_multiplication(x).mul(&a.right_multiplication(y))?;
    let m =
        EntwiningMorphism::new(s.clone(), s.clone(), alpha, SparseMatrix::identity(s.field(), s.dim_c()))?;
    let verdict = m.check();
    if !verdict.passed {
        return Err(StructureError::Invalid(format!(
            "conjugation failed {}",
            verdict.failed_law.unwrap_or_default()
        )));
    }
    Ok(m)
}

/// `diag(1, x)` and `diag(1, y)` in `M_2(A)`.
pub fn block_unit(
    s: &EntwiningStructure,
    x: &SparseVec,
    y: &SparseVec,
) -> Result<(SparseVec, SparseVec), StructureError> {
    let one = s.require_unital()?;
    let mk = |v: &SparseVec| {
        let mut out = embed_entry(one, 2, 0, 0);
        out.extend(embed_entry(v, 2, 1, 1));
        normalize(out)
    };
    Ok((mk(x), mk(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactField;
    use crate::structures::{FiniteAlgebra, FiniteCoalgebra};

    #[test]
    fn graded_invariants_are_the_even_part() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap();
        let b = psi_invariant_basis(&s);
        assert_eq!(b.cols(), 1);
        assert_eq!(b.column(0), &vec![(0, f.one())]);
        assert_eq!(psi_invariant_basis(&dual()).cols(), 2);
    }

    fn dual() -> EntwiningStructure {
        let f = ExactField::Rationals;
        EntwiningStructure::flip(FiniteAlgebra::truncated_polynomial(f, 2), FiniteCoalgebra::grouplike(f, 2))
            .unwrap()
    }

    #[test]
    fn identity_and_inclusion_are_morphisms() {
        let s = dual();
        assert!(EntwiningMorphism::identity(&s).check().passed);
        for p in 0..2 {
            assert!(EntwiningMorphism::inclusion(&s, 2, p).unwrap().check().passed);
        }
        assert!(EntwiningMorphism::inclusion(&s, 2, 2).is_err());
    }

    #[test]
    fn scrambled_alpha_fails() {
        let s = dual();
        let f = s.field();
        let swap = SparseMatrix::from_triplets(f, 2, 2, [(1, 0, f.one()), (0, 1, f.one())]).unwrap();
        let m = EntwiningMorphism::new(s.clone(), s.clone(), swap, SparseMatrix::identity(f, 2)).unwrap();
        let v = m.check();
        assert!(!v.passed);
        assert_eq!(v.failed_law.as_deref(), Some("alpha-multiplicative"));
    }

    #[test]
    fn permutation_matrix_is_invariant_unit() {
        let f = ExactField::Rationals;
        let m2 = matrix_extend(&EntwiningStructure::trivial(f), 2).unwrap();
        let x = vec![(1, f.one()), (2, f.one())];
        assert!(unit_check(&m2, &x, &x).member);
        assert!(!unit_check(&m2, &vec![], &x).member);
        let one = m2.algebra().unit().unwrap().clone();
        assert!(unit_check(&m2, &one, &one).member);
        let phi = inner_automorphism(&m2, &x, &x).unwrap();
        assert!(phi.check().passed);
    }

    #[test]
    fn conjugations_compose() {
        let f = ExactField::Rationals;
        let m2 = matrix_extend(&EntwiningStructure::trivial(f), 2).unwrap();
        // x = [[1,1],[0,1]], y = x^{-1} = [[1,-1],[0,1]]
        let x = vec![(0, f.one()), (1, f.one()), (3, f.one())];
        let y = vec![(0, f.one()), (1, f.from_i64(-1)), (3, f.one())];
        let px = inner_automorphism(&m2, &x, &y).unwrap();
        let py = inner_automorphism(&m2, &y, &x).unwrap();
        let both = px.after(&py).unwrap();
        assert_eq!(both.alpha, SparseMatrix::identity(f, 4));
    }
}
