//! Cochain pullback along morphisms of entwining structures, the
//! conjugation check for ψ-invariant units and the hypotheses that force
//! cyclic cohomology to vanish.

use serde::Serialize;

use crate::complexes::{cohomology_range, is_coboundary, Cochain, ComplexError, TensorSpace, Theory};
use crate::linalg::sparse::normalize;
use crate::linalg::{SparseMatrix, SparseVec};
use crate::structures::constructions::embed_entry;
use crate::structures::{
    inner_automorphism, matrix_extend, unit_check, EntwiningMorphism, EntwiningStructure, MorphismVerdict,
    UnitVerdict,
};

use super::OmegaError;

/// The chain map `γ ⊗ α^{⊗(n+1)} : C ⊗ A^{n+1} → C' ⊗ A'^{n+1}`.
pub fn pushforward_chain(m: &EntwiningMorphism, n: usize) -> SparseMatrix {
    let src = TensorSpace::degree(&m.source, n);
    let tgt = TensorSpace::degree(&m.target, n);
    SparseMatrix::build_columns(m.source.field(), tgt.dim(), src.dim(), |col| {
        let (c, a) = src.decode(col);
        let mut partial: Vec<(usize, Vec<usize>, crate::linalg::Scalar)> =
            m.gamma.column(c).iter().map(|(c2, w)| (*c2, Vec::with_capacity(n + 1), w.clone())).collect();
        for &x in &a {
            let mut next = Vec::new();
            for (c2, u, w) in &partial {
                for (y, v) in m.alpha.column(x) {
                    let mut u2 = u.clone();
                    u2.push(*y);
                    next.push((*c2, u2, w * v));
                }
            }
            partial = next;
        }
        normalize(partial.into_iter().map(|(c2, u, w)| (tgt.encode(c2, &u), w)).collect())
    })
}

/// `F^n(α, γ)` as a matrix from target cochains to source cochains.
pub fn pullback_matrix(m: &EntwiningMorphism, n: usize) -> SparseMatrix {
    pushforward_chain(m, n).transpose()
}

/// `(F^n(α, γ) g)(c, a_1, …) = g(γ c, α a_1, …)`; the morphism laws are
/// checked first.
pub fn pullback_cochain(m: &EntwiningMorphism, g: &Cochain) -> Result<Cochain, OmegaError> {
    let verdict = m.check();
    if !verdict.passed {
        return Err(OmegaError::NotAMorphism(verdict.failed_law.unwrap_or_default()));
    }
    let n = g.degree();
    if g.space != TensorSpace::degree(&m.target, n) {
        return Err(ComplexError::SpaceMismatch.into());
    }
    let values = pullback_matrix(m, n).mul_vec(&g.values);
    Ok(Cochain::from_values(&m.source, n, values)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationDegree {
    pub degree: usize,
    pub cocycles_checked: usize,
    /// Indices of basis cocycles `g` for which `F(φ_x) g − g` is not a coboundary.
    pub failures: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    pub unit: UnitVerdict,
    pub degrees: Vec<ConjugationDegree>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.unit.member && self.degrees.iter().all(|d| d.failures.is_empty())
    }
}

/// For `x ∈ U_ψ(A)` with inverse `y`, checks that `F(φ_x) g − g` is a cyclic
/// coboundary for every basis cocycle `g` in degrees `0..=max_n`.
pub fn conjugation_check(
    s: &EntwiningStructure,
    x: &SparseVec,
    y: &SparseVec,
    max_n: usize,
) -> Result<ConjugationReport, OmegaError> {
    let unit = unit_check(s, x, y);
    if !unit.member {
        return Ok(ConjugationReport { unit, degrees: Vec::new() });
    }
    let phi = inner_automorphism(s, x, y)?;
    let mut degrees = Vec::new();
    for group in cohomology_range(s, Theory::Cyclic, max_n) {
        let n = group.degree;
        let f = pullback_matrix(&phi, n);
        let mut failures = Vec::new();
        for (k, g) in group.cocycle_basis.columns().iter().enumerate() {
            let diff = crate::linalg::sparse::axpy(&f.mul_vec(g), &-s.field().one(), g);
            let cochain = Cochain::from_values(s, n, diff)?;
            match is_coboundary(s, Theory::Cyclic, &cochain) {
                Ok(Some(_)) => {}
                Ok(None) | Err(ComplexError::NotInSubcomplex(_)) => failures.push(k),
                Err(e) => return Err(e.into()),
            }
        }
        degrees.push(ConjugationDegree { degree: n, cocycles_checked: group.cocycle_basis.cols(), failures });
    }
    Ok(ConjugationReport { unit, degrees })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingVerdict {
    /// `(ν, id_C)` is a morphism of entwining structures.
    pub nu_is_morphism: MorphismVerdict,
    /// `X ∈ U_ψ(M_2(A))` with the supplied inverse.
    pub unit: UnitVerdict,
    /// First basis element `a` with `φ_X(diag(a, ν a)) ≠ diag(0, ν a)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugation_witness: Option<usize>,
    pub satisfied: bool,
    pub message: String,
}

/// Evaluates the hypotheses under which cyclic cohomology vanishes:
/// `(ν, id_C)` is a morphism, `X ∈ U_ψ(M_2(A))` with inverse `Y`, and
/// `X diag(a, ν a) Y = diag(0, ν a)` for every basis element `a`.
pub fn vanishing_hypotheses_check(
    s: &EntwiningStructure,
    nu: &SparseMatrix,
    x: &SparseVec,
    y: &SparseVec,
) -> Result<VanishingVerdict, OmegaError> {
    let f = s.field();
    let morphism =
        EntwiningMorphism::new(s.clone(), s.clone(), nu.clone(), SparseMatrix::identity(f, s.dim_c()))?;
    let nu_is_morphism = morphism.check();
    let m2 = matrix_extend(s, 2)?;
    let unit = unit_check(&m2, x, y);
    let alg = m2.algebra();
    let mut conjugation_witness = None;
    for a in 0..s.dim_a() {
        let e = vec![(a, f.one())];
        let nu_a = nu.mul_vec(&e);
        let mut diag = embed_entry(&e, 2, 0, 0);
        diag.extend(embed_entry(&nu_a, 2, 1, 1));
        let image = alg.multiply(&alg.multiply(x, &normalize(diag)), y);
        if image != embed_entry(&nu_a, 2, 1, 1) {
            conjugation_witness = Some(a);
            break;
        }
    }
    let satisfied = nu_is_morphism.passed && unit.member && conjugation_witness.is_none();
    let message = if satisfied {
        "hypotheses hold; cyclic cohomology vanishes".to_string()
    } else if !nu_is_morphism.passed {
        format!(
            "nu is not a morphism of entwining structures ({})",
            nu_is_morphism.failed_law.clone().unwrap_or_default()
        )
    } else if !unit.member {
        format!("X is not a psi-invariant unit ({})", unit.reason.clone().unwrap_or_default())
    } else {
        "hypotheses not satisfiable for this witness".to_string()
    };
    Ok(VanishingVerdict { nu_is_morphism, unit, conjugation_witness, satisfied, message })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::in_subcomplex;
    use crate::linalg::ExactField;
    use crate::structures::{block_unit, FiniteAlgebra, FiniteCoalgebra};

    fn dual_numbers() -> EntwiningStructure {
        let f = ExactField::Rationals;
        EntwiningStructure::flip(FiniteAlgebra::truncated_polynomial(f, 2), FiniteCoalgebra::grouplike(f, 2))
            .unwrap()
    }

    #[test]
    fn identity_pullback_is_identity() {
        let s = dual_numbers();
        let id = EntwiningMorphism::identity(&s);
        let g = Cochain::from_values(&s, 1, vec![(3, s.field().one()), (5, s.field().from_i64(2))]).unwrap();
        assert_eq!(pullback_cochain(&id, &g).unwrap(), g);
    }

    #[test]
    fn conjugation_by_one_plus_x() {
        let s = dual_numbers();
        let f = s.field();
        let x = vec![(0, f.one()), (1, f.one())];
        let y = vec![(0, f.one()), (1, -f.one())];
        let report = conjugation_check(&s, &x, &y, 2).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn conjugation_in_matrix_ring() {
        let s = dual_numbers();
        let f = s.field();
        let m2 = matrix_extend(&s, 2).unwrap();
        let (x, y) = block_unit(
            &s,
            &vec![(0, f.from_i64(2)), (1, f.one())],
            &s.algebra().inverse(&vec![(0, f.from_i64(2)), (1, f.one())]).unwrap(),
        )
        .unwrap();
        let report = conjugation_check(&m2, &x, &y, 1).unwrap();
        assert!(report.passed(), "{report:?}");
        let phi = inner_automorphism(&m2, &x, &y).unwrap();
        for group in cohomology_range(&m2, Theory::Cyclic, 1) {
            for g in group.cocycle_basis.columns() {
                let g = Cochain::from_values(&m2, group.degree, g.clone()).unwrap();
                assert!(in_subcomplex(&m2, Theory::Cyclic, &pullback_cochain(&phi, &g).unwrap()));
            }
        }
    }

    #[test]
    fn identity_nu_cannot_satisfy_the_hypotheses() {
        let s = dual_numbers();
        let f = s.field();
        let nu = SparseMatrix::identity(f, 2);
        let m2 = matrix_extend(&s, 2).unwrap();
        let one = m2.algebra().unit().unwrap().clone();
        let v = vanishing_hypotheses_check(&s, &nu, &one, &one).unwrap();
        assert!(v.nu_is_morphism.passed);
        assert!(v.unit.member);
        assert_eq!(v.conjugation_witness, Some(0));
        assert_eq!(v.message, "hypotheses not satisfiable for this witness");
    }
}
