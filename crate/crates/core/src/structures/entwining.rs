//! Entwining maps and entwining structures, with exact axiom validation.

use std::sync::OnceLock;

use serde::Serialize;

use crate::linalg::sparse::normalize;
use crate::linalg::{ExactField, Scalar, SparseVec};

use super::algebra::{FiniteAlgebra, FiniteCoalgebra};
use super::StructureError;

/// `ψ : C ⊗ A → A ⊗ C`. `psi[i * dim_a + j]` is `ψ(c_i ⊗ e_j)` expressed over
/// the index `p * dim_c + q` of `e_p ⊗ c_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntwiningMap {
    dim_c: usize,
    dim_a: usize,
    psi: Vec<SparseVec>,
}

impl EntwiningMap {
    /// Builds ψ from `(i, j, p, q, w)` entries: `w e_p ⊗ c_q` occurs in `ψ(c_i ⊗ e_j)`.
    pub fn from_entries(
        dim_c: usize,
        dim_a: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, usize, Scalar)>,
    ) -> Result<Self, StructureError> {
        let mut psi = vec![Vec::new(); dim_c * dim_a];
        for (i, j, p, q, w) in entries {
            for (what, idx, bound) in [
                ("coalgebra input", i, dim_c),
                ("algebra input", j, dim_a),
                ("algebra output", p, dim_a),
                ("coalgebra output", q, dim_c),
            ] {
                if idx >= bound {
                    return Err(StructureError::IndexOutOfRange {
                        what: format!("psi {what}"),
                        index: idx,
                        bound,
                    });
                }
            }
            psi[i * dim_a + j].push((p * dim_c + q, w));
        }
        Ok(EntwiningMap { dim_c, dim_a, psi: psi.into_iter().map(normalize).collect() })
    }

    /// `ψ(c ⊗ a) = a ⊗ c`.
    pub fn flip(field: ExactField, dim_c: usize, dim_a: usize) -> Self {
        let entries = (0..dim_c).flat_map(|i| (0..dim_a).map(move |j| (i, j, j, i, field.one())));
        Self::from_entries(dim_c, dim_a, entries).expect("in range")
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    /// `ψ(c_i ⊗ e_j)` over the index `p * dim_c + q`.
    pub fn apply_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.psi[i * self.dim_a + j]
    }

    /// `ψ(c_i ⊗ e_j)` as `(p, q, w)` triples.
    pub fn terms(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let dc = self.dim_c;
        self.apply_basis(i, j).iter().map(move |(pq, w)| (pq / dc, pq % dc, w))
    }

    /// ψ applied to `c_i ⊗ x` for a general algebra element `x`.
    pub fn apply(&self, i: usize, x: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (j, s) in x {
            for (pq, w) in self.apply_basis(i, *j) {
                acc.push((*pq, s * w));
            }
        }
        normalize(acc)
    }

    /// `(i, j, p, q, w)` entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize, &Scalar)> {
        let (da, dc) = (self.dim_a, self.dim_c);
        self.psi
            .iter()
            .enumerate()
            .flat_map(move |(ij, v)| v.iter().map(move |(pq, w)| (ij / da, ij % da, pq / dc, pq % dc, w)))
    }

    /// Adds `w` to a single structure constant.
    pub fn perturbed(&self, i: usize, j: usize, p: usize, q: usize, w: &Scalar) -> Self {
        let mut out = self.clone();
        let slot = &mut out.psi[i * self.dim_a + j];
        let mut v = std::mem::take(slot);
        v.push((p * self.dim_c + q, w.clone()));
        *slot = normalize(v);
        out
    }

    /// Multiplies every constant by `s`.
    pub fn scaled(&self, s: &Scalar) -> Self {
        let psi = self.psi.iter().map(|v| normalize(v.iter().map(|(k, w)| (*k, w * s)).collect())).collect();
        EntwiningMap { psi, ..self.clone() }
    }
}

/// Verdict on one named axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub passed: bool,
    /// Basis indices at which the axiom first fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    /// How to read the witness indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_meaning: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

impl AxiomVerdict {
    fn new(axiom: &str, failure: Option<Vec<usize>>, meaning: &str) -> Self {
        AxiomVerdict {
            axiom: axiom.to_string(),
            passed: failure.is_none(),
            witness_meaning: failure.as_ref().map(|_| meaning.to_string()),
            witness: failure,
            skipped: false,
        }
    }

    fn skipped(axiom: &str) -> Self {
        AxiomVerdict {
            axiom: axiom.to_string(),
            passed: true,
            witness: None,
            witness_meaning: None,
            skipped: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub verdicts: Vec<AxiomVerdict>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn verdict(&self, axiom: &str) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }
}

/// An entwining structure `(A, C, ψ)` over an exact field.
#[derive(Debug, Clone)]
pub struct EntwiningStructure {
    field: ExactField,
    algebra: FiniteAlgebra,
    coalgebra: FiniteCoalgebra,
    entwining: EntwiningMap,
    validation: OnceLock<ValidationReport>,
}

impl PartialEq for EntwiningStructure {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.algebra == other.algebra
            && self.coalgebra == other.coalgebra
            && self.entwining == other.entwining
    }
}

impl Eq for EntwiningStructure {}

impl EntwiningStructure {
    /// Assembles a structure after checking that the dimensions fit together.
    /// Axioms are checked lazily by [`EntwiningStructure::validate`].
    pub fn new(
        algebra: FiniteAlgebra,
        coalgebra: FiniteCoalgebra,
        entwining: EntwiningMap,
    ) -> Result<Self, StructureError> {
        let field = algebra.field();
        if coalgebra.field() != field {
            return Err(StructureError::FieldMismatch);
        }
        if entwining.dim_a() != algebra.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "psi algebra dimension".into(),
                expected: algebra.dim(),
                got: entwining.dim_a(),
            });
        }
        if entwining.dim_c() != coalgebra.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "psi coalgebra dimension".into(),
                expected: coalgebra.dim(),
                got: entwining.dim_c(),
            });
        }
        for (_, _, _, _, w) in entwining.entries() {
            if !field.owns(w) {
                return Err(StructureError::FieldMismatch);
            }
        }
        Ok(EntwiningStructure { field, algebra, coalgebra, entwining, validation: OnceLock::new() })
    }

    /// `(A, C, flip)`.
    pub fn flip(algebra: FiniteAlgebra, coalgebra: FiniteCoalgebra) -> Result<Self, StructureError> {
        let psi = EntwiningMap::flip(algebra.field(), coalgebra.dim(), algebra.dim());
        Self::new(algebra, coalgebra, psi)
    }

    /// `(k, k, flip)`.
    pub fn trivial(field: ExactField) -> Self {
        Self::flip(FiniteAlgebra::ground(field), FiniteCoalgebra::ground(field)).expect("dims agree")
    }

    /// Entwining of a Z/2-graded algebra with the group coalgebra of Z/2:
    /// `C` has grouplike basis `{1, g}` and `ψ(h ⊗ a) = a ⊗ h g^{|a|}` for
    /// homogeneous `a`. `odd[j]` gives the degree of the basis element `e_j`;
    /// the product must respect the grading.
    pub fn graded_grouplike(algebra: FiniteAlgebra, odd: &[bool]) -> Result<Self, StructureError> {
        let field = algebra.field();
        if odd.len() != algebra.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "grading".into(),
                expected: algebra.dim(),
                got: odd.len(),
            });
        }
        let coalgebra = FiniteCoalgebra::grouplike(field, 2);
        let entries = (0..2).flat_map(|h| {
            odd.iter().enumerate().map(move |(j, &o)| (h, j, j, if o { 1 - h } else { h }, field.one()))
        });
        let psi = EntwiningMap::from_entries(2, algebra.dim(), entries)?;
        Self::new(algebra, coalgebra, psi)
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn coalgebra(&self) -> &FiniteCoalgebra {
        &self.coalgebra
    }

    pub fn entwining(&self) -> &EntwiningMap {
        &self.entwining
    }

    pub fn dim_a(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_c(&self) -> usize {
        self.coalgebra.dim()
    }

    /// Same algebra and coalgebra, different ψ.
    pub fn with_entwining(&self, entwining: EntwiningMap) -> Result<Self, StructureError> {
        Self::new(self.algebra.clone(), self.coalgebra.clone(), entwining)
    }

    /// Checks every axiom on all basis tuples. The result is cached.
    pub fn validate(&self) -> &ValidationReport {
        self.validation.get_or_init(|| validate_parts(self))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// Errors with the first failing axiom if the structure is invalid.
    pub fn require_valid(&self) -> Result<(), StructureError> {
        match self.validate().failures().next() {
            None => Ok(()),
            Some(v) => Err(StructureError::AxiomFailure {
                axiom: v.axiom.clone(),
                witness: v.witness.clone().unwrap_or_default(),
            }),
        }
    }

    pub fn require_unital(&self) -> Result<&SparseVec, StructureError> {
        self.algebra.unit().ok_or(StructureError::NotUnital)
    }
}

fn validate_parts(s: &EntwiningStructure) -> ValidationReport {
    let a = &s.algebra;
    let c = &s.coalgebra;
    let psi = &s.entwining;
    let (da, dc) = (a.dim(), c.dim());
    let mut verdicts = vec![
        AxiomVerdict::new(
            "associativity",
            a.first_associativity_failure().map(|w| w.to_vec()),
            "(i, j, k): (e_i e_j) e_k != e_i (e_j e_k)",
        ),
        if a.is_unital() {
            AxiomVerdict::new(
                "algebra-unit",
                a.first_unit_failure().map(|i| vec![i]),
                "(i): 1 e_i or e_i 1 differs from e_i",
            )
        } else {
            AxiomVerdict::skipped("algebra-unit")
        },
        AxiomVerdict::new(
            "coassociativity",
            c.first_coassociativity_failure().map(|k| vec![k]),
            "(k): coassociativity fails on c_k",
        ),
        AxiomVerdict::new(
            "counit",
            c.first_counit_failure().map(|k| vec![k]),
            "(k): counit law fails on c_k",
        ),
    ];

    // ψ(c ⊗ ab) = a_ψ b_ψ ⊗ c^{ψψ}: c passes a first, then b.
    let mult = (|| {
        for i in 0..dc {
            for j in 0..da {
                for k in 0..da {
                    let lhs = psi.apply(i, a.basis_product(j, k));
                    let mut rhs = Vec::new();
                    for (p, q, w) in psi.terms(i, j) {
                        for (p2, q2, w2) in psi.terms(q, k) {
                            let ww = w * w2;
                            for (r, t) in a.basis_product(p, p2) {
                                rhs.push((r * dc + q2, &ww * t));
                            }
                        }
                    }
                    if lhs != normalize(rhs) {
                        return Some(vec![i, j, k]);
                    }
                }
            }
        }
        None
    })();
    verdicts.push(AxiomVerdict::new("psi-multiplicativity", mult, "(c, a, b): psi(c (x) ab) differs"));

    // (id ⊗ Δ)ψ = (ψ ⊗ id)(id ⊗ ψ)(Δ ⊗ id), over the index p*dc*dc + q1*dc + q2.
    let comult = (|| {
        for i in 0..dc {
            for j in 0..da {
                let mut lhs = Vec::new();
                for (p, q, w) in psi.terms(i, j) {
                    for (q12, v) in c.comultiply_basis(q) {
                        lhs.push((p * dc * dc + q12, w * v));
                    }
                }
                let mut rhs = Vec::new();
                for (q12, v) in c.comultiply_basis(i) {
                    let (c1, c2) = (q12 / dc, q12 % dc);
                    for (p, q2, w) in psi.terms(c2, j) {
                        let vw = v * w;
                        for (p2, q1, w2) in psi.terms(c1, p) {
                            rhs.push((p2 * dc * dc + q1 * dc + q2, &vw * w2));
                        }
                    }
                }
                if normalize(lhs) != normalize(rhs) {
                    return Some(vec![i, j]);
                }
            }
        }
        None
    })();
    verdicts.push(AxiomVerdict::new(
        "psi-comultiplicativity",
        comult,
        "(c, a): (id (x) Delta) psi(c (x) a) differs",
    ));

    // a_ψ ε(c^ψ) = ε(c) a
    let counit = (|| {
        for i in 0..dc {
            for j in 0..da {
                let mut lhs = Vec::new();
                for (p, q, w) in psi.terms(i, j) {
                    lhs.push((p, w * &c.counit()[q]));
                }
                let rhs = normalize(vec![(j, c.counit()[i].clone())]);
                if normalize(lhs) != rhs {
                    return Some(vec![i, j]);
                }
            }
        }
        None
    })();
    verdicts.push(AxiomVerdict::new("psi-counit", counit, "(c, a): a_psi eps(c^psi) != eps(c) a"));

    match a.unit() {
        Some(one) => {
            let unit = (0..dc).find(|&i| {
                let expected: SparseVec =
                    normalize(one.iter().map(|(p, w)| (p * dc + i, w.clone())).collect());
                psi.apply(i, one) != expected
            });
            verdicts.push(AxiomVerdict::new(
                "psi-unit",
                unit.map(|i| {
                    let mut w = vec![i];
                    w.extend(one.iter().map(|(k, _)| *k));
                    w
                }),
                "(c, support of 1_A): psi(c (x) 1) != 1 (x) c",
            ));
        }
        None => verdicts.push(AxiomVerdict::skipped("psi-unit")),
    }
    ValidationReport { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_structures_validate() {
        let f = ExactField::Rationals;
        for da in 1..=3 {
            for dc in 1..=3 {
                let s = EntwiningStructure::flip(
                    FiniteAlgebra::truncated_polynomial(f, da),
                    FiniteCoalgebra::grouplike(f, dc),
                )
                .unwrap();
                assert!(s.is_valid(), "{:?}", s.validate());
            }
        }
    }

    #[test]
    fn scaled_flip_fails_unit_axiom_at_first_coalgebra_element() {
        let f = ExactField::Rationals;
        let s = EntwiningStructure::trivial(f);
        let bad = s.with_entwining(s.entwining().scaled(&f.from_i64(2))).unwrap();
        let v = bad.validate().verdict("psi-unit").unwrap();
        assert!(!v.passed);
        assert_eq!(v.witness, Some(vec![0, 0]));
    }

    #[test]
    fn graded_entwinings_validate() {
        let f = ExactField::Rationals;
        let dual = FiniteAlgebra::truncated_polynomial(f, 2);
        let s = EntwiningStructure::graded_grouplike(dual, &[false, true]).unwrap();
        assert!(s.is_valid(), "{:?}", s.validate());
        let group = FiniteAlgebra::cyclic_group_algebra(f, 2);
        let s = EntwiningStructure::graded_grouplike(group, &[false, true]).unwrap();
        assert!(s.is_valid(), "{:?}", s.validate());
        // x^2 = 1 is even, so declaring 1 odd breaks the unit axiom
        let group = FiniteAlgebra::cyclic_group_algebra(f, 2);
        let s = EntwiningStructure::graded_grouplike(group, &[true, false]).unwrap();
        assert!(!s.is_valid());
    }

    #[test]
    fn non_unital_skips_unit_checks() {
        let f = ExactField::Rationals;
        let a = FiniteAlgebra::truncated_polynomial(f, 2).without_unit();
        let s = EntwiningStructure::flip(a, FiniteCoalgebra::ground(f)).unwrap();
        let report = s.validate();
        assert!(report.passed());
        assert!(report.verdict("psi-unit").unwrap().skipped);
    }
}
