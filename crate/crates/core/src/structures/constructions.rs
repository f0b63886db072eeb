//! New entwining structures from old: matrix rings, tensor products and
//! transport along changes of basis.

use crate::linalg::sparse::normalize;
use crate::linalg::{invert, SparseMatrix, SparseVec};

use super::algebra::{FiniteAlgebra, FiniteCoalgebra};
use super::entwining::{EntwiningMap, EntwiningStructure};
use super::StructureError;

/// Index of `e_j ⊗ E_{kl}` in `M_r(A)`.
pub fn matrix_index(r: usize, j: usize, k: usize, l: usize) -> usize {
    j * r * r + k * r + l
}

/// Inverse of [`matrix_index`]: `(j, k, l)`.
pub fn matrix_coords(r: usize, idx: usize) -> (usize, usize, usize) {
    (idx / (r * r), (idx / r) % r, idx % r)
}

/// `a E_{kl}` as an element of `M_r(A)`.
pub fn embed_entry(a: &SparseVec, r: usize, k: usize, l: usize) -> SparseVec {
    normalize(a.iter().map(|(j, s)| (matrix_index(r, *j, k, l), s.clone())).collect())
}

/// The entry `(k, l)` of a matrix over `A`.
pub fn matrix_entry(x: &SparseVec, r: usize, k: usize, l: usize) -> SparseVec {
    x.iter()
        .filter_map(|(idx, s)| {
            let (j, kk, ll) = matrix_coords(r, *idx);
            (kk == k && ll == l).then(|| (j, s.clone()))
        })
        .collect()
}

/// `(M_r(A), C, ψ)` with ψ acting on the `A` part of `e_j ⊗ E_{kl}`.
/// A non-unital `A` gives a non-unital matrix algebra.
pub fn matrix_extend(s: &EntwiningStructure, r: usize) -> Result<EntwiningStructure, StructureError> {
    if r == 0 {
        return Err(StructureError::ZeroMatrixSize);
    }
    let field = s.field();
    let a = s.algebra();
    let (da, dc) = (a.dim(), s.dim_c());
    let dim = da * r * r;

    let mut entries = Vec::new();
    for j in 0..da {
        for j2 in 0..da {
            for (t, w) in a.basis_product(j, j2) {
                for k in 0..r {
                    for l in 0..r {
                        for l2 in 0..r {
                            entries.push((
                                matrix_index(r, j, k, l),
                                matrix_index(r, j2, l, l2),
                                matrix_index(r, *t, k, l2),
                                w.clone(),
                            ));
                        }
                    }
                }
            }
        }
    }
    let unit = a.unit().map(|one| normalize((0..r).flat_map(|k| embed_entry(one, r, k, k)).collect()));
    let algebra = FiniteAlgebra::from_entries(field, dim, entries, unit)?;

    let mut psi = Vec::new();
    for i in 0..dc {
        for j in 0..da {
            for (p, q, w) in s.entwining().terms(i, j) {
                for k in 0..r {
                    for l in 0..r {
                        psi.push((i, matrix_index(r, j, k, l), matrix_index(r, p, k, l), q, w.clone()));
                    }
                }
            }
        }
    }
    let psi = EntwiningMap::from_entries(dc, dim, psi)?;
    EntwiningStructure::new(algebra, s.coalgebra().clone(), psi)
}

/// `(A ⊗ A', C ⊗ C', ψ ⊗ ψ')` with row-major flattening `i * dim' + i'`.
pub fn tensor_product(
    s: &EntwiningStructure,
    t: &EntwiningStructure,
) -> Result<EntwiningStructure, StructureError> {
    if s.field() != t.field() {
        return Err(StructureError::FieldMismatch);
    }
    let field = s.field();
    let (a, a2) = (s.algebra(), t.algebra());
    let (c, c2) = (s.coalgebra(), t.coalgebra());
    let (da, da2, dc, dc2) = (a.dim(), a2.dim(), c.dim(), c2.dim());

    let mut mul = Vec::new();
    for (i, j, k, w) in a.entries() {
        for (i2, j2, k2, w2) in a2.entries() {
            mul.push((i * da2 + i2, j * da2 + j2, k * da2 + k2, w * w2));
        }
    }
    let unit = match (a.unit(), a2.unit()) {
        (Some(u), Some(u2)) => Some(outer(u, u2, da2)),
        _ => None,
    };
    let algebra = FiniteAlgebra::from_entries(field, da * da2, mul, unit)?;

    let mut comul = Vec::new();
    for (k, i, j, w) in c.entries() {
        for (k2, i2, j2, w2) in c2.entries() {
            comul.push((k * dc2 + k2, i * dc2 + i2, j * dc2 + j2, w * w2));
        }
    }
    let counit = c.counit().iter().flat_map(|e| c2.counit().iter().map(move |e2| e * e2)).collect();
    let coalgebra = FiniteCoalgebra::from_entries(field, dc * dc2, comul, counit)?;

    let mut psi = Vec::new();
    for (i, j, p, q, w) in s.entwining().entries() {
        for (i2, j2, p2, q2, w2) in t.entwining().entries() {
            psi.push((i * dc2 + i2, j * da2 + j2, p * da2 + p2, q * dc2 + q2, w * w2));
        }
    }
    let psi = EntwiningMap::from_entries(dc * dc2, da * da2, psi)?;
    EntwiningStructure::new(algebra, coalgebra, psi)
}

/// `x ⊗ y` flattened row-major.
pub fn outer(x: &SparseVec, y: &SparseVec, dim_y: usize) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * dim_y + j, a * b));
        }
    }
    normalize(out)
}

/// Re-expresses `s` in new bases: column `j` of `p` is the new `f_j` in
/// terms of the old algebra basis, and likewise `q` for the coalgebra.
pub fn transport(
    s: &EntwiningStructure,
    p: &SparseMatrix,
    q: &SparseMatrix,
) -> Result<EntwiningStructure, StructureError> {
    let field = s.field();
    let (da, dc) = (s.dim_a(), s.dim_c());
    for (m, d, what) in [(p, da, "algebra basis change"), (q, dc, "coalgebra basis change")] {
        if m.shape() != (d, d) {
            return Err(StructureError::DimensionMismatch {
                what: what.into(),
                expected: d,
                got: m.rows().max(m.cols()),
            });
        }
    }
    let pi = invert(p).ok_or(StructureError::Singular("algebra basis change"))?;
    let qi = invert(q).ok_or(StructureError::Singular("coalgebra basis change"))?;
    let a = s.algebra();
    let c = s.coalgebra();

    let mut mul = Vec::new();
    for i in 0..da {
        for j in 0..da {
            let prod = pi.mul_vec(&a.multiply(p.column(i), p.column(j)));
            mul.extend(prod.into_iter().map(|(k, w)| (i, j, k, w)));
        }
    }
    let unit = a.unit().map(|u| pi.mul_vec(u));
    let algebra = FiniteAlgebra::from_entries(field, da, mul, unit)?;

    let mut comul = Vec::new();
    for k in 0..dc {
        let old = c.comultiply(q.column(k));
        let mut acc = Vec::new();
        for (ij, w) in old {
            for (i2, v) in qi.column(ij / dc) {
                for (j2, u) in qi.column(ij % dc) {
                    acc.push((i2 * dc + j2, &(&w * v) * u));
                }
            }
        }
        comul.extend(normalize(acc).into_iter().map(|(ij, w)| (k, ij / dc, ij % dc, w)));
    }
    let counit = (0..dc).map(|k| c.apply_counit(q.column(k))).collect();
    let coalgebra = FiniteCoalgebra::from_entries(field, dc, comul, counit)?;

    let mut psi = Vec::new();
    for i in 0..dc {
        for j in 0..da {
            let mut acc = Vec::new();
            for (ci, cw) in q.column(i) {
                for (aj, aw) in p.column(j) {
                    let w0 = cw * aw;
                    for (pp, qq, w) in s.entwining().terms(*ci, *aj) {
                        let w1 = &w0 * w;
                        for (p2, v) in pi.column(pp) {
                            for (q2, u) in qi.column(qq) {
                                acc.push((p2 * dc + q2, &(&w1 * v) * u));
                            }
                        }
                    }
                }
            }
            psi.extend(normalize(acc).into_iter().map(|(pq, w)| (i, j, pq / dc, pq % dc, w)));
        }
    }
    let psi = EntwiningMap::from_entries(dc, da, psi)?;
    EntwiningStructure::new(algebra, coalgebra, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactField;

    #[test]
    fn matrix_extension_dimensions_and_unit() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::flip(FiniteAlgebra::truncated_polynomial(f, 2), FiniteCoalgebra::ground(f))
                .unwrap();
        let m = matrix_extend(&s, 2).unwrap();
        assert_eq!(m.dim_a(), 8);
        let expected = vec![(matrix_index(2, 0, 0, 0), f.one()), (matrix_index(2, 0, 1, 1), f.one())];
        assert_eq!(m.algebra().unit(), Some(&expected));
        assert!(m.is_valid());
        assert_eq!(matrix_extend(&s, 1).unwrap(), s);
        assert!(matrix_extend(&s, 0).is_err());
    }

    #[test]
    fn tensor_with_trivial_is_identity() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap();
        let t = tensor_product(&s, &EntwiningStructure::trivial(f)).unwrap();
        assert_eq!(t, s);
        assert!(tensor_product(&s, &s).unwrap().is_valid());
    }

    #[test]
    fn transport_preserves_validity() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::graded_grouplike(FiniteAlgebra::cyclic_group_algebra(f, 2), &[false, true])
                .unwrap();
        let p = SparseMatrix::from_triplets(
            f,
            2,
            2,
            [(0, 0, f.one()), (1, 0, f.from_i64(2)), (1, 1, f.from_i64(3))],
        )
        .unwrap();
        let q = SparseMatrix::from_triplets(f, 2, 2, [(0, 0, f.one()), (0, 1, f.one()), (1, 1, f.one())])
            .unwrap();
        let t = transport(&s, &p, &q).unwrap();
        assert!(t.is_valid(), "{:?}", t.validate());
        assert_ne!(t, s);
    }
}
