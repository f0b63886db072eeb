//! Chain maps on `C ⊗ A^{⊗(n+1)}` and the dual cochain operators.
//!
//! Chain maps are built column by column (the image of each basis tuple);
//! a cochain operator `g ↦ g ∘ f` is the transpose of the chain map `f`.

use crate::linalg::{Scalar, SparseMatrix};
use crate::structures::EntwiningStructure;

use super::space::{Cochain, TensorSpace};
use super::ComplexError;

/// A matrix together with the enumerated spaces it maps between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    pub source: TensorSpace,
    pub target: TensorSpace,
    pub matrix: SparseMatrix,
}

impl LinearOperator {
    pub fn new(source: TensorSpace, target: TensorSpace, matrix: SparseMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (target.dim(), source.dim()));
        LinearOperator { source, target, matrix }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &LinearOperator) -> Result<LinearOperator, ComplexError> {
        if first.target != self.source {
            return Err(ComplexError::SpaceMismatch);
        }
        Ok(LinearOperator::new(first.source, self.target, self.matrix.mul(&first.matrix)?))
    }

    pub fn apply(&self, g: &Cochain) -> Result<Cochain, ComplexError> {
        if g.space != self.source {
            return Err(ComplexError::SpaceMismatch);
        }
        Ok(Cochain { space: self.target, field: g.field, values: self.matrix.mul_vec(&g.values) })
    }

    /// The dual operator between the same spaces with roles swapped.
    pub fn transpose(&self) -> LinearOperator {
        LinearOperator::new(self.target, self.source, self.matrix.transpose())
    }
}

fn sign(s: &EntwiningStructure, i: usize) -> Scalar {
    if i.is_multiple_of(2) {
        s.field().one()
    } else {
        -s.field().one()
    }
}

/// The face `d_i : C_m → C_{m-1}` for `m ≥ 1`, `0 ≤ i ≤ m`:
/// `d_0(c, a_1, .., a_{m+1}) = (c^ψ, a_2, .., a_m, a_{m+1} a_{1ψ})` and
/// `d_i` multiplies `a_i a_{i+1}` for `i ≥ 1`.
pub fn chain_face(s: &EntwiningStructure, m: usize, i: usize) -> Result<SparseMatrix, ComplexError> {
    if m == 0 || i > m {
        return Err(ComplexError::OperatorIndex { what: "face", index: i, degree: m });
    }
    let src = TensorSpace::degree(s, m);
    let tgt = TensorSpace::degree(s, m - 1);
    let a = s.algebra();
    let psi = s.entwining();
    Ok(SparseMatrix::build_columns(s.field(), tgt.dim(), src.dim(), |col| {
        let (c, t) = src.decode(col);
        let mut out = Vec::new();
        if i == 0 {
            let mut u = t[1..].to_vec();
            for (p, q, w) in psi.terms(c, t[0]) {
                for (k, v) in a.basis_product(t[m], p) {
                    u[m - 1] = *k;
                    out.push((tgt.encode(q, &u), w * v));
                }
            }
        } else {
            let mut u: Vec<usize> = t[..i].to_vec();
            u.extend_from_slice(&t[i + 1..]);
            for (k, v) in a.basis_product(t[i - 1], t[i]) {
                u[i - 1] = *k;
                out.push((tgt.encode(c, &u), v.clone()));
            }
        }
        out
    }))
}

/// The degeneracy `s_j : C_n → C_{n+1}` inserting `1_A` after slot `j`
/// (`0 ≤ j ≤ n`; `j = 0` inserts in front of `a_1`).
pub fn chain_degeneracy(s: &EntwiningStructure, n: usize, j: usize) -> Result<SparseMatrix, ComplexError> {
    if j > n {
        return Err(ComplexError::OperatorIndex { what: "degeneracy", index: j, degree: n });
    }
    let one = s.require_unital()?.clone();
    let src = TensorSpace::degree(s, n);
    let tgt = TensorSpace::degree(s, n + 1);
    Ok(SparseMatrix::build_columns(s.field(), tgt.dim(), src.dim(), |col| {
        let (c, t) = src.decode(col);
        let mut u = t[..j].to_vec();
        u.push(0);
        u.extend_from_slice(&t[j..]);
        one.iter()
            .map(|(e, w)| {
                u[j] = *e;
                (tgt.encode(c, &u), w.clone())
            })
            .collect()
    }))
}

/// The unsigned rotation `t(c, a_1, .., a_{n+1}) = (c^ψ, a_2, .., a_{n+1}, a_{1ψ})`.
pub fn chain_rotation(s: &EntwiningStructure, n: usize) -> SparseMatrix {
    let sp = TensorSpace::degree(s, n);
    let psi = s.entwining();
    SparseMatrix::build_columns(s.field(), sp.dim(), sp.dim(), |col| {
        let (c, t) = sp.decode(col);
        let mut u = t[1..].to_vec();
        u.push(0);
        psi.terms(c, t[0])
            .map(|(p, q, w)| {
                u[n] = p;
                (sp.encode(q, &u), w.clone())
            })
            .collect()
    })
}

/// `b = Σ (-1)^i d_i : C_m → C_{m-1}`.
pub fn chain_boundary(s: &EntwiningStructure, m: usize) -> Result<SparseMatrix, ComplexError> {
    let tgt = TensorSpace::degree(s, m - 1).dim();
    let mut acc = SparseMatrix::zero(s.field(), tgt, TensorSpace::degree(s, m).dim());
    for i in 0..=m {
        acc = acc.add_scaled(&chain_face(s, m, i)?, &sign(s, i))?;
    }
    Ok(acc)
}

/// The Hochschild coboundary `δ^n : C^n → C^{n+1}`,
/// `δg(c, a_1..a_{n+2}) = g(c^ψ, a_2, .., a_{n+1}, a_{n+2} a_{1ψ}) + Σ_{i=1}^{n+1} (-1)^i g(c, .., a_i a_{i+1}, ..)`,
/// assembled in one pass from the formula.
pub fn hochschild_delta(s: &EntwiningStructure, n: usize) -> LinearOperator {
    let src = TensorSpace::degree(s, n);
    let tgt = TensorSpace::degree(s, n + 1);
    let a = s.algebra();
    let psi = s.entwining();
    let field = s.field();
    // Build δ^T column by column: the column of a tuple in C^{n+1} lists the
    // coefficients of g's values that δg reads at that tuple.
    let transposed = SparseMatrix::build_columns(field, src.dim(), tgt.dim(), |row| {
        let (c, t) = tgt.decode(row);
        let mut out = Vec::new();
        let mut u = t[1..=n + 1].to_vec();
        for (p, q, w) in psi.terms(c, t[0]) {
            for (k, v) in a.basis_product(t[n + 1], p) {
                u[n] = *k;
                out.push((src.encode(q, &u), w * v));
            }
        }
        for i in 1..=n + 1 {
            let sg = if i % 2 == 0 { field.one() } else { -field.one() };
            let mut u: Vec<usize> = t[..i].to_vec();
            u.extend_from_slice(&t[i + 1..]);
            for (k, v) in a.basis_product(t[i - 1], t[i]) {
                u[i - 1] = *k;
                out.push((src.encode(c, &u), &sg * v));
            }
        }
        out
    });
    LinearOperator::new(src, tgt, transposed.transpose())
}

/// The coface `δ_i : C^n → C^{n+1}`, dual to `d_i` on `C_{n+1}`.
pub fn coface(s: &EntwiningStructure, n: usize, i: usize) -> Result<LinearOperator, ComplexError> {
    let m = chain_face(s, n + 1, i)?.transpose();
    Ok(LinearOperator::new(TensorSpace::degree(s, n), TensorSpace::degree(s, n + 1), m))
}

/// The codegeneracy `σ_j : C^{n+1} → C^n`, `σ_j f(c, a_1..a_{n+1}) = f(c, a_1..a_j, 1, a_{j+1}..)`.
pub fn codegeneracy(s: &EntwiningStructure, n: usize, j: usize) -> Result<LinearOperator, ComplexError> {
    let m = chain_degeneracy(s, n, j)?.transpose();
    Ok(LinearOperator::new(TensorSpace::degree(s, n + 1), TensorSpace::degree(s, n), m))
}

/// The cofaces `δ_0..δ_{n+1}` on `C^n` and, for unital `A`, the
/// codegeneracies `σ_0..σ_n : C^{n+1} → C^n`.
pub fn faces_and_degeneracies(
    s: &EntwiningStructure,
    n: usize,
) -> Result<(Vec<LinearOperator>, Vec<LinearOperator>), ComplexError> {
    let faces = (0..=n + 1).map(|i| coface(s, n, i)).collect::<Result<Vec<_>, _>>()?;
    let degs = (0..=n).map(|j| codegeneracy(s, n, j)).collect::<Result<Vec<_>, _>>()?;
    Ok((faces, degs))
}

/// The signed cyclic operator `τ_n g(c, a_1..a_{n+1}) = (-1)^n g(c^ψ, a_2, .., a_{n+1}, a_{1ψ})`.
pub fn cyclic_tau(s: &EntwiningStructure, n: usize) -> LinearOperator {
    let sp = TensorSpace::degree(s, n);
    let m = chain_rotation(s, n).transpose().scale(&sign(s, n));
    LinearOperator::new(sp, sp, m)
}

/// The unsigned full twist `U g = g ∘ t^{n+1}`,
/// `U g(c, a_1..a_{n+1}) = g(c^{ψ^{n+1}}, a_{1ψ}, .., a_{n+1 ψ})`.
pub fn full_twist(s: &EntwiningStructure, n: usize) -> LinearOperator {
    let sp = TensorSpace::degree(s, n);
    let t = chain_rotation(s, n);
    let mut acc = t.clone();
    for _ in 0..n {
        acc = t.mul(&acc).expect("square");
    }
    LinearOperator::new(sp, sp, acc.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactField;

    #[test]
    fn trivial_structure_coboundaries_alternate() {
        let f = ExactField::Rationals;
        let s = EntwiningStructure::trivial(f);
        for n in 0..5 {
            let d = hochschild_delta(&s, n).matrix;
            let expected = if n % 2 == 0 { f.zero() } else { f.one() };
            assert_eq!(d.get(0, 0), expected, "degree {n}");
        }
        assert_eq!(cyclic_tau(&s, 0).matrix, SparseMatrix::identity(f, 1));
        assert_eq!(cyclic_tau(&s, 1).matrix.get(0, 0), -f.one());
    }

    #[test]
    fn alternating_faces_give_delta() {
        let f = ExactField::Rationals;
        let s = EntwiningStructure::graded_grouplike(
            crate::structures::FiniteAlgebra::truncated_polynomial(f, 2),
            &[false, true],
        )
        .unwrap();
        for n in 0..3 {
            let (faces, _) = faces_and_degeneracies(&s, n).unwrap();
            let mut acc = SparseMatrix::zero(f, faces[0].matrix.rows(), faces[0].matrix.cols());
            for (i, d) in faces.iter().enumerate() {
                acc = acc.add_scaled(&d.matrix, &sign(&s, i)).unwrap();
            }
            assert_eq!(acc, hochschild_delta(&s, n).matrix);
        }
    }
}
