//! Exact column elimination: rank, kernel, column space and membership.
//!
//! Columns are processed left to right. Each incoming column is reduced
//! against the pivots found so far; a pivot is the reduced column itself,
//! normalised so that its first nonzero row (its lead) carries a 1. A column
//! that reduces to zero yields a kernel vector. The whole process is
//! sequential and depends only on the column order, so bases come out the
//! same on every run.

use std::collections::HashMap;

use super::field::{ExactField, Scalar};
use super::sparse::{axpy, scale_vec, MatrixError, SparseMatrix, SparseVec};

#[derive(Debug, Clone)]
struct Pivot {
    vector: SparseVec,
    /// Coordinates of `vector` in terms of the original columns.
    combination: SparseVec,
}

/// Column echelon form of a matrix, retaining enough data to express
/// reduced vectors in terms of the original columns.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    field: ExactField,
    rows: usize,
    cols: usize,
    pivots: Vec<Pivot>,
    by_lead: HashMap<usize, usize>,
    pivot_columns: Vec<usize>,
    kernel: Vec<SparseVec>,
}

impl ColumnEchelon {
    pub fn new(m: &SparseMatrix) -> Self {
        let mut e = ColumnEchelon {
            field: m.field(),
            rows: m.rows(),
            cols: m.cols(),
            pivots: Vec::new(),
            by_lead: HashMap::new(),
            pivot_columns: Vec::new(),
            kernel: Vec::new(),
        };
        let one = m.field().one();
        for (j, col) in m.columns().iter().enumerate() {
            let (rest, comb) = e.reduce(col, vec![(j, one.clone())]);
            match rest.first() {
                None => e.kernel.push(comb),
                Some((lead, head)) => {
                    let inv = head.inv().expect("leading entry is nonzero");
                    let lead = *lead;
                    e.by_lead.insert(lead, e.pivots.len());
                    e.pivots
                        .push(Pivot { vector: scale_vec(&rest, &inv), combination: scale_vec(&comb, &inv) });
                    e.pivot_columns.push(j);
                }
            }
        }
        e
    }

    /// Reduces `v` until its first nonzero row is not a pivot lead. Returns
    /// the remainder and `comb - (columns used)` so that
    /// `remainder = M * returned_comb` whenever `v = M * comb`.
    fn reduce(&self, v: &SparseVec, mut comb: SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        while let Some((r, s)) = v.first() {
            let Some(&k) = self.by_lead.get(r) else { break };
            let p = &self.pivots[k];
            let factor = -s.clone();
            v = axpy(&v, &factor, &p.vector);
            comb = axpy(&comb, &factor, &p.combination);
        }
        (v, comb)
    }

    /// Fully reduces `v`: every pivot lead is cleared, not just the first row.
    fn reduce_fully(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut coeffs: SparseVec = Vec::new();
        let mut rest: SparseVec = Vec::new();
        while let Some((r, s)) = v.first().cloned() {
            match self.by_lead.get(&r) {
                Some(&k) => {
                    let p = &self.pivots[k];
                    coeffs = axpy(&coeffs, &s, &p.combination);
                    v = axpy(&v, &-s, &p.vector);
                }
                None => {
                    rest.push((r, s));
                    v.remove(0);
                }
            }
        }
        (rest, coeffs)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    /// Kernel basis, one vector per non-pivot column, in column order.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Indices of the columns that became pivots.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivot_columns
    }

    /// Returns `x` with `M x = v` if `v` lies in the column space.
    pub fn solve(&self, v: &SparseVec) -> Result<Option<SparseVec>, MatrixError> {
        if let Some((r, _)) = v.last() {
            if *r >= self.rows {
                return Err(MatrixError::VectorLength { expected: self.rows, got: r + 1 });
            }
        }
        let (rest, coeffs) = self.reduce_fully(v);
        if rest.is_empty() {
            Ok(Some(coeffs))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_fully(v).0.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    ColumnEchelon::new(m).rank()
}

/// Basis of `ker(m)`: `cols - rank` vectors, each satisfying `m v = 0`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    ColumnEchelon::new(m).kernel
}

/// Kernel basis packed as the columns of a matrix.
pub fn kernel_matrix(m: &SparseMatrix) -> SparseMatrix {
    let k = kernel_basis(m);
    SparseMatrix::from_columns(m.field(), m.cols(), k).expect("kernel vectors are in range")
}

/// Solves `m x = v`. `Ok(None)` means `v` is not in the image.
pub fn solve_membership(m: &SparseMatrix, v: &SparseVec) -> Result<Option<SparseVec>, MatrixError> {
    if let Some((r, _)) = v.last() {
        if *r >= m.rows() {
            return Err(MatrixError::VectorLength { expected: m.rows(), got: r + 1 });
        }
    }
    ColumnEchelon::new(m).solve(v)
}

/// Dense-vector variant of [`solve_membership`].
pub fn solve_dense(m: &SparseMatrix, v: &[Scalar]) -> Result<Option<SparseVec>, MatrixError> {
    if v.len() != m.rows() {
        return Err(MatrixError::VectorLength { expected: m.rows(), got: v.len() });
    }
    solve_membership(m, &super::sparse::from_dense(v))
}

/// Inverse of a square matrix, `None` if singular.
pub fn invert(m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let e = ColumnEchelon::new(m);
    if e.rank() != m.cols() {
        return None;
    }
    let one = m.field().one();
    let cols =
        (0..m.rows()).map(|i| e.solve(&vec![(i, one.clone())]).ok().flatten()).collect::<Option<Vec<_>>>()?;
    SparseMatrix::from_columns(m.field(), m.cols(), cols).ok()
}

/// A basis of the column space, taken from the original pivot columns.
pub fn column_space_basis(m: &SparseMatrix) -> SparseMatrix {
    let e = ColumnEchelon::new(m);
    m.select_columns(e.pivot_columns())
}

/// Whether every column of `sub` lies in the column space of `m`.
/// Returns the first offending column otherwise.
pub fn span_contains(m: &SparseMatrix, sub: &SparseMatrix) -> Result<Option<usize>, MatrixError> {
    if m.rows() != sub.rows() {
        return Err(MatrixError::Shape { op: "span containment", left: m.shape(), right: sub.shape() });
    }
    let e = ColumnEchelon::new(m);
    Ok(sub.columns().iter().position(|c| !e.contains(c)))
}

/// Whether two matrices have the same column space.
pub fn same_span(a: &SparseMatrix, b: &SparseMatrix) -> Result<bool, MatrixError> {
    Ok(span_contains(a, b)?.is_none() && span_contains(b, a)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::SparseMatrix;

    fn mat(f: ExactField, rows: &[&[i64]]) -> SparseMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let t = rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, f.from_i64(v))));
        SparseMatrix::from_triplets(f, r, c, t).unwrap()
    }

    #[test]
    fn ranks_of_simple_matrices() {
        let q = ExactField::Rationals;
        assert_eq!(rank(&SparseMatrix::zero(q, 3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(q, 4)), 4);
        let f2 = ExactField::Prime(2);
        assert_eq!(rank(&mat(f2, &[&[1, 1], &[1, 1]])), 1);
        assert_eq!(rank(&mat(q, &[&[1, 1], &[1, -1]])), 2);
        assert_eq!(rank(&mat(f2, &[&[1, 1], &[1, -1]])), 1);
    }

    #[test]
    fn kernels() {
        let q = ExactField::Rationals;
        assert!(kernel_basis(&SparseMatrix::identity(q, 5)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zero(q, 1, 3)).len(), 3);
        let m = mat(q, &[&[1, 2]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // proportional to (2, -1)
        assert_eq!(v.len(), 2);
        assert_eq!(&v[0].1 + &(&v[1].1 * &q.from_i64(2)), q.zero());
        assert!(m.mul_vec(v).is_empty());
    }

    #[test]
    fn membership() {
        let q = ExactField::Rationals;
        let id = SparseMatrix::identity(q, 3);
        let v = vec![(0, q.from_i64(7)), (2, q.from_i64(-1))];
        assert_eq!(solve_membership(&id, &v).unwrap(), Some(v.clone()));
        let z = SparseMatrix::zero(q, 3, 3);
        assert_eq!(solve_membership(&z, &v).unwrap(), None);
        let m = mat(q, &[&[1], &[2]]);
        let x = solve_dense(&m, &[q.from_i64(3), q.from_i64(6)]).unwrap();
        assert_eq!(x, Some(vec![(0, q.from_i64(3))]));
        assert!(solve_dense(&m, &[q.from_i64(3)]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let q = ExactField::Rationals;
        let m = mat(q, &[&[2, 1], &[1, 1]]);
        let inv = invert(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), SparseMatrix::identity(q, 2));
        assert!(invert(&mat(q, &[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn dependent_columns_solve_exactly() {
        let q = ExactField::Rationals;
        let m = mat(q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(rank(&m), 2);
        let target = m.mul_vec(&vec![(0, q.from_i64(1)), (2, q.from_i64(-2))]);
        let x = solve_membership(&m, &target).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), target);
    }
}
