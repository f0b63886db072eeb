//! Column-major sparse matrices over an [`ExactField`].

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use super::field::{ExactField, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {op} of {left:?} and {right:?}")]
    Shape { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("vector of length {got} does not match {expected} rows")]
    VectorLength { expected: usize, got: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("matrices live over different fields")]
    FieldMismatch,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: ExactField,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: ExactField, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: ExactField, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { field, rows: n, cols: n, columns }
    }

    /// Builds a matrix from unsorted columns; duplicate rows are summed and zeros dropped.
    pub fn from_columns(
        field: ExactField,
        rows: usize,
        columns: Vec<Vec<(usize, Scalar)>>,
    ) -> Result<Self, MatrixError> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for (j, col) in columns.into_iter().enumerate() {
            for (r, _) in &col {
                if *r >= rows {
                    return Err(MatrixError::OutOfRange { row: *r, col: j, rows, cols });
                }
            }
            out.push(normalize(col));
        }
        Ok(SparseMatrix { field, rows, cols, columns: out })
    }

    /// Builds a matrix from (row, col, value) triples in any order.
    pub fn from_triplets(
        field: ExactField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, MatrixError> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(MatrixError::OutOfRange { row: r, col: c, rows, cols });
            }
            columns[c].push((r, v));
        }
        Self::from_columns(field, rows, columns)
    }

    /// Builds a matrix column by column in parallel. The closure receives a
    /// column index and returns that column (unsorted, duplicates allowed).
    /// Columns are collected in index order, so the result does not depend
    /// on scheduling.
    pub fn build_columns<F>(field: ExactField, rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize) -> Vec<(usize, Scalar)> + Sync + Send,
    {
        let columns: Vec<SparseVec> = (0..cols)
            .into_par_iter()
            .map(|j| {
                let col = normalize(f(j));
                debug_assert!(col.iter().all(|(r, _)| *r < rows));
                col
            })
            .collect();
        SparseMatrix { field, rows, cols, columns }
    }

    pub fn field(&self) -> ExactField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Entries in canonical (column, then row) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (r.to_owned(), c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { field: self.field, rows: self.cols, cols: self.rows, columns }
    }

    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Scalar)> = Vec::new();
        for (j, xj) in x {
            for (r, v) in &self.columns[*j] {
                acc.push((*r, v * xj));
            }
        }
        normalize(acc)
    }

    pub fn try_mul_vec(&self, x: &SparseVec) -> Result<SparseVec, MatrixError> {
        if let Some((j, _)) = x.last() {
            if *j >= self.cols {
                return Err(MatrixError::VectorLength { expected: self.cols, got: j + 1 });
            }
        }
        Ok(self.mul_vec(x))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape { op: "product", left: self.shape(), right: rhs.shape() });
        }
        self.check_field(rhs)?;
        let columns: Vec<SparseVec> = rhs.columns.par_iter().map(|col| self.mul_vec(col)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: rhs.cols, columns })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        self.combine(rhs, &self.field.one(), "sum")
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        self.combine(rhs, &-self.field.one(), "difference")
    }

    /// `self + s * rhs`.
    pub fn add_scaled(&self, rhs: &SparseMatrix, s: &Scalar) -> Result<SparseMatrix, MatrixError> {
        self.combine(rhs, s, "sum")
    }

    fn combine(&self, rhs: &SparseMatrix, s: &Scalar, op: &'static str) -> Result<SparseMatrix, MatrixError> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::Shape { op, left: self.shape(), right: rhs.shape() });
        }
        self.check_field(rhs)?;
        let columns = self.columns.iter().zip(&rhs.columns).map(|(a, b)| axpy(a, s, b)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, columns })
    }

    pub fn scale(&self, s: &Scalar) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zero(self.field, self.rows, self.cols);
        }
        let columns = self.columns.iter().map(|col| col.iter().map(|(r, v)| (*r, v * s)).collect()).collect();
        SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, columns }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if self.rows != rhs.rows {
            return Err(MatrixError::Shape { op: "hstack", left: self.shape(), right: rhs.shape() });
        }
        self.check_field(rhs)?;
        let mut columns = self.columns.clone();
        columns.extend(rhs.columns.iter().cloned());
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: self.cols + rhs.cols, columns })
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: idx.len(),
            columns: idx.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }

    /// First position where the two matrices differ, in column-major order.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((0, 0));
        }
        for (c, (a, b)) in self.columns.iter().zip(&other.columns).enumerate() {
            if a != b {
                let diff = axpy(a, &-self.field.one(), b);
                return Some((diff[0].0, c));
            }
        }
        None
    }

    fn check_field(&self, rhs: &SparseMatrix) -> Result<(), MatrixError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix {}x{} over {} [", self.rows, self.cols, self.field)?;
        for (k, (r, c, v)) in self.entries().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({r},{c})={v}")?;
        }
        write!(f, "]")
    }
}

/// Sorts by index, sums duplicates and drops zeros.
pub fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    if v.len() <= 1 {
        v.retain(|(_, s)| !s.is_zero());
        return v;
    }
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, s) in v {
        match out.last_mut() {
            Some((j, acc)) if *j == i => *acc += &s,
            _ => {
                if let Some((_, acc)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((i, s));
            }
        }
    }
    if let Some((_, acc)) = out.last() {
        if acc.is_zero() {
            out.pop();
        }
    }
    out
}

/// `a + s * b` on sorted sparse vectors.
pub fn axpy(a: &SparseVec, s: &Scalar, b: &SparseVec) -> SparseVec {
    if s.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, s * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(s * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &SparseVec, s: &Scalar) -> SparseVec {
    if s.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * s)).collect()
}

/// Dense coordinates of a sparse vector.
pub fn to_dense(field: ExactField, v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, s) in v {
        out[*i] = s.clone();
    }
    out
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        ExactField::Rationals.from_i64(v)
    }

    #[test]
    fn normalize_merges_and_drops() {
        let v = normalize(vec![(3, q(1)), (1, q(2)), (3, q(-1)), (1, q(1))]);
        assert_eq!(v, vec![(1, q(3))]);
    }

    #[test]
    fn product_and_transpose() {
        let f = ExactField::Rationals;
        let a = SparseMatrix::from_triplets(f, 2, 3, [(0, 0, q(1)), (1, 2, q(2))]).unwrap();
        let at = a.transpose();
        assert_eq!(at.shape(), (3, 2));
        let p = a.mul(&at).unwrap();
        assert_eq!(p.get(0, 0), q(1));
        assert_eq!(p.get(1, 1), q(4));
        assert!(at.mul(&at).is_err());
    }

    #[test]
    fn difference_witness() {
        let f = ExactField::Rationals;
        let a = SparseMatrix::identity(f, 3);
        let mut t = vec![(0, 0, q(1)), (1, 1, q(1)), (2, 2, q(1)), (2, 1, q(5))];
        let b = SparseMatrix::from_triplets(f, 3, 3, t.drain(..)).unwrap();
        assert_eq!(a.first_difference(&b), Some((2, 1)));
        assert_eq!(a.first_difference(&a.clone()), None);
    }
}
