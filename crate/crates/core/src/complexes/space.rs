//! Enumerated bases of `C ⊗ A^{⊗ slots}` and cochains on them.

use serde::{Deserialize, Serialize};

use crate::linalg::sparse::normalize;
use crate::linalg::{ExactField, Scalar, SparseVec};
use crate::structures::EntwiningStructure;

use super::ComplexError;

/// The basis of `C ⊗ A^{⊗ slots}`, enumerated lexicographically with the
/// coalgebra index most significant. Degree `n` cochains and chains use
/// `slots = n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorSpace {
    pub dim_c: usize,
    pub dim_a: usize,
    pub slots: usize,
}

impl TensorSpace {
    pub fn new(dim_c: usize, dim_a: usize, slots: usize) -> Self {
        TensorSpace { dim_c, dim_a, slots }
    }

    /// The space of degree-`n` (co)chains of `s`.
    pub fn degree(s: &EntwiningStructure, n: usize) -> Self {
        Self::new(s.dim_c(), s.dim_a(), n + 1)
    }

    pub fn cochain_degree(&self) -> usize {
        self.slots.saturating_sub(1)
    }

    pub fn dim(&self) -> usize {
        self.dim_c * self.dim_a.pow(self.slots as u32)
    }

    /// Dimension without overflow; `None` if it does not fit in `usize`.
    pub fn checked_dim(&self) -> Option<usize> {
        self.dim_a.checked_pow(self.slots as u32).and_then(|p| p.checked_mul(self.dim_c))
    }

    pub fn encode(&self, c: usize, a: &[usize]) -> usize {
        debug_assert_eq!(a.len(), self.slots);
        a.iter().fold(c, |acc, &x| acc * self.dim_a + x)
    }

    pub fn decode(&self, mut idx: usize) -> (usize, Vec<usize>) {
        let mut a = vec![0; self.slots];
        for slot in (0..self.slots).rev() {
            a[slot] = idx % self.dim_a;
            idx /= self.dim_a;
        }
        (idx, a)
    }

    pub fn same_shape(&self, other: &TensorSpace) -> bool {
        self == other
    }
}

/// A functional on `C ⊗ A^{⊗(n+1)}`, stored by its values on basis tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub space: TensorSpace,
    pub field: ExactField,
    pub values: SparseVec,
}

impl Cochain {
    pub fn zero(s: &EntwiningStructure, n: usize) -> Self {
        Cochain { space: TensorSpace::degree(s, n), field: s.field(), values: Vec::new() }
    }

    pub fn from_values(s: &EntwiningStructure, n: usize, values: SparseVec) -> Result<Self, ComplexError> {
        let space = TensorSpace::degree(s, n);
        let values = normalize(values);
        if let Some((i, _)) = values.last() {
            if *i >= space.dim() {
                return Err(ComplexError::IndexOutOfRange { index: *i, dim: space.dim() });
            }
        }
        Ok(Cochain { space, field: s.field(), values })
    }

    /// Builds a cochain from `(c, [a_1..a_{n+1}], value)` entries.
    pub fn from_entries(
        s: &EntwiningStructure,
        n: usize,
        entries: impl IntoIterator<Item = (usize, Vec<usize>, Scalar)>,
    ) -> Result<Self, ComplexError> {
        let space = TensorSpace::degree(s, n);
        let mut values = Vec::new();
        for (c, a, v) in entries {
            if a.len() != space.slots {
                return Err(ComplexError::Arity { expected: space.slots, got: a.len() });
            }
            if c >= space.dim_c || a.iter().any(|&x| x >= space.dim_a) {
                return Err(ComplexError::IndexOutOfRange {
                    index: c.max(a.iter().copied().max().unwrap_or(0)),
                    dim: space.dim_a.max(space.dim_c),
                });
            }
            values.push((space.encode(c, &a), v));
        }
        Self::from_values(s, n, values)
    }

    pub fn degree(&self) -> usize {
        self.space.cochain_degree()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `(c, [a_1..a_{n+1}], value)` in canonical order.
    pub fn entries(&self) -> Vec<(usize, Vec<usize>, Scalar)> {
        self.values
            .iter()
            .map(|(i, v)| {
                let (c, a) = self.space.decode(*i);
                (c, a, v.clone())
            })
            .collect()
    }

    pub fn value(&self, c: usize, a: &[usize]) -> Scalar {
        let idx = self.space.encode(c, a);
        match self.values.binary_search_by_key(&idx, |(i, _)| *i) {
            Ok(k) => self.values[k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, ComplexError> {
        self.same_space(other)?;
        Ok(Cochain {
            values: crate::linalg::sparse::axpy(&self.values, &self.field.one(), &other.values),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain, ComplexError> {
        self.same_space(other)?;
        Ok(Cochain {
            values: crate::linalg::sparse::axpy(&self.values, &-self.field.one(), &other.values),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        Cochain { values: crate::linalg::sparse::scale_vec(&self.values, s), ..self.clone() }
    }

    fn same_space(&self, other: &Cochain) -> Result<(), ComplexError> {
        if self.space != other.space || self.field != other.field {
            return Err(ComplexError::SpaceMismatch);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_lexicographic_with_coalgebra_first() {
        let sp = TensorSpace::new(2, 3, 2);
        assert_eq!(sp.dim(), 18);
        assert_eq!(sp.encode(0, &[0, 1]), 1);
        assert_eq!(sp.encode(0, &[1, 0]), 3);
        assert_eq!(sp.encode(1, &[0, 0]), 9);
        for i in 0..sp.dim() {
            let (c, a) = sp.decode(i);
            assert_eq!(sp.encode(c, &a), i);
        }
    }
}
