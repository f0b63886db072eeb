//! The degree-truncated universal differential graded algebra `Ω^{≤N} A`
//! with its product, differential and lifted entwining `ψ̂`.
//!
//! A basis word of `Ω^n A` (`n ≥ 1`) is a head in `Ã = A ⊕ k` followed by
//! `n` letters from the basis of `A`. Head index `dim A` stands for the
//! scalar `1 ∈ k`. `Ω^0 A = A` has heads only.

use crate::linalg::sparse::normalize;
use crate::linalg::{ExactField, Scalar, SparseMatrix, SparseVec};
use crate::structures::EntwiningStructure;

use super::dg::DgEntwining;
use super::OmegaError;

/// A word `(a_0 + μ) d a_1 … d a_n` with `a_i` given as vectors in `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaWord {
    pub mu: Scalar,
    pub a0: SparseVec,
    pub letters: Vec<SparseVec>,
}

impl OmegaWord {
    pub fn degree(&self) -> usize {
        self.letters.len()
    }
}

/// Basis data and structure tables of `Ω^{≤N} A`.
#[derive(Debug, Clone)]
pub struct TruncatedOmega {
    structure: EntwiningStructure,
    max_degree: usize,
    dims: Vec<usize>,
}

impl TruncatedOmega {
    pub fn new(s: &EntwiningStructure, max_degree: usize) -> Result<Self, OmegaError> {
        s.require_valid()?;
        s.require_unital()?;
        let d = s.dim_a();
        let mut dims = vec![d];
        for n in 1..=max_degree {
            let dim = (1..=n)
                .try_fold(d + 1, |acc, _| acc.checked_mul(d))
                .ok_or(OmegaError::TooLarge { degree: n })?;
            dims.push(dim);
        }
        Ok(TruncatedOmega { structure: s.clone(), max_degree, dims })
    }

    pub fn structure(&self) -> &EntwiningStructure {
        &self.structure
    }

    pub fn field(&self) -> ExactField {
        self.structure.field()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Head index of the scalar part.
    pub fn mu_head(&self) -> usize {
        self.structure.dim_a()
    }

    pub fn encode(&self, head: usize, letters: &[usize]) -> usize {
        let d = self.structure.dim_a();
        letters.iter().fold(head, |acc, &x| acc * d + x)
    }

    pub fn decode(&self, n: usize, mut idx: usize) -> (usize, Vec<usize>) {
        let d = self.structure.dim_a();
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        (idx, letters)
    }

    fn check_degree(&self, n: usize) -> Result<(), OmegaError> {
        if n > self.max_degree {
            Err(OmegaError::Truncated { degree: n, max: self.max_degree })
        } else {
            Ok(())
        }
    }

    /// Multilinear expansion of `head ⊗ letters` into degree-`n` coordinates.
    fn expand(&self, head: &SparseVec, letters: &[SparseVec], coef: &Scalar, out: &mut Vec<(usize, Scalar)>) {
        if head.is_empty() || coef.is_zero() {
            return;
        }
        let mut partial: Vec<(usize, Scalar)> = head.iter().map(|(h, w)| (*h, w * coef)).collect();
        let d = self.structure.dim_a();
        for l in letters {
            let mut next = Vec::with_capacity(partial.len() * l.len());
            for (idx, w) in &partial {
                for (x, v) in l {
                    next.push((idx * d + x, w * v));
                }
            }
            partial = next;
        }
        out.extend(partial);
    }

    /// Coordinates of a word given by vectors.
    pub fn word(&self, w: &OmegaWord) -> Result<SparseVec, OmegaError> {
        let n = w.degree();
        self.check_degree(n)?;
        let mut head = w.a0.clone();
        if n > 0 && !w.mu.is_zero() {
            head.push((self.mu_head(), w.mu.clone()));
        }
        let mut out = Vec::new();
        self.expand(&normalize(head), &w.letters, &self.field().one(), &mut out);
        Ok(normalize(out))
    }

    fn mul_a(&self, x: usize, y: usize) -> SparseVec {
        self.structure.algebra().basis_product(x, y).clone()
    }

    fn basis(&self, x: usize) -> SparseVec {
        vec![(x, self.field().one())]
    }

    /// Product of two basis words by the closed formula.
    pub fn product_basis(&self, i: usize, x: usize, j: usize, y: usize) -> Result<SparseVec, OmegaError> {
        self.check_degree(i + j)?;
        let f = self.field();
        let one = f.one();
        let mu = self.mu_head();
        let (hp, p) = self.decode(i, x);
        let (hq, q) = self.decode(j, y);
        let q_letters: Vec<SparseVec> = q.iter().map(|&l| self.basis(l)).collect();
        let mut out = Vec::new();
        if i == 0 {
            // p_0 · ((q_0 + ν) dq_1 … dq_j)
            let head = if hq == mu { self.basis(hp) } else { self.mul_a(hp, hq) };
            self.expand(&head, &q_letters, &one, &mut out);
            return Ok(normalize(out));
        }
        let head_p = self.basis(hp);
        let p_letters: Vec<SparseVec> = p.iter().map(|&l| self.basis(l)).collect();
        if hq != mu {
            // dp_1 … dp_{i-1} d(p_i q_0) dq_1 … dq_j
            let mut letters = p_letters[..i - 1].to_vec();
            letters.push(self.mul_a(p[i - 1], hq));
            letters.extend(q_letters.iter().cloned());
            self.expand(&head_p, &letters, &one, &mut out);
            // Σ_l (-1)^{i-l} dp_1 … d(p_l p_{l+1}) … dp_i dq_0 dq_1 … dq_j
            for l in 1..i {
                let mut letters = p_letters[..l - 1].to_vec();
                letters.push(self.mul_a(p[l - 1], p[l]));
                letters.extend(p_letters[l + 1..].iter().cloned());
                letters.push(self.basis(hq));
                letters.extend(q_letters.iter().cloned());
                let sign = if (i - l).is_multiple_of(2) { one.clone() } else { -one.clone() };
                self.expand(&head_p, &letters, &sign, &mut out);
            }
            // (-1)^i ((p_0 + μ) p_1) dp_2 … dp_i dq_0 dq_1 … dq_j
            let head = if hp == mu { self.basis(p[0]) } else { self.mul_a(hp, p[0]) };
            let mut letters = p_letters[1..].to_vec();
            letters.push(self.basis(hq));
            letters.extend(q_letters.iter().cloned());
            let sign = if i.is_multiple_of(2) { one.clone() } else { -one.clone() };
            self.expand(&head, &letters, &sign, &mut out);
        } else {
            // ν (p_0 + μ) dp_1 … dp_i dq_1 … dq_j
            let mut letters = p_letters;
            letters.extend(q_letters);
            self.expand(&head_p, &letters, &one, &mut out);
        }
        Ok(normalize(out))
    }

    /// `d((a_0 + μ) da_1 … da_n) = da_0 da_1 … da_n`.
    pub fn differential_basis(&self, n: usize, x: usize) -> Result<SparseVec, OmegaError> {
        self.check_degree(n + 1)?;
        let (h, letters) = self.decode(n, x);
        if h == self.mu_head() {
            return Ok(Vec::new());
        }
        let mut out = vec![h];
        out.extend(letters);
        Ok(vec![(self.encode(self.mu_head(), &out), self.field().one())])
    }

    /// `ψ̂(c ⊗ w)` as a vector over `w' * dim C + c'`.
    pub fn psi_hat_basis(&self, n: usize, c: usize, x: usize) -> SparseVec {
        let (h, letters) = self.decode(n, x);
        let mu = self.mu_head();
        let dc = self.structure.dim_c();
        let mut slots = Vec::with_capacity(n + 1);
        if h != mu {
            slots.push(h);
        }
        slots.extend(letters);
        let passed = pass_through(&self.structure, c, &slots);
        let out = passed
            .into_iter()
            .map(|(u, c2, w)| {
                let idx = if h == mu { self.encode(mu, &u) } else { self.encode(u[0], &u[1..]) };
                (idx * dc + c2, w)
            })
            .collect();
        normalize(out)
    }

    /// The complete tables as a dg-entwining structure with `ρ = id_A`.
    pub fn to_dg(&self) -> DgEntwining {
        let f = self.field();
        let n_max = self.max_degree;
        let dc = self.structure.dim_c();
        let mut products = Vec::new();
        for i in 0..=n_max {
            let mut row = Vec::new();
            for j in 0..=n_max - i {
                let mut table = Vec::with_capacity(self.dims[i] * self.dims[j]);
                for x in 0..self.dims[i] {
                    for y in 0..self.dims[j] {
                        table.push(self.product_basis(i, x, j, y).expect("within truncation"));
                    }
                }
                row.push(table);
            }
            products.push(row);
        }
        let differentials = (0..n_max)
            .map(|n| {
                SparseMatrix::build_columns(f, self.dims[n + 1], self.dims[n], |x| {
                    self.differential_basis(n, x).expect("within truncation")
                })
            })
            .collect();
        let psi = (0..=n_max)
            .map(|n| {
                (0..dc * self.dims[n])
                    .map(|cx| self.psi_hat_basis(n, cx / self.dims[n], cx % self.dims[n]))
                    .collect()
            })
            .collect();
        DgEntwining {
            field: f,
            dims: self.dims.clone(),
            coalgebra: self.structure.coalgebra().clone(),
            products,
            differentials,
            psi,
            base: Some(self.structure.clone()),
            rho: Some(SparseMatrix::identity(f, self.structure.dim_a())),
        }
    }
}

/// Moves `c` through `slots` from left to right: returns the terms
/// `(a_{1ψ}, …, a_{kψ}, c^{ψ^k}, weight)`.
pub fn pass_through(s: &EntwiningStructure, c: usize, slots: &[usize]) -> Vec<(Vec<usize>, usize, Scalar)> {
    let psi = s.entwining();
    let mut states: Vec<(Vec<usize>, usize, Scalar)> =
        vec![(Vec::with_capacity(slots.len()), c, s.field().one())];
    for &a in slots {
        let mut next = Vec::new();
        for (u, c1, w) in &states {
            for (p, q, v) in psi.terms(*c1, a) {
                let mut u2 = u.clone();
                u2.push(p);
                next.push((u2, q, w * v));
            }
        }
        states = next;
    }
    states
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{FiniteAlgebra, FiniteCoalgebra};

    #[test]
    fn dimensions() {
        let f = ExactField::Rationals;
        let s = EntwiningStructure::flip(
            FiniteAlgebra::truncated_polynomial(f, 2),
            FiniteCoalgebra::grouplike(f, 1),
        )
        .unwrap();
        let om = TruncatedOmega::new(&s, 3).unwrap();
        assert_eq!(om.dims(), &[2, 6, 12, 24]);
        let k = TruncatedOmega::new(&EntwiningStructure::trivial(f), 3).unwrap();
        assert_eq!(k.dims(), &[1, 2, 2, 2]);
    }

    #[test]
    fn da_times_b_rewrites() {
        // (da)·b = d(ab) − a db
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::flip(FiniteAlgebra::truncated_polynomial(f, 3), FiniteCoalgebra::ground(f))
                .unwrap();
        let om = TruncatedOmega::new(&s, 2).unwrap();
        let mu = om.mu_head();
        let (a, b) = (1, 1);
        let lhs = om.product_basis(1, om.encode(mu, &[a]), 0, b).unwrap();
        let mut expected = Vec::new();
        for (k, w) in om.structure().algebra().basis_product(a, b) {
            expected.push((om.encode(mu, &[*k]), w.clone()));
        }
        expected.push((om.encode(a, &[b]), -f.one()));
        assert_eq!(lhs, normalize(expected));
    }

    #[test]
    fn truncation_is_reported() {
        let om = TruncatedOmega::new(&EntwiningStructure::trivial(ExactField::Rationals), 1).unwrap();
        assert!(matches!(om.product_basis(1, 0, 1, 0), Err(OmegaError::Truncated { degree: 2, max: 1 })));
        assert!(om.differential_basis(1, 0).is_err());
    }

    #[test]
    fn psi_hat_in_degree_zero_is_psi() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap();
        let om = TruncatedOmega::new(&s, 1).unwrap();
        for c in 0..s.dim_c() {
            for a in 0..s.dim_a() {
                assert_eq!(&om.psi_hat_basis(0, c, a), s.entwining().apply_basis(c, a));
            }
        }
    }
}
