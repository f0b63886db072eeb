//! Truncated differential graded entwining structures given by explicit
//! structure-constant tables, and their exact validation.

use serde::Serialize;

use crate::linalg::sparse::{axpy, normalize, scale_vec};
use crate::linalg::{ExactField, Scalar, SparseMatrix, SparseVec};
use crate::structures::{EntwiningStructure, FiniteCoalgebra};

use super::universal::TruncatedOmega;
use super::OmegaError;

/// A dg-entwining `((R, D), C, Ψ)` in degrees `0..=N`, optionally over a
/// base structure `(A, C, ψ)` through `ρ : A → R^0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgEntwining {
    pub field: ExactField,
    /// `dims[n] = dim R^n`; the truncation degree is `dims.len() - 1`.
    pub dims: Vec<usize>,
    pub coalgebra: FiniteCoalgebra,
    /// `products[i][j][x * dims[j] + y]` is the product of basis elements,
    /// a vector in `R^{i+j}`, for `i + j ≤ N`.
    pub products: Vec<Vec<Vec<SparseVec>>>,
    /// `differentials[n] : R^n → R^{n+1}` for `n < N`.
    pub differentials: Vec<SparseMatrix>,
    /// `psi[n][c * dims[n] + r]` is `Ψ(c ⊗ r)` over `r' * dim C + c'`.
    pub psi: Vec<Vec<SparseVec>>,
    pub base: Option<EntwiningStructure>,
    /// `dim R^0 × dim A`.
    pub rho: Option<SparseMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgVerdict {
    pub check: String,
    pub degrees: Vec<usize>,
    pub passed: bool,
    /// Basis indices of the first failing input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DgReport {
    pub max_degree: usize,
    pub verdicts: Vec<DgVerdict>,
}

impl DgReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DgVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

fn verdict(check: &str, degrees: Vec<usize>, witness: Option<Vec<usize>>) -> DgVerdict {
    DgVerdict { check: check.to_string(), degrees, passed: witness.is_none(), witness }
}

impl DgEntwining {
    /// `R = A` in degree 0, `D = 0`, `Ψ = ψ`, `ρ = id`.
    pub fn from_structure(s: &EntwiningStructure) -> Self {
        let d = s.dim_a();
        let dc = s.dim_c();
        let table = (0..d * d).map(|xy| s.algebra().basis_product(xy / d, xy % d).clone()).collect();
        let psi = (0..dc * d).map(|cx| s.entwining().apply_basis(cx / d, cx % d).clone()).collect();
        DgEntwining {
            field: s.field(),
            dims: vec![d],
            coalgebra: s.coalgebra().clone(),
            products: vec![vec![table]],
            differentials: Vec::new(),
            psi: vec![psi],
            base: Some(s.clone()),
            rho: Some(SparseMatrix::identity(s.field(), d)),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim_c(&self) -> usize {
        self.coalgebra.dim()
    }

    fn truncated(&self, n: usize) -> OmegaError {
        OmegaError::Truncated { degree: n, max: self.max_degree() }
    }

    /// Checks that every table has the advertised shape.
    pub fn check_shapes(&self) -> Result<(), OmegaError> {
        let n = self.max_degree();
        let dc = self.dim_c();
        let bad = |what: &str| Err(OmegaError::Malformed(what.to_string()));
        if self.products.len() != n + 1 || self.psi.len() != n + 1 || self.differentials.len() != n {
            return bad("table count does not match the truncation degree");
        }
        for i in 0..=n {
            if self.products[i].len() != n - i + 1 {
                return bad("product table rows");
            }
            for j in 0..=n - i {
                let t = &self.products[i][j];
                if t.len() != self.dims[i] * self.dims[j]
                    || t.iter().flatten().any(|(k, _)| *k >= self.dims[i + j])
                {
                    return bad("product table shape");
                }
            }
            if self.psi[i].len() != dc * self.dims[i]
                || self.psi[i].iter().flatten().any(|(k, _)| *k >= dc * self.dims[i])
            {
                return bad("entwining table shape");
            }
        }
        for (m, d) in self.differentials.iter().enumerate() {
            if d.shape() != (self.dims[m + 1], self.dims[m]) {
                return bad("differential shape");
            }
        }
        if let (Some(base), Some(rho)) = (&self.base, &self.rho) {
            if rho.shape() != (self.dims[0], base.dim_a()) {
                return bad("rho shape");
            }
            if base.dim_c() != dc {
                return bad("base coalgebra dimension");
            }
        }
        if self.base.is_some() != self.rho.is_some() {
            return bad("base and rho must be given together");
        }
        Ok(())
    }

    pub fn mul(&self, i: usize, x: &SparseVec, j: usize, y: &SparseVec) -> Result<SparseVec, OmegaError> {
        if i + j > self.max_degree() {
            return Err(self.truncated(i + j));
        }
        let table = &self.products[i][j];
        let dj = self.dims[j];
        let mut out = Vec::new();
        for (a, u) in x {
            for (b, v) in y {
                let w = u * v;
                out.extend(table[a * dj + b].iter().map(|(k, z)| (*k, z * &w)));
            }
        }
        Ok(normalize(out))
    }

    pub fn diff(&self, n: usize, x: &SparseVec) -> Result<SparseVec, OmegaError> {
        if n >= self.max_degree() {
            return Err(self.truncated(n + 1));
        }
        Ok(self.differentials[n].mul_vec(x))
    }

    /// `Ψ(c ⊗ x)` over `r' * dim C + c'`.
    pub fn psi_apply(&self, n: usize, c: usize, x: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (r, w) in x {
            out.extend(self.psi[n][c * self.dims[n] + r].iter().map(|(k, v)| (*k, v * w)));
        }
        normalize(out)
    }

    fn basis(&self, x: usize) -> SparseVec {
        vec![(x, self.field.one())]
    }

    /// Checks every dg-entwining law exactly; with a base structure also
    /// checks that `ρ` is multiplicative and compatible with `ψ` and `Ψ^0`.
    pub fn validate(&self) -> Result<DgReport, OmegaError> {
        self.check_shapes()?;
        let n_max = self.max_degree();
        let dc = self.dim_c();
        let mut verdicts = Vec::new();

        for n in 0..n_max.saturating_sub(1) {
            let w = (0..self.dims[n]).find(|&x| {
                let dx = self.diff(n, &self.basis(x)).expect("in range");
                !self.diff(n + 1, &dx).expect("in range").is_empty()
            });
            verdicts.push(verdict("D D = 0", vec![n], w.map(|x| vec![x])));
        }

        for i in 0..=n_max {
            for j in 0..=n_max - i {
                for k in 0..=n_max - i - j {
                    let w = self.first_triple(i, j, k, |x, y, z| {
                        let left = self.mul(i + j, &self.mul(i, x, j, y).unwrap(), k, z).unwrap();
                        let right = self.mul(i, x, j + k, &self.mul(j, y, k, z).unwrap()).unwrap();
                        left != right
                    });
                    verdicts.push(verdict("associativity", vec![i, j, k], w));
                }
            }
        }

        for i in 0..=n_max {
            for j in 0..=n_max - i {
                if i + j + 1 > n_max {
                    continue;
                }
                let sign = if i % 2 == 0 { self.field.one() } else { -self.field.one() };
                let w = self.first_pair(i, j, |x, y| {
                    let lhs = self.diff(i + j, &self.mul(i, x, j, y).unwrap()).unwrap();
                    let a = self.mul(i + 1, &self.diff(i, x).unwrap(), j, y).unwrap();
                    let b = self.mul(i, x, j + 1, &self.diff(j, y).unwrap()).unwrap();
                    lhs != axpy(&a, &sign, &b)
                });
                verdicts.push(verdict("Leibniz rule", vec![i, j], w));
            }
        }

        for n in 0..n_max {
            let w = self.first_c_r(n, |c, r| {
                let lhs = self.psi_apply(n + 1, c, &self.diff(n, r).unwrap());
                lhs != self.diff_psi_output(n, &self.psi_apply(n, c, r))
            });
            verdicts.push(verdict("Psi is a chain map", vec![n], w));
        }

        for i in 0..=n_max {
            for j in 0..=n_max - i {
                let mut w = None;
                'outer: for c in 0..dc {
                    for x in 0..self.dims[i] {
                        for y in 0..self.dims[j] {
                            let xy = self.mul(i, &self.basis(x), j, &self.basis(y)).unwrap();
                            let lhs = self.psi_apply(i + j, c, &xy);
                            let rhs = self.psi_of_product(i, &self.basis(x), j, &self.basis(y), c);
                            if lhs != rhs {
                                w = Some(vec![c, x, y]);
                                break 'outer;
                            }
                        }
                    }
                }
                verdicts.push(verdict("Psi multiplicativity", vec![i, j], w));
            }
        }

        for n in 0..=n_max {
            let w = self.first_c_r(n, |c, r| {
                // Σ r_Ψ ⊗ Δ(c^Ψ) against (Ψ ⊗ id)(id ⊗ Ψ)(Δc ⊗ r)
                let mut lhs = Vec::new();
                for (k, w) in self.psi_apply(n, c, r) {
                    let (r2, c2) = (k / dc, k % dc);
                    for (ij, v) in self.coalgebra.comultiply_basis(c2) {
                        lhs.push((r2 * dc * dc + ij, &w * v));
                    }
                }
                let mut rhs = Vec::new();
                for (ij, v) in self.coalgebra.comultiply_basis(c) {
                    let (c1, c2) = (ij / dc, ij % dc);
                    for (k, w) in self.psi_apply(n, c2, r) {
                        let (r2, c2p) = (k / dc, k % dc);
                        for (k2, u) in &self.psi[n][c1 * self.dims[n] + r2] {
                            let (r3, c1p) = (k2 / dc, k2 % dc);
                            rhs.push((r3 * dc * dc + c1p * dc + c2p, &(v * &w) * u));
                        }
                    }
                }
                normalize(lhs) != normalize(rhs)
            });
            verdicts.push(verdict("Psi comultiplicativity", vec![n], w));

            let w = self.first_c_r(n, |c, r| {
                let mut lhs = Vec::new();
                for (k, w) in self.psi_apply(n, c, r) {
                    let e = &self.coalgebra.counit()[k % dc];
                    lhs.push((k / dc, &w * e));
                }
                normalize(lhs) != scale_vec(r, &self.coalgebra.counit()[c])
            });
            verdicts.push(verdict("Psi counit", vec![n], w));
        }

        if let (Some(base), Some(rho)) = (&self.base, &self.rho) {
            let da = base.dim_a();
            let mut w = None;
            'mul: for a in 0..da {
                for b in 0..da {
                    let lhs = rho.mul_vec(base.algebra().basis_product(a, b));
                    let rhs = self.mul(0, rho.column(a), 0, rho.column(b))?;
                    if lhs != rhs {
                        w = Some(vec![a, b]);
                        break 'mul;
                    }
                }
            }
            verdicts.push(verdict("rho multiplicative", vec![0], w));

            let mut w = None;
            'diag: for c in 0..dc {
                for a in 0..da {
                    let lhs = self.rho_tensor_id(rho, base.entwining().apply_basis(c, a));
                    let rhs = self.psi_apply(0, c, rho.column(a));
                    if lhs != rhs {
                        w = Some(vec![c, a]);
                        break 'diag;
                    }
                }
            }
            verdicts.push(verdict("rho compatible with the entwinings", vec![0], w));
        }

        Ok(DgReport { max_degree: n_max, verdicts })
    }

    /// `(ρ ⊗ id)` applied to a vector over `a * dim C + c`.
    fn rho_tensor_id(&self, rho: &SparseMatrix, v: &SparseVec) -> SparseVec {
        let dc = self.dim_c();
        let mut out = Vec::new();
        for (k, w) in v {
            for (r, u) in rho.column(k / dc) {
                out.push((r * dc + k % dc, w * u));
            }
        }
        normalize(out)
    }

    /// `(D ⊗ id)` applied to a vector over `r * dim C + c` in degree `n`.
    fn diff_psi_output(&self, n: usize, v: &SparseVec) -> SparseVec {
        let dc = self.dim_c();
        let mut out = Vec::new();
        for (k, w) in v {
            for (r, u) in self.differentials[n].column(k / dc) {
                out.push((r * dc + k % dc, w * u));
            }
        }
        normalize(out)
    }

    /// `x_Ψ y_Ψ ⊗ c^{ΨΨ}`: `c` passes `x` first, then `y`.
    pub fn psi_of_product(&self, i: usize, x: &SparseVec, j: usize, y: &SparseVec, c: usize) -> SparseVec {
        let dc = self.dim_c();
        let mut out = Vec::new();
        for (k, w) in self.psi_apply(i, c, x) {
            let (x2, c1) = (k / dc, k % dc);
            for (k2, v) in self.psi_apply(j, c1, y) {
                let (y2, c2) = (k2 / dc, k2 % dc);
                let prod = self.mul(i, &self.basis(x2), j, &self.basis(y2)).expect("within truncation");
                let wv = &w * &v;
                out.extend(prod.into_iter().map(|(z, u)| (z * dc + c2, &u * &wv)));
            }
        }
        normalize(out)
    }

    fn first_pair(
        &self,
        i: usize,
        j: usize,
        mut bad: impl FnMut(&SparseVec, &SparseVec) -> bool,
    ) -> Option<Vec<usize>> {
        for x in 0..self.dims[i] {
            for y in 0..self.dims[j] {
                if bad(&self.basis(x), &self.basis(y)) {
                    return Some(vec![x, y]);
                }
            }
        }
        None
    }

    fn first_triple(
        &self,
        i: usize,
        j: usize,
        k: usize,
        mut bad: impl FnMut(&SparseVec, &SparseVec, &SparseVec) -> bool,
    ) -> Option<Vec<usize>> {
        for x in 0..self.dims[i] {
            for y in 0..self.dims[j] {
                for z in 0..self.dims[k] {
                    if bad(&self.basis(x), &self.basis(y), &self.basis(z)) {
                        return Some(vec![x, y, z]);
                    }
                }
            }
        }
        None
    }

    fn first_c_r(&self, n: usize, mut bad: impl FnMut(usize, &SparseVec) -> bool) -> Option<Vec<usize>> {
        for c in 0..self.dim_c() {
            for r in 0..self.dims[n] {
                if bad(c, &self.basis(r)) {
                    return Some(vec![c, r]);
                }
            }
        }
        None
    }

    /// `ρ(a_1) · Dρ(a_2) ⋯ Dρ(a_k)` for basis indices `a`, a vector in `R^{k-1}`.
    pub fn rho_word(&self, a: &[usize]) -> Result<SparseVec, OmegaError> {
        let rho = self.rho.as_ref().ok_or(OmegaError::NoBaseMap)?;
        let mut acc = rho.column(a[0]).clone();
        for (t, &x) in a[1..].iter().enumerate() {
            let dx = self.diff(0, rho.column(x))?;
            acc = self.mul(t, &acc, 1, &dx)?;
        }
        Ok(acc)
    }

    /// `Dρ(a_1) ⋯ Dρ(a_k)`, a vector in `R^k`.
    pub fn rho_d_word(&self, a: &[usize]) -> Result<SparseVec, OmegaError> {
        let rho = self.rho.as_ref().ok_or(OmegaError::NoBaseMap)?;
        let mut acc = self.diff(0, rho.column(a[0]))?;
        for (t, &x) in a[1..].iter().enumerate() {
            let dx = self.diff(0, rho.column(x))?;
            acc = self.mul(t + 1, &acc, 1, &dx)?;
        }
        Ok(acc)
    }
}

/// The induced map `ρ̂ : Ω^n A → R^n`,
/// `ρ̂((a_0 + μ) da_1 … da_n) = ρ(a_0) Dρ(a_1) ⋯ Dρ(a_n) + μ Dρ(a_1) ⋯ Dρ(a_n)`.
pub fn rho_hat(dg: &DgEntwining, omega: &TruncatedOmega, n: usize) -> Result<SparseMatrix, OmegaError> {
    if n > dg.max_degree() || n > omega.max_degree() {
        return Err(OmegaError::Truncated { degree: n, max: dg.max_degree().min(omega.max_degree()) });
    }
    let mu = omega.mu_head();
    let mut cols = Vec::with_capacity(omega.dim(n));
    for x in 0..omega.dim(n) {
        let (h, letters) = omega.decode(n, x);
        let col = if h == mu {
            dg.rho_d_word(&letters)?
        } else {
            let mut word = vec![h];
            word.extend(letters);
            dg.rho_word(&word)?
        };
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(dg.field, dg.dims[n], cols)?)
}

/// Checks that `ρ̂` is multiplicative, commutes with the differentials and
/// makes the square with `ψ̂` and `Ψ` commute, in all degrees `≤ N`.
pub fn rho_hat_check(dg: &DgEntwining, omega: &TruncatedOmega) -> Result<DgReport, OmegaError> {
    let n_max = dg.max_degree().min(omega.max_degree());
    let om = omega.to_dg();
    let maps = (0..=n_max).map(|n| rho_hat(dg, omega, n)).collect::<Result<Vec<_>, _>>()?;
    let dc = dg.dim_c();
    let mut verdicts = Vec::new();
    for i in 0..=n_max {
        for j in 0..=n_max - i {
            let mut w = None;
            'pairs: for x in 0..om.dims[i] {
                for y in 0..om.dims[j] {
                    let lhs = maps[i + j].mul_vec(&om.products[i][j][x * om.dims[j] + y]);
                    let rhs = dg.mul(i, maps[i].column(x), j, maps[j].column(y))?;
                    if lhs != rhs {
                        w = Some(vec![x, y]);
                        break 'pairs;
                    }
                }
            }
            verdicts.push(verdict("rho-hat multiplicative", vec![i, j], w));
        }
    }
    for n in 0..n_max {
        let lhs = maps[n + 1].mul(&om.differentials[n])?;
        let rhs = dg.differentials[n].mul(&maps[n])?;
        let w = lhs.first_difference(&rhs).map(|(r, c)| vec![r, c]);
        verdicts.push(verdict("rho-hat commutes with differentials", vec![n], w));
    }
    for n in 0..=n_max {
        let mut w = None;
        'sq: for c in 0..dc {
            for x in 0..om.dims[n] {
                let mut lhs = Vec::new();
                for (k, v) in &om.psi[n][c * om.dims[n] + x] {
                    for (r, u) in maps[n].column(k / dc) {
                        lhs.push((r * dc + k % dc, v * u));
                    }
                }
                let rhs = dg.psi_apply(n, c, maps[n].column(x));
                if normalize(lhs) != rhs {
                    w = Some(vec![c, x]);
                    break 'sq;
                }
            }
        }
        verdicts.push(verdict("rho-hat compatible with the entwinings", vec![n], w));
    }
    Ok(DgReport { max_degree: n_max, verdicts })
}

/// Checks every dg-entwining law of `dg`.
pub fn validate_dg_entwining(dg: &DgEntwining) -> Result<DgReport, OmegaError> {
    dg.validate()
}

pub(crate) fn scalar_sign(field: ExactField, odd: bool) -> Scalar {
    if odd {
        -field.one()
    } else {
        field.one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{FiniteAlgebra, FiniteCoalgebra};

    fn corpus() -> Vec<EntwiningStructure> {
        let f = ExactField::Rationals;
        vec![
            EntwiningStructure::trivial(f),
            EntwiningStructure::flip(
                FiniteAlgebra::truncated_polynomial(f, 2),
                FiniteCoalgebra::grouplike(f, 2),
            )
            .unwrap(),
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap(),
            EntwiningStructure::graded_grouplike(FiniteAlgebra::cyclic_group_algebra(f, 2), &[false, true])
                .unwrap(),
        ]
    }

    #[test]
    fn omega_is_a_dg_entwining() {
        for s in corpus() {
            let om = TruncatedOmega::new(&s, 3).unwrap();
            let report = om.to_dg().validate().unwrap();
            let bad: Vec<_> = report.failures().collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn dropping_the_scalar_term_breaks_the_chain_map() {
        let s = &corpus()[2];
        let om = TruncatedOmega::new(s, 2).unwrap();
        let mut dg = om.to_dg();
        for n in 1..=2 {
            for cx in 0..dg.psi[n].len() {
                let (h, _) = om.decode(n, cx % om.dim(n));
                if h == om.mu_head() {
                    dg.psi[n][cx].clear();
                }
            }
        }
        let report = dg.validate().unwrap();
        assert!(report.failures().any(|v| v.check == "Psi is a chain map"));
    }

    #[test]
    fn degree_zero_structure_is_a_dg_entwining() {
        for s in corpus() {
            assert!(DgEntwining::from_structure(&s).validate().unwrap().passed());
        }
    }

    #[test]
    fn rho_hat_of_identity_is_identity() {
        for s in corpus() {
            let om = TruncatedOmega::new(&s, 2).unwrap();
            let dg = om.to_dg();
            for n in 0..=2 {
                assert_eq!(rho_hat(&dg, &om, n).unwrap(), SparseMatrix::identity(s.field(), om.dim(n)));
            }
            assert!(rho_hat_check(&dg, &om).unwrap().passed());
        }
    }
}
