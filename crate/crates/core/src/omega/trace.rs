//! Closed graded entwined traces, the lift of cyclic cochains to traces on
//! `Ω A`, and characters of entwined cycles.

use serde::Serialize;

use crate::complexes::{cohomology, cyclic_basis, in_subcomplex, Cochain, TensorSpace, Theory};
use crate::linalg::sparse::normalize;
use crate::linalg::{kernel_matrix, same_span, SparseMatrix, SparseVec};
use crate::structures::EntwiningStructure;

use super::dg::{scalar_sign, DgEntwining};
use super::universal::TruncatedOmega;
use super::OmegaError;

/// A functional on `C ⊗ R^n`, stored over `c * dim R^n + r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntwinedTrace {
    pub degree: usize,
    pub values: SparseVec,
}

impl EntwinedTrace {
    pub fn zero(degree: usize) -> Self {
        EntwinedTrace { degree, values: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn eval(&self, v: &SparseVec) -> crate::linalg::Scalar {
        let mut acc = match self.values.first().or(v.first()) {
            Some((_, s)) => s.field().zero(),
            None => return crate::linalg::ExactField::Rationals.zero(),
        };
        let (mut i, mut j) = (0, 0);
        while i < self.values.len() && j < v.len() {
            match self.values[i].0.cmp(&v[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += &(&self.values[i].1 * &v[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// One linear condition on a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum TraceCondition {
    /// `T(c ⊗ D r) = 0` for the basis element `r ∈ R^{n-1}`.
    Closed { c: usize, r: usize },
    /// `T(c ⊗ r r') = (-1)^{ij} T(c^Ψ ⊗ r' r_Ψ)` for basis `r ∈ R^i`, `r' ∈ R^j`.
    GradedTrace { c: usize, i: usize, r: usize, j: usize, r2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub degree: usize,
    pub conditions_checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TraceCondition>,
}

/// Every closedness and graded-trace condition in degree `n`, each as a
/// linear functional over the trace coordinates.
pub fn trace_conditions(dg: &DgEntwining, n: usize) -> Result<Vec<(TraceCondition, SparseVec)>, OmegaError> {
    if n > dg.max_degree() {
        return Err(OmegaError::Truncated { degree: n, max: dg.max_degree() });
    }
    let dc = dg.dim_c();
    let dn = dg.dims[n];
    let one = dg.field.one();
    let mut out = Vec::new();
    if n >= 1 {
        for c in 0..dc {
            for r in 0..dg.dims[n - 1] {
                let dr = dg.diff(n - 1, &vec![(r, one.clone())])?;
                let v = dr.iter().map(|(w, s)| (c * dn + w, s.clone())).collect();
                out.push((TraceCondition::Closed { c, r }, v));
            }
        }
    }
    for i in 0..=n {
        let j = n - i;
        let sign = -scalar_sign(dg.field, (i * j) % 2 == 1);
        for c in 0..dc {
            for r in 0..dg.dims[i] {
                let psi_r = dg.psi_apply(i, c, &vec![(r, one.clone())]);
                for r2 in 0..dg.dims[j] {
                    let mut v: Vec<_> = dg.products[i][j][r * dg.dims[j] + r2]
                        .iter()
                        .map(|(w, s)| (c * dn + w, s.clone()))
                        .collect();
                    for (k, s) in &psi_r {
                        let (rp, cp) = (k / dc, k % dc);
                        let coef = s * &sign;
                        for (w, u) in &dg.products[j][i][r2 * dg.dims[i] + rp] {
                            v.push((cp * dn + w, u * &coef));
                        }
                    }
                    out.push((TraceCondition::GradedTrace { c, i, r, j, r2 }, normalize(v)));
                }
            }
        }
    }
    Ok(out)
}

/// The conditions as a matrix: one row per condition.
pub fn trace_condition_matrix(dg: &DgEntwining, n: usize) -> Result<SparseMatrix, OmegaError> {
    let conds = trace_conditions(dg, n)?;
    let cols: Vec<SparseVec> = conds.into_iter().map(|(_, v)| v).collect();
    Ok(SparseMatrix::from_columns(dg.field, dg.dim_c() * dg.dims[n], cols)?.transpose())
}

/// Checks closedness and the graded entwined trace law exactly.
pub fn validate_trace(dg: &DgEntwining, t: &EntwinedTrace) -> Result<TraceReport, OmegaError> {
    let n = t.degree;
    let conds = trace_conditions(dg, n)?;
    let len = dg.dim_c() * dg.dims[n];
    if let Some((k, _)) = t.values.iter().find(|(k, _)| *k >= len) {
        return Err(OmegaError::DegreeMismatch { expected: len, got: k + 1 });
    }
    let witness = conds.iter().find(|(_, v)| !t.eval(v).is_zero()).map(|(c, _)| c.clone());
    Ok(TraceReport { degree: n, conditions_checked: conds.len(), passed: witness.is_none(), witness })
}

/// `t(c ⊗ (a_0 + μ) da_1 … da_n) = g(c, a_0, …, a_n)` as a matrix from
/// degree-`n` cochain coordinates to trace coordinates on `Ω^n A`.
pub fn trace_lift_matrix(omega: &TruncatedOmega, n: usize) -> Result<SparseMatrix, OmegaError> {
    if n > omega.max_degree() {
        return Err(OmegaError::Truncated { degree: n, max: omega.max_degree() });
    }
    let s = omega.structure();
    let sp = TensorSpace::degree(s, n);
    let dn = omega.dim(n);
    let one = s.field().one();
    Ok(SparseMatrix::build_columns(s.field(), s.dim_c() * dn, sp.dim(), |col| {
        let (c, a) = sp.decode(col);
        vec![(c * dn + omega.encode(a[0], &a[1..]), one.clone())]
    }))
}

/// The trace on `Ω^n A` determined by a cyclic cochain `g`.
pub fn trace_from_cocycle(omega: &TruncatedOmega, g: &Cochain) -> Result<EntwinedTrace, OmegaError> {
    let s = omega.structure();
    let n = g.degree();
    if g.space != TensorSpace::degree(s, n) {
        return Err(OmegaError::DegreeMismatch {
            expected: TensorSpace::degree(s, n).dim(),
            got: g.space.dim(),
        });
    }
    if !in_subcomplex(s, Theory::Cyclic, g) {
        return Err(OmegaError::NotCyclic);
    }
    Ok(EntwinedTrace { degree: n, values: trace_lift_matrix(omega, n)?.mul_vec(&g.values) })
}

/// `g(c, a_1, …, a_{n+1}) = T(c ⊗ ρ(a_1) Dρ(a_2) ⋯ Dρ(a_{n+1}))` as a matrix
/// from trace coordinates to cochain coordinates over the base structure.
pub fn character_matrix(dg: &DgEntwining, n: usize) -> Result<SparseMatrix, OmegaError> {
    let base = dg.base.as_ref().ok_or(OmegaError::NoBaseMap)?;
    let sp = TensorSpace::degree(base, n);
    let dn = dg.dims[n];
    let mut rows = Vec::with_capacity(sp.dim());
    for idx in 0..sp.dim() {
        let (c, a) = sp.decode(idx);
        let x = dg.rho_word(&a)?;
        rows.push(x.into_iter().map(|(w, s)| (c * dn + w, s)).collect());
    }
    Ok(SparseMatrix::from_columns(dg.field, dg.dim_c() * dn, rows)?.transpose())
}

/// The character of the cycle `(dg, T)`; the trace is validated first.
pub fn character(dg: &DgEntwining, t: &EntwinedTrace) -> Result<Cochain, OmegaError> {
    let report = validate_trace(dg, t)?;
    if let Some(w) = report.witness {
        return Err(OmegaError::InvalidTrace(format!("{w:?}")));
    }
    let base = dg.base.as_ref().ok_or(OmegaError::NoBaseMap)?;
    let values = character_matrix(dg, t.degree)?.mul_vec(&t.values);
    Ok(Cochain::from_values(base, t.degree, values)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub degree: usize,
    pub cyclic_dim: usize,
    pub cocycle_dim: usize,
    /// Dimension of the cyclic cochains whose lift is a closed graded trace.
    pub accepted_dim: usize,
    pub same_subspace: bool,
    /// The character of the lift of every cocycle is the cocycle itself.
    pub round_trip: bool,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.same_subspace && self.round_trip
    }
}

/// Compares the cyclic cochains whose lifted trace satisfies every trace
/// condition with the cyclic cocycles, as subspaces.
pub fn correspondence_check(s: &EntwiningStructure, n: usize) -> Result<CorrespondenceReport, OmegaError> {
    let omega = TruncatedOmega::new(s, n)?;
    let dg = omega.to_dg();
    let basis = cyclic_basis(s, n);
    let lift = trace_lift_matrix(&omega, n)?;
    let conditions = trace_condition_matrix(&dg, n)?;
    let restricted = conditions.mul(&lift)?.mul(&basis)?;
    let accepted = basis.mul(&kernel_matrix(&restricted))?;
    let cocycles = cohomology(s, Theory::Cyclic, n).cocycle_basis;
    let same_subspace = same_span(&accepted, &cocycles)?;
    let round = character_matrix(&dg, n)?.mul(&lift)?.mul(&cocycles)?;
    Ok(CorrespondenceReport {
        degree: n,
        cyclic_dim: basis.cols(),
        cocycle_dim: cocycles.cols(),
        accepted_dim: accepted.cols(),
        same_subspace,
        round_trip: round == cocycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{cohomology_range, hochschild_delta};
    use crate::linalg::ExactField;
    use crate::structures::{FiniteAlgebra, FiniteCoalgebra};

    #[test]
    fn basis_cocycle_lifts_to_a_trace() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let om = TruncatedOmega::new(&s, 2).unwrap();
        let g = Cochain::from_values(&s, 2, vec![(0, s.field().one())]).unwrap();
        let t = trace_from_cocycle(&om, &g).unwrap();
        assert!(validate_trace(&om.to_dg(), &t).unwrap().passed);
        // t(c ⊗ da_1 … da_n) = 0
        let mu_word = om.encode(om.mu_head(), &[0, 0]);
        assert!(t.values.iter().all(|(k, _)| *k != mu_word));
        assert_eq!(character(&om.to_dg(), &t).unwrap(), g);
    }

    #[test]
    fn cyclic_non_cocycle_fails_the_trace_law() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::flip(FiniteAlgebra::truncated_polynomial(f, 2), FiniteCoalgebra::ground(f))
                .unwrap();
        let om = TruncatedOmega::new(&s, 1).unwrap();
        let dg = om.to_dg();
        let basis = cyclic_basis(&s, 1);
        let delta = hochschild_delta(&s, 1).matrix;
        let col = (0..basis.cols())
            .find(|&j| !delta.mul_vec(basis.column(j)).is_empty())
            .expect("a non-closed cyclic cochain exists");
        let g = Cochain::from_values(&s, 1, basis.column(col).clone()).unwrap();
        let report = validate_trace(&dg, &trace_from_cocycle(&om, &g).unwrap()).unwrap();
        assert!(!report.passed);
        assert!(matches!(report.witness, Some(TraceCondition::GradedTrace { .. })));
    }

    #[test]
    fn broken_sign_is_caught() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let om = TruncatedOmega::new(&s, 2).unwrap();
        let dg = om.to_dg();
        let g = cohomology_range(&s, Theory::Cyclic, 2).pop().unwrap().cocycle_basis;
        let t = trace_from_cocycle(&om, &Cochain::from_values(&s, 2, g.column(0).clone()).unwrap()).unwrap();
        // flip the sign of the (1,1) trace law by negating ψ̂ in degree 1
        let mut broken = dg.clone();
        for v in broken.psi[1].iter_mut() {
            for (_, w) in v.iter_mut() {
                *w = -w.clone();
            }
        }
        let report = validate_trace(&broken, &t).unwrap();
        assert!(matches!(report.witness, Some(TraceCondition::GradedTrace { i: 1, j: 1, .. })));
        assert!(validate_trace(&dg, &EntwinedTrace::zero(2)).unwrap().passed);
    }

    #[test]
    fn correspondence_on_small_structures() {
        let f = ExactField::Rationals;
        let structures = [
            EntwiningStructure::trivial(f),
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap(),
        ];
        for s in &structures {
            for n in 0..=2 {
                let r = correspondence_check(s, n).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}
