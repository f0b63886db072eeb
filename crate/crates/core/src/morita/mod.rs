//! Matrix-ring invariance: inclusion and generalised trace between the
//! complexes of `A` and `M_r(A)`, the explicit homotopies `h_i`, and a
//! report that checks every chain and cochain identity exactly.

use serde::Serialize;
use thiserror::Error;

use crate::complexes::{
    chain_face, cohomology_dims, hochschild_delta, invariant_basis, restrict, ComplexError, TensorSpace,
    Theory,
};
use crate::linalg::SparseMatrix;
use crate::structures::constructions::{matrix_coords, matrix_index};
use crate::structures::{matrix_extend, EntwiningStructure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("matrix position {p} outside 1..={r}")]
    Position { p: usize, r: usize },
    #[error("homotopy index {i} outside 0..={n}")]
    HomotopyIndex { i: usize, n: usize },
    #[error("outside the default envelope (r = {r}, dim A = {dim_a}, dim C = {dim_c}, degree {n}); pass an override to proceed")]
    Envelope { r: usize, dim_a: usize, dim_c: usize, n: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `inc_p` applied in every slot: `C_n(A) → C_n(M_r(A))`, `a ↦ a E_{pp}`
/// with `1 ≤ p ≤ r`.
pub fn inclusion_chain(
    s: &EntwiningStructure,
    r: usize,
    p: usize,
    n: usize,
) -> Result<SparseMatrix, MoritaError> {
    if p == 0 || p > r {
        return Err(MoritaError::Position { p, r });
    }
    let src = TensorSpace::degree(s, n);
    let tgt = TensorSpace::new(s.dim_c(), s.dim_a() * r * r, n + 1);
    let one = s.field().one();
    Ok(SparseMatrix::build_columns(s.field(), tgt.dim(), src.dim(), |col| {
        let (c, t) = src.decode(col);
        let u: Vec<usize> = t.iter().map(|&j| matrix_index(r, j, p - 1, p - 1)).collect();
        vec![(tgt.encode(c, &u), one.clone())]
    }))
}

/// The generalised trace `C_n(M_r(A)) → C_n(A)`: a basis chain
/// `(c, e_{j_1} E_{k_1 l_1}, ..)` maps to `(c, e_{j_1}, ..)` when the matrix
/// indices chain cyclically (`l_t = k_{t+1}`, `l_{n+1} = k_1`), else to 0.
pub fn trace_chain(s: &EntwiningStructure, r: usize, n: usize) -> SparseMatrix {
    let src = TensorSpace::new(s.dim_c(), s.dim_a() * r * r, n + 1);
    let tgt = TensorSpace::degree(s, n);
    let one = s.field().one();
    SparseMatrix::build_columns(s.field(), tgt.dim(), src.dim(), |col| {
        let (c, t) = src.decode(col);
        let coords: Vec<(usize, usize, usize)> = t.iter().map(|&x| matrix_coords(r, x)).collect();
        let chained = (0..=n).all(|i| coords[i].2 == coords[(i + 1) % (n + 1)].1);
        if chained {
            let js: Vec<usize> = coords.iter().map(|x| x.0).collect();
            vec![(tgt.encode(c, &js), one.clone())]
        } else {
            Vec::new()
        }
    })
}

/// The homotopy `h_i : C_n(M_r(A)) → C_{n+1}(M_r(A))`, `0 ≤ i ≤ n`, on
/// elementary basis chains. With matrix position 1 written as index 0:
/// `h_0` prepends `1_A E_{1, l_{n+1}}` and replaces the last entry by
/// `e_{j_{n+1}} E_{k_{n+1}, 1}`; for `i ≥ 1`, `h_i` is nonzero only when
/// `l_t = k_{t+1}` for `t < i` and `l_{n+1} = k_1`, and then moves the first
/// `i` entries to position `E_{11}`, inserts `1_A E_{1, l_i}` after them and
/// replaces the last entry by `e_{j_{n+1}} E_{k_{n+1}, 1}`.
pub fn homotopy_h(s: &EntwiningStructure, r: usize, n: usize, i: usize) -> Result<SparseMatrix, MoritaError> {
    if i > n {
        return Err(MoritaError::HomotopyIndex { i, n });
    }
    let one = s.require_unital()?.clone();
    let dm = s.dim_a() * r * r;
    let src = TensorSpace::new(s.dim_c(), dm, n + 1);
    let tgt = TensorSpace::new(s.dim_c(), dm, n + 2);
    Ok(SparseMatrix::build_columns(s.field(), tgt.dim(), src.dim(), |col| {
        let (c, t) = src.decode(col);
        let u: Vec<(usize, usize, usize)> = t.iter().map(|&x| matrix_coords(r, x)).collect();
        let (j_last, k_last, l_last) = u[n];
        let last = matrix_index(r, j_last, k_last, 0);
        let mut prefix: Vec<usize> = Vec::with_capacity(n + 2);
        let inserted_col = if i == 0 {
            l_last
        } else {
            let chained = (0..i - 1).all(|t| u[t].2 == u[t + 1].1) && l_last == u[0].1;
            if !chained {
                return Vec::new();
            }
            for &(j, _, _) in &u[..i] {
                prefix.push(matrix_index(r, j, 0, 0));
            }
            u[i - 1].2
        };
        let rest: Vec<usize> = t[i..n].to_vec();
        one.iter()
            .map(|(e, w)| {
                let mut out = prefix.clone();
                out.push(matrix_index(r, *e, 0, inserted_col));
                out.extend_from_slice(&rest);
                out.push(last);
                (tgt.encode(c, &out), w.clone())
            })
            .collect()
    }))
}

/// Every chain-level operator needed by the report, held as plain matrices.
/// Entries may be replaced for fault injection.
#[derive(Debug, Clone)]
pub struct MoritaOperators {
    pub r: usize,
    pub max_n: usize,
    pub base: EntwiningStructure,
    pub extended: EntwiningStructure,
    /// `faces_a[m][i] = d_i : C_m(A) → C_{m-1}(A)` for `1 ≤ m ≤ max_n + 1` (index 0 unused).
    pub faces_a: Vec<Vec<SparseMatrix>>,
    /// `faces_m[m][i]` on `M_r(A)`, same layout.
    pub faces_m: Vec<Vec<SparseMatrix>>,
    /// `inc[m] = inc_1 : C_m(A) → C_m(M_r(A))`, `m ≤ max_n + 1`.
    pub inc: Vec<SparseMatrix>,
    /// `tr[m] : C_m(M_r(A)) → C_m(A)`, `m ≤ max_n + 1`.
    pub tr: Vec<SparseMatrix>,
    /// `h[m][i] : C_m(M_r(A)) → C_{m+1}(M_r(A))`, `m ≤ max_n`.
    pub h: Vec<Vec<SparseMatrix>>,
}

/// Whether `(r, dim A, dim C, n)` lies in the default envelope.
pub fn within_envelope(s: &EntwiningStructure, r: usize, max_n: usize) -> bool {
    r <= 2 && s.dim_a() <= 2 && s.dim_c() <= 2 && max_n <= 2
}

impl MoritaOperators {
    pub fn build(s: &EntwiningStructure, r: usize, max_n: usize) -> Result<Self, MoritaError> {
        s.require_unital()?;
        let extended = matrix_extend(s, r)?;
        let faces = |t: &EntwiningStructure| -> Result<Vec<Vec<SparseMatrix>>, ComplexError> {
            let mut out = vec![Vec::new()];
            for m in 1..=max_n + 1 {
                out.push((0..=m).map(|i| chain_face(t, m, i)).collect::<Result<_, _>>()?);
            }
            Ok(out)
        };
        let faces_a = faces(s)?;
        let faces_m = faces(&extended)?;
        let inc = (0..=max_n + 1).map(|m| inclusion_chain(s, r, 1, m)).collect::<Result<_, _>>()?;
        let tr = (0..=max_n + 1).map(|m| trace_chain(s, r, m)).collect();
        let h = (0..=max_n)
            .map(|m| (0..=m).map(|i| homotopy_h(s, r, m, i)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        Ok(MoritaOperators { r, max_n, base: s.clone(), extended, faces_a, faces_m, inc, tr, h })
    }

    fn sign(&self, i: usize) -> crate::linalg::Scalar {
        let f = self.base.field();
        if i.is_multiple_of(2) {
            f.one()
        } else {
            -f.one()
        }
    }

    fn boundary_m(&self, m: usize) -> SparseMatrix {
        alternating(&self.faces_m[m], |i| self.sign(i))
    }

    fn homotopy(&self, m: usize) -> SparseMatrix {
        alternating(&self.h[m], |i| self.sign(i))
    }

    /// Checks everything except cohomology dimensions.
    pub fn check_identities(&self) -> Vec<MoritaVerdict> {
        let f = self.base.field();
        let mut out = Vec::new();
        let mut push =
            |name: &str, degree: usize, indices: Vec<usize>, lhs: SparseMatrix, rhs: SparseMatrix| {
                let witness = lhs.first_difference(&rhs);
                out.push(MoritaVerdict {
                    identity: name.to_string(),
                    degree,
                    indices,
                    passed: witness.is_none(),
                    witness,
                });
            };
        let mul = |a: &SparseMatrix, b: &SparseMatrix| a.mul(b).expect("composable");

        for n in 0..=self.max_n {
            let dim_a = self.tr[n].rows();
            let dim_m = self.tr[n].cols();
            push(
                "tr inc_1 = id",
                n,
                vec![],
                mul(&self.tr[n], &self.inc[n]),
                SparseMatrix::identity(f, dim_a),
            );
            if n >= 1 {
                for i in 0..=n {
                    push(
                        "d_i inc_1 = inc_1 d_i",
                        n,
                        vec![i],
                        mul(&self.faces_m[n][i], &self.inc[n]),
                        mul(&self.inc[n - 1], &self.faces_a[n][i]),
                    );
                    push(
                        "tr d_i = d_i tr",
                        n,
                        vec![i],
                        mul(&self.tr[n - 1], &self.faces_m[n][i]),
                        mul(&self.faces_a[n][i], &self.tr[n]),
                    );
                }
            }
            // relations among d_i : C_{n+1} → C_n and h_j : C_n → C_{n+1}
            let d = &self.faces_m[n + 1];
            let h = &self.h[n];
            for i in 0..=n + 1 {
                for j in 0..=n {
                    if i < j {
                        push(
                            "d_i h_j = h_(j-1) d_i",
                            n,
                            vec![i, j],
                            mul(&d[i], &h[j]),
                            mul(&self.h[n - 1][j - 1], &self.faces_m[n][i]),
                        );
                    } else if i > j + 1 {
                        push(
                            "d_i h_j = h_j d_(i-1)",
                            n,
                            vec![i, j],
                            mul(&d[i], &h[j]),
                            mul(&self.h[n - 1][j], &self.faces_m[n][i - 1]),
                        );
                    }
                }
            }
            for i in 1..=n {
                push("d_i h_i = d_i h_(i-1)", n, vec![i], mul(&d[i], &h[i]), mul(&d[i], &h[i - 1]));
            }
            push("d_0 h_0 = id", n, vec![], mul(&d[0], &h[0]), SparseMatrix::identity(f, dim_m));
            push("d_(n+1) h_n = inc_1 tr", n, vec![], mul(&d[n + 1], &h[n]), mul(&self.inc[n], &self.tr[n]));

            // bh + hb = id - inc_1 tr on C_n(M_r(A))
            let mut lhs = mul(&self.boundary_m(n + 1), &self.homotopy(n));
            if n >= 1 {
                lhs = lhs.add(&mul(&self.homotopy(n - 1), &self.boundary_m(n))).expect("same shape");
            }
            let rhs =
                SparseMatrix::identity(f, dim_m).sub(&mul(&self.inc[n], &self.tr[n])).expect("same shape");
            push("b h + h b = id - inc_1 tr", n, vec![], lhs, rhs);

            // δh + hδ = id - tr^• inc^• on C^n(M_r(A)), with δ from the cochain formula
            let delta_n = hochschild_delta(&self.extended, n).matrix;
            let h_dual = self.homotopy(n).transpose();
            let mut lhs = mul(&h_dual, &delta_n);
            if n >= 1 {
                let delta_prev = hochschild_delta(&self.extended, n - 1).matrix;
                lhs = lhs.add(&mul(&delta_prev, &self.homotopy(n - 1).transpose())).expect("same shape");
            }
            let rhs = SparseMatrix::identity(f, dim_m)
                .sub(&mul(&self.tr[n].transpose(), &self.inc[n].transpose()))
                .expect("same shape");
            push("delta h + h delta = id - tr inc (cochains)", n, vec![], lhs, rhs);
        }
        out
    }

    /// Checks that `h^i`, `inc_1^•` and `tr^•` respect invariant subcomplexes.
    pub fn check_invariance(&self) -> Vec<MoritaVerdict> {
        let mut out = Vec::new();
        let inv_a: Vec<SparseMatrix> = (0..=self.max_n + 1).map(|m| invariant_basis(&self.base, m)).collect();
        let inv_m: Vec<SparseMatrix> =
            (0..=self.max_n + 1).map(|m| invariant_basis(&self.extended, m)).collect();
        let mut push = |name: &str,
                        degree: usize,
                        indices: Vec<usize>,
                        op: SparseMatrix,
                        src: &SparseMatrix,
                        tgt: &SparseMatrix| {
            let res = restrict(&op, src, tgt);
            let witness = match res {
                Ok(_) => None,
                Err(ComplexError::NotPreserved { basis_vector }) => Some((basis_vector, 0)),
                Err(_) => Some((usize::MAX, 0)),
            };
            out.push(MoritaVerdict {
                identity: name.to_string(),
                degree,
                indices,
                passed: witness.is_none(),
                witness,
            });
        };
        for n in 0..=self.max_n {
            push(
                "inc_1 maps invariants to invariants",
                n,
                vec![],
                self.inc[n].transpose(),
                &inv_m[n],
                &inv_a[n],
            );
            push("tr maps invariants to invariants", n, vec![], self.tr[n].transpose(), &inv_a[n], &inv_m[n]);
            for (i, h) in self.h[n].iter().enumerate() {
                push(
                    "h^i maps invariants to invariants",
                    n,
                    vec![i],
                    h.transpose(),
                    &inv_m[n + 1],
                    &inv_m[n],
                );
            }
        }
        out
    }
}

fn alternating(ops: &[SparseMatrix], sign: impl Fn(usize) -> crate::linalg::Scalar) -> SparseMatrix {
    let mut acc = SparseMatrix::zero(ops[0].field(), ops[0].rows(), ops[0].cols());
    for (i, op) in ops.iter().enumerate() {
        acc = acc.add_scaled(op, &sign(i)).expect("same shape");
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoritaVerdict {
    pub identity: String,
    pub degree: usize,
    pub indices: Vec<usize>,
    pub passed: bool,
    /// `(row, column)` of the first differing entry, or the first basis
    /// vector that leaves the invariant subspace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub theory: Theory,
    pub degree: usize,
    pub base: usize,
    pub matrix: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoritaReport {
    pub r: usize,
    pub max_degree: usize,
    pub identities: Vec<MoritaVerdict>,
    pub invariance: Vec<MoritaVerdict>,
    pub dimensions: Vec<DimensionRow>,
    pub note: String,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|v| v.passed)
            && self.invariance.iter().all(|v| v.passed)
            && self.dimensions.iter().all(|d| d.equal)
    }
}

/// Options for [`morita_report`].
#[derive(Debug, Clone, Copy)]
pub struct MoritaOptions {
    /// Allow sizes beyond the default envelope.
    pub allow_large: bool,
    /// Bound on the dimension of any cochain space of `M_r(A)`.
    pub size_guard: usize,
}

impl Default for MoritaOptions {
    fn default() -> Self {
        MoritaOptions { allow_large: false, size_guard: crate::complexes::DEFAULT_SIZE_GUARD }
    }
}

/// Checks the chain and cochain homotopy identities, invariance of the
/// invariant subcomplexes, and compares cohomology dimensions of `A` and
/// `M_r(A)` in degrees `0..=max_n`.
pub fn morita_report(
    s: &EntwiningStructure,
    r: usize,
    max_n: usize,
    opts: MoritaOptions,
) -> Result<MoritaReport, MoritaError> {
    if r == 0 {
        return Err(StructureError::ZeroMatrixSize.into());
    }
    if !opts.allow_large && !within_envelope(s, r, max_n) {
        return Err(MoritaError::Envelope { r, dim_a: s.dim_a(), dim_c: s.dim_c(), n: max_n });
    }
    s.require_valid()?;
    let probe = matrix_extend(s, r)?;
    crate::complexes::check_size(&probe, max_n + 1, opts.size_guard)?;
    let ops = MoritaOperators::build(s, r, max_n)?;
    Ok(report_from(&ops))
}

/// Builds the report from (possibly modified) operators.
pub fn report_from(ops: &MoritaOperators) -> MoritaReport {
    let identities = ops.check_identities();
    let invariance = ops.check_invariance();
    let mut dimensions = Vec::new();
    for theory in [Theory::Hochschild, Theory::Cyclic, Theory::Invariant] {
        let base = cohomology_dims(&ops.base, theory, ops.max_n);
        let matrix = cohomology_dims(&ops.extended, theory, ops.max_n);
        for n in 0..=ops.max_n {
            dimensions.push(DimensionRow {
                theory,
                degree: n,
                base: base[n],
                matrix: matrix[n],
                equal: base[n] == matrix[n],
            });
        }
    }
    MoritaReport {
        r: ops.r,
        max_degree: ops.max_n,
        identities,
        invariance,
        dimensions,
        note: "cyclic dimensions are compared by direct computation on both sides".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ExactField;
    use crate::structures::FiniteAlgebra;

    #[test]
    fn trivial_structure_r2() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let report = morita_report(&s, 2, 2, MoritaOptions::default()).unwrap();
        let bad: Vec<_> = report.identities.iter().chain(&report.invariance).filter(|v| !v.passed).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(report.passed());
        let cyc: Vec<usize> =
            report.dimensions.iter().filter(|d| d.theory == Theory::Cyclic).map(|d| d.matrix).collect();
        assert_eq!(cyc, vec![1, 0, 1]);
    }

    #[test]
    fn graded_structure_r2() {
        let f = ExactField::Rationals;
        let s =
            EntwiningStructure::graded_grouplike(FiniteAlgebra::truncated_polynomial(f, 2), &[false, true])
                .unwrap();
        let report = morita_report(&s, 2, 1, MoritaOptions::default()).unwrap();
        let bad: Vec<_> = report.identities.iter().chain(&report.invariance).filter(|v| !v.passed).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(report.passed(), "{:?}", report.dimensions);
    }

    #[test]
    fn sign_error_in_h1_is_caught() {
        let s = EntwiningStructure::trivial(ExactField::Rationals);
        let mut ops = MoritaOperators::build(&s, 2, 1).unwrap();
        ops.h[1][1] = ops.h[1][1].scale(&-s.field().one());
        let report = report_from(&ops);
        let v = report
            .identities
            .iter()
            .find(|v| v.identity == "b h + h b = id - inc_1 tr" && v.degree == 1)
            .unwrap();
        assert!(!v.passed);
        assert!(v.witness.is_some());
    }
}

#[cfg(test)]
mod envelope_tests {
    use super::*;
    use crate::linalg::ExactField;
    use crate::structures::{FiniteAlgebra, FiniteCoalgebra};

    #[test]
    fn full_envelope_flip() {
        let f = ExactField::Rationals;
        let s = EntwiningStructure::flip(
            FiniteAlgebra::truncated_polynomial(f, 2),
            FiniteCoalgebra::grouplike(f, 2),
        )
        .unwrap();
        let report = morita_report(&s, 2, 2, MoritaOptions::default()).unwrap();
        assert!(report.passed(), "{:?}", report.dimensions);
    }
}
