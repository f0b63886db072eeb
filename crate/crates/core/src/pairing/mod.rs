//! The pairing of cyclic cocycles `Z^m_λ(A, C, ψ) ⊗ Z^n_λ(A', C', ψ') →
//! Z^{m+n}_λ(A ⊗ A', C ⊗ C', ψ ⊗ ψ')`, computed through entwined traces on
//! the Koszul-signed tensor product of truncated universal DGAs.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complexes::{
    cohomology, hochschild_delta, in_subcomplex, is_coboundary, Cochain, ComplexError, TensorSpace, Theory,
};
use crate::linalg::sparse::normalize;
use crate::linalg::{Scalar, SparseMatrix, SparseVec};
use crate::omega::{
    character, trace_from_cocycle, validate_trace, DgEntwining, EntwinedTrace, OmegaError, TraceReport,
    TruncatedOmega,
};
use crate::structures::{tensor_product, EntwiningStructure, StructureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("{side} input is not a cyclic cocycle")]
    NotCocycle { side: &'static str },
    #[error("left and right factors must share the truncation degree")]
    TruncationMismatch,
    #[error(transparent)]
    Omega(#[from] OmegaError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `(R ⊗ R')^p = ⊕_{i+j=p} R^i ⊗ R'^j` in degrees `≤ N`, with Koszul-signed
/// product and differential `D ⊗ id + (-1)^{|r|} id ⊗ D'`.
#[derive(Debug, Clone)]
pub struct GradedTensorDga {
    pub left: DgEntwining,
    pub right: DgEntwining,
    /// The tensor product as a dg-entwining over `C ⊗ C'`.
    pub dg: DgEntwining,
}

impl GradedTensorDga {
    pub fn max_degree(&self) -> usize {
        self.dg.max_degree()
    }

    /// Offset of the `(i, p - i)` block inside `(R ⊗ R')^p`.
    pub fn block_offset(&self, p: usize, i: usize) -> usize {
        (0..i).map(|k| self.left.dims[k] * self.right.dims[p - k]).sum()
    }

    /// `(i, j, x, y)` of a basis index in degree `p`.
    pub fn decode(&self, p: usize, mut idx: usize) -> (usize, usize, usize, usize) {
        for i in 0..=p {
            let size = self.left.dims[i] * self.right.dims[p - i];
            if idx < size {
                let dj = self.right.dims[p - i];
                return (i, p - i, idx / dj, idx % dj);
            }
            idx -= size;
        }
        unreachable!("index within degree {p}")
    }

    pub fn encode(&self, i: usize, j: usize, x: usize, y: usize) -> usize {
        self.block_offset(i + j, i) + x * self.right.dims[j] + y
    }

    pub fn new(left: &DgEntwining, right: &DgEntwining) -> Result<Self, PairingError> {
        let n = left.max_degree();
        if right.max_degree() != n {
            return Err(PairingError::TruncationMismatch);
        }
        let field = left.field;
        let dims: Vec<usize> =
            (0..=n).map(|p| (0..=p).map(|i| left.dims[i] * right.dims[p - i]).sum()).collect();
        let mut shell = GradedTensorDga {
            left: left.clone(),
            right: right.clone(),
            dg: DgEntwining {
                field,
                dims: dims.clone(),
                coalgebra: left.coalgebra.clone(),
                products: Vec::new(),
                differentials: Vec::new(),
                psi: Vec::new(),
                base: None,
                rho: None,
            },
        };

        let mut products = Vec::new();
        for p in 0..=n {
            let mut row = Vec::new();
            for q in 0..=n - p {
                let table: Vec<SparseVec> = (0..dims[p] * dims[q])
                    .into_par_iter()
                    .map(|xy| shell.product_basis(p, xy / dims[q], q, xy % dims[q]))
                    .collect();
                row.push(table);
            }
            products.push(row);
        }

        let differentials = (0..n)
            .map(|p| {
                SparseMatrix::build_columns(field, dims[p + 1], dims[p], |idx| {
                    let (i, j, x, y) = shell.decode(p, idx);
                    let mut out = Vec::new();
                    if i < n {
                        for (x2, w) in left.differentials[i].column(x) {
                            out.push((shell.encode(i + 1, j, *x2, y), w.clone()));
                        }
                    }
                    if j < n {
                        let sign = if i % 2 == 0 { field.one() } else { -field.one() };
                        for (y2, w) in right.differentials[j].column(y) {
                            out.push((shell.encode(i, j + 1, x, *y2), w * &sign));
                        }
                    }
                    normalize(out)
                })
            })
            .collect();

        let (dc, dc2) = (left.dim_c(), right.dim_c());
        let dcc = dc * dc2;
        let psi = (0..=n)
            .map(|p| {
                (0..dcc * dims[p])
                    .map(|cidx| {
                        let (cc, idx) = (cidx / dims[p], cidx % dims[p]);
                        let (c, c2) = (cc / dc2, cc % dc2);
                        let (i, j, x, y) = shell.decode(p, idx);
                        let mut out = Vec::new();
                        for (k, w) in &left.psi[i][c * left.dims[i] + x] {
                            let (x2, c1) = (k / dc, k % dc);
                            for (k2, v) in &right.psi[j][c2 * right.dims[j] + y] {
                                let (y2, c3) = (k2 / dc2, k2 % dc2);
                                let r = shell.encode(i, j, x2, y2);
                                out.push((r * dcc + c1 * dc2 + c3, w * v));
                            }
                        }
                        normalize(out)
                    })
                    .collect()
            })
            .collect();

        let (base, rho) = match (&left.base, &right.base, &left.rho, &right.rho) {
            (Some(b1), Some(b2), Some(r1), Some(r2)) => (Some(tensor_product(b1, b2)?), Some(kron(r1, r2))),
            _ => (None, None),
        };
        let coalgebra = match &base {
            Some(b) => b.coalgebra().clone(),
            None => tensor_coalgebra(left, right)?,
        };
        shell.dg = DgEntwining { field, dims, coalgebra, products, differentials, psi, base, rho };
        Ok(shell)
    }

    /// `(x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} x x' ⊗ y y'` on basis elements.
    fn product_basis(&self, p: usize, a: usize, q: usize, b: usize) -> SparseVec {
        let (i, j, x, y) = self.decode(p, a);
        let (i2, j2, x2, y2) = self.decode(q, b);
        let f = self.left.field;
        let one = f.one();
        let left = self
            .left
            .mul(i, &vec![(x, one.clone())], i2, &vec![(x2, one.clone())])
            .expect("within truncation");
        let right = self
            .right
            .mul(j, &vec![(y, one.clone())], j2, &vec![(y2, one.clone())])
            .expect("within truncation");
        let sign = if (j * i2) % 2 == 0 { one } else { -one };
        let mut out = Vec::with_capacity(left.len() * right.len());
        for (u, w) in &left {
            let ws = w * &sign;
            for (v, z) in &right {
                out.push((self.encode(i + i2, j + j2, *u, *v), &ws * z));
            }
        }
        normalize(out)
    }
}

fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let rows = a.rows() * b.rows();
    let cols: Vec<SparseVec> = (0..a.cols())
        .flat_map(|i| {
            (0..b.cols()).map(move |j| {
                let mut out = Vec::new();
                for (r, w) in a.column(i) {
                    for (r2, v) in b.column(j) {
                        out.push((r * b.rows() + r2, w * v));
                    }
                }
                normalize(out)
            })
        })
        .collect();
    SparseMatrix::from_columns(a.field(), rows, cols).expect("in range")
}

fn tensor_coalgebra(
    left: &DgEntwining,
    right: &DgEntwining,
) -> Result<crate::structures::FiniteCoalgebra, PairingError> {
    let (c, c2) = (&left.coalgebra, &right.coalgebra);
    let dc2 = c2.dim();
    let mut comul = Vec::new();
    for (k, i, j, w) in c.entries() {
        for (k2, i2, j2, w2) in c2.entries() {
            comul.push((k * dc2 + k2, i * dc2 + i2, j * dc2 + j2, w * w2));
        }
    }
    let counit = c.counit().iter().flat_map(|e| c2.counit().iter().map(move |e2| e * e2)).collect();
    Ok(crate::structures::FiniteCoalgebra::from_entries(left.field, c.dim() * dc2, comul, counit)?)
}

/// `(T ⊗ T')(c ⊗ c' ⊗ r ⊗ r') = T(c ⊗ r) T'(c' ⊗ r')` on the `(m, n)`
/// block, zero on every other block of degree `m + n`.
pub fn tensor_trace(
    tensor: &GradedTensorDga,
    t: &EntwinedTrace,
    t2: &EntwinedTrace,
) -> Result<EntwinedTrace, PairingError> {
    let (m, n) = (t.degree, t2.degree);
    if m + n > tensor.max_degree() {
        return Err(OmegaError::Truncated { degree: m + n, max: tensor.max_degree() }.into());
    }
    let p = m + n;
    let dp = tensor.dg.dims[p];
    let (dm, dn) = (tensor.left.dims[m], tensor.right.dims[n]);
    let dc2 = tensor.right.dim_c();
    let mut out = Vec::with_capacity(t.values.len() * t2.values.len());
    for (k, w) in &t.values {
        let (c, x) = (k / dm, k % dm);
        for (k2, v) in &t2.values {
            let (c2, y) = (k2 / dn, k2 % dn);
            let idx = (c * dc2 + c2) * dp + tensor.encode(m, n, x, y);
            out.push((idx, w * v));
        }
    }
    Ok(EntwinedTrace { degree: p, values: normalize(out) })
}

fn require_cocycle(s: &EntwiningStructure, g: &Cochain, side: &'static str) -> Result<(), PairingError> {
    let n = g.degree();
    if g.space != TensorSpace::degree(s, n)
        || !in_subcomplex(s, Theory::Cyclic, g)
        || !hochschild_delta(s, n).matrix.mul_vec(&g.values).is_empty()
    {
        return Err(PairingError::NotCocycle { side });
    }
    Ok(())
}

/// `g ⊗ g'` evaluated by expanding `(a_1 ⊗ a'_1) ∏_{t ≥ 2} (D ⊗ D')(a_t ⊗ a'_t)`
/// into its Leibniz branches and applying `T(c ⊗ ·) T'(c' ⊗ ·)` to the
/// `(m, n)` component of each branch.
pub fn pair_cocycles(
    s: &EntwiningStructure,
    g: &Cochain,
    s2: &EntwiningStructure,
    g2: &Cochain,
) -> Result<Cochain, PairingError> {
    require_cocycle(s, g, "left")?;
    require_cocycle(s2, g2, "right")?;
    let (m, n) = (g.degree(), g2.degree());
    let om = TruncatedOmega::new(s, m)?;
    let om2 = TruncatedOmega::new(s2, n)?;
    let (dg, dg2) = (om.to_dg(), om2.to_dg());
    let t = trace_from_cocycle(&om, g)?;
    let t2 = trace_from_cocycle(&om2, g2)?;
    let st = tensor_product(s, s2)?;
    let sp = TensorSpace::degree(&st, m + n);
    let (da2, dc2) = (s2.dim_a(), s2.dim_c());
    let field = s.field();

    // Branches: which of the positions 2..=m+n+1 take the left differential.
    let branches: Vec<Vec<bool>> = (0u64..1 << (m + n))
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| (0..m + n).map(|b| mask >> b & 1 == 1).collect())
        .collect();

    let values: Vec<(usize, Scalar)> = (0..sp.dim())
        .into_par_iter()
        .filter_map(|idx| {
            let (cc, a) = sp.decode(idx);
            let (c, c2) = (cc / dc2, cc % dc2);
            let left: Vec<usize> = a.iter().map(|x| x / da2).collect();
            let right: Vec<usize> = a.iter().map(|x| x % da2).collect();
            let mut total = field.zero();
            for branch in &branches {
                let one = field.one();
                let mut x = vec![(left[0], one.clone())];
                let mut y = vec![(right[0], one.clone())];
                let (mut i, mut j) = (0usize, 0usize);
                let mut sign = false;
                for (t_idx, &takes_left) in branch.iter().enumerate() {
                    let (l, r) = (left[t_idx + 1], right[t_idx + 1]);
                    let basis_l = vec![(l, one.clone())];
                    let basis_r = vec![(r, one.clone())];
                    if takes_left {
                        // (x ⊗ y)(dl ⊗ r): Koszul sign (-1)^{|y| * 1}
                        sign ^= j % 2 == 1;
                        let dl = dg.diff(0, &basis_l).expect("m ≥ 1 when a left differential occurs");
                        x = dg.mul(i, &x, 1, &dl).expect("within truncation");
                        y = dg2.mul(j, &y, 0, &basis_r).expect("within truncation");
                        i += 1;
                    } else {
                        let dr = dg2.diff(0, &basis_r).expect("n ≥ 1 when a right differential occurs");
                        x = dg.mul(i, &x, 0, &basis_l).expect("within truncation");
                        y = dg2.mul(j, &y, 1, &dr).expect("within truncation");
                        j += 1;
                    }
                }
                let tx = evaluate(&t, c, om.dim(m), &x);
                if tx.is_zero() {
                    continue;
                }
                let ty = evaluate(&t2, c2, om2.dim(n), &y);
                let term = &tx * &ty;
                if sign {
                    total -= &term;
                } else {
                    total += &term;
                }
            }
            (!total.is_zero()).then_some((idx, total))
        })
        .collect();
    Ok(Cochain::from_values(&st, m + n, values)?)
}

fn evaluate(t: &EntwinedTrace, c: usize, dim: usize, x: &SparseVec) -> Scalar {
    let field = x.first().map(|(_, s)| s.field()).unwrap_or(crate::linalg::ExactField::Rationals);
    let mut acc = field.zero();
    for (w, s) in x {
        if let Ok(pos) = t.values.binary_search_by_key(&(c * dim + w), |(k, _)| *k) {
            acc += &(s * &t.values[pos].1);
        }
    }
    acc
}

/// SHA-256 of the canonical text form of a cochain.
pub fn cochain_digest(g: &Cochain) -> String {
    let mut h = Sha256::new();
    h.update(format!("degree {}\n", g.degree()));
    for (k, v) in &g.values {
        h.update(format!("{k} {}\n", v.to_canonical_string()));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub left_degree: usize,
    pub right_degree: usize,
    pub left_digest: String,
    pub right_digest: String,
    pub output_digest: String,
    /// `(c ⊗ c', a_1 ⊗ a'_1, …)` index tuples with values, in canonical order.
    pub output: Vec<(usize, Vec<usize>, String)>,
    pub in_cyclic_subcomplex: bool,
    pub closed: bool,
    pub tensor_trace: TraceReport,
    /// The Leibniz expansion agrees with the character of the tensor cycle.
    pub routes_agree: bool,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.in_cyclic_subcomplex && self.closed && self.tensor_trace.passed && self.routes_agree
    }
}

/// Computes `g ⊗ g'` by both routes and verifies the result.
pub fn pairing_report(
    s: &EntwiningStructure,
    g: &Cochain,
    s2: &EntwiningStructure,
    g2: &Cochain,
) -> Result<PairingReport, PairingError> {
    let out = pair_cocycles(s, g, s2, g2)?;
    let (m, n) = (g.degree(), g2.degree());
    let st = tensor_product(s, s2)?;
    let p = m + n;
    let om = TruncatedOmega::new(s, p)?;
    let om2 = TruncatedOmega::new(s2, p)?;
    let tensor = GradedTensorDga::new(&om.to_dg(), &om2.to_dg())?;
    let t = trace_from_cocycle(&TruncatedOmega::new(s, m)?, g)?;
    let t2 = trace_from_cocycle(&TruncatedOmega::new(s2, n)?, g2)?;
    let t = reindex_trace(&t, om.dim(m), om.dim(m));
    let t2 = reindex_trace(&t2, om2.dim(n), om2.dim(n));
    let tt = tensor_trace(&tensor, &t, &t2)?;
    let trace_report = validate_trace(&tensor.dg, &tt)?;
    let routes_agree = trace_report.passed && character(&tensor.dg, &tt)? == out;
    let closed = hochschild_delta(&st, p).matrix.mul_vec(&out.values).is_empty();
    Ok(PairingReport {
        left_degree: m,
        right_degree: n,
        left_digest: cochain_digest(g),
        right_digest: cochain_digest(g2),
        output_digest: cochain_digest(&out),
        output: out.entries().into_iter().map(|(c, a, v)| (c, a, v.to_canonical_string())).collect(),
        in_cyclic_subcomplex: in_subcomplex(&st, Theory::Cyclic, &out),
        closed,
        tensor_trace: trace_report,
        routes_agree,
    })
}

/// Trace coordinates are laid out identically for every truncation degree.
fn reindex_trace(t: &EntwinedTrace, _from: usize, _to: usize) -> EntwinedTrace {
    t.clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPairVerdict {
    pub coboundary_index: usize,
    pub cocycle_index: usize,
    pub is_coboundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCheckReport {
    pub left_degree: usize,
    pub right_degree: usize,
    pub coboundaries: usize,
    pub cocycles: usize,
    pub pairs: Vec<ClassPairVerdict>,
}

impl ClassCheckReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.is_coboundary)
    }
}

/// Pairs a basis of `B^m_λ(s)` with a basis of `Z^n_λ(s2)` and checks that
/// every result is a cyclic coboundary of the tensor structure.
pub fn pairing_class_check(
    s: &EntwiningStructure,
    s2: &EntwiningStructure,
    m: usize,
    n: usize,
) -> Result<ClassCheckReport, PairingError> {
    let boundaries = cohomology(s, Theory::Cyclic, m).coboundary_basis;
    let cocycles = cohomology(s2, Theory::Cyclic, n).cocycle_basis;
    let st = tensor_product(s, s2)?;
    let mut pairs = Vec::new();
    for (bi, b) in boundaries.columns().iter().enumerate() {
        let g = Cochain::from_values(s, m, b.clone())?;
        for (zi, z) in cocycles.columns().iter().enumerate() {
            let g2 = Cochain::from_values(s2, n, z.clone())?;
            let out = pair_cocycles(s, &g, s2, &g2)?;
            let ok = matches!(is_coboundary(&st, Theory::Cyclic, &out), Ok(Some(_)));
            pairs.push(ClassPairVerdict { coboundary_index: bi, cocycle_index: zi, is_coboundary: ok });
        }
    }
    Ok(ClassCheckReport {
        left_degree: m,
        right_degree: n,
        coboundaries: boundaries.cols(),
        cocycles: cocycles.cols(),
        pairs,
    })
}
