//! The cocyclic structure on invariant cochains: cofaces, codegeneracies and
//! the signed cyclic operator, with every defining identity checked as an
//! exact matrix identity on invariant bases.

use serde::Serialize;

use crate::linalg::SparseMatrix;
use crate::structures::EntwiningStructure;

use super::cohomology::invariant_basis;
use super::operators::{codegeneracy, coface, cyclic_tau};
use super::ComplexError;

/// All cocyclic operators up to a degree bound, stored as plain matrices so
/// that individual operators can be replaced for fault injection.
#[derive(Debug, Clone)]
pub struct CocyclicOperators {
    pub max_n: usize,
    /// `faces[m][i] = δ_i : C^m → C^{m+1}` for `m ≤ max_n`.
    pub faces: Vec<Vec<SparseMatrix>>,
    /// `degeneracies[m][j] = σ_j : C^{m+1} → C^m` for `m ≤ max_n`.
    pub degeneracies: Vec<Vec<SparseMatrix>>,
    /// `tau[m] = τ_m` for `m ≤ max_n + 1`.
    pub tau: Vec<SparseMatrix>,
    /// Invariant bases for `m ≤ max_n + 1`.
    pub invariant: Vec<SparseMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub identity: String,
    pub degree: usize,
    pub indices: Vec<usize>,
    pub passed: bool,
    /// `(row, invariant basis vector)` of the first discrepancy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocyclicReport {
    pub max_degree: usize,
    pub invariant_dims: Vec<usize>,
    pub identities: Vec<IdentityVerdict>,
}

impl CocyclicReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityVerdict> {
        self.identities.iter().filter(|v| !v.passed)
    }
}

impl CocyclicOperators {
    pub fn build(s: &EntwiningStructure, max_n: usize) -> Result<Self, ComplexError> {
        s.require_unital()?;
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for m in 0..=max_n {
            faces
                .push((0..=m + 1).map(|i| coface(s, m, i).map(|o| o.matrix)).collect::<Result<Vec<_>, _>>()?);
            degeneracies.push(
                (0..=m).map(|j| codegeneracy(s, m, j).map(|o| o.matrix)).collect::<Result<Vec<_>, _>>()?,
            );
        }
        let tau = (0..=max_n + 1).map(|m| cyclic_tau(s, m).matrix).collect();
        let invariant = (0..=max_n + 1).map(|m| invariant_basis(s, m)).collect();
        Ok(CocyclicOperators { max_n, faces, degeneracies, tau, invariant })
    }

    /// `δ_i` on `C^{n-1}` (the source degree is `n - 1`).
    fn d(&self, n: usize, i: usize) -> &SparseMatrix {
        &self.faces[n - 1][i]
    }

    /// `σ_j : C^{n+1} → C^n`.
    fn sg(&self, n: usize, j: usize) -> &SparseMatrix {
        &self.degeneracies[n][j]
    }

    /// Checks every identity whose source degree is at most `max_n + 1` and
    /// whose operators have been built.
    pub fn check(&self) -> CocyclicReport {
        let max = self.max_n;
        let mut out = Vec::new();
        let field = self.tau[0].field();
        let neg = |m: &SparseMatrix| m.scale(&-field.one());
        let signed = |m: &SparseMatrix, k: usize| if k.is_multiple_of(2) { m.clone() } else { neg(m) };

        let mut push = |name: &str,
                        degree: usize,
                        indices: Vec<usize>,
                        lhs: SparseMatrix,
                        rhs: SparseMatrix,
                        src: usize| {
            let b = &self.invariant[src];
            let l = lhs.mul(b).expect("shapes agree");
            let r = rhs.mul(b).expect("shapes agree");
            let witness = l.first_difference(&r);
            out.push(IdentityVerdict {
                identity: name.to_string(),
                degree,
                indices,
                passed: witness.is_none(),
                witness,
            });
        };

        for n in 0..=max {
            // τ_n^{n+1} = id on I^n
            let t = &self.tau[n];
            let mut pow = t.clone();
            for _ in 0..n {
                pow = t.mul(&pow).expect("square");
            }
            push("tau_n^(n+1) = id", n, vec![], pow, SparseMatrix::identity(field, t.rows()), n);
        }

        // Cofaces δ_i : C^{n-1} → C^n, 1 ≤ n ≤ max.
        for n in 1..=max {
            // δ_j δ_i = δ_i δ_{j-1} (i < j), both C^{n-1} → C^{n+1}
            for j in 1..=n + 1 {
                for i in 0..j {
                    let lhs = self.d(n + 1, j).mul(self.d(n, i)).expect("shapes");
                    let rhs = self.d(n + 1, i).mul(self.d(n, j - 1)).expect("shapes");
                    push("delta_j delta_i = delta_i delta_(j-1)", n, vec![i, j], lhs, rhs, n - 1);
                }
            }
            // δ_i τ_{n-1} = -τ_n δ_{i-1}, 1 ≤ i ≤ n
            for i in 1..=n {
                let lhs = self.d(n, i).mul(&self.tau[n - 1]).expect("shapes");
                let rhs = neg(&self.tau[n].mul(self.d(n, i - 1)).expect("shapes"));
                push("delta_i tau_(n-1) = -tau_n delta_(i-1)", n, vec![i], lhs, rhs, n - 1);
            }
            // δ_0 = (-1)^n τ_n δ_n
            let rhs = signed(&self.tau[n].mul(self.d(n, n)).expect("shapes"), n);
            push("delta_0 = (-1)^n tau_n delta_n", n, vec![], self.d(n, 0).clone(), rhs, n - 1);
        }

        // Codegeneracies σ_j : C^{n+1} → C^n, 0 ≤ n ≤ max - 1 for products.
        for n in 0..max {
            // σ_j σ_i = σ_i σ_{j+1} (i ≤ j): C^{n+2} → C^n
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.sg(n, j).mul(self.sg(n + 1, i)).expect("shapes");
                    let rhs = self.sg(n, i).mul(self.sg(n + 1, j + 1)).expect("shapes");
                    push("sigma_j sigma_i = sigma_i sigma_(j+1)", n, vec![i, j], lhs, rhs, n + 2);
                }
            }
        }
        for n in 0..=max {
            // σ_j δ_i on C^n: δ_i : C^n → C^{n+1}, σ_j : C^{n+1} → C^n, 0 ≤ j ≤ n, 0 ≤ i ≤ n+1
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.sg(n, j).mul(self.d(n + 1, i)).expect("shapes");
                    let (name, rhs) = if i < j {
                        (
                            "sigma_j delta_i = delta_i sigma_(j-1)",
                            self.d(n, i).mul(self.sg(n - 1, j - 1)).expect("shapes"),
                        )
                    } else if i == j || i == j + 1 {
                        ("sigma_j delta_i = id", SparseMatrix::identity(field, lhs.rows()))
                    } else {
                        (
                            "sigma_j delta_i = delta_(i-1) sigma_j",
                            self.d(n, i - 1).mul(self.sg(n - 1, j)).expect("shapes"),
                        )
                    };
                    push(name, n, vec![i, j], lhs, rhs, n);
                }
            }
            // σ_i τ_{n+1} = -τ_n σ_{i-1}, 1 ≤ i ≤ n
            for i in 1..=n {
                let lhs = self.sg(n, i).mul(&self.tau[n + 1]).expect("shapes");
                let rhs = neg(&self.tau[n].mul(self.sg(n, i - 1)).expect("shapes"));
                push("sigma_i tau_(n+1) = -tau_n sigma_(i-1)", n, vec![i], lhs, rhs, n + 1);
            }
            // σ_0 τ_{n+1}^2 = (-1)^n τ_n σ_n
            let t2 = self.tau[n + 1].mul(&self.tau[n + 1]).expect("square");
            let lhs = self.sg(n, 0).mul(&t2).expect("shapes");
            let rhs = signed(&self.tau[n].mul(self.sg(n, n)).expect("shapes"), n);
            push("sigma_0 tau_(n+1)^2 = (-1)^n tau_n sigma_n", n, vec![], lhs, rhs, n + 1);
        }

        CocyclicReport {
            max_degree: max,
            invariant_dims: self.invariant.iter().map(SparseMatrix::cols).collect(),
            identities: out,
        }
    }
}

/// Builds the operators for degrees up to `max_n` and checks every identity.
pub fn cocyclic_check(s: &EntwiningStructure, max_n: usize) -> Result<CocyclicReport, ComplexError> {
    Ok(CocyclicOperators::build(s, max_n)?.check())
}
