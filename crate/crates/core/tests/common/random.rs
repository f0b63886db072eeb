//! Seeded random structures, units and cochains.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entwine::complexes::Cochain;
use entwine::linalg::{invert, ExactField, Scalar, SparseMatrix, SparseVec};
use entwine::structures::{
    psi_invariant_basis, transport, EntwiningStructure, FiniteAlgebra, FiniteCoalgebra,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero `±a/b` with `1 ≤ a ≤ 3`, `1 ≤ b ≤ 2`.
pub fn nonzero(rng: &mut ChaCha8Rng, f: ExactField) -> Scalar {
    loop {
        let a: i64 = rng.gen_range(-3..=3);
        let b: i64 = rng.gen_range(1..=2);
        if let Ok(s) = f.parse_scalar(&format!("{a}/{b}")) {
            if !s.is_zero() {
                return s;
            }
        }
    }
}

pub fn small(rng: &mut ChaCha8Rng, f: ExactField) -> Scalar {
    f.from_i64(rng.gen_range(-2..=2))
}

pub fn invertible(rng: &mut ChaCha8Rng, f: ExactField, d: usize) -> SparseMatrix {
    loop {
        let triplets: Vec<(usize, usize, Scalar)> =
            (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| (i, j, small(rng, f))).collect();
        let m = SparseMatrix::from_triplets(f, d, d, triplets).expect("in range");
        if invert(&m).is_some() {
            return m;
        }
    }
}

/// Entwining structures with algebra and coalgebra of dimension at most 2,
/// in their standard bases.
pub fn base_structures(f: ExactField) -> Vec<EntwiningStructure> {
    let dual = FiniteAlgebra::truncated_polynomial(f, 2);
    let group = FiniteAlgebra::cyclic_group_algebra(f, 2);
    let diag = FiniteAlgebra::diagonal(f, 2);
    let k = FiniteAlgebra::ground(f);
    let mut out = Vec::new();
    for a in [&k, &dual, &group, &diag] {
        for c in [
            FiniteCoalgebra::ground(f),
            FiniteCoalgebra::grouplike(f, 2),
            FiniteCoalgebra::divided_powers(f, 2),
        ] {
            out.push(EntwiningStructure::flip(a.clone(), c).expect("flip"));
        }
    }
    out.push(EntwiningStructure::graded_grouplike(dual, &[false, true]).expect("graded"));
    out.push(EntwiningStructure::graded_grouplike(group, &[false, true]).expect("graded"));
    out
}

/// A standard structure re-expressed in random bases.
pub fn valid_structure(rng: &mut ChaCha8Rng, f: ExactField) -> EntwiningStructure {
    let bases = base_structures(f);
    let s = bases.choose(rng).expect("nonempty");
    let p = invertible(rng, f, s.dim_a());
    let q = invertible(rng, f, s.dim_c());
    transport(s, &p, &q).expect("invertible change of basis")
}

/// A random ψ-invariant unit and its inverse, not a multiple of the unit
/// when `nontrivial` is set. `None` when no such element turns up.
pub fn invariant_unit(
    rng: &mut ChaCha8Rng,
    s: &EntwiningStructure,
    nontrivial: bool,
) -> Option<(SparseVec, SparseVec)> {
    let f = s.field();
    let basis = psi_invariant_basis(s);
    let alg = s.algebra();
    let one = alg.unit()?.clone();
    for _ in 0..200 {
        let coeffs: SparseVec =
            (0..basis.cols()).map(|k| (k, small(rng, f))).filter(|(_, w)| !w.is_zero()).collect();
        let x = basis.mul_vec(&coeffs);
        if x.is_empty() {
            continue;
        }
        if nontrivial && is_scalar_multiple(&x, &one) {
            continue;
        }
        if let Some(y) = alg.inverse(&x) {
            return Some((x, y));
        }
    }
    None
}

fn is_scalar_multiple(x: &SparseVec, one: &SparseVec) -> bool {
    if x.len() != one.len() || x.iter().zip(one).any(|(a, b)| a.0 != b.0) {
        return false;
    }
    let ratio = &x[0].1 * &one[0].1.inv().expect("nonzero");
    x.iter().zip(one).all(|(a, b)| a.1 == &ratio * &b.1)
}

/// A random integer combination of `basis`.
pub fn combination(rng: &mut ChaCha8Rng, s: &EntwiningStructure, n: usize, basis: &[Cochain]) -> Cochain {
    let mut acc = Cochain::zero(s, n);
    for g in basis {
        acc = acc.add(&g.scale(&small(rng, s.field()))).expect("same space");
    }
    acc
}
