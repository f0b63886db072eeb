//! Dense reference implementation of the twisted Hochschild and cyclic
//! cochain complexes. Shares no code with the library: structures are plain
//! integer tables, matrices are `Vec<Vec<BigRational>>`, and ranks come from
//! textbook row reduction.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;
pub type Dense = Vec<Vec<Rat>>;

/// Structure constants as integers.
/// `mul[i][j][k]`: coefficient of e_k in e_i e_j.
/// `psi[i][j][p][q]`: coefficient of e_p (x) c_q in psi(c_i (x) e_j).
pub struct DenseStructure {
    pub dim_a: usize,
    pub dim_c: usize,
    pub mul: Vec<Vec<Vec<i64>>>,
    pub psi: Vec<Vec<Vec<Vec<i64>>>>,
}

fn r(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

impl DenseStructure {
    /// The flip entwining on (A, C) with C spanned by grouplikes.
    pub fn flip(mul: Vec<Vec<Vec<i64>>>, dim_c: usize) -> Self {
        let dim_a = mul.len();
        let mut psi = vec![vec![vec![vec![0; dim_c]; dim_a]; dim_a]; dim_c];
        for (i, by_j) in psi.iter_mut().enumerate() {
            for (j, slot) in by_j.iter_mut().enumerate() {
                slot[j][i] = 1;
            }
        }
        DenseStructure { dim_a, dim_c, mul, psi }
    }

    pub fn ground() -> Self {
        Self::flip(vec![vec![vec![1]]], 1)
    }

    pub fn dual_numbers() -> Self {
        // e0 = 1, e1 = x, x^2 = 0
        Self::flip(vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]], 1)
    }
}

/// All tuples (c, a_1, .., a_len) in lexicographic order, c most significant.
fn tuples(dim_c: usize, dim_a: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = dim_c * dim_a.pow(len as u32);
    for mut idx in 0..total {
        let mut t = vec![0; len + 1];
        for slot in (1..=len).rev() {
            t[slot] = idx % dim_a;
            idx /= dim_a;
        }
        t[0] = idx;
        out.push(t);
    }
    out
}

fn index_of(t: &[usize], dim_a: usize) -> usize {
    let mut idx = t[0];
    for &a in &t[1..] {
        idx = idx * dim_a + a;
    }
    idx
}

pub fn space_dim(s: &DenseStructure, n: usize) -> usize {
    s.dim_c * s.dim_a.pow(n as u32 + 1)
}

/// Matrix of the coboundary C^n -> C^{n+1}; entry [row][col] is the
/// coefficient of the dual basis functional `col` in delta(...) evaluated
/// at basis tuple `row`.
pub fn delta(s: &DenseStructure, n: usize) -> Dense {
    let rows = space_dim(s, n + 1);
    let cols = space_dim(s, n);
    let mut m = vec![vec![Rat::zero(); cols]; rows];
    for t in tuples(s.dim_c, s.dim_a, n + 2) {
        let row = index_of(&t, s.dim_a);
        let c = t[0];
        let a = &t[1..];
        // twisted term: g(c^psi, a_2, .., a_{n+1}, a_{n+2} a_{1 psi})
        for p in 0..s.dim_a {
            for q in 0..s.dim_c {
                let w = s.psi[c][a[0]][p][q];
                if w == 0 {
                    continue;
                }
                for k in 0..s.dim_a {
                    let m2 = s.mul[a[n + 1]][p][k];
                    if m2 == 0 {
                        continue;
                    }
                    let mut u = vec![q];
                    u.extend_from_slice(&a[1..=n]);
                    u.push(k);
                    m[row][index_of(&u, s.dim_a)] += r(w * m2);
                }
            }
        }
        // inner faces
        for i in 1..=n + 1 {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for k in 0..s.dim_a {
                let w = s.mul[a[i - 1]][a[i]][k];
                if w == 0 {
                    continue;
                }
                let mut u = vec![c];
                u.extend_from_slice(&a[..i - 1]);
                u.push(k);
                u.extend_from_slice(&a[i + 1..]);
                m[row][index_of(&u, s.dim_a)] += r(sign * w);
            }
        }
    }
    m
}

/// Signed cyclic operator: (tau g)(c, a_1..a_{n+1}) = (-1)^n g(c^psi, a_2, .., a_{n+1}, a_{1 psi}).
pub fn tau(s: &DenseStructure, n: usize) -> Dense {
    let d = space_dim(s, n);
    let mut m = vec![vec![Rat::zero(); d]; d];
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    for t in tuples(s.dim_c, s.dim_a, n + 1) {
        let row = index_of(&t, s.dim_a);
        for p in 0..s.dim_a {
            for q in 0..s.dim_c {
                let w = s.psi[t[0]][t[1]][p][q];
                if w == 0 {
                    continue;
                }
                let mut u = vec![q];
                u.extend_from_slice(&t[2..]);
                u.push(p);
                m[row][index_of(&u, s.dim_a)] += r(sign * w);
            }
        }
    }
    m
}

pub fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    let t = &a[i][l] * &b[l][j];
                    out[i][j] += t;
                }
            }
        }
    }
    out
}

pub fn rank(m: &Dense) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rk, p);
        let inv = a[rk][c].recip();
        for j in c..cols {
            a[rk][j] = &a[rk][j] * &inv;
        }
        for i in 0..rows {
            if i != rk && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &f * &a[rk][j];
                    a[i][j] -= t;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Null space basis of `m` as columns of the returned matrix (cols x k).
pub fn nullspace(m: &Dense, cols: usize) -> Dense {
    let mut a = m.clone();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut rk = 0;
    for c in 0..cols {
        let Some(p) = (rk..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rk, p);
        let inv = a[rk][c].recip();
        for j in 0..cols {
            a[rk][j] = &a[rk][j] * &inv;
        }
        for i in 0..rows {
            if i != rk && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[rk][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        rk += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = vec![vec![Rat::zero(); free.len()]; cols];
    for (k, &f) in free.iter().enumerate() {
        basis[f][k] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            basis[pc][k] = -a[row][f].clone();
        }
    }
    basis
}

/// Hochschild cohomology dimensions for degrees 0..=max.
pub fn hochschild_dims(s: &DenseStructure, max: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=max).map(|n| rank(&delta(s, n))).collect();
    (0..=max).map(|n| space_dim(s, n) - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }).collect()
}

/// Cyclic cohomology dimensions: the complex ker(tau - 1) with restricted coboundary.
pub fn cyclic_dims(s: &DenseStructure, max: usize) -> Vec<usize> {
    let bases: Vec<Dense> = (0..=max)
        .map(|n| {
            let d = space_dim(s, n);
            nullspace(&sub(&tau(s, n), &identity(d)), d)
        })
        .collect();
    let ranks: Vec<usize> = (0..=max).map(|n| rank(&matmul(&delta(s, n), &bases[n]))).collect();
    (0..=max)
        .map(|n| {
            let dim = bases[n].first().map_or(0, Vec::len);
            dim - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 }
        })
        .collect()
}

/// Hochschild homology of an algebra from the classical cyclic bar complex
/// b(a_0, .., a_n) = sum_{i<n} (-1)^i (.., a_i a_{i+1}, ..) + (-1)^n (a_n a_0, a_1, .., a_{n-1}).
pub fn bar_homology_dims(mul: &[Vec<Vec<i64>>], max: usize) -> Vec<usize> {
    let d = mul.len();
    let dim = |n: usize| d.pow(n as u32 + 1);
    let boundary = |n: usize| -> Dense {
        // C_n -> C_{n-1}
        let mut m = vec![vec![Rat::zero(); dim(n)]; dim(n - 1)];
        for col in 0..dim(n) {
            let mut t = vec![0; n + 1];
            let mut x = col;
            for slot in (0..=n).rev() {
                t[slot] = x % d;
                x /= d;
            }
            let enc = |u: &[usize]| u.iter().fold(0, |acc, &v| acc * d + v);
            for i in 0..n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                for k in 0..d {
                    let w = mul[t[i]][t[i + 1]][k];
                    if w != 0 {
                        let mut u = t[..i].to_vec();
                        u.push(k);
                        u.extend_from_slice(&t[i + 2..]);
                        m[enc(&u)][col] += r(sign * w);
                    }
                }
            }
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            for k in 0..d {
                let w = mul[t[n]][t[0]][k];
                if w != 0 {
                    let mut u = vec![k];
                    u.extend_from_slice(&t[1..n]);
                    m[enc(&u)][col] += r(sign * w);
                }
            }
        }
        m
    };
    let ranks: Vec<usize> = (0..=max + 1).map(|n| if n == 0 { 0 } else { rank(&boundary(n)) }).collect();
    (0..=max).map(|n| dim(n) - ranks[n] - ranks[n + 1]).collect()
}
