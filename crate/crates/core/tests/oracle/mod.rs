//! Reference computations that avoid the crate's linear algebra and
//! cochain code. Matrices are plain `Vec<Vec<u8>>`.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type Dense = Vec<Vec<u8>>;

pub fn rank(m: &Dense) -> usize {
    let mut m = m.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] & 1 == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] & 1 == 1 {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| (0..inner).fold(0u8, |acc, k| acc ^ (row[k] & b[k][j])) ).collect()
        })
        .collect()
}

pub fn mul_vec(a: &Dense, v: &[u8]) -> Vec<u8> {
    a.iter().map(|row| row.iter().zip(v).fold(0u8, |acc, (x, y)| acc ^ (x & y))).collect()
}

/// Gauss-Jordan inverse of an invertible matrix.
pub fn inverse(m: &Dense) -> Dense {
    let n = m.len();
    let mut a: Dense = m.iter().zip(identity(n)).map(|(r, i)| r.iter().copied().chain(i).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| a[i][c] == 1).expect("invertible");
        a.swap(c, p);
        for i in 0..n {
            if i != c && a[i][c] == 1 {
                let pivot = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// All faces of the given simplices, grouped by dimension and sorted.
pub fn closure(n: usize, maximal: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut all: BTreeSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    for s in maximal {
        let mut s = s.clone();
        s.sort();
        let k = s.len();
        for mask in 1u32..(1 << k) {
            all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect());
        }
    }
    let top = all.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![Vec::new(); top];
    for s in all {
        out[s.len() - 1].push(s);
    }
    out
}

/// Cohomology dimensions of cochains with coefficients in a rank-`r`
/// system of vector spaces, anchored at the *largest* vertex of each simplex.
/// `transport(a, b)` for `a < b` is the matrix along the edge `a -> b`.
pub fn twisted_dims(
    simplices: &[Vec<Vec<usize>>],
    r: usize,
    transport: &dyn Fn(usize, usize) -> Dense,
) -> BTreeMap<i64, usize> {
    let t = |a: usize, b: usize| -> Dense {
        if a == b {
            identity(r)
        } else if a < b {
            transport(a, b)
        } else {
            inverse(&transport(b, a))
        }
    };
    let index: Vec<HashMap<Vec<usize>, usize>> = simplices
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    let mut ranks = vec![0usize; simplices.len()];
    for p in 0..simplices.len().saturating_sub(1) {
        let rows = simplices[p + 1].len() * r;
        let cols = simplices[p].len() * r;
        let mut d = vec![vec![0u8; cols]; rows];
        for (ti, tau) in simplices[p + 1].iter().enumerate() {
            for skip in 0..tau.len() {
                let sigma: Vec<usize> = tau.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let si = index[p][&sigma];
                let m = t(*sigma.last().unwrap(), *tau.last().unwrap());
                for i in 0..r {
                    for j in 0..r {
                        d[ti * r + i][si * r + j] ^= m[i][j];
                    }
                }
            }
        }
        ranks[p] = rank(&d);
    }
    let mut out = BTreeMap::new();
    for p in 0..simplices.len() {
        let h = simplices[p].len() * r - ranks[p] - if p > 0 { ranks[p - 1] } else { 0 };
        if h > 0 {
            out.insert(p as i64, h);
        }
    }
    out
}

/// Ordinary F2 cochains as sets of simplices.
pub type Cochain = BTreeSet<Vec<usize>>;

pub fn coboundary(simplices: &[Vec<Vec<usize>>], c: &Cochain, p: usize) -> Cochain {
    let mut out = Cochain::new();
    for tau in simplices.get(p + 1).map_or(&[][..], Vec::as_slice) {
        let mut bit = false;
        for skip in 0..tau.len() {
            let sigma: Vec<usize> = tau.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            bit ^= c.contains(&sigma);
        }
        if bit {
            out.insert(tau.clone());
        }
    }
    out
}

/// Alexander-Whitney cup product of ordinary cochains.
pub fn cup(simplices: &[Vec<Vec<usize>>], a: &Cochain, p: usize, b: &Cochain, q: usize) -> Cochain {
    let mut out = Cochain::new();
    for rho in simplices.get(p + q).map_or(&[][..], Vec::as_slice) {
        if a.contains(&rho[..=p].to_vec()) && b.contains(&rho[p..].to_vec()) {
            out.insert(rho.clone());
        }
    }
    out
}

/// Whether `c` (a degree-`p` cochain) is a coboundary, by comparing ranks.
pub fn is_coboundary(simplices: &[Vec<Vec<usize>>], c: &Cochain, p: usize) -> bool {
    if c.is_empty() {
        return true;
    }
    if p == 0 {
        return false;
    }
    let cols: Vec<Vec<u8>> = simplices[p - 1]
        .iter()
        .map(|s| {
            let img = coboundary(simplices, &Cochain::from([s.clone()]), p - 1);
            simplices[p].iter().map(|t| img.contains(t) as u8).collect()
        })
        .collect();
    let target: Vec<u8> = simplices[p].iter().map(|t| c.contains(t) as u8).collect();
    let mut with = cols.clone();
    with.push(target);
    rank(&cols) == rank(&with)
}

/// All degree-`p` cocycles, by enumeration (use only for small counts).
pub fn all_cocycles(simplices: &[Vec<Vec<usize>>], p: usize) -> Vec<Cochain> {
    let cells = &simplices[p];
    assert!(cells.len() <= 22, "too many cells to enumerate");
    (0u64..(1 << cells.len()))
        .map(|mask| (0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i].clone()).collect::<Cochain>())
        .filter(|c| coboundary(simplices, c, p).is_empty())
        .collect()
}

/// Laurent polynomial product over F2, coefficients keyed by exponent.
pub fn laurent_mul(a: &BTreeSet<i64>, b: &BTreeSet<i64>) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            let e = x + y;
            if !out.remove(&e) {
                out.insert(e);
            }
        }
    }
    out
}

/// Hochschild homology of an ungraded associative algebra from the classical
/// unnormalized complex `C_n = A^{⊗(n+1)}`,
/// `b(a_0 ⊗ ... ⊗ a_n) = Σ_{i<n} (.., a_i a_{i+1}, ..) + a_n a_0 ⊗ a_1 ⊗ ... ⊗ a_{n-1}`.
/// `mult[i][j]` is the coordinate vector of `e_i e_j`. Returns `HH_0..=HH_top`.
pub fn hochschild_dims(mult: &[Vec<Vec<u8>>], top: usize) -> Vec<usize> {
    let n = mult.len();
    let size = |k: usize| n.pow(k as u32 + 1);
    let digits = |mut idx: usize, k: usize| -> Vec<usize> {
        let mut out = vec![0; k + 1];
        for d in out.iter_mut().rev() {
            *d = idx % n;
            idx /= n;
        }
        out
    };
    let encode = |t: &[usize]| t.iter().fold(0, |acc, &x| acc * n + x);
    // b_k: C_k -> C_{k-1}
    let boundary = |k: usize| -> Dense {
        let mut m = vec![vec![0u8; size(k)]; size(k - 1)];
        for col in 0..size(k) {
            let a = digits(col, k);
            for i in 0..k {
                for (z, &c) in mult[a[i]][a[i + 1]].iter().enumerate() {
                    if c == 1 {
                        let mut t = a[..i].to_vec();
                        t.push(z);
                        t.extend(&a[i + 2..]);
                        m[encode(&t)][col] ^= 1;
                    }
                }
            }
            for (z, &c) in mult[a[k]][a[0]].iter().enumerate() {
                if c == 1 {
                    let mut t = vec![z];
                    t.extend(&a[1..k]);
                    m[encode(&t)][col] ^= 1;
                }
            }
        }
        m
    };
    let ranks: Vec<usize> = (0..=top + 1).map(|k| if k == 0 { 0 } else { rank(&boundary(k)) }).collect();
    (0..=top).map(|k| size(k) - ranks[k] - ranks[k + 1]).collect()
}
