//! Bit-packed linear algebra over the two-element field.
//!
//! Vectors are packed 64 coefficients to a word, little-endian within the
//! word. Matrices are stored as a list of packed rows and act on column
//! vectors, so `m.mul_vec(&v)` has length `m.rows()`.
//!
//! Every question the rest of the crate asks (cohomology, solving for
//! homotopies, checking that two cochains are cohomologous) bottoms out in
//! [`F2Matrix::rref`] or one of the helpers built on it.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Largest supported dimension.
pub const MAX_DIM: usize = (1 << 31) - 1;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

fn check_dim(n: usize) {
    assert!(n <= MAX_DIM, "dimension {n} exceeds the supported bound {MAX_DIM}");
}

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        check_dim(len);
        Self { len, words: vec![0; words_for(len)] }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 entries; any nonzero byte counts as 1.
    pub fn from_u8(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector with ones exactly at `indices` (repeated indices cancel).
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Adds `other` into `self`.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn add_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn add(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Standard bilinear pairing, i.e. the parity of the common support.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "vector length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD + w.trailing_zeros() as usize)
    }

    pub fn to_u8(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Coordinates `start..start+len`.
    pub fn slice(&self, start: usize, len: usize) -> F2Vector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = F2Vector::zeros(len);
        for i in self.ones() {
            if i >= start && i < start + len {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Pads or embeds `self` at offset `start` in a zero vector of length `len`.
    pub fn embed(&self, len: usize, start: usize) -> F2Vector {
        assert!(start + self.len <= len, "embedding out of range");
        let mut out = F2Vector::zeros(len);
        for i in self.ones() {
            out.set(start + i, true);
        }
        out
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

/// A dense matrix over F2, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

/// Output of [`F2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: F2Matrix,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        check_dim(rows);
        check_dim(cols);
        Self { rows, cols, data: vec![F2Vector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from packed rows, all of which must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        check_dim(rows.len());
        Self { rows: rows.len(), cols, data: rows }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Builds a matrix from nested 0/1 rows. Fails on ragged input.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {} but row 0 has length {cols}",
                    r.len()
                )));
            }
            data.push(F2Vector::from_u8(r));
        }
        Ok(Self::from_rows(cols, data))
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(F2Vector::to_u8).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value)
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i].flip(j)
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[F2Vector] {
        &self.data
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut c = F2Vector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == F2Matrix::identity(self.rows)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = F2Vector::zeros(other.cols);
                for j in r.ones() {
                    acc.add_assign(&other.data[j]);
                }
                acc
            })
            .collect();
        Ok(F2Matrix { rows: self.rows, cols: other.cols, data })
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = F2Vector::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Ok(F2Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of matrices with {} and {} rows",
                self.rows, other.rows
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.concat(b)).collect();
        Ok(F2Matrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// `self` stacked on top of `other`.
    pub fn vstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(F2Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Block diagonal matrix with the given blocks.
    pub fn block_diagonal(blocks: &[F2Matrix]) -> F2Matrix {
        let rows = blocks.iter().map(F2Matrix::rows).sum();
        let cols = blocks.iter().map(F2Matrix::cols).sum();
        let mut m = F2Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &F2Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Submatrix of the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> F2Matrix {
        let mut m = F2Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    m.set(a, b, true);
                }
            }
        }
        m
    }

    /// Reduced row-echelon form by bit-parallel Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let pivots = reduced.rref_in_place(None);
        Rref { rank: pivots.len(), pivots, reduced }
    }

    /// Row-reduces `self` in place, replaying every row operation on
    /// `companion` (which must have the same number of rows). Returns the
    /// pivot columns; after the call the pivot rows are the first rows.
    fn rref_in_place(&mut self, mut companion: Option<&mut F2Matrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&i| self.data[i].get(col)) else {
                continue;
            };
            self.data.swap(next, p);
            if let Some(c) = companion.as_deref_mut() {
                c.data.swap(next, p);
            }
            let pivot_row = self.data[next].clone();
            let companion_row = companion.as_deref().map(|c| c.data[next].clone());
            for i in 0..self.rows {
                if i != next && self.data[i].get(col) {
                    self.data[i].add_assign(&pivot_row);
                    if let (Some(c), Some(cr)) = (companion.as_deref_mut(), companion_row.as_ref()) {
                        c.data[i].add_assign(cr);
                    }
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Eliminating along the shorter side is cheaper.
        if self.cols > self.rows * 2 {
            self.transpose().rref().rank
        } else {
            self.rref().rank
        }
    }

    /// A basis of `{v : self * v = 0}` with `cols - rank` elements.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let Rref { pivots, reduced, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = F2Vector::unit(self.cols, free);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.get(r, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but the matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        Ok(LinearSolver::new(self).solve(b))
    }

    pub fn inverse(&self) -> Result<F2Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut work = self.clone();
        let mut inv = F2Matrix::identity(self.rows);
        let pivots = work.rref_in_place(Some(&mut inv));
        if pivots.len() != self.rows {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Factorization for repeated solves against one matrix.
///
/// Stores an invertible `transform` with `transform * m = reduced` in RREF,
/// so each solve is one matrix-vector product plus back substitution.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    rows: usize,
    cols: usize,
    transform: F2Matrix,
    reduced: F2Matrix,
    pivots: Vec<usize>,
}

impl LinearSolver {
    pub fn new(m: &F2Matrix) -> Self {
        let mut reduced = m.clone();
        let mut transform = F2Matrix::identity(m.rows);
        let pivots = reduced.rref_in_place(Some(&mut transform));
        Self { rows: m.rows, cols: m.cols, transform, reduced, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn in_column_space(&self, b: &F2Vector) -> bool {
        let eb = self.transform.mul_vec(b).expect("length checked by caller");
        (self.pivots.len()..self.rows).all(|i| !eb.get(i))
    }

    /// Solves `m x = b`. Free variables are set to zero.
    ///
    /// # Panics
    /// Panics if `b` has the wrong length.
    pub fn solve(&self, b: &F2Vector) -> Option<F2Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let eb = self.transform.mul_vec(b).expect("length checked above");
        if (self.pivots.len()..self.rows).any(|i| eb.get(i)) {
            return None;
        }
        let mut x = F2Vector::zeros(self.cols);
        for (r, &p) in self.pivots.iter().enumerate() {
            if eb.get(r) {
                x.set(p, true);
            }
        }
        debug_assert!(self.reduced.rows() == self.rows);
        Some(x)
    }
}

/// An incrementally built echelon basis, used to test membership in a span
/// and to extend partial bases.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    /// Reduced rows, each with a distinct leading index.
    rows: Vec<F2Vector>,
    leads: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), leads: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis and returns the remainder.
    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut r = v.clone();
        for (row, &lead) in self.rows.iter().zip(&self.leads) {
            if r.get(lead) {
                r.add_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns `false` if it was already there.
    pub fn insert(&mut self, v: &F2Vector) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(lead) => {
                // Keep earlier rows reduced at the new lead so `reduce` stays a single pass.
                for row in &mut self.rows {
                    if row.get(lead) {
                        row.add_assign(&r);
                    }
                }
                self.rows.push(r);
                self.leads.push(lead);
                true
            }
        }
    }
}

/// Projection onto a complement of `span(subspace)` together with a section.
///
/// `projection` is `q x n` and `section` is `n x q` where `q` is the
/// codimension; `projection * section` is the identity and the kernel of
/// `projection` is exactly the span of `subspace`.
pub fn quotient_basis(subspace: &[F2Vector], ambient_dim: usize) -> Result<(F2Matrix, F2Matrix)> {
    for v in subspace {
        if v.len() != ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspace vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
    }
    let m = F2Matrix::from_rows(ambient_dim, subspace.to_vec());
    let Rref { pivots, reduced, .. } = m.rref();
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&j| !is_pivot[j]).collect();
    let mut free_pos = vec![usize::MAX; ambient_dim];
    for (k, &j) in free.iter().enumerate() {
        free_pos[j] = k;
    }
    let q = free.len();
    let mut projection = F2Matrix::zeros(q, ambient_dim);
    for (k, &j) in free.iter().enumerate() {
        projection.set(k, j, true);
    }
    // A pivot coordinate e_p is congruent to e_p + (its rref row), which is
    // supported on free coordinates only.
    for (r, &p) in pivots.iter().enumerate() {
        for j in reduced.row(r).ones() {
            if j != p {
                projection.flip(free_pos[j], p);
            }
        }
    }
    let mut section = F2Matrix::zeros(ambient_dim, q);
    for (k, &j) in free.iter().enumerate() {
        section.set(j, k, true);
    }
    Ok((projection, section))
}
