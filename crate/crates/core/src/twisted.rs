//! Twisted complexes of free modules over a minimal A∞ algebra `S`.
//!
//! The summands are `V_i ⊗ S` shifted by `i`, for `i = 0..=D`. A morphism
//! component `V_i → V_j ⊗ S^m` has degree `m + i - j`, so
//! `Hom^k = ⊕_{i,j} Hom(V_i, V_j ⊗ S^{k+j-i})` and each `δ_{i,j}` takes
//! values in `S^{1+j-i}`. Compositions follow the written-order convention
//! of [`crate::ainfty`]: `μ^d(φ_d ⊗ s_d, ..., φ_1 ⊗ s_1) = (φ_d ∘ ... ∘ φ_1) ⊗ μ^d(s_d, ..., s_1)`.

use std::collections::BTreeMap;

use crate::ainfty::{AInfAlgebra, Tuple};
use crate::chain::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// A basis morphism `e_col ∈ V_from ↦ e_row ∈ V_to` tensored with the basis
/// element `s` of `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elementary {
    pub from: usize,
    pub col: usize,
    pub to: usize,
    pub row: usize,
    pub s: usize,
}

/// Matrix entries of a morphism block: `(row, col) ↦ value in S`.
pub type Block = BTreeMap<(usize, usize), F2Vector>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedComplex {
    algebra: AInfAlgebra,
    dims: Vec<usize>,
    deltas: BTreeMap<(usize, usize), Block>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    /// Nonzero entries of `Σ_d μ^d(δ, ..., δ)`, keyed by `(i, j)` and
    /// `(row, col)`.
    pub violations: BTreeMap<(usize, usize), Block>,
}

impl McReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A nonzero cohomology class of the endomorphism complex in degree `-D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub degree: i64,
    pub cocycle: F2Vector,
    pub label: String,
}

impl TwistedComplex {
    /// Checks block shapes, strict upper triangularity and degrees; the
    /// Maurer-Cartan equation is checked separately by [`Self::mc_check`].
    pub fn new(algebra: AInfAlgebra, dims: Vec<usize>, deltas: BTreeMap<(usize, usize), Block>) -> Result<TwistedComplex> {
        for (&(i, j), block) in &deltas {
            if i >= j || j >= dims.len() {
                return Err(Error::Input(format!("δ_{{{i},{j}}} is not strictly upper triangular")));
            }
            for (&(r, c), v) in block {
                if r >= dims[j] || c >= dims[i] || v.len() != algebra.dim() {
                    return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) of δ_{{{i},{j}}} out of range")));
                }
                let want = 1 + j as i64 - i as i64;
                if v.ones().any(|o| algebra.basis().degree(o) != want) {
                    return Err(Error::Degree(format!("δ_{{{i},{j}}} must take values in S^{want}")));
                }
            }
        }
        let deltas = deltas
            .into_iter()
            .map(|(k, b)| (k, b.into_iter().filter(|(_, v)| !v.is_zero()).collect::<Block>()))
            .filter(|(_, b)| !b.is_empty())
            .collect();
        Ok(TwistedComplex { algebra, dims, deltas })
    }

    pub fn algebra(&self) -> &AInfAlgebra {
        &self.algebra
    }

    /// `dim V_i` for `i = 0..=D`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `D`, the largest shift.
    pub fn length(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn deltas(&self) -> &BTreeMap<(usize, usize), Block> {
        &self.deltas
    }

    fn delta_terms(&self) -> Vec<Elementary> {
        let mut out = Vec::new();
        for (&(i, j), block) in &self.deltas {
            for (&(row, col), v) in block {
                out.extend(v.ones().map(|s| Elementary { from: i, col, to: j, row, s }));
            }
        }
        out
    }

    /// All chains of `δ` terms in application order, grouped by where they
    /// start and where they end.
    fn delta_chains(&self) -> Vec<Vec<Elementary>> {
        let terms = self.delta_terms();
        let mut chains: Vec<Vec<Elementary>> = terms.iter().map(|&t| vec![t]).collect();
        let mut frontier = chains.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let last = c.last().unwrap();
                for t in &terms {
                    if t.from == last.to && t.col == last.row {
                        let mut c2 = c.clone();
                        c2.push(*t);
                        next.push(c2);
                    }
                }
            }
            chains.extend(next.iter().cloned());
            frontier = next;
        }
        chains
    }

    /// Adds `μ^d` of a chain (in application order) into `out`.
    fn evaluate(&self, chain: &[&Elementary], out: &mut BTreeMap<(usize, usize, usize, usize), F2Vector>) {
        let key: Tuple = chain.iter().rev().map(|t| t.s).collect();
        if let Some(v) = self.algebra.ops().get(&key) {
            let (first, last) = (chain[0], chain[chain.len() - 1]);
            out.entry((first.from, first.col, last.to, last.row))
                .or_insert_with(|| F2Vector::zeros(self.algebra.dim()))
                .add_assign(v);
        }
    }

    /// The Maurer-Cartan sum `Σ_d μ^d(δ, ..., δ)`, entrywise.
    pub fn mc_check(&self) -> McReport {
        let mut sums = BTreeMap::new();
        for chain in self.delta_chains() {
            let refs: Vec<&Elementary> = chain.iter().collect();
            self.evaluate(&refs, &mut sums);
        }
        let mut violations: BTreeMap<(usize, usize), Block> = BTreeMap::new();
        for ((i, c, j, r), v) in sums {
            if !v.is_zero() {
                violations.entry((i, j)).or_default().insert((r, c), v);
            }
        }
        McReport { violations }
    }

    /// The endomorphism complex with differential
    /// `x ↦ Σ_d Σ μ^d(δ, ..., δ, x, δ, ..., δ)`.
    pub fn end_complex(&self) -> Result<EndComplex> {
        if !self.mc_check().holds() {
            return Err(Error::Precondition("δ does not satisfy the Maurer-Cartan equation".into()));
        }
        let s = self.algebra.basis();
        let mut elements: BTreeMap<i64, Vec<Elementary>> = BTreeMap::new();
        for from in 0..self.dims.len() {
            for to in 0..self.dims.len() {
                for col in 0..self.dims[from] {
                    for row in 0..self.dims[to] {
                        for si in 0..s.len() {
                            let k = s.degree(si) + from as i64 - to as i64;
                            elements.entry(k).or_default().push(Elementary { from, col, to, row, s: si });
                        }
                    }
                }
            }
        }
        let mut space = GradedSpace::new();
        let mut index = BTreeMap::new();
        for (&k, es) in &elements {
            for (i, e) in es.iter().enumerate() {
                index.insert(*e, (k, i));
                space.push(k, format!("{}.{}>{}.{}⊗{}", e.from, e.col, e.to, e.row, s.label(e.s)));
            }
        }
        let chains = self.delta_chains();
        let mut ending: BTreeMap<(usize, usize), Vec<&Vec<Elementary>>> = BTreeMap::new();
        let mut starting: BTreeMap<(usize, usize), Vec<&Vec<Elementary>>> = BTreeMap::new();
        for c in &chains {
            let (f, l) = (c[0], c[c.len() - 1]);
            ending.entry((l.to, l.row)).or_default().push(c);
            starting.entry((f.from, f.col)).or_default().push(c);
        }
        let empty: Vec<&Vec<Elementary>> = Vec::new();
        let mut diff = BTreeMap::new();
        for (&k, es) in &elements {
            if space.dim(k + 1) == 0 {
                continue;
            }
            let mut m = F2Matrix::zeros(space.dim(k + 1), es.len());
            for (jx, x) in es.iter().enumerate() {
                let mut out = BTreeMap::new();
                let before = ending.get(&(x.from, x.col)).unwrap_or(&empty);
                let after = starting.get(&(x.to, x.row)).unwrap_or(&empty);
                let nothing: Vec<Elementary> = Vec::new();
                for b in before.iter().copied().chain(std::iter::once(&nothing)) {
                    for a in after.iter().copied().chain(std::iter::once(&nothing)) {
                        let chain: Vec<&Elementary> = b.iter().chain(std::iter::once(x)).chain(a.iter()).collect();
                        self.evaluate(&chain, &mut out);
                    }
                }
                for ((from, col, to, row), v) in out {
                    for si in v.ones() {
                        let (kt, i) = index[&Elementary { from, col, to, row, s: si }];
                        debug_assert_eq!(kt, k + 1);
                        m.flip(i, jx);
                    }
                }
            }
            diff.insert(k, m);
        }
        let complex = Complex::new(space, diff)?;
        Ok(EndComplex { complex, elements, index })
    }

    /// The class of `x ∈ Hom(V_0, V_D ⊗ S^0)` in degree `-D`, for `x` the
    /// matrix unit `e_0 ↦ e_0` tensored with the unit of `S` (or the first
    /// degree-zero basis element). Absent when `D = 0`.
    ///
    /// Requires `S` minimal and supported in non-negative degrees with
    /// `S^0 ≠ 0`, `δ` valued in `S^{≥2}`, and `V_0, V_D ≠ 0`.
    pub fn coconnective_witness(&self) -> Result<Option<Witness>> {
        let s = &self.algebra;
        if !s.basis().is_coconnective() {
            return Err(Error::Precondition("S must be supported in non-negative degrees".into()));
        }
        if !s.is_minimal() {
            return Err(Error::Precondition("S must be minimal".into()));
        }
        if !self.mc_check().holds() {
            return Err(Error::Precondition("δ does not satisfy the Maurer-Cartan equation".into()));
        }
        let d = self.length();
        if self.dims.first().copied().unwrap_or(0) == 0 || self.dims.last().copied().unwrap_or(0) == 0 {
            return Err(Error::Precondition("V_0 and V_D must be nonzero".into()));
        }
        for block in self.deltas.values() {
            if block.values().any(|v| v.ones().any(|o| s.basis().degree(o) < 2)) {
                return Err(Error::Precondition("δ must take values in S^{≥2}".into()));
            }
        }
        if d == 0 {
            return Ok(None);
        }
        let Some(u) = s.unit().or_else(|| s.basis().in_degree(0).next()) else {
            return Err(Error::Precondition("S^0 = 0 leaves no room for the witness".into()));
        };
        let end = self.end_complex()?;
        let x = Elementary { from: 0, col: 0, to: d, row: 0, s: u };
        let (k, i) = end.index[&x];
        let mut cocycle = F2Vector::zeros(end.complex.dim(k));
        cocycle.set(i, true);
        if !end.complex.apply(k, &cocycle).is_zero() {
            return Err(Error::NotACocycle("witness is not closed".into()));
        }
        let label = end.complex.space().labels(k)[i].clone();
        Ok(Some(Witness { degree: k, cocycle, label }))
    }

    /// `Σ_i id_{V_i} ⊗ 1` in degree 0, when `S` has a strict unit.
    pub fn identity(&self, end: &EndComplex) -> Option<F2Vector> {
        let u = self.algebra.unit()?;
        let mut v = F2Vector::zeros(end.complex.dim(0));
        for (i, &n) in self.dims.iter().enumerate() {
            for r in 0..n {
                v.set(end.index[&Elementary { from: i, col: r, to: i, row: r, s: u }].1, true);
            }
        }
        Some(v)
    }
}

/// The complex `Hom^*(P, P)` of a twisted complex.
#[derive(Clone, Debug)]
pub struct EndComplex {
    complex: Complex,
    elements: BTreeMap<i64, Vec<Elementary>>,
    index: BTreeMap<Elementary, (i64, usize)>,
}

impl EndComplex {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn elements(&self, k: i64) -> &[Elementary] {
        self.elements.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn position(&self, e: &Elementary) -> Option<(i64, usize)> {
        self.index.get(e).copied()
    }
}
