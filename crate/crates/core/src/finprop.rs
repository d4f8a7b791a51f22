//! Group rings of finitely generated abelian groups and finite-propagation
//! matrices over them.
//!
//! A finite-propagation matrix over the deck group `G` of a cover is an
//! equivariant `G`-indexed block matrix; it is determined by its bands
//! `g -> block`, of which only finitely many are nonzero. Equivariance makes
//! translation trivial, so products are band convolutions.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;

/// `Z^free_rank × Z/n_1 × ... × Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

/// Group elements as coordinate vectors; torsion coordinates are reduced.
pub type GroupElement = Vec<i64>;

impl AbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if torsion.iter().any(|&n| n < 1) {
            return Err(Error::Input("torsion orders must be positive".into()));
        }
        Ok(Self { free_rank, torsion })
    }

    /// The integers.
    pub fn integers() -> Self {
        Self { free_rank: 1, torsion: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> GroupElement {
        vec![0; self.rank()]
    }

    pub fn normalize(&self, mut g: GroupElement) -> Result<GroupElement> {
        if g.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element with {} coordinates in a group of rank {}",
                g.len(),
                self.rank()
            )));
        }
        for (i, &n) in self.torsion.iter().enumerate() {
            let c = &mut g[self.free_rank + i];
            *c = c.rem_euclid(n);
        }
        Ok(g)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let sum = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(sum).expect("same rank")
    }

    /// Largest absolute value of a free coordinate; the propagation of a band.
    pub fn propagation(&self, g: &GroupElement) -> i64 {
        g[..self.free_rank].iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// An element of the group ring `F2[G]` with finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    group: AbelianGroup,
    support: BTreeSet<GroupElement>,
}

impl GroupAlgebraElement {
    pub fn new(group: AbelianGroup, terms: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut support = BTreeSet::new();
        for g in terms {
            let g = group.normalize(g)?;
            if !support.remove(&g) {
                support.insert(g);
            }
        }
        Ok(Self { group, support })
    }

    pub fn one(group: AbelianGroup) -> Self {
        let zero = group.zero();
        Self { group, support: BTreeSet::from([zero]) }
    }

    pub fn support(&self) -> &BTreeSet<GroupElement> {
        &self.support
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch("elements of different group rings".into()));
        }
        let mut support = BTreeSet::new();
        for a in &self.support {
            for b in &other.support {
                let g = self.group.add(a, b);
                if !support.remove(&g) {
                    support.insert(g);
                }
            }
        }
        Ok(Self { group: self.group.clone(), support })
    }
}

/// An equivariant `G`-indexed block matrix with finitely many nonzero bands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPropMatrix {
    group: AbelianGroup,
    rows: usize,
    cols: usize,
    bands: BTreeMap<GroupElement, F2Matrix>,
}

impl FinPropMatrix {
    /// Builds from bands; repeated offsets are added and zero bands dropped.
    pub fn new(
        group: AbelianGroup,
        rows: usize,
        cols: usize,
        bands: impl IntoIterator<Item = (GroupElement, F2Matrix)>,
    ) -> Result<Self> {
        let mut out = Self { group, rows, cols, bands: BTreeMap::new() };
        for (g, m) in bands {
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "band of shape {}x{} in a {rows}x{cols} matrix",
                    m.rows(),
                    m.cols()
                )));
            }
            let g = out.group.normalize(g)?;
            out.add_band(g, &m);
        }
        Ok(out)
    }

    pub fn identity(group: AbelianGroup, n: usize) -> Self {
        let zero = group.zero();
        Self::new(group, n, n, [(zero, F2Matrix::identity(n))]).expect("well formed")
    }

    /// `1 x 1` bands from a group ring element.
    pub fn from_group_element(x: &GroupAlgebraElement) -> Self {
        let bands = x.support.iter().map(|g| (g.clone(), F2Matrix::identity(1)));
        Self::new(x.group.clone(), 1, 1, bands).expect("well formed")
    }

    fn add_band(&mut self, g: GroupElement, m: &F2Matrix) {
        let sum = match self.bands.remove(&g) {
            Some(b) => b.add(m).expect("same shape"),
            None => m.clone(),
        };
        if !sum.is_zero() {
            self.bands.insert(g, sum);
        }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn bands(&self) -> &BTreeMap<GroupElement, F2Matrix> {
        &self.bands
    }

    pub fn support(&self) -> BTreeSet<GroupElement> {
        self.bands.keys().cloned().collect()
    }

    /// Largest propagation over the support.
    pub fn propagation(&self) -> i64 {
        self.bands.keys().map(|g| self.group.propagation(g)).max().unwrap_or(0)
    }

    /// Band convolution `(ab)_g = Σ_{g1 + g2 = g} a_{g1} b_{g2}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch("matrices over different groups".into()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{} blocks",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self { group: self.group.clone(), rows: self.rows, cols: other.cols, bands: BTreeMap::new() };
        for (g1, a) in &self.bands {
            for (g2, b) in &other.bands {
                out.add_band(self.group.add(g1, g2), &a.mul(b)?);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group || self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("adding matrices of different shapes".into()));
        }
        let mut out = self.clone();
        for (g, m) in &other.bands {
            out.add_band(g.clone(), m);
        }
        Ok(out)
    }
}
