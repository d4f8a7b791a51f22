//! Minimal A∞ algebras and modules over F2.
//!
//! Operations are written in input order: `μ^d(x_d, ..., x_1)` is stored
//! under the key `[x_d, ..., x_1]`, so `μ^2(x, y)` is the product `x · y`
//! with `x` acting last when the algebra is a composition algebra.
//! Basis elements are addressed by their position in a [`Basis`], which is
//! kept sorted by degree so positions agree with the flat layout of the
//! corresponding [`GradedSpace`].

mod algebra;
mod dga;
mod module;
mod perturbation;
mod table;

use std::collections::BTreeMap;

use crate::chain::GradedSpace;
use crate::error::{Error, Result};

pub use algebra::{AInfAlgebra, RelationReport};
pub use dga::{DGAlgebra, DGModule};
pub use module::{
    AInfModule, Elementary, FiltrationReport, FiltrationViolation, ModuleHomComplex, Subquotient,
};
pub use perturbation::{minimal_model, module_minimal_model, MinimalModel, Retraction};
pub use table::{OpTable, Tuple};

/// Labelled basis with degrees, sorted by degree (stable within a degree).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: BTreeMap<String, usize>,
}

impl Basis {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, i64)>) -> Result<Basis> {
        let mut entries: Vec<(String, i64)> = entries.into_iter().map(|(l, d)| (l.into(), d)).collect();
        entries.sort_by_key(|e| e.1);
        let mut index = BTreeMap::new();
        for (i, (l, _)) in entries.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate basis label {l:?}")));
            }
        }
        let (labels, degrees) = entries.into_iter().unzip();
        Ok(Basis { labels, degrees, index })
    }

    pub fn from_space(space: &GradedSpace) -> Basis {
        let entries = space.degrees().flat_map(|k| space.labels(k).iter().map(move |l| (format!("{l}@{k}"), k)));
        Basis::new(entries.collect::<Vec<_>>()).expect("labels unique per degree")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Indices of the basis elements of degree `k`.
    pub fn in_degree(&self, k: i64) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.degrees[i] == k)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_default() += 1;
        }
        out
    }

    pub fn space(&self) -> GradedSpace {
        let mut s = GradedSpace::new();
        for (l, &d) in self.labels.iter().zip(&self.degrees) {
            s.push(d, l.clone());
        }
        s
    }

    /// Whether every basis element has degree `<= 0`.
    pub fn is_connective(&self) -> bool {
        self.degrees.iter().all(|&d| d <= 0)
    }

    /// Whether every basis element has degree `>= 0`.
    pub fn is_coconnective(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 0)
    }
}
