//! JSON descriptions of complexes, local systems, algebras, twisted
//! complexes and matchings.
//!
//! Every file carries `"v": 1` at the top level. Algebra elements are written
//! as basis labels; an output is either one label or a list of labels whose
//! sum it is.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ainfty::{AInfAlgebra, Basis, DGAlgebra};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::hochschild::AInfBimodule;
use crate::morse::MorseMatching;
use crate::simplicial::{LocalSystem, SimplicialComplex};
use crate::twisted::{Block, TwistedComplex};

pub const SCHEMA_VERSION: u32 = 1;

/// Parses `text`; errors name the line and column.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Input(format!("unsupported schema version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub v: u32,
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<SimplicialComplex> {
        check_version(self.v)?;
        SimplicialComplex::new(self.vertices, &self.simplices)
    }

    /// Lists the maximal simplices only.
    pub fn from_complex(k: &SimplicialComplex) -> ComplexFile {
        let top = k.dimension().max(0) as usize;
        let mut simplices = Vec::new();
        for d in 1..=top {
            for s in k.simplices(d) {
                if k.cofaces(s).is_empty() {
                    simplices.push(s.clone());
                }
            }
        }
        ComplexFile { v: SCHEMA_VERSION, vertices: k.vertex_count(), simplices }
    }
}

/// Fibre dimensions, either per vertex in order or keyed by vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FibreDims {
    List(Vec<usize>),
    Map(BTreeMap<String, usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<u8>>,
}

/// A local system of vector spaces in degree 0; edges left out carry the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub v: u32,
    pub fibre_dims: FibreDims,
    #[serde(default)]
    pub edges: Vec<EdgeFile>,
}

impl SystemFile {
    pub fn build(&self, base: &SimplicialComplex) -> Result<LocalSystem> {
        check_version(self.v)?;
        let n = base.vertex_count();
        let dims = match &self.fibre_dims {
            FibreDims::List(d) => d.clone(),
            FibreDims::Map(m) => {
                let mut d = vec![None; n];
                for (k, &r) in m {
                    let v: usize = k.parse().map_err(|_| Error::Input(format!("fibre_dims key {k:?} is not a vertex")))?;
                    if v >= n {
                        return Err(Error::Input(format!("fibre_dims names vertex {v} of {n}")));
                    }
                    d[v] = Some(r);
                }
                d.into_iter()
                    .enumerate()
                    .map(|(v, r)| r.ok_or_else(|| Error::Input(format!("no fibre dimension for vertex {v}"))))
                    .collect::<Result<_>>()?
            }
        };
        if dims.len() != n {
            return Err(Error::Input(format!("{} fibre dimensions for {n} vertices", dims.len())));
        }
        let mut transports = BTreeMap::new();
        for e in &self.edges {
            let m = F2Matrix::from_dense(&e.matrix)?;
            if transports.insert((e.from, e.to), m).is_some() {
                return Err(Error::Input(format!("edge ({}, {}) listed twice", e.from, e.to)));
            }
        }
        LocalSystem::from_degree_zero(base.clone(), &dims, transports)
    }

    /// Writes every edge transport; the system must be concentrated in
    /// degree 0.
    pub fn from_system(e: &LocalSystem) -> Result<SystemFile> {
        if !e.is_degree_zero() {
            return Err(Error::Input("only degree-0 systems have a file form".into()));
        }
        let k = e.base();
        let dims = (0..k.vertex_count()).map(|v| e.fibre_dim(v)).collect();
        let edges = e
            .transports()
            .iter()
            .map(|(&(from, to), m)| EdgeFile { from, to, matrix: m.to_dense() })
            .collect();
        Ok(SystemFile { v: SCHEMA_VERSION, fibre_dims: FibreDims::List(dims), edges })
    }
}

/// A sum of basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    One(String),
    Sum(Vec<String>),
}

impl Element {
    fn labels(&self) -> Vec<&str> {
        match self {
            Element::One(l) => vec![l.as_str()],
            Element::Sum(v) => v.iter().map(String::as_str).collect(),
        }
    }

    fn vector(&self, basis: &Basis) -> Result<F2Vector> {
        let mut v = F2Vector::zeros(basis.len());
        for l in self.labels() {
            v.flip(lookup(basis, l)?);
        }
        Ok(v)
    }

    fn from_vector(basis: &Basis, v: &F2Vector) -> Element {
        let labels: Vec<String> = v.ones().map(|i| basis.label(i).to_string()).collect();
        if labels.len() == 1 {
            Element::One(labels.into_iter().next().unwrap())
        } else {
            Element::Sum(labels)
        }
    }
}

fn lookup(basis: &Basis, label: &str) -> Result<usize> {
    basis.index_of(label).ok_or_else(|| Error::Input(format!("unknown basis label {label:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryFile {
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
    pub out: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpFile {
    pub arity: usize,
    pub entries: Vec<EntryFile>,
}

/// Bimodule operations `μ^{r|1|s}`: `position` is `r`, the slot of the
/// bimodule label inside `in`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleOpFile {
    pub position: usize,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
    pub out: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    pub degrees: BTreeMap<String, i64>,
    pub ops: Vec<BimoduleOpFile>,
}

/// An A∞ algebra, or a DG algebra when only arities 1 and 2 occur.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub v: u32,
    pub degrees: BTreeMap<String, i64>,
    pub ops: Vec<OpFile>,
    /// A single label for A∞ algebras; DG algebras may give a sum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Element>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule_ops: Option<BimoduleFile>,
}

impl AlgebraFile {
    fn basis(&self) -> Result<Basis> {
        Basis::new(self.degrees.iter().map(|(l, &d)| (l.clone(), d)))
    }

    fn tuple(basis: &Basis, labels: &[String]) -> Result<Vec<usize>> {
        labels.iter().map(|l| lookup(basis, l)).collect()
    }

    /// Reads the operations as an A∞ algebra, checking degrees but not the
    /// relations.
    pub fn build(&self, arity_cap: usize) -> Result<AInfAlgebra> {
        check_version(self.v)?;
        let basis = self.basis()?;
        let mut a = AInfAlgebra::new(basis.clone(), arity_cap);
        for op in &self.ops {
            for e in &op.entries {
                if e.inputs.len() != op.arity {
                    return Err(Error::Input(format!("entry {:?} has the wrong arity for {}", e.inputs, op.arity)));
                }
                let t = Self::tuple(&basis, &e.inputs)?;
                let v = a.ops().value(&t).add(&e.out.vector(&basis)?);
                a.set(t, v)?;
            }
        }
        match &self.unit {
            Some(Element::One(u)) => a.set_unit(lookup(&basis, u)?)?,
            Some(Element::Sum(_)) => return Err(Error::Input("an A∞ unit must be a single basis element".into())),
            None => {}
        }
        Ok(a)
    }

    /// Reads arity 1 as the differential and arity 2 as the product.
    pub fn build_dga(&self) -> Result<DGAlgebra> {
        check_version(self.v)?;
        if self.bimodule_ops.is_some() {
            return Err(Error::Input("a DG algebra takes no bimodule_ops".into()));
        }
        let basis = self.basis()?;
        let n = basis.len();
        let mut d = F2Matrix::zeros(n, n);
        let mut products = vec![F2Vector::zeros(n); n * n];
        for op in &self.ops {
            if op.arity != 1 && op.arity != 2 {
                return Err(Error::Input(format!("a DG algebra has no arity-{} operation", op.arity)));
            }
            for e in &op.entries {
                if e.inputs.len() != op.arity {
                    return Err(Error::Input(format!("entry {:?} has the wrong arity for {}", e.inputs, op.arity)));
                }
                let t = Self::tuple(&basis, &e.inputs)?;
                let out = e.out.vector(&basis)?;
                if op.arity == 1 {
                    for o in out.ones() {
                        d.flip(o, t[0]);
                    }
                } else {
                    products[t[0] * n + t[1]].add_assign(&out);
                }
            }
        }
        let unit = self.unit.as_ref().map(|u| u.vector(&basis)).transpose()?;
        DGAlgebra::new(basis, d, |i, j| products[i * n + j].clone(), unit)
    }

    pub fn build_bimodule(&self, arity_cap: usize) -> Result<AInfBimodule> {
        let a = self.build(arity_cap)?;
        let Some(bf) = &self.bimodule_ops else {
            return Ok(AInfBimodule::diagonal(&a));
        };
        let basis = Basis::new(bf.degrees.iter().map(|(l, &d)| (l.clone(), d)))?;
        let mut b = AInfBimodule::new(a.clone(), basis.clone());
        for op in &bf.ops {
            if op.position >= op.inputs.len() {
                return Err(Error::Input(format!("position {} outside {:?}", op.position, op.inputs)));
            }
            let t = op
                .inputs
                .iter()
                .enumerate()
                .map(|(i, l)| if i == op.position { lookup(&basis, l) } else { lookup(a.basis(), l) })
                .collect::<Result<Vec<_>>>()?;
            let cur = b.value(op.position, &t).cloned().unwrap_or_else(|| F2Vector::zeros(basis.len()));
            let v = cur.add(&op.out.vector(&basis)?);
            b.set(op.position, t, v)?;
        }
        Ok(b)
    }

    pub fn from_algebra(a: &AInfAlgebra) -> AlgebraFile {
        let basis = a.basis();
        let degrees = (0..basis.len()).map(|i| (basis.label(i).to_string(), basis.degree(i))).collect();
        let ops = a
            .ops()
            .arities()
            .map(|arity| OpFile {
                arity,
                entries: a
                    .ops()
                    .entries(arity)
                    .map(|(t, v)| EntryFile {
                        inputs: t.iter().map(|&i| basis.label(i).to_string()).collect(),
                        out: Element::from_vector(basis, v),
                    })
                    .collect(),
            })
            .collect();
        AlgebraFile {
            v: SCHEMA_VERSION,
            degrees,
            ops,
            unit: a.unit().map(|u| Element::One(basis.label(u).to_string())),
            bimodule_ops: None,
        }
    }

    pub fn from_dga(a: &DGAlgebra) -> AlgebraFile {
        let mut f = AlgebraFile::from_algebra(&a.as_ainf(2));
        f.unit = a.unit().map(|u| Element::from_vector(a.basis(), u));
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandFile {
    pub dim: usize,
    pub shift: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaEntryFile {
    pub row: usize,
    pub col: usize,
    pub value: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaFile {
    pub from: usize,
    pub to: usize,
    pub entries: Vec<DeltaEntryFile>,
}

/// A twisted complex over the algebra in `algebra`. Summand `i` must have
/// shift `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedFile {
    pub v: u32,
    pub algebra: AlgebraFile,
    pub summands: Vec<SummandFile>,
    pub deltas: Vec<DeltaFile>,
}

impl TwistedFile {
    pub fn build(&self, arity_cap: usize) -> Result<TwistedComplex> {
        check_version(self.v)?;
        let s = self.algebra.build(arity_cap)?;
        for (i, sm) in self.summands.iter().enumerate() {
            if sm.shift != i {
                return Err(Error::Input(format!("summand {i} has shift {}, expected {i}", sm.shift)));
            }
        }
        let mut deltas: BTreeMap<(usize, usize), Block> = BTreeMap::new();
        for d in &self.deltas {
            let block = deltas.entry((d.from, d.to)).or_default();
            for e in &d.entries {
                let v = e.value.vector(s.basis())?;
                let cur = block.entry((e.row, e.col)).or_insert_with(|| F2Vector::zeros(s.dim()));
                cur.add_assign(&v);
            }
        }
        TwistedComplex::new(s, self.summands.iter().map(|sm| sm.dim).collect(), deltas)
    }

    pub fn from_twisted(t: &TwistedComplex) -> TwistedFile {
        let basis = t.algebra().basis();
        TwistedFile {
            v: SCHEMA_VERSION,
            algebra: AlgebraFile::from_algebra(t.algebra()),
            summands: t.dims().iter().enumerate().map(|(shift, &dim)| SummandFile { dim, shift }).collect(),
            deltas: t
                .deltas()
                .iter()
                .map(|(&(from, to), block)| DeltaFile {
                    from,
                    to,
                    entries: block
                        .iter()
                        .map(|(&(row, col), v)| DeltaEntryFile { row, col, value: Element::from_vector(basis, v) })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Matched `[cell, face]` pairs by global simplex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingFile {
    pub v: u32,
    pub pairs: Vec<[usize; 2]>,
}

impl MatchingFile {
    pub fn build(&self, base: &SimplicialComplex) -> Result<MorseMatching> {
        check_version(self.v)?;
        MorseMatching::new(base, self.pairs.iter().map(|p| (p[0], p[1])).collect())
    }

    pub fn from_matching(m: &MorseMatching) -> MatchingFile {
        MatchingFile { v: SCHEMA_VERSION, pairs: m.pairs().iter().map(|&(a, b)| [a, b]).collect() }
    }
}
