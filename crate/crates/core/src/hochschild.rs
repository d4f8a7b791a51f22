//! A∞ bimodules and truncated cyclic bar complexes.
//!
//! A bimodule operation `μ^{r|1|s}(x_r, ..., x_1, b, y_1, ..., y_s)` is
//! stored under `(r, [x_r, ..., x_1, b, y_1, ..., y_s])`: the bimodule index
//! sits at position `r` of the tuple and all other entries are algebra
//! indices. A generator `ψ ⊗ x^d ⊗ ... ⊗ x^1` of the cyclic bar complex is
//! stored as `(ψ, [x^d, ..., x^1])` and has total degree
//! `deg ψ + Σ (deg x^i - 1)`; Hochschild homology `HH_n` is the cohomology
//! in degree `-n`.

use std::collections::{BTreeMap, HashMap};

use crate::ainfty::{AInfAlgebra, Basis, OpTable, RelationReport, Tuple};
use crate::chain::{ChainMap, Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// Key of a bimodule operation or morphism component: `(r, tuple)`.
pub type BimoduleKey = (usize, Tuple);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfBimodule {
    algebra: AInfAlgebra,
    basis: Basis,
    ops: BTreeMap<BimoduleKey, F2Vector>,
}

impl AInfBimodule {
    pub fn new(algebra: AInfAlgebra, basis: Basis) -> AInfBimodule {
        AInfBimodule { algebra, basis, ops: BTreeMap::new() }
    }

    /// `A` over itself with `μ^{r|1|s} = μ^{r+1+s}`.
    pub fn diagonal(a: &AInfAlgebra) -> AInfBimodule {
        let mut b = AInfBimodule::new(a.clone(), a.basis().clone());
        for (t, v) in a.ops().all_entries() {
            for r in 0..t.len() {
                b.ops.insert((r, t.clone()), v.clone());
            }
        }
        b
    }

    /// The sub-bimodule of the diagonal bimodule spanned by `span`, which
    /// must be closed under every operation with an input from it.
    pub fn diagonal_sub(a: &AInfAlgebra, span: &[usize]) -> Result<(AInfBimodule, F2Matrix)> {
        let basis = Basis::new(span.iter().map(|&i| (a.basis().label(i).to_string(), a.basis().degree(i))).collect::<Vec<_>>())?;
        let pos: HashMap<usize, usize> = span.iter().map(|&i| (i, basis.index_of(a.basis().label(i)).unwrap())).collect();
        let mut b = AInfBimodule::new(a.clone(), basis);
        for (t, v) in a.ops().all_entries() {
            for r in 0..t.len() {
                let Some(&p) = pos.get(&t[r]) else { continue };
                if v.ones().any(|o| !pos.contains_key(&o)) {
                    return Err(Error::InvalidAlgebra("span is not closed under the operations".into()));
                }
                let mut key = t.clone();
                key[r] = p;
                b.ops.insert((r, key), F2Vector::from_indices(b.dim(), v.ones().map(|o| pos[&o])));
            }
        }
        let mut inclusion = F2Matrix::zeros(a.dim(), b.dim());
        for (&i, &p) in &pos {
            inclusion.set(i, p, true);
        }
        Ok((b, inclusion))
    }

    pub fn algebra(&self) -> &AInfAlgebra {
        &self.algebra
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ops(&self) -> &BTreeMap<BimoduleKey, F2Vector> {
        &self.ops
    }

    pub fn value(&self, r: usize, t: &[usize]) -> Option<&F2Vector> {
        self.ops.get(&(r, t.to_vec()))
    }

    fn input_degree(&self, r: usize, t: &[usize]) -> i64 {
        t.iter()
            .enumerate()
            .map(|(i, &x)| if i == r { self.basis.degree(x) } else { self.algebra.basis().degree(x) })
            .sum()
    }

    /// Sets `μ^{r|1|s}` on a tuple, checking the degree `Σ deg + 1 - r - s`.
    pub fn set(&mut self, r: usize, t: Tuple, value: F2Vector) -> Result<()> {
        if r >= t.len()
            || t[r] >= self.dim()
            || t.iter().enumerate().any(|(i, &x)| i != r && x >= self.algebra.dim())
            || value.len() != self.dim()
        {
            return Err(Error::DimensionMismatch("bimodule operation input out of range".into()));
        }
        let want = self.input_degree(r, &t) + 2 - t.len() as i64;
        if value.ones().any(|o| self.basis.degree(o) != want) {
            return Err(Error::Degree(format!("μ^{{{}|1|{}}} value must have degree {want}", r, t.len() - 1 - r)));
        }
        self.set_unchecked(r, t, value);
        Ok(())
    }

    pub fn set_unchecked(&mut self, r: usize, t: Tuple, value: F2Vector) {
        if value.is_zero() {
            self.ops.remove(&(r, t));
        } else {
            self.ops.insert((r, t), value);
        }
    }

    /// Adds the bimodule operations to `table` with bimodule indices
    /// shifted by `offset`.
    fn embed_ops(&self, table: &mut OpTable, offset: usize) {
        let n = table.dim();
        for ((r, t), v) in &self.ops {
            let mut key = t.clone();
            key[*r] += offset;
            table.set(key, F2Vector::from_indices(n, v.ones().map(|o| o + offset)));
        }
    }

    fn algebra_table(&self, n: usize) -> OpTable {
        let mut table = OpTable::new(n);
        for (t, v) in self.algebra.ops().all_entries() {
            table.set(t.clone(), v.embed(n, 0));
        }
        table
    }

    /// The bimodule A∞ relations up to the algebra's arity cap. Violations
    /// are keyed by input tuple with the bimodule index in place.
    pub fn check_relations(&self) -> RelationReport {
        let (na, nb) = (self.algebra.dim(), self.dim());
        let mut table = self.algebra_table(na + nb);
        self.embed_ops(&mut table, na);
        let cap = self.algebra.arity_cap();
        let violations = table
            .relation_sums(cap)
            .into_iter()
            .filter(|(k, _)| k.iter().any(|&x| x >= na))
            .map(|(k, v)| (k.iter().map(|&x| if x >= na { x - na } else { x }).collect(), v.slice(na, nb)))
            .filter(|(_, v): &(Tuple, F2Vector)| !v.is_zero())
            .collect();
        RelationReport { arity_cap: cap, violations }
    }
}

/// An A∞ bimodule morphism with components `f^{r|1|s}` of degree `-r-s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMorphism {
    source: AInfBimodule,
    target: AInfBimodule,
    components: BTreeMap<BimoduleKey, F2Vector>,
}

impl BimoduleMorphism {
    pub fn new(source: &AInfBimodule, target: &AInfBimodule, components: BTreeMap<BimoduleKey, F2Vector>) -> Result<BimoduleMorphism> {
        if source.algebra != target.algebra {
            return Err(Error::Precondition("bimodules over different algebras".into()));
        }
        for ((r, t), v) in &components {
            if v.len() != target.dim() || *r >= t.len() || t[*r] >= source.dim() {
                return Err(Error::DimensionMismatch("morphism component out of range".into()));
            }
            let want = source.input_degree(*r, t) + 1 - t.len() as i64;
            if v.ones().any(|o| target.basis.degree(o) != want) {
                return Err(Error::Degree(format!("component on {t:?} must have degree {want}")));
            }
        }
        let components = components.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let f = BimoduleMorphism { source: source.clone(), target: target.clone(), components };
        let report = f.check_relations();
        if !report.holds() {
            return Err(Error::InvalidAlgebra(format!(
                "not a bimodule morphism: equation fails on {} tuples",
                report.violations.len()
            )));
        }
        Ok(f)
    }

    /// A morphism with only `f^{0|1|0}`, given as a matrix.
    pub fn strict(source: &AInfBimodule, target: &AInfBimodule, matrix: &F2Matrix) -> Result<BimoduleMorphism> {
        let components = (0..source.dim()).map(|j| ((0, vec![j]), matrix.column(j))).collect();
        BimoduleMorphism::new(source, target, components)
    }

    pub fn identity(b: &AInfBimodule) -> BimoduleMorphism {
        BimoduleMorphism::strict(b, b, &F2Matrix::identity(b.dim())).expect("identity")
    }

    pub fn zero(source: &AInfBimodule, target: &AInfBimodule) -> BimoduleMorphism {
        BimoduleMorphism { source: source.clone(), target: target.clone(), components: BTreeMap::new() }
    }

    pub fn source(&self) -> &AInfBimodule {
        &self.source
    }

    pub fn target(&self) -> &AInfBimodule {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<BimoduleKey, F2Vector> {
        &self.components
    }

    /// Table of the components on `A ⊕ B ⊕ B'`.
    fn table(&self, n: usize, source_offset: usize, target_offset: usize) -> OpTable {
        let mut table = OpTable::new(n);
        for ((r, t), v) in &self.components {
            let mut key = t.clone();
            key[*r] += source_offset;
            table.set(key, F2Vector::from_indices(n, v.ones().map(|o| o + target_offset)));
        }
        table
    }

    /// `Σ f(.., μ(..), ..) = Σ μ(.., f(..), ..)` up to the arity cap.
    pub fn check_relations(&self) -> RelationReport {
        let (na, nb, nc) = (self.source.algebra.dim(), self.source.dim(), self.target.dim());
        let n = na + nb + nc;
        let mut ops = self.source.algebra_table(n);
        self.source.embed_ops(&mut ops, na);
        self.target.embed_ops(&mut ops, na + nb);
        let f = self.table(n, na, na + nb);
        let cap = self.source.algebra.arity_cap();
        let mut sums: BTreeMap<Tuple, F2Vector> = f.composition_sums(&ops, cap);
        for (k, v) in ops.composition_sums(&f, cap) {
            let e = sums.entry(k).or_insert_with(|| F2Vector::zeros(n));
            e.add_assign(&v);
        }
        let violations = sums
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k.iter().map(|&x| if x >= na { x - na } else { x }).collect(), v.slice(na + nb, nc)))
            .collect();
        RelationReport { arity_cap: cap, violations }
    }

    /// `g ∘ f` with `(g∘f)^{r|1|s} = Σ g(.., f(..), ..)`.
    pub fn then(&self, g: &BimoduleMorphism) -> Result<BimoduleMorphism> {
        if self.target != g.source {
            return Err(Error::DimensionMismatch("morphisms are not composable".into()));
        }
        let (na, nb, nc, nd) = (self.source.algebra.dim(), self.source.dim(), self.target.dim(), g.target.dim());
        let n = na + nb + nc + nd;
        let f = self.table(n, na, na + nb);
        let gt = g.table(n, na + nb, na + nb + nc);
        let cap = self.source.algebra.arity_cap();
        let mut components = BTreeMap::new();
        for (k, v) in gt.composition_sums(&f, cap) {
            let r = k.iter().position(|&x| x >= na).expect("one bimodule input");
            let t = k.iter().map(|&x| if x >= na { x - na } else { x }).collect();
            components.insert((r, t), v.slice(na + nb + nc, nd));
        }
        BimoduleMorphism::new(&self.source, &g.target, components)
    }
}

/// Generator `ψ ⊗ x^d ⊗ ... ⊗ x^1` as `(ψ, [x^d, ..., x^1])`.
pub type BarWord = (usize, Tuple);

/// The cyclic bar complex `⊕_{d ≤ cap} B ⊗ A^{⊗d}`, truncated by length.
///
/// Every term of the differential has length at most that of its input, so
/// the truncation is a subcomplex and `d² = 0` holds exactly. With
/// `normalized`, tensors with the strict unit in an algebra slot are
/// divided out.
#[derive(Clone, Debug)]
pub struct CyclicBarComplex {
    bimodule: AInfBimodule,
    cap: usize,
    normalized: bool,
    complex: Complex,
    elements: BTreeMap<i64, Vec<BarWord>>,
    index: HashMap<BarWord, (i64, usize)>,
}

impl CyclicBarComplex {
    pub fn new(b: &AInfBimodule, cap: usize, normalized: bool) -> Result<CyclicBarComplex> {
        let a = &b.algebra;
        let unit = a.unit();
        if normalized && unit.is_none() {
            return Err(Error::Precondition("normalization needs a strict unit".into()));
        }
        let letters: Vec<usize> = (0..a.dim()).filter(|&x| !normalized || Some(x) != unit).collect();
        let mut words: Vec<Tuple> = vec![vec![]];
        let mut frontier: Vec<Tuple> = vec![vec![]];
        for _ in 0..cap {
            let mut next = Vec::new();
            for w in &frontier {
                for &x in &letters {
                    let mut w2 = w.clone();
                    w2.push(x);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let mut elements: BTreeMap<i64, Vec<BarWord>> = BTreeMap::new();
        for w in &words {
            let shifted: i64 = w.iter().map(|&x| a.basis().degree(x) - 1).sum();
            for psi in 0..b.dim() {
                elements.entry(b.basis.degree(psi) + shifted).or_default().push((psi, w.clone()));
            }
        }
        let mut index = HashMap::new();
        let mut space = GradedSpace::new();
        for (&k, es) in &elements {
            for (i, e) in es.iter().enumerate() {
                index.insert(e.clone(), (k, i));
                space.push(k, bar_label(b, e));
            }
        }
        let mut cc = CyclicBarComplex {
            bimodule: b.clone(),
            cap,
            normalized,
            complex: Complex::zero_differential(GradedSpace::new()),
            elements,
            index,
        };
        let mut diff = BTreeMap::new();
        for (&k, es) in &cc.elements {
            let rows = space.dim(k + 1);
            if rows == 0 {
                continue;
            }
            let mut m = F2Matrix::zeros(rows, es.len());
            for (j, e) in es.iter().enumerate() {
                for t in cc.differential_terms(e) {
                    if let Some(&(kt, i)) = cc.index.get(&t) {
                        debug_assert_eq!(kt, k + 1);
                        m.flip(i, j);
                    }
                }
            }
            diff.insert(k, m);
        }
        cc.complex = Complex::new(space, diff)?;
        Ok(cc)
    }

    /// Terms of `d(ψ ⊗ w)` with multiplicity. Terms with the unit in an
    /// algebra slot are returned and dropped by the caller when normalized.
    fn differential_terms(&self, e: &BarWord) -> Vec<BarWord> {
        let (psi, w) = e;
        let b = &self.bimodule;
        let d = w.len();
        let mut out = Vec::new();
        // μ^{r|1|s}(x^r, ..., x^1, ψ, x^d, ..., x^{d-s+1}) ⊗ x^{d-s} ⊗ ... ⊗ x^{r+1}
        for r in 0..=d {
            for s in 0..=d - r {
                let key: Tuple = w[d - r..].iter().chain(std::iter::once(psi)).chain(&w[..s]).copied().collect();
                if let Some(v) = b.value(r, &key) {
                    let rest: Tuple = w[s..d - r].to_vec();
                    out.extend(v.ones().map(|o| (o, rest.clone())));
                }
            }
        }
        // ψ ⊗ ... ⊗ μ^k(x^{i+k}, ..., x^{i+1}) ⊗ ...
        for k in b.algebra.ops().arities() {
            for i in 0..d.saturating_sub(k - 1) {
                if let Some(v) = b.algebra.ops().get(&w[i..i + k]) {
                    for o in v.ones() {
                        let word: Tuple = w[..i].iter().chain(std::iter::once(&o)).chain(&w[i + k..]).copied().collect();
                        out.push((*psi, word));
                    }
                }
            }
        }
        out
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn bimodule(&self) -> &AInfBimodule {
        &self.bimodule
    }

    pub fn length_cap(&self) -> usize {
        self.cap
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn elements(&self, k: i64) -> &[BarWord] {
        self.elements.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn position(&self, e: &BarWord) -> Option<(i64, usize)> {
        self.index.get(e).copied()
    }

    /// Smallest total degree from which cohomology is unaffected by the
    /// truncation, when every algebra slot lowers the degree by at least
    /// one; `None` if some slot has positive degree, in which case words of
    /// unbounded length share a degree.
    pub fn horizon(&self) -> Option<i64> {
        let a = self.bimodule.algebra.basis();
        let unit = self.bimodule.algebra.unit();
        let slots_negative =
            (0..a.len()).filter(|&x| !self.normalized || Some(x) != unit).all(|x| a.degree(x) <= 0);
        let top = self.bimodule.basis.degrees().iter().copied().max()?;
        slots_negative.then(|| top - self.cap as i64 + 1)
    }
}

fn bar_label(b: &AInfBimodule, e: &BarWord) -> String {
    std::iter::once(b.basis.label(e.0).to_string())
        .chain(e.1.iter().map(|&x| b.algebra.basis().label(x).to_string()))
        .collect::<Vec<_>>()
        .join("⊗")
}

/// Hochschild homology at two consecutive caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildReport {
    pub cap: usize,
    /// `HH_n` at `cap`, for every `n` where either cap has a nonzero group.
    pub dims: BTreeMap<i64, usize>,
    /// `HH_n` at `cap - 1`.
    pub previous: BTreeMap<i64, usize>,
    /// Whether the two caps agree in degree `n`.
    pub stabilized: BTreeMap<i64, bool>,
    /// Largest `n` for which `HH_n` at `cap` is exact, if known.
    pub exact_up_to: Option<i64>,
}

pub fn hh_homology(b: &AInfBimodule, cap: usize, normalized: bool) -> Result<HochschildReport> {
    if cap == 0 {
        return Err(Error::Input("cap must be positive".into()));
    }
    let cc = CyclicBarComplex::new(b, cap, normalized)?;
    let prev = CyclicBarComplex::new(b, cap - 1, normalized)?;
    let hom = |c: &CyclicBarComplex| -> BTreeMap<i64, usize> {
        c.complex.cohomology_dims().into_iter().filter(|&(_, d)| d > 0).map(|(k, d)| (-k, d)).collect()
    };
    let dims = hom(&cc);
    let previous = hom(&prev);
    let stabilized = dims
        .keys()
        .chain(previous.keys())
        .map(|&n| (n, dims.get(&n).copied().unwrap_or(0) == previous.get(&n).copied().unwrap_or(0)))
        .collect();
    Ok(HochschildReport { cap, dims, previous, stabilized, exact_up_to: cc.horizon().map(|t| -t) })
}

/// The chain map induced by a bimodule morphism:
/// `ψ ⊗ x^d ⊗ ... ⊗ x^1 ↦ Σ f^{r|1|s}(x^r, ..., x^1, ψ, x^d, ..., x^{d-s+1}) ⊗ x^{d-s} ⊗ ... ⊗ x^{r+1}`.
pub fn cc_map(f: &BimoduleMorphism, source: &CyclicBarComplex, target: &CyclicBarComplex) -> Result<ChainMap> {
    if source.bimodule != f.source || target.bimodule != f.target || source.cap != target.cap || source.normalized != target.normalized {
        return Err(Error::Precondition("complexes do not match the morphism".into()));
    }
    let mut maps = BTreeMap::new();
    for (&k, es) in &source.elements {
        let mut m = F2Matrix::zeros(target.complex.dim(k), es.len());
        for (j, (psi, w)) in es.iter().enumerate() {
            let d = w.len();
            for r in 0..=d {
                for s in 0..=d - r {
                    let key: Tuple = w[d - r..].iter().chain(std::iter::once(psi)).chain(&w[..s]).copied().collect();
                    if let Some(v) = f.components.get(&(r, key)) {
                        for o in v.ones() {
                            let (kt, i) = target.index[&(o, w[s..d - r].to_vec())];
                            debug_assert_eq!(kt, k);
                            m.flip(i, j);
                        }
                    }
                }
            }
        }
        maps.insert(k, m);
    }
    ChainMap::new(source.complex.clone(), target.complex.clone(), 0, maps)
}
