use std::collections::{BTreeMap, HashMap};

use super::table::{OpTable, Tuple};
use super::{AInfAlgebra, Basis, RelationReport};
use crate::chain::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// A right A∞ module: `μ^{1|d}(p, a_1, ..., a_d)` of degree `1 - d`, stored
/// under the key `[p, a_1, ..., a_d]` with `p` a module index and the rest
/// algebra indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfModule {
    algebra: AInfAlgebra,
    basis: Basis,
    ops: OpTable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationViolation {
    pub inputs: Tuple,
    pub input_degree: i64,
    pub output_degree: i64,
}

/// The module `P^i = P^{≤i} / P^{≤i-1}` with the action of `A^0` by
/// `μ^{1|1}`; `action[a]` is the matrix of `- · e_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub degree: i64,
    pub labels: Vec<String>,
    pub degree_zero_labels: Vec<String>,
    pub action: Vec<F2Matrix>,
    /// Whether the induced action is associative (and unital when `A` has a
    /// unit).
    pub is_module: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    /// Entries whose output degree differs from `deg p + Σ deg a_i + 1 - d`.
    pub grading_violations: Vec<FiltrationViolation>,
    /// Entries sending `P^{≤i}` outside `P^{≤i}`.
    pub filtration_violations: Vec<FiltrationViolation>,
    pub subquotients: Vec<Subquotient>,
}

impl FiltrationReport {
    pub fn holds(&self) -> bool {
        self.grading_violations.is_empty() && self.filtration_violations.is_empty()
    }
}

impl AInfModule {
    pub fn new(algebra: AInfAlgebra, basis: Basis) -> AInfModule {
        let n = basis.len();
        AInfModule { algebra, basis, ops: OpTable::new(n) }
    }

    /// A strict module given by `μ^{1|1}(p, a) = action(p, a)`.
    pub fn from_action(algebra: AInfAlgebra, basis: Basis, action: impl Fn(usize, usize) -> F2Vector) -> Result<AInfModule> {
        let mut m = AInfModule::new(algebra, basis);
        for p in 0..m.dim() {
            for a in 0..m.algebra.dim() {
                m.set(vec![p, a], action(p, a))?;
            }
        }
        Ok(m)
    }

    /// `A` as a right module over itself: `μ^{1|d} = μ^{d+1}`.
    pub fn regular(algebra: &AInfAlgebra) -> AInfModule {
        let mut m = AInfModule::new(algebra.clone(), algebra.basis().clone());
        for (t, v) in algebra.ops().all_entries() {
            if t.len() >= 2 {
                m.ops.set(t.clone(), v.clone());
            }
        }
        m
    }

    /// Module concentrated in one degree, with `μ^{1|1}(p, a) = p` for the
    /// unit and zero for all other `a` (the augmentation module when `A^0`
    /// is spanned by the unit).
    pub fn augmentation(algebra: &AInfAlgebra, degree: i64, dim: usize, action: impl Fn(usize) -> bool) -> Result<AInfModule> {
        let basis = Basis::new((0..dim).map(|i| (format!("p{i}"), degree)).collect::<Vec<_>>())?;
        AInfModule::from_action(algebra.clone(), basis, |p, a| {
            if action(a) {
                F2Vector::unit(dim, p)
            } else {
                F2Vector::zeros(dim)
            }
        })
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

    pub fn ops(&self) -> &OpTable {
        &self.ops
    }

    pub fn arity_cap(&self) -> usize {
        self.algebra.arity_cap()
    }

    pub fn is_minimal(&self) -> bool {
        self.ops.entries(1).next().is_none()
    }

    pub fn degree_of(&self, inputs: &[usize]) -> i64 {
        self.basis.degree(inputs[0]) + inputs[1..].iter().map(|&a| self.algebra.basis().degree(a)).sum::<i64>() + 2
            - inputs.len() as i64
    }

    fn check_inputs(&self, inputs: &[usize], value: &F2Vector) -> Result<()> {
        if inputs.is_empty()
            || inputs[0] >= self.dim()
            || inputs[1..].iter().any(|&a| a >= self.algebra.dim())
            || value.len() != self.dim()
        {
            return Err(Error::DimensionMismatch("module operation input out of range".into()));
        }
        Ok(())
    }

    pub fn set(&mut self, inputs: Tuple, value: F2Vector) -> Result<()> {
        self.check_inputs(&inputs, &value)?;
        let want = self.degree_of(&inputs);
        if let Some(bad) = value.ones().find(|&o| self.basis.degree(o) != want) {
            return Err(Error::Degree(format!(
                "μ^{{1|{}}} on {} has a term {} of degree {}, expected {want}",
                inputs.len() - 1,
                self.basis.label(inputs[0]),
                self.basis.label(bad),
                self.basis.degree(bad)
            )));
        }
        self.ops.set(inputs, value);
        Ok(())
    }

    /// Sets an operation value without the degree check.
    pub fn set_unchecked(&mut self, inputs: Tuple, value: F2Vector) {
        self.ops.set(inputs, value);
    }

    pub fn grading_violations(&self) -> Vec<Tuple> {
        self.ops
            .all_entries()
            .filter(|(t, v)| v.ones().any(|o| self.basis.degree(o) != self.degree_of(t)))
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// Module and algebra operations as one table on `A ⊕ P`, algebra
    /// indices first.
    fn extension_table(&self) -> OpTable {
        let (na, np) = (self.algebra.dim(), self.dim());
        let mut t = OpTable::new(na + np);
        for (k, v) in self.algebra.ops().all_entries() {
            t.set(k.clone(), v.embed(na + np, 0));
        }
        for (k, v) in self.ops.all_entries() {
            let key = std::iter::once(k[0] + na).chain(k[1..].iter().copied()).collect();
            t.set(key, v.embed(na + np, na));
        }
        t
    }

    /// The module A∞ relations for total arity (module input plus algebra
    /// inputs) up to the algebra's arity cap. Violations are keyed
    /// `[p, a_1, ..., a_d]`.
    pub fn check_relations(&self) -> RelationReport {
        let cap = self.arity_cap();
        let na = self.algebra.dim();
        let sums = self.extension_table().relation_sums(cap);
        let violations = sums
            .into_iter()
            .filter(|(k, _)| k[0] >= na)
            .map(|(k, v)| {
                let key = std::iter::once(k[0] - na).chain(k[1..].iter().copied()).collect();
                (key, v.slice(na, self.dim()))
            })
            .filter(|(_, v): &(Tuple, F2Vector)| !v.is_zero())
            .collect();
        RelationReport { arity_cap: cap, violations }
    }

    /// Checks that the ascending degree filtration `P^{≤i}` is preserved by
    /// every stored operation and returns the subquotients with their
    /// `A^0`-action. Requires a minimal algebra supported in non-positive
    /// degrees.
    pub fn filtration_check(&self) -> Result<FiltrationReport> {
        if !self.algebra.basis().is_connective() || !self.algebra.is_minimal() {
            return Err(Error::Precondition("the algebra must be minimal and connective".into()));
        }
        let mut grading_violations = Vec::new();
        let mut filtration_violations = Vec::new();
        for (t, v) in self.ops.all_entries() {
            let input_degree = self.basis.degree(t[0]);
            let want = self.degree_of(t);
            for o in v.ones() {
                let output_degree = self.basis.degree(o);
                let w = FiltrationViolation { inputs: t.clone(), input_degree, output_degree };
                if output_degree > input_degree {
                    filtration_violations.push(w.clone());
                }
                if output_degree != want {
                    grading_violations.push(w);
                }
            }
        }
        let a = &self.algebra;
        let zero: Vec<usize> = a.basis().in_degree(0).collect();
        let mut subquotients = Vec::new();
        for (k, _) in self.basis.dims() {
            let idx: Vec<usize> = self.basis.in_degree(k).collect();
            let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let action: Vec<F2Matrix> = zero
                .iter()
                .map(|&e| {
                    let mut m = F2Matrix::zeros(idx.len(), idx.len());
                    for (j, &p) in idx.iter().enumerate() {
                        for o in self.ops.value(&[p, e]).ones() {
                            if let Some(&i) = pos.get(&o) {
                                m.set(i, j, true);
                            }
                        }
                    }
                    m
                })
                .collect();
            let mut is_module = true;
            for (x, &ex) in zero.iter().enumerate() {
                for (y, &ey) in zero.iter().enumerate() {
                    let prod = a.ops().value(&[ex, ey]);
                    let mut rhs = F2Matrix::zeros(idx.len(), idx.len());
                    for z in prod.ones() {
                        let zi = zero.iter().position(|&q| q == z).expect("A^0 is closed");
                        rhs = rhs.add(&action[zi]).unwrap();
                    }
                    // p · (x · y) = (p · x) · y
                    if action[y].mul(&action[x]).unwrap() != rhs {
                        is_module = false;
                    }
                }
            }
            if let Some(u) = a.unit() {
                let ui = zero.iter().position(|&q| q == u).expect("unit has degree 0");
                is_module &= action[ui].is_identity();
            }
            subquotients.push(Subquotient {
                degree: k,
                labels: idx.iter().map(|&p| self.basis.label(p).to_string()).collect(),
                degree_zero_labels: zero.iter().map(|&e| a.basis().label(e).to_string()).collect(),
                action,
                is_module,
            });
        }
        Ok(FiltrationReport { grading_violations, filtration_violations, subquotients })
    }
}

/// An elementary map `(m, a_1, ..., a_s) ↦ n`.
pub type Elementary = (usize, Tuple, usize);

/// The bar-type complex of module morphisms
/// `⊕_{s ≤ cap} Hom(M ⊗ A^{⊗s}, N)`, truncated by length.
///
/// The elementary map `(m, a_1, ..., a_s) ↦ n` sits in degree
/// `deg n - deg m - Σ deg a_i + s`, i.e. each algebra input counts with its
/// shifted degree `deg a - 1`. The differential never decreases length, so
/// maps of length `> cap` span a subcomplex and the truncation is the
/// quotient by it; in particular `d² = 0` holds exactly.
#[derive(Clone, Debug)]
pub struct ModuleHomComplex {
    source: AInfModule,
    target: AInfModule,
    cap: usize,
    complex: Complex,
    elements: BTreeMap<i64, Vec<Elementary>>,
    index: HashMap<Elementary, (i64, usize)>,
}

impl ModuleHomComplex {
    pub fn new(source: &AInfModule, target: &AInfModule, cap: usize) -> Result<ModuleHomComplex> {
        if source.algebra() != target.algebra() {
            return Err(Error::Precondition("modules over different algebras".into()));
        }
        let a = source.algebra();
        let mut elements: BTreeMap<i64, Vec<Elementary>> = BTreeMap::new();
        let mut tuples: Vec<Tuple> = vec![vec![]];
        let mut frontier: Vec<Tuple> = vec![vec![]];
        for _ in 0..cap {
            let mut next = Vec::new();
            for t in &frontier {
                for x in 0..a.dim() {
                    let mut t2 = t.clone();
                    t2.push(x);
                    next.push(t2);
                }
            }
            tuples.extend(next.iter().cloned());
            frontier = next;
        }
        for t in &tuples {
            let shifted: i64 = t.iter().map(|&x| a.basis().degree(x) - 1).sum();
            for m in 0..source.dim() {
                for n in 0..target.dim() {
                    let k = target.basis.degree(n) - source.basis.degree(m) - shifted;
                    elements.entry(k).or_default().push((m, t.clone(), n));
                }
            }
        }
        let mut index = HashMap::new();
        let mut space = GradedSpace::new();
        for (&k, es) in &elements {
            for (i, e) in es.iter().enumerate() {
                index.insert(e.clone(), (k, i));
                space.push(k, Self::label_of(source, target, e));
            }
        }
        let mut h = ModuleHomComplex { source: source.clone(), target: target.clone(), cap, complex: Complex::zero_differential(GradedSpace::new()), elements, index };
        let mut diff = BTreeMap::new();
        for (&k, es) in &h.elements {
            let rows = space.dim(k + 1);
            if rows == 0 {
                continue;
            }
            let mut m = F2Matrix::zeros(rows, es.len());
            for (j, e) in es.iter().enumerate() {
                for t in h.differential_terms(e) {
                    let (kt, i) = h.index[&t];
                    debug_assert_eq!(kt, k + 1);
                    m.flip(i, j);
                }
            }
            diff.insert(k, m);
        }
        h.complex = Complex::new(space, diff)?;
        Ok(h)
    }

    fn label_of(source: &AInfModule, target: &AInfModule, e: &Elementary) -> String {
        let a = source.algebra();
        let mut inputs = vec![source.basis.label(e.0).to_string()];
        inputs.extend(e.1.iter().map(|&x| a.basis().label(x).to_string()));
        format!("({})↦{}", inputs.join(","), target.basis.label(e.2))
    }

    /// Terms of `d(e)` with length at most the cap, with multiplicity.
    fn differential_terms(&self, e: &Elementary) -> Vec<Elementary> {
        let (m, a_in, n) = e;
        let mut out = Vec::new();
        let cap = self.cap;
        // Precompose with the source module structure.
        for (t, v) in self.source.ops.all_entries() {
            if v.get(*m) && t.len() - 1 + a_in.len() <= cap {
                let tuple: Tuple = t[1..].iter().chain(a_in).copied().collect();
                out.push((t[0], tuple, *n));
            }
        }
        // Postcompose with the target module structure.
        for (t, v) in self.target.ops.all_entries() {
            if t[0] == *n && a_in.len() + t.len() - 1 <= cap {
                let tuple: Tuple = a_in.iter().chain(&t[1..]).copied().collect();
                for w in v.ones() {
                    out.push((*m, tuple.clone(), w));
                }
            }
        }
        // Algebra operations on consecutive inputs.
        for (pos, &slot) in a_in.iter().enumerate() {
            for (t, v) in self.source.algebra.ops().all_entries() {
                if v.get(slot) && a_in.len() + t.len() - 1 <= cap {
                    let tuple: Tuple = a_in[..pos].iter().chain(t).chain(&a_in[pos + 1..]).copied().collect();
                    out.push((*m, tuple, *n));
                }
            }
        }
        out
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn length_cap(&self) -> usize {
        self.cap
    }

    pub fn elements(&self, k: i64) -> &[Elementary] {
        self.elements.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn position(&self, e: &Elementary) -> Option<(i64, usize)> {
        self.index.get(e).copied()
    }

    pub fn encode(&self, k: i64, es: &[Elementary]) -> Result<F2Vector> {
        let mut v = F2Vector::zeros(self.complex.dim(k));
        for e in es {
            match self.index.get(e) {
                Some(&(ke, i)) if ke == k => v.flip(i),
                _ => return Err(Error::Input(format!("elementary map not in degree {k}"))),
            }
        }
        Ok(v)
    }

    pub fn decode(&self, k: i64, v: &F2Vector) -> Vec<Elementary> {
        v.ones().map(|i| self.elements[&k][i].clone()).collect()
    }

    pub fn d(&self, k: i64, v: &F2Vector) -> F2Vector {
        self.complex.apply(k, v)
    }

    /// `Σ_m (m) ↦ m` in degree 0, for endomorphism complexes.
    pub fn identity(&self) -> Result<F2Vector> {
        if self.source != self.target {
            return Err(Error::Precondition("identity needs equal source and target".into()));
        }
        let es: Vec<Elementary> = (0..self.source.dim()).map(|m| (m, vec![], m)).collect();
        self.encode(0, &es)
    }

    /// `outer ∘ inner` for `inner ∈ Hom(M, N)` of degree `k_inner` and
    /// `outer ∈ Hom(N, O)` of degree `k_outer`, in `result = Hom(M, O)`:
    /// `(n, b..) ↦ o` after `(m, a..) ↦ n` is `(m, a.., b..) ↦ o`.
    pub fn compose(
        outer: (&ModuleHomComplex, i64, &F2Vector),
        inner: (&ModuleHomComplex, i64, &F2Vector),
        result: &ModuleHomComplex,
    ) -> Result<F2Vector> {
        let (ho, ko, x) = outer;
        let (hi, ki, y) = inner;
        if hi.target != ho.source || result.source != hi.source || result.target != ho.target {
            return Err(Error::DimensionMismatch("composable hom complexes expected".into()));
        }
        let k = ko + ki;
        let mut v = F2Vector::zeros(result.complex.dim(k));
        let xs = ho.decode(ko, x);
        for (m, a, n) in hi.decode(ki, y) {
            for (n2, b, o) in &xs {
                if *n2 == n && a.len() + b.len() <= result.cap {
                    let e = (m, a.iter().chain(b).copied().collect::<Tuple>(), *o);
                    let (_, i) = result.index[&e];
                    v.flip(i);
                }
            }
        }
        Ok(v)
    }
}
