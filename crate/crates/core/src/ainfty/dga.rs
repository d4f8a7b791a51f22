use std::collections::BTreeMap;

use super::table::OpTable;
use super::{AInfAlgebra, Basis};
use crate::chain::Complex;
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::simplicial::SimplicialComplex;

/// A differential graded algebra: differential of degree `+1`, strictly
/// associative product, Leibniz rule. The unit is optional so that square
/// zero extensions by modules are still DG algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    basis: Basis,
    /// Column `j` is `d(e_j)`.
    differential: F2Matrix,
    /// `products[i * n + j] = e_i · e_j`.
    products: Vec<F2Vector>,
    unit: Option<F2Vector>,
}

impl DGAlgebra {
    pub fn new(
        basis: Basis,
        differential: F2Matrix,
        product: impl Fn(usize, usize) -> F2Vector,
        unit: Option<F2Vector>,
    ) -> Result<DGAlgebra> {
        let n = basis.len();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::DimensionMismatch(format!("differential must be {n}x{n}")));
        }
        let mut products = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j);
                if v.len() != n {
                    return Err(Error::DimensionMismatch("product value has the wrong length".into()));
                }
                products.push(v);
            }
        }
        let a = DGAlgebra { basis, differential, products, unit };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let b = &self.basis;
        for j in 0..n {
            if let Some(o) = self.differential.column(j).ones().find(|&o| b.degree(o) != b.degree(j) + 1) {
                return Err(Error::Degree(format!("d({}) has a term {} of the wrong degree", b.label(j), b.label(o))));
            }
        }
        if !self.differential.mul(&self.differential)?.is_zero() {
            return Err(Error::NotAComplex("d∘d ≠ 0".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = &self.products[i * n + j];
                if v.ones().any(|o| b.degree(o) != b.degree(i) + b.degree(j)) {
                    return Err(Error::Degree(format!("{}·{} is not of degree {}", b.label(i), b.label(j), b.degree(i) + b.degree(j))));
                }
            }
        }
        for i in 0..n {
            let ei = F2Vector::unit(n, i);
            for j in 0..n {
                let ej = F2Vector::unit(n, j);
                let lhs = self.d(&self.products[i * n + j]);
                let rhs = self.multiply(&self.d(&ei), &ej).add(&self.multiply(&ei, &self.d(&ej)));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!("Leibniz rule fails on ({}, {})", b.label(i), b.label(j))));
                }
                for k in 0..n {
                    let ek = F2Vector::unit(n, k);
                    let left = self.multiply(&self.products[i * n + j], &ek);
                    let right = self.multiply(&ei, &self.products[j * n + k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "product is not associative on ({}, {}, {})",
                            b.label(i),
                            b.label(j),
                            b.label(k)
                        )));
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            if u.len() != n || !self.d(u).is_zero() {
                return Err(Error::InvalidAlgebra("unit must be a cocycle".into()));
            }
            for i in 0..n {
                let ei = F2Vector::unit(n, i);
                if self.multiply(u, &ei) != ei || self.multiply(&ei, u) != ei {
                    return Err(Error::InvalidAlgebra(format!("unit does not fix {}", b.label(i))));
                }
            }
        }
        Ok(())
    }

    /// Cochains of a simplicial complex with the Alexander-Whitney product
    /// `[v0..vp] · [vp..vq] = [v0..vq]`.
    pub fn cochains(k: &SimplicialComplex) -> DGAlgebra {
        let mut entries = Vec::new();
        let mut simplices = Vec::new();
        for d in 0..=k.dimension().max(0) as usize {
            for s in k.simplices(d) {
                entries.push((label_of(s), d as i64));
                simplices.push(s.clone());
            }
        }
        let basis = Basis::new(entries).unwrap();
        let n = basis.len();
        let idx: BTreeMap<&Vec<usize>, usize> =
            simplices.iter().map(|s| (s, basis.index_of(&label_of(s)).unwrap())).collect();
        let mut d = F2Matrix::zeros(n, n);
        for s in &simplices {
            for t in k.cofaces(s) {
                d.set(idx[&t], idx[s], true);
            }
        }
        let by_index: BTreeMap<usize, &Vec<usize>> = idx.iter().map(|(s, &i)| (i, *s)).collect();
        let product = |i: usize, j: usize| {
            let (a, b) = (by_index[&i], by_index[&j]);
            let mut out = F2Vector::zeros(n);
            if a.last() == b.first() {
                let joined: Vec<usize> = a.iter().chain(&b[1..]).copied().collect();
                if joined.windows(2).all(|w| w[0] < w[1]) {
                    if let Some(&r) = idx.get(&joined) {
                        out.set(r, true);
                    }
                }
            }
            out
        };
        let unit = F2Vector::from_indices(n, (0..k.vertex_count()).map(|v| idx[&vec![v]]));
        DGAlgebra::new(basis, d, product, Some(unit)).expect("cochain algebra")
    }

    /// A graded associative algebra with zero differential.
    pub fn from_associative(a: &AInfAlgebra) -> Result<DGAlgebra> {
        if !a.is_associative_algebra() {
            return Err(Error::InvalidAlgebra("only μ^2 may be nonzero".into()));
        }
        let n = a.dim();
        let unit = a.unit().map(|u| F2Vector::unit(n, u));
        DGAlgebra::new(a.basis().clone(), F2Matrix::zeros(n, n), |i, j| a.ops().value(&[i, j]), unit)
    }

    /// Eight-dimensional algebra with a nonvanishing triple Massey product
    /// `⟨a, a, a⟩ = w`.
    ///
    /// Basis `1`; `a, u, b, s` in degree 1; `x, w, t` in degree 2. Products
    /// beyond the unit are `a·a = x` and `u·a = w`; the differential is
    /// `du = x`, `ds = t`. Cohomology is spanned by `1, a, b, w`.
    pub fn massey_example() -> DGAlgebra {
        let basis = Basis::new([
            ("1", 0),
            ("a", 1),
            ("u", 1),
            ("b", 1),
            ("s", 1),
            ("x", 2),
            ("w", 2),
            ("t", 2),
        ])
        .unwrap();
        let n = basis.len();
        let i = |l: &str| basis.index_of(l).unwrap();
        let mut d = F2Matrix::zeros(n, n);
        d.set(i("x"), i("u"), true);
        d.set(i("t"), i("s"), true);
        let one = i("1");
        let products: BTreeMap<(usize, usize), usize> =
            [((i("a"), i("a")), i("x")), ((i("u"), i("a")), i("w"))].into_iter().collect();
        let product = |p: usize, q: usize| {
            if p == one {
                F2Vector::unit(n, q)
            } else if q == one {
                F2Vector::unit(n, p)
            } else if let Some(&r) = products.get(&(p, q)) {
                F2Vector::unit(n, r)
            } else {
                F2Vector::zeros(n)
            }
        };
        DGAlgebra::new(basis.clone(), d, product, Some(F2Vector::unit(n, one))).expect("valid example")
    }

    /// The free algebra on `generators` modulo words longer than
    /// `max_len`, with the differential extended from `d(g) = Σ words` by
    /// the Leibniz rule. Words are lists of generator indices; labels are
    /// generator labels concatenated, with `1` for the empty word.
    pub fn truncated_free(generators: &[(&str, i64)], max_len: usize, d_generators: &[Vec<Vec<usize>>]) -> Result<DGAlgebra> {
        if d_generators.len() != generators.len() {
            return Err(Error::Input("one differential per generator".into()));
        }
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..generators.len() {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let sep = if generators.iter().all(|(l, _)| l.chars().count() == 1) { "" } else { "·" };
        let label = |w: &[usize]| -> String {
            if w.is_empty() {
                "1".into()
            } else {
                w.iter().map(|&g| generators[g].0).collect::<Vec<_>>().join(sep)
            }
        };
        let degree = |w: &[usize]| -> i64 { w.iter().map(|&g| generators[g].1).sum() };
        let basis = Basis::new(words.iter().map(|w| (label(w), degree(w))).collect::<Vec<_>>())?;
        let n = basis.len();
        let idx: BTreeMap<Vec<usize>, usize> =
            words.iter().map(|w| (w.clone(), basis.index_of(&label(w)).unwrap())).collect();
        let word_of: BTreeMap<usize, Vec<usize>> = idx.iter().map(|(w, &i)| (i, w.clone())).collect();
        let concat = |a: &[usize], b: &[usize]| -> Option<usize> {
            if a.len() + b.len() > max_len {
                return None;
            }
            let w: Vec<usize> = a.iter().chain(b).copied().collect();
            Some(idx[&w])
        };
        let mut d = F2Matrix::zeros(n, n);
        for w in &words {
            for (pos, &g) in w.iter().enumerate() {
                for term in &d_generators[g] {
                    if term.iter().any(|&h| h >= generators.len()) {
                        return Err(Error::Input("differential uses an unknown generator".into()));
                    }
                    let replaced: Vec<usize> = w[..pos].iter().chain(term).chain(&w[pos + 1..]).copied().collect();
                    if replaced.len() <= max_len {
                        d.flip(idx[&replaced], idx[w]);
                    }
                }
            }
        }
        let product = |i: usize, j: usize| match concat(&word_of[&i], &word_of[&j]) {
            Some(r) => F2Vector::unit(n, r),
            None => F2Vector::zeros(n),
        };
        let unit = F2Vector::unit(n, idx[&Vec::new()]);
        DGAlgebra::new(basis, d, product, Some(unit))
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn unit(&self) -> Option<&F2Vector> {
        self.unit.as_ref()
    }

    pub fn d(&self, v: &F2Vector) -> F2Vector {
        self.differential.mul_vec(v).expect("length checked")
    }

    pub fn product(&self, i: usize, j: usize) -> &F2Vector {
        &self.products[i * self.dim() + j]
    }

    pub fn multiply(&self, x: &F2Vector, y: &F2Vector) -> F2Vector {
        let n = self.dim();
        let mut out = F2Vector::zeros(n);
        let ys: Vec<usize> = y.ones().collect();
        for i in x.ones() {
            for &j in &ys {
                out.add_assign(&self.products[i * n + j]);
            }
        }
        out
    }

    /// The product as an arity-2 operation table.
    pub fn product_table(&self) -> OpTable {
        let n = self.dim();
        let mut t = OpTable::new(n);
        for i in 0..n {
            for j in 0..n {
                let v = &self.products[i * n + j];
                if !v.is_zero() {
                    t.set(vec![i, j], v.clone());
                }
            }
        }
        t
    }

    /// Differential and product as an A∞ algebra with `μ^1 = d`, `μ^2 = ·`.
    pub fn as_ainf(&self, arity_cap: usize) -> AInfAlgebra {
        let mut a = AInfAlgebra::new(self.basis.clone(), arity_cap);
        for j in 0..self.dim() {
            a.set_unchecked(vec![j], self.differential.column(j));
        }
        for (t, v) in self.product_table().all_entries() {
            a.set_unchecked(t.clone(), v.clone());
        }
        a
    }

    pub fn complex(&self) -> Complex {
        flat_complex(&self.basis, &self.differential)
    }

    /// Index of the first basis element of degree `k`.
    pub fn offset(&self, k: i64) -> usize {
        self.basis.degrees().iter().filter(|&&d| d < k).count()
    }

    /// Square zero extension `A ⊕ M` by a right DG module: `m · a` is the
    /// action and all other products involving `M` vanish. Module labels are
    /// prefixed with `m:`. Returns the extension and the positions of the
    /// algebra and module basis elements in it.
    pub fn square_zero_extension(&self, m: &DGModule) -> (DGAlgebra, Vec<usize>, Vec<usize>) {
        let entries: Vec<(String, i64)> = (0..self.dim())
            .map(|i| (self.basis.label(i).to_string(), self.basis.degree(i)))
            .chain((0..m.dim()).map(|i| (format!("m:{}", m.basis.label(i)), m.basis.degree(i))))
            .collect();
        let basis = Basis::new(entries.clone()).expect("prefixed labels are distinct");
        let n = basis.len();
        let a_pos: Vec<usize> = (0..self.dim()).map(|i| basis.index_of(&entries[i].0).unwrap()).collect();
        let m_pos: Vec<usize> = (0..m.dim()).map(|i| basis.index_of(&entries[self.dim() + i].0).unwrap()).collect();
        let mut d = F2Matrix::zeros(n, n);
        for j in 0..self.dim() {
            for o in self.differential.column(j).ones() {
                d.set(a_pos[o], a_pos[j], true);
            }
        }
        for j in 0..m.dim() {
            for o in m.differential.column(j).ones() {
                d.set(m_pos[o], m_pos[j], true);
            }
        }
        let mut a_of = vec![None; n];
        let mut m_of = vec![None; n];
        for (i, &p) in a_pos.iter().enumerate() {
            a_of[p] = Some(i);
        }
        for (i, &p) in m_pos.iter().enumerate() {
            m_of[p] = Some(i);
        }
        let product = |i: usize, j: usize| match (a_of[i], m_of[i], a_of[j]) {
            (Some(x), _, Some(y)) => F2Vector::from_indices(n, self.products[x * self.dim() + y].ones().map(|o| a_pos[o])),
            (_, Some(x), Some(y)) => F2Vector::from_indices(n, m.action(x, y).ones().map(|o| m_pos[o])),
            _ => F2Vector::zeros(n),
        };
        let ext = DGAlgebra::new(basis, d, product, None).expect("square zero extension of a DG module");
        (ext, a_pos, m_pos)
    }
}

/// The cochain complex of a degree-sorted basis with a flat differential.
fn flat_complex(basis: &Basis, d: &F2Matrix) -> Complex {
    let space = basis.space();
    let offset = |k: i64| basis.degrees().iter().filter(|&&x| x < k).count();
    let mut diff = BTreeMap::new();
    for k in space.degrees().collect::<Vec<_>>() {
        if space.dim(k + 1) == 0 {
            continue;
        }
        let (src, tgt) = (offset(k), offset(k + 1));
        let rows: Vec<usize> = (tgt..tgt + space.dim(k + 1)).collect();
        let cols: Vec<usize> = (src..src + space.dim(k)).collect();
        diff.insert(k, d.submatrix(&rows, &cols));
    }
    Complex::new(space, diff).expect("d squares to zero")
}

fn label_of(s: &[usize]) -> String {
    format!("[{}]", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// A right DG module over a [`DGAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGModule {
    basis: Basis,
    differential: F2Matrix,
    /// `actions[m * dim A + a] = e_m · e_a`.
    actions: Vec<F2Vector>,
    algebra_dim: usize,
}

impl DGModule {
    pub fn new(
        algebra: &DGAlgebra,
        basis: Basis,
        differential: F2Matrix,
        action: impl Fn(usize, usize) -> F2Vector,
    ) -> Result<DGModule> {
        let (n, na) = (basis.len(), algebra.dim());
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::DimensionMismatch(format!("module differential must be {n}x{n}")));
        }
        let mut actions = Vec::with_capacity(n * na);
        for m in 0..n {
            for a in 0..na {
                actions.push(action(m, a));
            }
        }
        let module = DGModule { basis, differential, actions, algebra_dim: na };
        module.validate(algebra)?;
        Ok(module)
    }

    fn validate(&self, algebra: &DGAlgebra) -> Result<()> {
        let (n, na) = (self.dim(), algebra.dim());
        let b = &self.basis;
        for j in 0..n {
            if self.differential.column(j).ones().any(|o| b.degree(o) != b.degree(j) + 1) {
                return Err(Error::Degree(format!("d({}) has the wrong degree", b.label(j))));
            }
        }
        if !self.differential.mul(&self.differential)?.is_zero() {
            return Err(Error::NotAComplex("module d∘d ≠ 0".into()));
        }
        for m in 0..n {
            let em = F2Vector::unit(n, m);
            for a in 0..na {
                let ea = F2Vector::unit(na, a);
                let v = &self.actions[m * na + a];
                if v.len() != n || v.ones().any(|o| b.degree(o) != b.degree(m) + algebra.basis().degree(a)) {
                    return Err(Error::Degree(format!("{}·{} has the wrong degree", b.label(m), algebra.basis().label(a))));
                }
                let lhs = self.d(v);
                let rhs = self.act(&self.d(&em), &ea).add(&self.act(&em, &algebra.d(&ea)));
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra(format!("Leibniz rule fails on ({}, {})", b.label(m), algebra.basis().label(a))));
                }
                for c in 0..na {
                    let ec = F2Vector::unit(na, c);
                    if self.act(v, &ec) != self.act(&em, algebra.product(a, c)) {
                        return Err(Error::InvalidAlgebra("module action is not associative".into()));
                    }
                }
            }
            if let Some(u) = algebra.unit() {
                if self.act(&em, u) != em {
                    return Err(Error::InvalidAlgebra("unit does not act as the identity".into()));
                }
            }
        }
        Ok(())
    }

    /// `A` as a right module over itself.
    pub fn regular(algebra: &DGAlgebra) -> DGModule {
        DGModule::new(algebra, algebra.basis().clone(), algebra.differential().clone(), |m, a| algebra.product(m, a).clone())
            .expect("an algebra is a module over itself")
    }

    /// The quotient of `A` by the span of `ideal`, which must be a right
    /// ideal closed under `d`; labels are those of the surviving basis
    /// elements.
    pub fn quotient(algebra: &DGAlgebra, ideal: &[usize]) -> Result<DGModule> {
        let n = algebra.dim();
        let in_ideal: Vec<bool> = (0..n).map(|i| ideal.contains(&i)).collect();
        let closed = |v: &F2Vector| v.ones().all(|o| in_ideal[o]);
        for &i in ideal {
            let ei = F2Vector::unit(n, i);
            if !closed(&algebra.d(&ei)) || (0..n).any(|a| !closed(algebra.product(i, a))) {
                return Err(Error::InvalidAlgebra(format!("{} does not generate a DG right ideal in the span", algebra.basis().label(i))));
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !in_ideal[i]).collect();
        let basis = Basis::new(keep.iter().map(|&i| (algebra.basis().label(i).to_string(), algebra.basis().degree(i))).collect::<Vec<_>>())?;
        let pos: BTreeMap<usize, usize> = keep.iter().map(|&i| (i, basis.index_of(algebra.basis().label(i)).unwrap())).collect();
        let project = |v: &F2Vector| F2Vector::from_indices(keep.len(), v.ones().filter_map(|o| pos.get(&o).copied()));
        let inv: BTreeMap<usize, usize> = pos.iter().map(|(&i, &p)| (p, i)).collect();
        let mut d = F2Matrix::zeros(keep.len(), keep.len());
        for (&p, &i) in &inv {
            for o in project(&algebra.d(&F2Vector::unit(n, i))).ones() {
                d.set(o, p, true);
            }
        }
        DGModule::new(algebra, basis, d, |m, a| project(algebra.product(inv[&m], a)))
    }

    /// Shift so that degree `k` of the result is degree `k + s` of `self`.
    pub fn shift(&self, s: i64, algebra: &DGAlgebra) -> DGModule {
        let basis = Basis::new((0..self.dim()).map(|i| (self.basis.label(i).to_string(), self.basis.degree(i) - s)).collect::<Vec<_>>())
            .expect("same labels");
        DGModule::new(algebra, basis, self.differential.clone(), |m, a| self.actions[m * self.algebra_dim + a].clone())
            .expect("shift of a module")
    }

    /// Direct sum with labels prefixed by `0:` and `1:`.
    pub fn direct_sum(&self, other: &DGModule, algebra: &DGAlgebra) -> DGModule {
        let entries: Vec<(String, i64)> = (0..self.dim())
            .map(|i| (format!("0:{}", self.basis.label(i)), self.basis.degree(i)))
            .chain((0..other.dim()).map(|i| (format!("1:{}", other.basis.label(i)), other.basis.degree(i))))
            .collect();
        let basis = Basis::new(entries.clone()).expect("prefixed labels");
        let n = basis.len();
        let pos: Vec<usize> = entries.iter().map(|(l, _)| basis.index_of(l).unwrap()).collect();
        let mut src = vec![(0usize, 0usize); n];
        for (k, &p) in pos.iter().enumerate() {
            src[p] = if k < self.dim() { (0, k) } else { (1, k - self.dim()) };
        }
        let embed = |which: usize, v: &F2Vector| {
            let off = if which == 0 { 0 } else { self.dim() };
            F2Vector::from_indices(n, v.ones().map(|o| pos[off + o]))
        };
        let mut d = F2Matrix::zeros(n, n);
        for j in 0..n {
            let (w, k) = src[j];
            let part = if w == 0 { self } else { other };
            for o in embed(w, &part.differential.column(k)).ones() {
                d.set(o, j, true);
            }
        }
        DGModule::new(algebra, basis, d, |m, a| {
            let (w, k) = src[m];
            let part = if w == 0 { self } else { other };
            embed(w, &part.actions[k * part.algebra_dim + a])
        })
        .expect("sum of modules")
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn differential(&self) -> &F2Matrix {
        &self.differential
    }

    pub fn complex(&self) -> Complex {
        flat_complex(&self.basis, &self.differential)
    }

    pub fn action(&self, m: usize, a: usize) -> &F2Vector {
        &self.actions[m * self.algebra_dim + a]
    }

    pub fn d(&self, v: &F2Vector) -> F2Vector {
        self.differential.mul_vec(v).expect("length checked")
    }

    pub fn act(&self, m: &F2Vector, a: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.dim());
        let as_: Vec<usize> = a.ones().collect();
        for i in m.ones() {
            for &j in &as_ {
                out.add_assign(&self.actions[i * self.algebra_dim + j]);
            }
        }
        out
    }
}
