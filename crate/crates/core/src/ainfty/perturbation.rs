use std::collections::{BTreeMap, HashMap};

use super::dga::{DGAlgebra, DGModule};
use super::module::AInfModule;
use super::table::{OpTable, Tuple};
use super::{AInfAlgebra, Basis, RelationReport};
use crate::chain::{ChainMap, Complex};
use crate::error::Result;
use crate::f2linalg::{EchelonBasis, F2Matrix, F2Vector};

/// A deformation retraction of a cochain complex onto its cohomology:
/// `ι: H → C`, `p: C → H`, `h: C → C` of degree `-1` with
/// `id - ιp = dh + hd`, `pι = id` and side conditions `h² = hι = ph = 0`.
///
/// In each degree the complex is split as `B ⊕ H' ⊕ C'` where `B = im d`,
/// `H'` are cocycle representatives chosen in pivot order from a kernel
/// basis, and `C'` is spanned by unit vectors completing the cocycles; `h`
/// inverts `d: C' → B` and vanishes on `H' ⊕ C'`.
#[derive(Clone, Debug)]
pub struct Retraction {
    pub iota: F2Matrix,
    pub proj: F2Matrix,
    pub homotopy: F2Matrix,
    /// Basis of `H`; each label is the sum of the labels in the support of
    /// its representative.
    pub cohomology: Basis,
}

impl Retraction {
    pub fn new(basis: &Basis, d: &F2Matrix) -> Retraction {
        let n = basis.len();
        let dims = basis.dims();
        let mut offset = BTreeMap::new();
        let mut acc = 0;
        for (&k, &m) in &dims {
            offset.insert(k, acc);
            acc += m;
        }
        let mut reps: Vec<(i64, F2Vector)> = Vec::new();
        let mut proj_rows: Vec<(usize, F2Vector)> = Vec::new();
        let mut homotopy = F2Matrix::zeros(n, n);
        // d(C') from the previous degree, with the C' vector it came from.
        let mut boundaries: BTreeMap<i64, Vec<(F2Vector, F2Vector)>> = BTreeMap::new();
        for (&k, &m) in &dims {
            let off = offset[&k];
            let cols: Vec<usize> = (off..off + m).collect();
            let rows: Vec<usize> = (0..n).collect();
            let dk = d.submatrix(&rows, &cols);
            let kernel: Vec<F2Vector> = dk.kernel_basis().into_iter().map(|z| z.embed(n, off)).collect();
            let bds = boundaries.remove(&k).unwrap_or_default();
            let mut span = EchelonBasis::new(n);
            for (b, _) in &bds {
                span.insert(b);
            }
            let mut h_here = Vec::new();
            for z in &kernel {
                if span.insert(z) {
                    h_here.push(z.clone());
                }
            }
            let mut cocycles = EchelonBasis::new(n);
            for z in &kernel {
                cocycles.insert(z);
            }
            let mut complement = Vec::new();
            for i in off..off + m {
                let e = F2Vector::unit(n, i);
                if cocycles.insert(&e) {
                    complement.push(e);
                }
            }
            // Change of basis [B | H' | C'] restricted to degree k.
            let columns: Vec<F2Vector> = bds
                .iter()
                .map(|(b, _)| b.slice(off, m))
                .chain(h_here.iter().map(|z| z.slice(off, m)))
                .chain(complement.iter().map(|c| c.slice(off, m)))
                .collect();
            let inv = F2Matrix::from_columns(m, &columns).inverse().expect("B ⊕ H' ⊕ C' spans");
            for (r, _) in h_here.iter().enumerate() {
                proj_rows.push((reps.len() + r, inv.row(bds.len() + r).embed(n, off)));
            }
            for (r, (_, c)) in bds.iter().enumerate() {
                for j in inv.row(r).ones() {
                    for o in c.ones() {
                        homotopy.flip(o, off + j);
                    }
                }
            }
            reps.extend(h_here.into_iter().map(|z| (k, z)));
            if !complement.is_empty() {
                let next = boundaries.entry(k + 1).or_default();
                for c in complement {
                    next.push((d.mul_vec(&c).expect("square"), c));
                }
            }
        }
        let entries: Vec<(String, i64)> = reps
            .iter()
            .map(|(k, z)| (z.ones().map(|i| basis.label(i)).collect::<Vec<_>>().join("+"), *k))
            .collect();
        let cohomology = Basis::new(entries).expect("representatives have distinct supports");
        let hn = reps.len();
        let mut iota = F2Matrix::zeros(n, hn);
        let mut proj = F2Matrix::zeros(hn, n);
        for (r, (_, z)) in reps.iter().enumerate() {
            for o in z.ones() {
                iota.set(o, r, true);
            }
        }
        for (r, row) in proj_rows {
            for j in row.ones() {
                proj.set(r, j, true);
            }
        }
        Retraction { iota, proj, homotopy, cohomology }
    }

    /// Checks the homotopy identity and the side conditions.
    pub fn verify(&self, d: &F2Matrix) -> bool {
        let n = d.rows();
        let hn = self.cohomology.len();
        let m = |a: &F2Matrix, b: &F2Matrix| a.mul(b).expect("shapes");
        let lhs = F2Matrix::identity(n).add(&m(&self.iota, &self.proj)).unwrap();
        let rhs = m(d, &self.homotopy).add(&m(&self.homotopy, d)).unwrap();
        lhs == rhs
            && m(&self.proj, &self.iota) == F2Matrix::identity(hn)
            && m(&self.homotopy, &self.homotopy).is_zero()
            && m(&self.homotopy, &self.iota).is_zero()
            && m(&self.proj, &self.homotopy).is_zero()
            && m(d, &self.iota).is_zero()
            && m(&self.proj, d).is_zero()
    }

    fn p(&self, v: &F2Vector) -> F2Vector {
        self.proj.mul_vec(v).expect("length")
    }

    fn h(&self, v: &F2Vector) -> F2Vector {
        self.homotopy.mul_vec(v).expect("length")
    }
}

/// The minimal model of a DG algebra `A` from homological perturbation,
/// with the components `f_n: H^{⊗n} → A` of an A∞ quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub algebra: AInfAlgebra,
    pub retraction: Retraction,
    /// `f_n` on basis tuples of `H`, valued in `A`.
    pub morphism: OpTable,
}

/// Kadeishvili's construction up to arity `cap`: `f_1 = ι`,
/// `λ_n = Σ_{s+t=n} f_s · f_t`, `μ^n = p λ_n`, `f_n = h λ_n`.
pub fn minimal_model(a: &DGAlgebra, cap: usize) -> MinimalModel {
    let retraction = Retraction::new(a.basis(), a.differential());
    let h_basis = retraction.cohomology.clone();
    let hn = h_basis.len();
    let mut algebra = AInfAlgebra::new(h_basis, cap);
    let mut morphism = OpTable::new(a.dim());
    let mut q: Vec<Vec<(Tuple, F2Vector)>> = vec![Vec::new(); cap + 1];
    for i in 0..hn {
        let v = retraction.iota.column(i);
        morphism.set(vec![i], v.clone());
        q[1].push((vec![i], v));
    }
    for n in 2..=cap {
        let mut lambda: HashMap<Tuple, F2Vector> = HashMap::new();
        for s in 1..n {
            for (pt, pv) in &q[s] {
                for (qt, qv) in &q[n - s] {
                    let v = a.multiply(pv, qv);
                    if v.is_zero() {
                        continue;
                    }
                    let key: Tuple = pt.iter().chain(qt).copied().collect();
                    lambda.entry(key).or_insert_with(|| F2Vector::zeros(a.dim())).add_assign(&v);
                }
            }
        }
        let mut keys: Vec<&Tuple> = lambda.keys().collect();
        keys.sort();
        for key in keys {
            let l = &lambda[key];
            let m = retraction.p(l);
            if !m.is_zero() {
                algebra.set(key.clone(), m).expect("perturbation preserves degrees");
            }
            let f = retraction.h(l);
            if !f.is_zero() {
                morphism.set(key.clone(), f.clone());
                q[n].push((key.clone(), f));
            }
        }
    }
    if let Some(u) = a.unit() {
        let pu = retraction.p(u);
        if pu.count_ones() == 1 && retraction.iota.mul_vec(&pu).unwrap() == *u {
            let _ = algebra.set_unit(pu.first_one().unwrap());
        }
    }
    MinimalModel { algebra, retraction, morphism }
}

impl MinimalModel {
    /// The A∞ morphism equations for `f: H → A` up to the arity cap:
    /// `Σ f(.., μ^k(..), ..) = d f_n + Σ_{s+t=n} f_s · f_t`.
    pub fn check_morphism(&self, a: &DGAlgebra) -> RelationReport {
        let cap = self.algebra.arity_cap();
        let mut acc: HashMap<Tuple, F2Vector> = HashMap::new();
        let mut add = |key: Tuple, v: &F2Vector| {
            acc.entry(key).or_insert_with(|| F2Vector::zeros(a.dim())).add_assign(v);
        };
        let mut by_output: HashMap<usize, Vec<&Tuple>> = HashMap::new();
        for (t, v) in self.algebra.ops().all_entries() {
            for o in v.ones() {
                by_output.entry(o).or_default().push(t);
            }
        }
        for (outer, v) in self.morphism.all_entries() {
            for (pos, slot) in outer.iter().enumerate() {
                for s in by_output.get(slot).into_iter().flatten() {
                    if outer.len() + s.len() - 1 <= cap {
                        add(outer[..pos].iter().chain(s.iter()).chain(&outer[pos + 1..]).copied().collect(), v);
                    }
                }
            }
            add(outer.clone(), &a.d(v));
        }
        let entries: Vec<(&Tuple, &F2Vector)> = self.morphism.all_entries().collect();
        for (pt, pv) in &entries {
            for (qt, qv) in &entries {
                if pt.len() + qt.len() <= cap {
                    add(pt.iter().chain(qt.iter()).copied().collect(), &a.multiply(pv, qv));
                }
            }
        }
        RelationReport { arity_cap: cap, violations: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// `f_1 = ι` as a chain map from `(H, 0)` to `A`.
    pub fn linear_part(&self, a: &DGAlgebra) -> ChainMap {
        let target = a.complex();
        let h = &self.retraction.cohomology;
        let source = Complex::zero_differential(h.space());
        let mut maps = BTreeMap::new();
        for (k, m) in h.dims() {
            let hoff = h.degrees().iter().filter(|&&d| d < k).count();
            let aoff = a.offset(k);
            let rows: Vec<usize> = (aoff..aoff + target.dim(k)).collect();
            let cols: Vec<usize> = (hoff..hoff + m).collect();
            maps.insert(k, self.retraction.iota.submatrix(&rows, &cols));
        }
        ChainMap::new(source, target, 0, maps).expect("ι is a chain map")
    }
}

/// The minimal model of a DG algebra and a right DG module over it, via the
/// minimal model of the square zero extension `A ⊕ M`.
pub fn module_minimal_model(a: &DGAlgebra, m: &DGModule, cap: usize) -> Result<(MinimalModel, AInfModule)> {
    let (ext, a_pos, m_pos) = a.square_zero_extension(m);
    let ext_model = minimal_model(&ext, cap);
    let h = &ext_model.retraction.cohomology;
    let is_module_rep: Vec<bool> = (0..h.len())
        .map(|r| {
            let rep = ext_model.retraction.iota.column(r);
            let in_m = rep.ones().all(|o| m_pos.contains(&o));
            debug_assert!(in_m || rep.ones().all(|o| a_pos.contains(&o)));
            in_m
        })
        .collect();
    let alg_model = minimal_model(a, cap);
    let ha = &alg_model.algebra;
    // Cohomology classes of A inside the extension keep their labels, with
    // module labels carrying the `m:` prefix.
    let alg_index = |r: usize| ha.basis().index_of(h.label(r)).expect("same representatives");
    let module_basis = Basis::new(
        (0..h.len())
            .filter(|&r| is_module_rep[r])
            .map(|r| {
                let l = h.label(r).split('+').map(|p| p.trim_start_matches("m:")).collect::<Vec<_>>().join("+");
                (l, h.degree(r))
            })
            .collect::<Vec<_>>(),
    )?;
    let mut module_index = vec![usize::MAX; h.len()];
    let mut next = 0;
    for r in 0..h.len() {
        if is_module_rep[r] {
            module_index[r] = next;
            next += 1;
        }
    }
    // Module bases are degree-sorted in both, so positions agree in order.
    let mut module = AInfModule::new(ha.clone(), module_basis);
    for (t, v) in ext_model.algebra.ops().all_entries() {
        if !is_module_rep[t[0]] || t[1..].iter().any(|&x| is_module_rep[x]) {
            continue;
        }
        let inputs: Tuple = std::iter::once(module_index[t[0]]).chain(t[1..].iter().map(|&x| alg_index(x))).collect();
        let value = F2Vector::from_indices(module.dim(), v.ones().map(|o| module_index[o]));
        module.set(inputs, value)?;
    }
    Ok((alg_model, module))
}
