use std::collections::{BTreeMap, HashMap};

use super::complex::{simplex_label, SimplicialComplex};
use super::local_system::LocalSystem;
use crate::chain::{Cohomology, Complex, ComplexBuilder, HomComplex};
use crate::error::{Error, Result};
use crate::f2linalg::F2Vector;

/// Twisted simplicial cochains `C^{p,q} = ⊕_{dim σ = p} E(min σ)^q` in total
/// degree `p + q`.
///
/// The differential sends a value at `σ` to every coface `τ`, transported
/// along the edge from `min σ` to `min τ`, plus the fibre differential.
#[derive(Clone, Debug)]
pub struct TwistedCochains {
    system: LocalSystem,
    complex: Complex,
    /// (simplex dim, simplex index, fibre degree) -> (total degree, offset).
    blocks: HashMap<(usize, usize, i64), (i64, usize)>,
}

impl TwistedCochains {
    pub fn new(system: &LocalSystem) -> TwistedCochains {
        let k = system.base();
        let mut b = ComplexBuilder::new();
        let mut blocks = HashMap::new();
        let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for p in 0..=k.dimension().max(0) as usize {
            for (si, s) in k.simplices(p).iter().enumerate() {
                let fibre = system.fibre(s[0]);
                for q in fibre.space().degrees() {
                    let n = p as i64 + q;
                    for (i, label) in fibre.space().labels(q).iter().enumerate() {
                        let id = b.generator(n, format!("{}:{label}", simplex_label(s)));
                        if i == 0 {
                            blocks.insert((p, si, q), (n, b.position(id).1));
                        }
                        ids.insert((p, si, fibre.flat_offset(q) + i), id);
                    }
                }
            }
        }
        for p in 0..=k.dimension().max(0) as usize {
            let cofaces = k.coface_table(p);
            for (si, s) in k.simplices(p).iter().enumerate() {
                let a = s[0];
                let fibre = system.fibre(a);
                let d = fibre.total_differential();
                for f in 0..fibre.space().total_dim() {
                    let from = ids[&(p, si, f)];
                    for g in d.column(f).ones() {
                        b.entry(from, ids[&(p, si, g)]);
                    }
                    for &ti in &cofaces[si] {
                        let m = k.simplices(p + 1)[ti][0];
                        if m == a {
                            b.entry(from, ids[&(p + 1, ti, f)]);
                        } else {
                            for g in system.transport(a, m).column(f).ones() {
                                b.entry(from, ids[&(p + 1, ti, g)]);
                            }
                        }
                    }
                }
            }
        }
        let complex = b.build().expect("flat systems give a square-zero differential");
        TwistedCochains { system: system.clone(), complex, blocks }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn system(&self) -> &LocalSystem {
        &self.system
    }

    /// Value of the degree-`n` cochain `c` at `s`, as a flattened fibre
    /// vector at `min s`.
    pub fn value(&self, n: i64, c: &F2Vector, s: &[usize]) -> F2Vector {
        let k = self.system.base();
        let p = s.len() - 1;
        let si = k.index_of(s).expect("simplex in the base");
        let fibre = self.system.fibre(s[0]);
        let q = n - p as i64;
        let mut out = F2Vector::zeros(fibre.space().total_dim());
        if let Some(&(_, off)) = self.blocks.get(&(p, si, q)) {
            let fo = fibre.flat_offset(q);
            for i in 0..fibre.dim(q) {
                if c.get(off + i) {
                    out.set(fo + i, true);
                }
            }
        }
        out
    }

    /// Adds the flattened fibre vector `v` (which must live in fibre degree
    /// `n - dim s`) into the value of `c` at `s`.
    pub fn add_value(&self, n: i64, c: &mut F2Vector, s: &[usize], v: &F2Vector) {
        let k = self.system.base();
        let p = s.len() - 1;
        let si = k.index_of(s).expect("simplex in the base");
        let fibre = self.system.fibre(s[0]);
        let q = n - p as i64;
        let fo = fibre.flat_offset(q);
        for i in v.ones() {
            assert!(i >= fo && i < fo + fibre.dim(q), "value has the wrong fibre degree");
            let (_, off) = self.blocks[&(p, si, q)];
            c.flip(off + i - fo);
        }
    }

    /// Position of basis vector `i` of fibre degree `q` at the simplex with
    /// index `si` among those of dimension `p`: `(total degree, index)`.
    pub fn index(&self, p: usize, si: usize, q: i64, i: usize) -> Option<(i64, usize)> {
        let &(n, off) = self.blocks.get(&(p, si, q))?;
        Some((n, off + i))
    }

    /// The degree-0 cochain with value `values[v]` at each vertex.
    pub fn from_vertex_values(&self, values: &[F2Vector]) -> F2Vector {
        let mut c = F2Vector::zeros(self.complex.dim(0));
        for (v, x) in values.iter().enumerate() {
            self.add_value(0, &mut c, &[v], x);
        }
        c
    }
}

/// Twisted cochain complex of a local system.
pub fn twisted_cochain_complex(system: &LocalSystem) -> Complex {
    TwistedCochains::new(system).complex
}

/// A bilinear map `X x Y -> Z` stored by its values on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearMap {
    left: usize,
    right: usize,
    out: usize,
    table: Vec<F2Vector>,
}

impl BilinearMap {
    pub fn zero(left: usize, right: usize, out: usize) -> Self {
        Self { left, right, out, table: vec![F2Vector::zeros(out); left * right] }
    }

    pub fn set(&mut self, i: usize, j: usize, value: F2Vector) {
        assert_eq!(value.len(), self.out);
        self.table[i * self.right + j] = value;
    }

    pub fn get(&self, i: usize, j: usize) -> &F2Vector {
        &self.table[i * self.right + j]
    }

    pub fn apply(&self, x: &F2Vector, y: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.out);
        for i in x.ones() {
            for j in y.ones() {
                out.add_assign(self.get(i, j));
            }
        }
        out
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.left, self.right, self.out)
    }
}

/// A fibrewise pairing `E12 ⊗ E01 -> E02` of local systems.
#[derive(Clone, Debug)]
pub struct Pairing {
    e12: LocalSystem,
    e01: LocalSystem,
    e02: LocalSystem,
    maps: Vec<BilinearMap>,
}

impl Pairing {
    /// Checks shapes, degrees, the Leibniz rule against the fibre
    /// differentials, and compatibility with every transport.
    pub fn new(e12: LocalSystem, e01: LocalSystem, e02: LocalSystem, maps: Vec<BilinearMap>) -> Result<Pairing> {
        let base = e12.base().clone();
        if e01.base() != &base || e02.base() != &base {
            return Err(Error::InvalidLocalSystem("pairing of systems on different bases".into()));
        }
        if maps.len() != base.vertex_count() {
            return Err(Error::DimensionMismatch("one bilinear map per vertex is required".into()));
        }
        for (v, m) in maps.iter().enumerate() {
            let expected = (e12.fibre_dim(v), e01.fibre_dim(v), e02.fibre_dim(v));
            if m.dims() != expected {
                return Err(Error::DimensionMismatch(format!("bilinear map at vertex {v} has shape {:?}", m.dims())));
            }
            let (d12, d01, d02) = (e12.fibre(v).basis_degrees(), e01.fibre(v).basis_degrees(), e02.fibre(v).basis_degrees());
            for i in 0..expected.0 {
                for j in 0..expected.1 {
                    if m.get(i, j).ones().any(|o| d02[o] != d12[i] + d01[j]) {
                        return Err(Error::Degree(format!("pairing at vertex {v} does not add degrees")));
                    }
                }
            }
            let (dl, dr, dt) = (
                e12.fibre(v).total_differential(),
                e01.fibre(v).total_differential(),
                e02.fibre(v).total_differential(),
            );
            for i in 0..expected.0 {
                for j in 0..expected.1 {
                    let (x, y) = (F2Vector::unit(expected.0, i), F2Vector::unit(expected.1, j));
                    let lhs = dt.mul_vec(m.get(i, j))?;
                    let rhs = m.apply(&dl.mul_vec(&x)?, &y).add(&m.apply(&x, &dr.mul_vec(&y)?));
                    if lhs != rhs {
                        return Err(Error::InvalidLocalSystem(format!(
                            "pairing at vertex {v} does not satisfy the Leibniz rule"
                        )));
                    }
                }
            }
        }
        for e in base.edges() {
            let (a, b) = (e[0], e[1]);
            let (t12, t01, t02) = (e12.transport(a, b), e01.transport(a, b), e02.transport(a, b));
            for i in 0..e12.fibre_dim(a) {
                for j in 0..e01.fibre_dim(a) {
                    let x = F2Vector::unit(e12.fibre_dim(a), i);
                    let y = F2Vector::unit(e01.fibre_dim(a), j);
                    let lhs = t02.mul_vec(maps[a].get(i, j))?;
                    let rhs = maps[b].apply(&t12.mul_vec(&x)?, &t01.mul_vec(&y)?);
                    if lhs != rhs {
                        return Err(Error::NotEquivariant(format!("edge ({a},{b})")));
                    }
                }
            }
        }
        Ok(Pairing { e12, e01, e02, maps })
    }

    /// `F2 x F2 -> F2` on the constant rank-one system.
    pub fn scalar(base: &SimplicialComplex) -> Pairing {
        let t = LocalSystem::trivial_rank(base, 1);
        let mut m = BilinearMap::zero(1, 1, 1);
        m.set(0, 0, F2Vector::unit(1, 0));
        Pairing::new(t.clone(), t.clone(), t, vec![m; base.vertex_count()]).expect("scalar pairing is valid")
    }

    /// Left multiplication by the constant rank-one system: `1 · y = y`.
    pub fn left_unit(e: &LocalSystem) -> Pairing {
        let base = e.base();
        let t = LocalSystem::trivial_rank(base, 1);
        let maps = (0..base.vertex_count())
            .map(|v| {
                let n = e.fibre_dim(v);
                let mut m = BilinearMap::zero(1, n, n);
                for j in 0..n {
                    m.set(0, j, F2Vector::unit(n, j));
                }
                m
            })
            .collect();
        Pairing::new(t, e.clone(), e.clone(), maps).expect("unit pairing is valid")
    }

    /// Composition `Hom(E1,E2) ⊗ Hom(E0,E1) -> Hom(E0,E2)`.
    pub fn composition(e0: &LocalSystem, e1: &LocalSystem, e2: &LocalSystem) -> Result<Pairing> {
        let h12 = LocalSystem::hom(e1, e2)?;
        let h01 = LocalSystem::hom(e0, e1)?;
        let h02 = LocalSystem::hom(e0, e2)?;
        let maps = (0..e0.base().vertex_count())
            .map(|v| composition_map(e0.fibre(v), e1.fibre(v), e2.fibre(v)))
            .collect();
        Pairing::new(h12, h01, h02, maps)
    }

    pub fn left(&self) -> &LocalSystem {
        &self.e12
    }

    pub fn right(&self) -> &LocalSystem {
        &self.e01
    }

    pub fn target(&self) -> &LocalSystem {
        &self.e02
    }

    pub fn map(&self, v: usize) -> &BilinearMap {
        &self.maps[v]
    }

    pub fn maps(&self) -> &[BilinearMap] {
        &self.maps
    }
}

/// Composition on flattened Hom complexes: `(ψ, φ) -> ψ ∘ φ`.
fn composition_map(c0: &Complex, c1: &Complex, c2: &Complex) -> BilinearMap {
    let (h01, h12, h02) = (HomComplex::new(c0, c1), HomComplex::new(c1, c2), HomComplex::new(c0, c2));
    let flat = |h: &HomComplex, k: i64, p: i64, i: usize, j: usize| {
        h.complex().flat_offset(k) + h.index(k, p, i, j).expect("basis element")
    };
    let mut m = BilinearMap::zero(
        h12.complex().space().total_dim(),
        h01.complex().space().total_dim(),
        h02.complex().space().total_dim(),
    );
    for k1 in h01.complex().space().degrees() {
        for p in c0.space().degrees() {
            let q = p + k1;
            for i in 0..c0.dim(p) {
                for j in 0..c1.dim(q) {
                    let phi = flat(&h01, k1, p, i, j);
                    for k2 in h12.complex().space().degrees() {
                        for l in 0..c2.dim(q + k2) {
                            let psi = flat(&h12, k2, q, j, l);
                            let out = flat(&h02, k1 + k2, p, i, l);
                            let mut v = m.get(psi, phi).clone();
                            v.flip(out);
                            m.set(psi, phi, v);
                        }
                    }
                }
            }
        }
    }
    m
}

/// Cup products for a fixed pairing.
#[derive(Clone, Debug)]
pub struct CupProduct {
    pairing: Pairing,
    left: TwistedCochains,
    right: TwistedCochains,
    target: TwistedCochains,
}

impl CupProduct {
    pub fn new(pairing: Pairing) -> CupProduct {
        let left = TwistedCochains::new(&pairing.e12);
        let right = TwistedCochains::new(&pairing.e01);
        let target = TwistedCochains::new(&pairing.e02);
        CupProduct { pairing, left, right, target }
    }

    pub fn left(&self) -> &TwistedCochains {
        &self.left
    }

    pub fn right(&self) -> &TwistedCochains {
        &self.right
    }

    pub fn target(&self) -> &TwistedCochains {
        &self.target
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    /// Alexander-Whitney product of cochains of degrees `m` and `n`: on
    /// `ρ = [v0..vr]` it pairs `a` on the front face `[v0..vp]` with `b` on
    /// the back face `[vp..vr]` transported from `vp` to `v0`.
    pub fn cup(&self, m: i64, a: &F2Vector, n: i64, b: &F2Vector) -> F2Vector {
        let k = self.pairing.e12.base();
        let e01 = &self.pairing.e01;
        let mut out = F2Vector::zeros(self.target.complex.dim(m + n));
        for r in 0..=k.dimension().max(0) as usize {
            for rho in k.simplices(r) {
                let v0 = rho[0];
                let mut value = F2Vector::zeros(self.pairing.e02.fibre_dim(v0));
                for p in 0..=r {
                    let front = &rho[..=p];
                    let back = &rho[p..];
                    let x = self.left.value(m, a, front);
                    if x.is_zero() {
                        continue;
                    }
                    let mut y = self.right.value(n, b, back);
                    if y.is_zero() {
                        continue;
                    }
                    if rho[p] != v0 {
                        y = e01.transport(rho[p], v0).mul_vec(&y).expect("fibre dims agree");
                    }
                    value.add_assign(&self.pairing.maps[v0].apply(&x, &y));
                }
                if !value.is_zero() {
                    self.target.add_value(m + n, &mut out, rho, &value);
                }
            }
        }
        out
    }

    /// Cup product of two cocycles; rejects inputs that are not cocycles.
    pub fn cup_cocycles(&self, m: i64, a: &F2Vector, n: i64, b: &F2Vector) -> Result<F2Vector> {
        if a.len() != self.left.complex.dim(m) || !self.left.complex.apply(m, a).is_zero() {
            return Err(Error::NotACocycle(format!("left input in degree {m}")));
        }
        if b.len() != self.right.complex.dim(n) || !self.right.complex.apply(n, b).is_zero() {
            return Err(Error::NotACocycle(format!("right input in degree {n}")));
        }
        Ok(self.cup(m, a, n, b))
    }

    /// Cup product on cohomology in the bases of representatives:
    /// `table[(i, j)]` is the class of `rep_i ∪ rep_j`.
    pub fn table(
        &self,
        m: i64,
        n: i64,
        hl: &Cohomology,
        hr: &Cohomology,
        ht: &Cohomology,
    ) -> BTreeMap<(usize, usize), F2Vector> {
        let mut out = BTreeMap::new();
        for (i, a) in hl.representatives(m).iter().enumerate() {
            for (j, b) in hr.representatives(n).iter().enumerate() {
                let c = self.cup(m, a, n, b);
                out.insert((i, j), ht.class_of(m + n, &c).expect("cup of cocycles is a cocycle"));
            }
        }
        out
    }
}

/// The identity section of `Hom(E, E)` as a degree-0 cochain.
pub fn identity_section(hom_cochains: &TwistedCochains, e: &LocalSystem) -> F2Vector {
    let values: Vec<F2Vector> = (0..e.base().vertex_count())
        .map(|v| {
            let h = HomComplex::new(e.fibre(v), e.fibre(v));
            let id = h.identity();
            id.embed(h.complex().space().total_dim(), h.complex().flat_offset(0))
        })
        .collect();
    hom_cochains.from_vertex_values(&values)
}

/// The unit class: the degree-0 cochain that is 1 on every vertex of the
/// constant rank-one system.
pub fn unit_cochain(cochains: &TwistedCochains) -> F2Vector {
    let n = cochains.system().base().vertex_count();
    cochains.from_vertex_values(&vec![F2Vector::unit(1, 0); n])
}
