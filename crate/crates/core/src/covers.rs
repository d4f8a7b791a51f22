//! Finite covers of simplicial complexes, pullback and pushforward of local
//! systems, and the adjunction between them.

use std::collections::BTreeMap;

use crate::chain::{ChainMap, Cohomology, Complex, ComplexBuilder};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::simplicial::{
    graded_blocks, BilinearMap, CupProduct, EdgePathGroup, LocalSystem, Pairing, SimplicialComplex,
    TwistedCochains,
};

/// A permutation of `0..n` as the list of images.
pub type Permutation = Vec<usize>;

fn compose_perm(after: &Permutation, before: &Permutation) -> Permutation {
    before.iter().map(|&i| after[i]).collect()
}

fn invert_perm(p: &Permutation) -> Permutation {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn is_permutation(p: &Permutation, n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Permutation matrix sending `e_f` to `e_{p(f)}`.
pub fn permutation_matrix(p: &Permutation) -> F2Matrix {
    let mut m = F2Matrix::zeros(p.len(), p.len());
    for (f, &g) in p.iter().enumerate() {
        m.set(g, f, true);
    }
    m
}

/// A finite cover built from a permutation action of the edge-path group.
///
/// The lift of base vertex `v` on sheet `f` is total vertex `v * sheets + f`,
/// so lifting preserves the vertex order and the minimal vertex of a lifted
/// simplex lies over the minimal vertex of its image.
#[derive(Clone, Debug)]
pub struct Cover {
    base: SimplicialComplex,
    total: SimplicialComplex,
    sheets: usize,
    /// For each base edge `a < b`, the sheet permutation `(a, f) -> (b, p[f])`.
    edge_perms: BTreeMap<(usize, usize), Permutation>,
}

impl Cover {
    /// Builds the `sheets`-sheeted cover from images of the surviving
    /// generators of `group`.
    pub fn new(
        base: &SimplicialComplex,
        group: &EdgePathGroup,
        sheets: usize,
        rep: &[Permutation],
    ) -> Result<Cover> {
        if rep.len() != group.generator_count() {
            return Err(Error::Input(format!(
                "{} permutations for {} generators",
                rep.len(),
                group.generator_count()
            )));
        }
        if sheets == 0 {
            return Err(Error::Input("a cover needs at least one sheet".into()));
        }
        for p in rep {
            if !is_permutation(p, sheets) {
                return Err(Error::Input(format!("{p:?} is not a permutation of 0..{sheets}")));
            }
        }
        let identity: Permutation = (0..sheets).collect();
        group.check_relators(rep, invert_perm, compose_perm, &identity)?;
        let mut edge_perms = BTreeMap::new();
        for e in base.edges() {
            let p = EdgePathGroup::evaluate(&group.edge_word(e[0], e[1]), rep, invert_perm, compose_perm, &identity);
            edge_perms.insert((e[0], e[1]), p);
        }
        let mut lifted = Vec::new();
        for d in 0..=base.dimension().max(0) as usize {
            for s in base.simplices(d) {
                for f in 0..sheets {
                    lifted.push(lift(s, f, sheets, &edge_perms));
                }
            }
        }
        let total = SimplicialComplex::new(base.vertex_count() * sheets, &lifted)?;
        let cover = Cover { base: base.clone(), total, sheets, edge_perms };
        cover.check_lifts()?;
        Ok(cover)
    }

    /// The trivial one-sheeted cover.
    pub fn identity(base: &SimplicialComplex) -> Result<Cover> {
        let group = EdgePathGroup::new(base, 0)?;
        let rep = vec![vec![0]; group.generator_count()];
        Cover::new(base, &group, 1, &rep)
    }

    fn check_lifts(&self) -> Result<()> {
        for d in 0..=self.base.dimension().max(0) as usize {
            if self.total.count(d) != self.sheets * self.base.count(d) {
                return Err(Error::RelatorViolation(format!(
                    "{} lifted {d}-simplices, expected {}",
                    self.total.count(d),
                    self.sheets * self.base.count(d)
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sheets(&self) -> usize {
        self.sheets
    }

    pub fn project(&self, total_vertex: usize) -> usize {
        total_vertex / self.sheets
    }

    pub fn sheet(&self, total_vertex: usize) -> usize {
        total_vertex % self.sheets
    }

    pub fn lift_vertex(&self, v: usize, f: usize) -> usize {
        v * self.sheets + f
    }

    /// Sheet permutation along the base edge from `a` to `b`.
    pub fn edge_perm(&self, a: usize, b: usize) -> Permutation {
        if a < b {
            self.edge_perms[&(a, b)].clone()
        } else {
            invert_perm(&self.edge_perms[&(b, a)])
        }
    }

    /// Lift of the base simplex `s` starting on sheet `f` over `min s`.
    pub fn lift(&self, s: &[usize], f: usize) -> Vec<usize> {
        lift(s, f, self.sheets, &self.edge_perms)
    }

    pub fn is_connected(&self) -> bool {
        self.total.is_connected()
    }

    /// Pullback `π^* E`: the fibre over a lift is the fibre below, and lifted
    /// edges carry the transport of their image.
    pub fn pullback(&self, e: &LocalSystem) -> Result<LocalSystem> {
        if e.base() != &self.base {
            return Err(Error::InvalidLocalSystem("system is not on the base of the cover".into()));
        }
        let fibres = (0..self.total.vertex_count()).map(|v| e.fibre(self.project(v)).clone()).collect();
        let mut transports = BTreeMap::new();
        for te in self.total.edges() {
            let (a, b) = (self.project(te[0]), self.project(te[1]));
            transports.insert((te[0], te[1]), e.transport(a, b).clone());
        }
        LocalSystem::new(self.total.clone(), fibres, transports)
    }

    /// Pushforward `π_* E`: the fibre over `v` is the sum of the fibres over
    /// its lifts, ordered by sheet within each degree.
    pub fn pushforward(&self, e: &LocalSystem) -> Result<LocalSystem> {
        if e.base() != &self.total {
            return Err(Error::InvalidLocalSystem("system is not on the total space".into()));
        }
        let fibres: Vec<Complex> = (0..self.base.vertex_count()).map(|v| self.sum_fibre(e, v)).collect();
        let mut transports = BTreeMap::new();
        for be in self.base.edges() {
            let (a, b) = (be[0], be[1]);
            let p = &self.edge_perms[&(a, b)];
            let n = fibres[a].space().total_dim();
            let mut m = F2Matrix::zeros(n, n);
            for f in 0..self.sheets {
                let (ta, tb) = (self.lift_vertex(a, f), self.lift_vertex(b, p[f]));
                let blocks = graded_blocks(e.fibre(ta), e.fibre(tb), e.transport(ta, tb));
                for (k, blk) in blocks {
                    let r0 = self.sum_offset(e, b, p[f], k);
                    let c0 = self.sum_offset(e, a, f, k);
                    if blk.rows() > 0 && blk.cols() > 0 {
                        m.set_block(r0, c0, &blk);
                    }
                }
            }
            transports.insert((a, b), m);
        }
        LocalSystem::new(self.base.clone(), fibres, transports)
    }

    fn sum_fibre(&self, e: &LocalSystem, v: usize) -> Complex {
        let mut b = ComplexBuilder::new();
        let mut ids = Vec::new();
        let mut degrees: Vec<i64> =
            (0..self.sheets).flat_map(|f| e.fibre(self.lift_vertex(v, f)).space().degrees().collect::<Vec<_>>()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut id_of: BTreeMap<(usize, i64, usize), usize> = BTreeMap::new();
        for &k in &degrees {
            for f in 0..self.sheets {
                let fib = e.fibre(self.lift_vertex(v, f));
                for (i, l) in fib.space().labels(k).iter().enumerate() {
                    let id = b.generator(k, format!("s{f}:{l}"));
                    id_of.insert((f, k, i), id);
                    ids.push(id);
                }
            }
        }
        for f in 0..self.sheets {
            let fib = e.fibre(self.lift_vertex(v, f));
            for k in fib.space().degrees() {
                if let Some(d) = fib.d_ref(k) {
                    for j in 0..d.cols() {
                        for i in d.column(j).ones() {
                            b.entry(id_of[&(f, k, j)], id_of[&(f, k + 1, i)]);
                        }
                    }
                }
            }
        }
        b.build().expect("a sum of complexes is a complex")
    }

    /// Flat offset of the sheet-`f` block of degree `k` in the pushforward
    /// fibre over `v`.
    fn sum_offset(&self, e: &LocalSystem, v: usize, f: usize, k: i64) -> usize {
        let mut off = 0;
        for f2 in 0..self.sheets {
            let fib = e.fibre(self.lift_vertex(v, f2));
            for d in fib.space().degrees() {
                if d < k || (d == k && f2 < f) {
                    off += fib.dim(d);
                }
            }
        }
        off
    }

    /// The identification of twisted cochains `C(base, π_* E) -> C(total, E)`
    /// sending the sheet-`f` component at `σ` to the lift of `σ` starting on
    /// sheet `f`. Checked to be a chain isomorphism.
    pub fn adjunction_map(
        &self,
        pushed: &TwistedCochains,
        upstairs: &TwistedCochains,
    ) -> Result<ChainMap> {
        let e = upstairs.system();
        let mut maps: BTreeMap<i64, F2Matrix> = BTreeMap::new();
        for n in pushed.complex().space().degrees() {
            maps.insert(n, F2Matrix::zeros(upstairs.complex().dim(n), pushed.complex().dim(n)));
        }
        for p in 0..=self.base.dimension().max(0) as usize {
            for (si, s) in self.base.simplices(p).iter().enumerate() {
                for f in 0..self.sheets {
                    let lifted = self.lift(s, f);
                    let ti = self.total.index_of(&lifted).expect("lift exists");
                    let fib = e.fibre(lifted[0]);
                    for q in fib.space().degrees() {
                        let base_off = self.sum_offset(e, s[0], f, q) - pushed.system().fibre(s[0]).flat_offset(q);
                        for i in 0..fib.dim(q) {
                            let (n, col) = pushed.index(p, si, q, base_off + i).expect("base generator");
                            let (n2, row) = upstairs.index(p, ti, q, i).expect("total generator");
                            debug_assert_eq!(n, n2);
                            maps.get_mut(&n).unwrap().set(row, col, true);
                        }
                    }
                }
            }
        }
        for (n, m) in &maps {
            if !m.is_invertible() {
                return Err(Error::NotAChainMap(format!("identification is not bijective in degree {n}")));
            }
        }
        ChainMap::new(pushed.complex().clone(), upstairs.complex().clone(), 0, maps)
    }

    /// Compares `H^*(base, π_* E)` with `H^*(total, E)`.
    pub fn adjunction_check(&self, e: &LocalSystem) -> Result<AdjunctionReport> {
        let pushed = TwistedCochains::new(&self.pushforward(e)?);
        let upstairs = TwistedCochains::new(e);
        let base_dims = pushed.complex().cohomology_dims();
        let total_dims = upstairs.complex().cohomology_dims();
        let chain_isomorphism = self.adjunction_map(&pushed, &upstairs).is_ok();
        let mismatch = base_dims
            .keys()
            .chain(total_dims.keys())
            .copied()
            .find(|k| base_dims.get(k) != total_dims.get(k));
        Ok(AdjunctionReport { base_dims, total_dims, chain_isomorphism, mismatch })
    }

    /// Blockwise pairing on pushforwards induced by a pairing upstairs.
    pub fn pushforward_pairing(&self, pairing: &Pairing) -> Result<Pairing> {
        let (l, r, t) = (pairing.left(), pairing.right(), pairing.target());
        let (pl, pr, pt) = (self.pushforward(l)?, self.pushforward(r)?, self.pushforward(t)?);
        let mut maps = Vec::new();
        for v in 0..self.base.vertex_count() {
            let mut m = BilinearMap::zero(pl.fibre_dim(v), pr.fibre_dim(v), pt.fibre_dim(v));
            for f in 0..self.sheets {
                let tv = self.lift_vertex(v, f);
                let (fl, fr, ft) = (l.fibre(tv), r.fibre(tv), t.fibre(tv));
                let up = pairing.map(tv);
                let (dl, dr) = (fl.basis_degrees(), fr.basis_degrees());
                for i in 0..fl.space().total_dim() {
                    for j in 0..fr.space().total_dim() {
                        let value = up.get(i, j);
                        if value.is_zero() {
                            continue;
                        }
                        let bi = self.sum_offset(l, v, f, dl[i]) + i - fl.flat_offset(dl[i]);
                        let bj = self.sum_offset(r, v, f, dr[j]) + j - fr.flat_offset(dr[j]);
                        let mut out = F2Vector::zeros(pt.fibre_dim(v));
                        let dt = ft.basis_degrees();
                        for o in value.ones() {
                            out.set(self.sum_offset(t, v, f, dt[o]) + o - ft.flat_offset(dt[o]), true);
                        }
                        m.set(bi, bj, out);
                    }
                }
            }
            maps.push(m);
        }
        Pairing::new(pl, pr, pt, maps)
    }

    /// Checks that cup products computed downstairs with the pushforward
    /// pairing agree with cup products upstairs through the adjunction
    /// identification, on all pairs of cohomology basis classes of degrees
    /// `m` and `n`.
    pub fn pairing_compatibility(&self, pairing: &Pairing, m: i64, n: i64) -> Result<bool> {
        let down = CupProduct::new(self.pushforward_pairing(pairing)?);
        let up = CupProduct::new(pairing.clone());
        let phi_l = self.adjunction_map(down.left(), up.left())?;
        let phi_r = self.adjunction_map(down.right(), up.right())?;
        let phi_t = self.adjunction_map(down.target(), up.target())?;
        let hl: Cohomology = down.left().complex().cohomology();
        let hr = down.right().complex().cohomology();
        let ht_up = up.target().complex().cohomology();
        for a in hl.representatives(m) {
            for b in hr.representatives(n) {
                let c = down.cup(m, a, n, b);
                let lhs = phi_t.component(m + n).mul_vec(&c)?;
                let ua = phi_l.component(m).mul_vec(a)?;
                let ub = phi_r.component(n).mul_vec(b)?;
                let rhs = up.cup(m, &ua, n, &ub);
                if !ht_up.is_exact(m + n, &lhs.add(&rhs)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn lift(s: &[usize], f: usize, sheets: usize, edge_perms: &BTreeMap<(usize, usize), Permutation>) -> Vec<usize> {
    let v0 = s[0];
    s.iter()
        .map(|&v| {
            let g = if v == v0 { f } else { edge_perms[&(v0, v)][f] };
            v * sheets + g
        })
        .collect()
}

/// Outcome of [`Cover::adjunction_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub base_dims: BTreeMap<i64, usize>,
    pub total_dims: BTreeMap<i64, usize>,
    /// Whether the lift identification of cochain groups is a chain isomorphism.
    pub chain_isomorphism: bool,
    /// First degree where the dimensions differ.
    pub mismatch: Option<i64>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none() && self.chain_isomorphism
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_helpers() {
        let p = vec![1, 2, 0];
        assert_eq!(compose_perm(&invert_perm(&p), &p), vec![0, 1, 2]);
        assert!(!is_permutation(&vec![0, 0], 2));
        assert_eq!(permutation_matrix(&vec![1, 0]), F2Matrix::from_dense(&[vec![0, 1], vec![1, 0]]).unwrap());
    }

    #[test]
    fn relator_violation_rejected() {
        let rp2 = SimplicialComplex::projective_plane();
        let g = EdgePathGroup::new(&rp2, 0).unwrap();
        let r = Cover::new(&rp2, &g, 3, &[vec![1, 2, 0]]);
        assert!(matches!(r, Err(Error::RelatorViolation(_))));
    }
}
