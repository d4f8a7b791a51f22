use std::collections::BTreeMap;

use super::complex::SimplicialComplex;
use crate::chain::{Complex, GradedSpace, HomComplex};
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;

/// A local system of complexes on a simplicial complex.
///
/// Each vertex carries a fibre complex. Transports are stored for every edge
/// `a < b` in the direction `a -> b` as one matrix on the flattened fibres
/// (degrees concatenated in ascending order); they are degree-preserving,
/// invertible, commute with the fibre differentials, and compose around
/// every triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    base: SimplicialComplex,
    fibres: Vec<Complex>,
    forward: BTreeMap<(usize, usize), F2Matrix>,
    backward: BTreeMap<(usize, usize), F2Matrix>,
}

impl LocalSystem {
    /// Validates and builds a system. `transports` may name an edge in
    /// either orientation; edges left out get the identity, which requires
    /// equal fibres at the two ends.
    pub fn new(
        base: SimplicialComplex,
        fibres: Vec<Complex>,
        transports: BTreeMap<(usize, usize), F2Matrix>,
    ) -> Result<LocalSystem> {
        if fibres.len() != base.vertex_count() {
            return Err(Error::InvalidLocalSystem(format!(
                "{} fibres for {} vertices",
                fibres.len(),
                base.vertex_count()
            )));
        }
        let mut given: BTreeMap<(usize, usize), F2Matrix> = BTreeMap::new();
        for ((a, b), m) in transports {
            if !base.contains(&sorted_edge(a, b)) {
                return Err(Error::InvalidLocalSystem(format!("({a},{b}) is not an edge")));
            }
            let (key, m) = if a < b {
                ((a, b), m)
            } else {
                let inv = m.inverse().map_err(|_| {
                    Error::InvalidLocalSystem(format!("transport along ({a},{b}) is not invertible"))
                })?;
                ((b, a), inv)
            };
            if given.insert(key, m).is_some() {
                return Err(Error::InvalidLocalSystem(format!("edge {key:?} given twice")));
            }
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for e in base.edges() {
            let (a, b) = (e[0], e[1]);
            let m = match given.remove(&(a, b)) {
                Some(m) => m,
                None => {
                    if fibres[a].space().dims() != fibres[b].space().dims() {
                        return Err(Error::InvalidLocalSystem(format!(
                            "no transport for ({a},{b}) and the fibres differ"
                        )));
                    }
                    F2Matrix::identity(fibres[a].space().total_dim())
                }
            };
            check_transport(&fibres[a], &fibres[b], &m)
                .map_err(|msg| Error::InvalidLocalSystem(format!("edge ({a},{b}): {msg}")))?;
            let inv = m.inverse().map_err(|_| {
                Error::InvalidLocalSystem(format!("transport along ({a},{b}) is not invertible"))
            })?;
            forward.insert((a, b), m);
            backward.insert((a, b), inv);
        }
        let sys = LocalSystem { base, fibres, forward, backward };
        sys.check_flat()?;
        Ok(sys)
    }

    /// Constant system with fibre `fibre` and identity transports.
    pub fn trivial(base: &SimplicialComplex, fibre: &Complex) -> LocalSystem {
        let fibres = vec![fibre.clone(); base.vertex_count()];
        LocalSystem::new(base.clone(), fibres, BTreeMap::new()).expect("constant systems are flat")
    }

    /// Constant system `F2^rank` in degree 0.
    pub fn trivial_rank(base: &SimplicialComplex, rank: usize) -> LocalSystem {
        Self::trivial(base, &Complex::zero_differential(GradedSpace::from_dims([(0, rank)])))
    }

    /// System with fibres `F2^{dims[v]}` in degree 0.
    pub fn from_degree_zero(
        base: SimplicialComplex,
        dims: &[usize],
        transports: BTreeMap<(usize, usize), F2Matrix>,
    ) -> Result<LocalSystem> {
        let fibres = dims
            .iter()
            .map(|&n| Complex::zero_differential(GradedSpace::from_dims([(0, n)])))
            .collect();
        LocalSystem::new(base, fibres, transports)
    }

    fn check_flat(&self) -> Result<()> {
        for t in self.base.simplices(2) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let lhs = self.forward[&(b, c)].mul(&self.forward[&(a, b)])?;
            if lhs != self.forward[&(a, c)] {
                return Err(Error::NotFlat(format!("transport around [{a},{b},{c}] is not the identity")));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn fibre(&self, v: usize) -> &Complex {
        &self.fibres[v]
    }

    pub fn fibres(&self) -> &[Complex] {
        &self.fibres
    }

    pub fn fibre_dim(&self, v: usize) -> usize {
        self.fibres[v].space().total_dim()
    }

    /// Transport from `a` to `b` along an edge.
    ///
    /// # Panics
    /// Panics if `a == b` or `{a, b}` is not an edge; see
    /// [`LocalSystem::transport_owned`] for the former.
    pub fn transport(&self, a: usize, b: usize) -> &F2Matrix {
        assert_ne!(a, b, "transport needs two distinct vertices");
        if a < b {
            &self.forward[&(a, b)]
        } else {
            &self.backward[&(b, a)]
        }
    }

    /// Like [`LocalSystem::transport`] but also handles `a == b`.
    pub fn transport_owned(&self, a: usize, b: usize) -> F2Matrix {
        if a == b {
            F2Matrix::identity(self.fibre_dim(a))
        } else {
            self.transport(a, b).clone()
        }
    }

    /// Forward transports keyed by edges `a < b`.
    pub fn transports(&self) -> &BTreeMap<(usize, usize), F2Matrix> {
        &self.forward
    }

    /// Transport along a vertex path.
    pub fn path_transport(&self, path: &[usize]) -> F2Matrix {
        let mut m = F2Matrix::identity(self.fibre_dim(path[0]));
        for w in path.windows(2) {
            m = self.transport(w[0], w[1]).mul(&m).expect("fibre dimensions agree along edges");
        }
        m
    }

    /// Whether every fibre is concentrated in degree 0 with zero differential.
    pub fn is_degree_zero(&self) -> bool {
        self.fibres.iter().all(|f| f.space().degrees().all(|k| k == 0))
    }

    /// The system `v -> Hom(E1_v, E2_v)` with transport `φ -> t2 φ t1^{-1}`.
    pub fn hom(e1: &LocalSystem, e2: &LocalSystem) -> Result<LocalSystem> {
        if e1.base != e2.base {
            return Err(Error::InvalidLocalSystem("Hom of systems on different bases".into()));
        }
        let homs: Vec<HomComplex> =
            (0..e1.base.vertex_count()).map(|v| HomComplex::new(&e1.fibres[v], &e2.fibres[v])).collect();
        let mut transports = BTreeMap::new();
        for (&(a, b), _) in &e1.forward {
            let pre = graded_blocks(&e1.fibres[b], &e1.fibres[a], e1.transport(b, a));
            let post = graded_blocks(&e2.fibres[a], &e2.fibres[b], e2.transport(a, b));
            let blocks = homs[a].conjugation(&homs[b], &pre, &post);
            transports.insert((a, b), flatten_blocks(homs[a].complex(), homs[b].complex(), &blocks));
        }
        let fibres = homs.iter().map(|h| h.complex().clone()).collect();
        LocalSystem::new(e1.base.clone(), fibres, transports)
    }

    /// Direct sum of two systems on the same base.
    pub fn direct_sum(&self, other: &LocalSystem) -> Result<LocalSystem> {
        if self.base != other.base {
            return Err(Error::InvalidLocalSystem("direct sum over different bases".into()));
        }
        let fibres: Vec<Complex> =
            self.fibres.iter().zip(&other.fibres).map(|(a, b)| a.direct_sum(b)).collect();
        let mut transports = BTreeMap::new();
        for (&(a, b), m) in &self.forward {
            // The direct sum interleaves degrees, so permute the block-diagonal matrix.
            let blocks_l = graded_blocks(&self.fibres[a], &self.fibres[b], m);
            let blocks_r = graded_blocks(&other.fibres[a], &other.fibres[b], &other.forward[&(a, b)]);
            let mut blocks = BTreeMap::new();
            for k in fibres[a].space().degrees() {
                let l = blocks_l.get(&k).cloned().unwrap_or_else(|| F2Matrix::zeros(0, 0));
                let r = blocks_r.get(&k).cloned().unwrap_or_else(|| F2Matrix::zeros(0, 0));
                blocks.insert(k, F2Matrix::block_diagonal(&[l, r]));
            }
            transports.insert((a, b), flatten_blocks(&fibres[a], &fibres[b], &blocks));
        }
        LocalSystem::new(self.base.clone(), fibres, transports)
    }
}

pub(crate) fn sorted_edge(a: usize, b: usize) -> Vec<usize> {
    if a < b {
        vec![a, b]
    } else {
        vec![b, a]
    }
}

/// Checks that `m` (on flattened fibres) is degree-preserving and commutes
/// with the fibre differentials.
fn check_transport(src: &Complex, tgt: &Complex, m: &F2Matrix) -> std::result::Result<(), String> {
    let (n, n2) = (src.space().total_dim(), tgt.space().total_dim());
    if m.cols() != n || m.rows() != n2 {
        return Err(format!("transport is {}x{} but fibres have dimensions {n} -> {n2}", m.rows(), m.cols()));
    }
    if src.space().dims() != tgt.space().dims() {
        return Err("fibres have different graded dimensions".into());
    }
    let (ds, dt) = (src.basis_degrees(), tgt.basis_degrees());
    for i in 0..m.rows() {
        for j in m.row(i).ones() {
            if dt[i] != ds[j] {
                return Err("transport does not preserve degree".into());
            }
        }
    }
    if m.mul(&src.total_differential()).unwrap() != tgt.total_differential().mul(m).unwrap() {
        return Err("transport does not commute with the fibre differentials".into());
    }
    Ok(())
}

/// Splits a degree-preserving matrix on flattened spaces into its blocks.
pub(crate) fn graded_blocks(src: &Complex, tgt: &Complex, m: &F2Matrix) -> BTreeMap<i64, F2Matrix> {
    let mut out = BTreeMap::new();
    for k in src.space().degrees() {
        if tgt.dim(k) == 0 {
            continue;
        }
        let rows: Vec<usize> = (0..tgt.dim(k)).map(|i| tgt.flat_offset(k) + i).collect();
        let cols: Vec<usize> = (0..src.dim(k)).map(|i| src.flat_offset(k) + i).collect();
        out.insert(k, m.submatrix(&rows, &cols));
    }
    out
}

/// Inverse of [`graded_blocks`].
pub(crate) fn flatten_blocks(src: &Complex, tgt: &Complex, blocks: &BTreeMap<i64, F2Matrix>) -> F2Matrix {
    let mut m = F2Matrix::zeros(tgt.space().total_dim(), src.space().total_dim());
    for (&k, b) in blocks {
        if b.rows() > 0 && b.cols() > 0 {
            m.set_block(tgt.flat_offset(k), src.flat_offset(k), b);
        }
    }
    m
}
