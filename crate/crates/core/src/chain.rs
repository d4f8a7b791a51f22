//! Graded spaces and cochain complexes over F2.
//!
//! Degrees are cohomological: the differential raises degree by one.
//! Homologically graded data is stored with negated degree.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::f2linalg::{EchelonBasis, F2Matrix, F2Vector, LinearSolver};

/// A finite-dimensional graded vector space with labelled bases.
///
/// Degrees with no basis elements are never stored, so two spaces with the
/// same labels in the same degrees compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSpace {
    degrees: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    /// A space with unnamed basis vectors `"e{i}"` of the given dimensions.
    pub fn from_dims(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut s = Self::new();
        for (k, n) in dims {
            for i in 0..n {
                s.push(k, format!("e{i}"));
            }
        }
        s
    }

    /// Appends a basis element and returns its index within its degree.
    ///
    /// # Panics
    /// Panics if the label already exists in that degree.
    pub fn push(&mut self, degree: i64, label: impl Into<String>) -> usize {
        let label = label.into();
        let v = self.degrees.entry(degree).or_default();
        assert!(!v.contains(&label), "duplicate label {label} in degree {degree}");
        v.push(label);
        v.len() - 1
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }

    /// Nonempty degrees, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.degrees.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, degree: i64, label: &str) -> Option<usize> {
        self.labels(degree).iter().position(|l| l == label)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|(&k, v)| (k, v.len())).collect()
    }

    /// Degree `d` of the result is degree `d + k` of `self`.
    pub fn shift(&self, k: i64) -> GradedSpace {
        GradedSpace { degrees: self.degrees.iter().map(|(&d, v)| (d - k, v.clone())).collect() }
    }
}

/// A bounded cochain complex: a graded space with `d_k: C^k -> C^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    space: GradedSpace,
    /// `d_k` is stored only when both `C^k` and `C^{k+1}` are nonzero.
    diff: BTreeMap<i64, F2Matrix>,
}

impl Complex {
    /// Builds a complex, checking shapes and `d_{k+1} d_k = 0`.
    pub fn new(space: GradedSpace, diff: BTreeMap<i64, F2Matrix>) -> Result<Complex> {
        let mut stored = BTreeMap::new();
        for (k, m) in diff {
            let (src, tgt) = (space.dim(k), space.dim(k + 1));
            if m.cols() != src || m.rows() != tgt {
                return Err(Error::DimensionMismatch(format!(
                    "d_{k} is {}x{} but the degrees have dimensions {src} -> {tgt}",
                    m.rows(),
                    m.cols()
                )));
            }
            if src > 0 && tgt > 0 {
                stored.insert(k, m);
            }
        }
        let c = Complex { space, diff: stored };
        c.check_square_zero()?;
        Ok(c)
    }

    /// A complex with zero differential.
    pub fn zero_differential(space: GradedSpace) -> Complex {
        Complex { space, diff: BTreeMap::new() }
    }

    /// F2 concentrated in degree `k`.
    pub fn unit(k: i64) -> Complex {
        Complex::zero_differential(GradedSpace::from_dims([(k, 1)]))
    }

    fn check_square_zero(&self) -> Result<()> {
        for (&k, m) in &self.diff {
            if let Some(next) = self.diff.get(&(k + 1)) {
                if !next.mul(m)?.is_zero() {
                    return Err(Error::NotAComplex(format!("d_{} d_{k} != 0", k + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, k: i64) -> usize {
        self.space.dim(k)
    }

    /// `d_k` as a `dim(k+1) x dim(k)` matrix (zero if not stored).
    pub fn d(&self, k: i64) -> F2Matrix {
        self.diff
            .get(&k)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    pub fn d_ref(&self, k: i64) -> Option<&F2Matrix> {
        self.diff.get(&k)
    }

    /// Applies `d_k` to a vector of `C^k`.
    pub fn apply(&self, k: i64, v: &F2Vector) -> F2Vector {
        assert_eq!(v.len(), self.dim(k), "vector is not in degree {k}");
        match self.diff.get(&k) {
            Some(m) => m.mul_vec(v).expect("shape checked"),
            None => F2Vector::zeros(self.dim(k + 1)),
        }
    }

    /// Degrees of all basis vectors, ascending, for the flattened layout
    /// that concatenates the degrees in order.
    pub fn basis_degrees(&self) -> Vec<i64> {
        self.space.degrees().flat_map(|k| std::iter::repeat(k).take(self.dim(k))).collect()
    }

    /// Offset of degree `k` in the flattened layout.
    pub fn flat_offset(&self, k: i64) -> usize {
        self.space.degrees().take_while(|&d| d < k).map(|d| self.dim(d)).sum()
    }

    /// The whole differential as one square matrix on the flattened space.
    pub fn total_differential(&self) -> F2Matrix {
        let n = self.space.total_dim();
        let mut m = F2Matrix::zeros(n, n);
        for (&k, d) in &self.diff {
            let (c0, r0) = (self.flat_offset(k), self.flat_offset(k + 1));
            m.set_block(r0, c0, d);
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.space.degrees().map(|k| sign(k) * self.dim(k) as i64).sum()
    }

    fn rank_d(&self, k: i64) -> usize {
        self.diff.get(&k).map_or(0, F2Matrix::rank)
    }

    /// Cohomology dimensions only; cheaper than [`Complex::cohomology`].
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let ranks: HashMap<i64, usize> = self.diff.keys().map(|&k| (k, self.rank_d(k))).collect();
        let mut out = BTreeMap::new();
        for k in self.space.degrees() {
            let r_out = ranks.get(&k).copied().unwrap_or(0);
            let r_in = ranks.get(&(k - 1)).copied().unwrap_or(0);
            let h = self.dim(k) - r_out - r_in;
            if h > 0 {
                out.insert(k, h);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    pub fn cohomology(&self) -> Cohomology {
        let mut degrees = BTreeMap::new();
        for k in self.space.degrees() {
            let n = self.dim(k);
            let cycles = match self.diff.get(&k) {
                Some(m) => m.kernel_basis(),
                None => (0..n).map(|i| F2Vector::unit(n, i)).collect(),
            };
            let boundaries: Vec<F2Vector> = match self.diff.get(&(k - 1)) {
                Some(m) => (0..m.cols()).map(|j| m.column(j)).collect(),
                None => Vec::new(),
            };
            let mut span = EchelonBasis::new(n);
            let mut boundary_basis = Vec::new();
            for b in boundaries {
                if span.insert(&b) {
                    boundary_basis.push(b);
                }
            }
            let mut reps = Vec::new();
            for z in cycles {
                if span.insert(&z) {
                    reps.push(z);
                }
            }
            if reps.is_empty() {
                continue;
            }
            let mut cols = boundary_basis.clone();
            cols.extend(reps.iter().cloned());
            let solver = LinearSolver::new(&F2Matrix::from_columns(n, &cols));
            degrees.insert(
                k,
                DegreeCohomology { boundary_rank: boundary_basis.len(), representatives: reps, solver },
            );
        }
        Cohomology { degrees, complex: self.clone() }
    }

    /// Degree `d` of the result is degree `d + k` of `self`.
    pub fn shift(&self, k: i64) -> Complex {
        Complex {
            space: self.space.shift(k),
            diff: self.diff.iter().map(|(&d, m)| (d - k, m.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Complex) -> Complex {
        let mut b = ComplexBuilder::new();
        let left = b.add_complex(self, "0:");
        let right = b.add_complex(other, "1:");
        let _ = (left, right);
        b.build().expect("direct sum of complexes is a complex")
    }

    /// Tensor product with `d(a⊗b) = da⊗b + a⊗db`.
    pub fn tensor(&self, other: &Complex) -> Complex {
        let mut b = ComplexBuilder::new();
        let mut ids: HashMap<(i64, usize, i64, usize), usize> = HashMap::new();
        for p in self.space.degrees() {
            for q in other.space.degrees() {
                for i in 0..self.dim(p) {
                    for j in 0..other.dim(q) {
                        let label =
                            format!("{}@{p}⊗{}@{q}", self.space.labels(p)[i], other.space.labels(q)[j]);
                        ids.insert((p, i, q, j), b.generator(p + q, label));
                    }
                }
            }
        }
        for (&(p, i, q, j), &id) in &ids {
            if let Some(m) = self.diff.get(&p) {
                for r in 0..m.rows() {
                    if m.get(r, i) {
                        b.entry(id, ids[&(p + 1, r, q, j)]);
                    }
                }
            }
            if let Some(m) = other.diff.get(&q) {
                for r in 0..m.rows() {
                    if m.get(r, j) {
                        b.entry(id, ids[&(p, i, q + 1, r)]);
                    }
                }
            }
        }
        b.build().expect("tensor product of complexes is a complex")
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug)]
struct DegreeCohomology {
    boundary_rank: usize,
    representatives: Vec<F2Vector>,
    /// Columns: a basis of the boundaries followed by the representatives.
    solver: LinearSolver,
}

/// Cohomology of a [`Complex`] with chosen representatives and a way to
/// read off the class of any cocycle.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degrees: BTreeMap<i64, DegreeCohomology>,
    complex: Complex,
}

impl Cohomology {
    pub fn dim(&self, k: i64) -> usize {
        self.degrees.get(&k).map_or(0, |d| d.representatives.len())
    }

    /// Nonzero dimensions only.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|(&k, d)| (k, d.representatives.len())).collect()
    }

    pub fn representatives(&self, k: i64) -> &[F2Vector] {
        self.degrees.get(&k).map_or(&[], |d| d.representatives.as_slice())
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn is_cocycle(&self, k: i64, v: &F2Vector) -> bool {
        self.complex.apply(k, v).is_zero()
    }

    /// Coordinates of the class of `v` in the basis of representatives, or
    /// `None` if `v` is not a cocycle.
    pub fn class_of(&self, k: i64, v: &F2Vector) -> Option<F2Vector> {
        if !self.is_cocycle(k, v) {
            return None;
        }
        match self.degrees.get(&k) {
            None => Some(F2Vector::zeros(0)),
            Some(d) => {
                let x = d.solver.solve(v).expect("cocycles lie in the span of boundaries and representatives");
                Some(x.slice(d.boundary_rank, d.representatives.len()))
            }
        }
    }

    /// Whether the cocycle `v` is a coboundary.
    pub fn is_exact(&self, k: i64, v: &F2Vector) -> bool {
        self.class_of(k, v).is_some_and(|c| c.is_zero())
    }

    /// The cocycle representing the given coordinates.
    pub fn cocycle(&self, k: i64, coords: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zeros(self.complex.dim(k));
        for i in coords.ones() {
            out.add_assign(&self.representatives(k)[i]);
        }
        out
    }
}

/// Incremental construction of a complex from labelled generators and
/// toggled differential entries.
#[derive(Clone, Debug, Default)]
pub struct ComplexBuilder {
    space: GradedSpace,
    /// Global id -> (degree, index within degree).
    position: Vec<(i64, usize)>,
    entries: Vec<(usize, usize)>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a generator and returns its global id.
    pub fn generator(&mut self, degree: i64, label: impl Into<String>) -> usize {
        let idx = self.space.push(degree, label);
        self.position.push((degree, idx));
        self.position.len() - 1
    }

    pub fn position(&self, id: usize) -> (i64, usize) {
        self.position[id]
    }

    /// Adds `to` to the differential of `from`. Repeated entries cancel.
    pub fn entry(&mut self, from: usize, to: usize) {
        self.entries.push((from, to));
    }

    /// Copies a complex in, prefixing labels; returns the ids per degree.
    pub fn add_complex(&mut self, c: &Complex, prefix: &str) -> BTreeMap<i64, Vec<usize>> {
        let mut ids = BTreeMap::new();
        for k in c.space.degrees() {
            let v: Vec<usize> = c
                .space
                .labels(k)
                .iter()
                .map(|l| self.generator(k, format!("{prefix}{l}")))
                .collect();
            ids.insert(k, v);
        }
        for (&k, m) in &c.diff {
            for j in 0..m.cols() {
                for i in m.column(j).ones() {
                    self.entry(ids[&k][j], ids[&(k + 1)][i]);
                }
            }
        }
        ids
    }

    pub fn build(self) -> Result<Complex> {
        let mut diff: BTreeMap<i64, F2Matrix> = BTreeMap::new();
        for (from, to) in self.entries {
            let (kf, i) = self.position[from];
            let (kt, j) = self.position[to];
            if kt != kf + 1 {
                return Err(Error::Degree(format!(
                    "differential entry from degree {kf} to degree {kt}"
                )));
            }
            diff.entry(kf)
                .or_insert_with(|| F2Matrix::zeros(self.space.dim(kf + 1), self.space.dim(kf)))
                .flip(j, i);
        }
        Complex::new(self.space, diff)
    }
}

/// A degreewise map of complexes raising degree by `shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    shift: i64,
    maps: BTreeMap<i64, F2Matrix>,
}

impl ChainMap {
    /// Validates shapes and `f d = d f`.
    pub fn new(
        source: Complex,
        target: Complex,
        shift: i64,
        maps: BTreeMap<i64, F2Matrix>,
    ) -> Result<ChainMap> {
        for (&k, m) in &maps {
            if m.cols() != source.dim(k) || m.rows() != target.dim(k + shift) {
                return Err(Error::DimensionMismatch(format!(
                    "component in degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(k + shift),
                    source.dim(k)
                )));
            }
        }
        let f = ChainMap { source, target, shift, maps };
        let degrees: Vec<i64> = f.source.space.degrees().collect();
        for k in degrees {
            let lhs = f.component(k + 1).mul(&f.source.d(k))?;
            let rhs = f.target.d(k + shift).mul(&f.component(k))?;
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("f d != d f in source degree {k}")));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &Complex) -> ChainMap {
        let maps = c.space.degrees().map(|k| (k, F2Matrix::identity(c.dim(k)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), shift: 0, maps }
    }

    pub fn zero(source: &Complex, target: &Complex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), shift: 0, maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn component(&self, k: i64) -> F2Matrix {
        self.maps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.target.dim(k + self.shift), self.source.dim(k)))
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch("composing maps with mismatched complexes".into()));
        }
        let mut maps = BTreeMap::new();
        for k in first.source.space.degrees() {
            let m = self.component(k + first.shift).mul(&first.component(k))?;
            maps.insert(k, m);
        }
        ChainMap::new(first.source.clone(), self.target.clone(), first.shift + self.shift, maps)
    }

    /// Rank of the induced map `H^k(source) -> H^{k+shift}(target)`.
    pub fn induced_rank(&self, k: i64, hs: &Cohomology, ht: &Cohomology) -> usize {
        let cols: Vec<F2Vector> = hs
            .representatives(k)
            .iter()
            .map(|z| {
                let fz = self.component(k).mul_vec(z).expect("shape checked");
                ht.class_of(k + self.shift, &fz).expect("chain maps send cocycles to cocycles")
            })
            .collect();
        F2Matrix::from_columns(ht.dim(k + self.shift), &cols).rank()
    }

    /// Whether the induced map on cohomology is an isomorphism.
    pub fn is_quasi_isomorphism(&self) -> bool {
        let hs = self.source.cohomology();
        let ht = self.target.cohomology();
        if hs.dims().into_iter().map(|(k, n)| (k + self.shift, n)).collect::<BTreeMap<_, _>>() != ht.dims() {
            return false;
        }
        hs.dims().iter().all(|(&k, &n)| self.induced_rank(k, &hs, &ht) == n)
    }
}

/// Mapping cone of a degree-0 chain map: `source[1] ⊕ target` with
/// differential `[[d_s, 0], [f, d_t]]`.
pub fn cone(f: &ChainMap) -> Result<Complex> {
    if f.shift != 0 {
        return Err(Error::NotAChainMap("the cone needs a map of degree 0".into()));
    }
    let mut b = ComplexBuilder::new();
    let src = f.source.shift(1);
    let s_ids = b.add_complex(&src, "s:");
    let t_ids = b.add_complex(&f.target, "t:");
    for (&k, m) in &f.maps {
        // Source degree k sits in cone degree k - 1 and maps to target degree k.
        for j in 0..m.cols() {
            for i in m.column(j).ones() {
                b.entry(s_ids[&(k - 1)][j], t_ids[&k][i]);
            }
        }
    }
    b.build()
}

/// `Hom(c0, c1)` with `δφ = φ δ0 + δ1 φ`; degree `k` holds maps raising
/// degree by `k`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    complex: Complex,
    source: Complex,
    target: Complex,
    /// (hom degree, source degree) -> offset of the block of maps
    /// `C0^p -> C1^{p+k}` within hom degree `k`, stored row-major as
    /// `(source index) * dim C1^{p+k} + (target index)`.
    offsets: BTreeMap<(i64, i64), usize>,
}

impl HomComplex {
    pub fn new(c0: &Complex, c1: &Complex) -> HomComplex {
        let mut hom_degrees: Vec<i64> = Vec::new();
        for p in c0.space.degrees() {
            for q in c1.space.degrees() {
                hom_degrees.push(q - p);
            }
        }
        hom_degrees.sort_unstable();
        hom_degrees.dedup();

        // Generators are created in (k, p, i, j) order, which is also the
        // layout used by `index`; `base[k]` is the first global id of degree k.
        let mut b = ComplexBuilder::new();
        let mut offsets = BTreeMap::new();
        let mut base: BTreeMap<i64, usize> = BTreeMap::new();
        let mut next_id = 0;
        for &k in &hom_degrees {
            base.insert(k, next_id);
            let mut count = 0;
            for p in c0.space.degrees() {
                let q = p + k;
                if c1.dim(q) == 0 {
                    continue;
                }
                offsets.insert((k, p), count);
                for i in 0..c0.dim(p) {
                    for j in 0..c1.dim(q) {
                        let label = format!("{}@{p}*⊗{}@{q}", c0.space.labels(p)[i], c1.space.labels(q)[j]);
                        b.generator(k, label);
                    }
                }
                count += c0.dim(p) * c1.dim(q);
            }
            next_id += count;
        }
        let mut hom = HomComplex {
            complex: Complex::zero_differential(GradedSpace::new()),
            source: c0.clone(),
            target: c1.clone(),
            offsets,
        };
        let id = |hom: &HomComplex, k: i64, p: i64, i: usize, j: usize| -> usize {
            base[&k] + hom.index(k, p, i, j).expect("basis element exists")
        };
        for &k in &hom_degrees {
            for p in c0.space.degrees() {
                let q = p + k;
                if c1.dim(q) == 0 {
                    continue;
                }
                for i in 0..c0.dim(p) {
                    for j in 0..c1.dim(q) {
                        let from = id(&hom, k, p, i, j);
                        // φ δ0: sources x in degree p-1 with e_i in δ0 x.
                        if let Some(d0) = c0.diff.get(&(p - 1)) {
                            for x in d0.row(i).ones() {
                                b.entry(from, id(&hom, k + 1, p - 1, x, j));
                            }
                        }
                        // δ1 φ: targets y in δ1 e_j.
                        if let Some(d1) = c1.diff.get(&q) {
                            for y in d1.column(j).ones() {
                                b.entry(from, id(&hom, k + 1, p, i, y));
                            }
                        }
                    }
                }
            }
        }
        hom.complex = b.build().expect("Hom of complexes is a complex");
        hom
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn target(&self) -> &Complex {
        &self.target
    }

    /// Index in hom degree `k` of the map sending basis vector `i` of
    /// `C0^p` to basis vector `j` of `C1^{p+k}`.
    pub fn index(&self, k: i64, p: i64, i: usize, j: usize) -> Option<usize> {
        let off = *self.offsets.get(&(k, p))?;
        let q = p + k;
        if i >= self.source.dim(p) || j >= self.target.dim(q) {
            return None;
        }
        Some(off + i * self.target.dim(q) + j)
    }

    /// Encodes a degree-`k` map given by per-degree matrices
    /// `C0^p -> C1^{p+k}`.
    pub fn encode(&self, k: i64, blocks: &BTreeMap<i64, F2Matrix>) -> F2Vector {
        let mut v = F2Vector::zeros(self.complex.dim(k));
        for (&p, m) in blocks {
            for i in 0..m.cols() {
                for j in m.column(i).ones() {
                    let idx = self.index(k, p, i, j).expect("block shape matches the complexes");
                    v.set(idx, true);
                }
            }
        }
        v
    }

    /// Inverse of [`HomComplex::encode`].
    pub fn decode(&self, k: i64, v: &F2Vector) -> BTreeMap<i64, F2Matrix> {
        let mut out = BTreeMap::new();
        for p in self.source.space.degrees() {
            let q = p + k;
            if self.target.dim(q) == 0 {
                continue;
            }
            let mut m = F2Matrix::zeros(self.target.dim(q), self.source.dim(p));
            for i in 0..self.source.dim(p) {
                for j in 0..self.target.dim(q) {
                    if v.get(self.index(k, p, i, j).unwrap()) {
                        m.set(j, i, true);
                    }
                }
            }
            out.insert(p, m);
        }
        out
    }

    /// The identity of `C0` as a degree-0 element (requires `c0 == c1`).
    pub fn identity(&self) -> F2Vector {
        assert_eq!(self.source, self.target, "identity needs equal source and target");
        let blocks = self
            .source
            .space
            .degrees()
            .map(|p| (p, F2Matrix::identity(self.source.dim(p))))
            .collect();
        self.encode(0, &blocks)
    }

    /// Matrix of `φ ↦ post ∘ φ ∘ pre` from `self` to `other`, where `pre`
    /// maps `other.source -> self.source` and `post` maps
    /// `self.target -> other.target` (both degree-preserving).
    pub fn conjugation(
        &self,
        other: &HomComplex,
        pre: &BTreeMap<i64, F2Matrix>,
        post: &BTreeMap<i64, F2Matrix>,
    ) -> BTreeMap<i64, F2Matrix> {
        let mut out = BTreeMap::new();
        for k in self.complex.space.degrees() {
            let n = self.complex.dim(k);
            let cols: Vec<F2Vector> = (0..n)
                .map(|idx| {
                    let blocks = self.decode(k, &F2Vector::unit(n, idx));
                    let mut image = BTreeMap::new();
                    for (&p, phi) in &blocks {
                        let q = p + k;
                        let (Some(a), Some(b)) = (pre.get(&p), post.get(&q)) else { continue };
                        let m = b.mul(&phi.mul(a).expect("shapes")).expect("shapes");
                        if other.target.dim(q) > 0 && other.source.dim(p) > 0 {
                            image.insert(p, m);
                        }
                    }
                    other.encode(k, &image)
                })
                .collect();
            out.insert(k, F2Matrix::from_columns(other.complex.dim(k), &cols));
        }
        out
    }
}

/// `Hom(c0, c1)` as a bare complex.
pub fn hom_complex(c0: &Complex, c1: &Complex) -> Complex {
    HomComplex::new(c0, c1).complex
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_term(m: F2Matrix, k: i64) -> Complex {
        let space = GradedSpace::from_dims([(k, m.cols()), (k + 1, m.rows())]);
        Complex::new(space, BTreeMap::from([(k, m)])).unwrap()
    }

    /// Random complex in degrees 0..len with dims <= max_dim, built from
    /// random maps factoring through projections so that d^2 = 0.
    pub(crate) fn random_complex(rng: &mut ChaCha8Rng, len: i64, max_dim: usize) -> Complex {
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
        let mut diff = BTreeMap::new();
        let mut prev: Option<F2Matrix> = None;
        for k in 0..len - 1 {
            let (src, tgt) = (dims[k as usize], dims[k as usize + 1]);
            // Pick d_k with image inside ker d_{k+1} later: build d_k so that
            // d_k d_{k-1} = 0 by restricting to a complement of im d_{k-1}.
            let mut m = F2Matrix::zeros(tgt, src);
            for i in 0..tgt {
                for j in 0..src {
                    if rng.gen_bool(0.4) {
                        m.set(i, j, true);
                    }
                }
            }
            if let Some(p) = &prev {
                // Kill m on the image of the previous differential.
                let img: Vec<F2Vector> = (0..p.cols()).map(|j| p.column(j)).collect();
                let (proj, _) = crate::f2linalg::quotient_basis(&img, src).unwrap();
                let mut r = F2Matrix::zeros(tgt, proj.rows());
                for i in 0..tgt {
                    for j in 0..proj.rows() {
                        if rng.gen_bool(0.4) {
                            r.set(i, j, true);
                        }
                    }
                }
                m = r.mul(&proj).unwrap();
            }
            prev = Some(m.clone());
            diff.insert(k, m);
        }
        let space = GradedSpace::from_dims((0..len).map(|k| (k, dims[k as usize])));
        Complex::new(space, diff).unwrap()
    }

    #[test]
    fn acyclic_two_term() {
        assert!(two_term(F2Matrix::identity(1), 0).is_acyclic());
    }

    #[test]
    fn zero_differential_dims() {
        let c = Complex::zero_differential(GradedSpace::from_dims([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(c.cohomology_dims(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    }

    #[test]
    fn circle_cochains() {
        // Incidence of edges 01, 02, 12 on vertices 0, 1, 2.
        let d0 = F2Matrix::from_dense(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let c = two_term(d0, 0);
        let h = c.cohomology();
        assert_eq!(h.dims(), BTreeMap::from([(0, 1), (1, 1)]));
        for z in h.representatives(1) {
            assert!(!h.is_exact(1, z));
        }
    }

    #[test]
    fn invalid_complex_rejected() {
        let space = GradedSpace::from_dims([(0, 1), (1, 1), (2, 1)]);
        let diff = BTreeMap::from([(0, F2Matrix::identity(1)), (1, F2Matrix::identity(1))]);
        assert!(matches!(Complex::new(space, diff), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn hom_from_unit_and_into_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_complex(&mut rng, 3, 3);
        let h = hom_complex(&Complex::unit(0), &c);
        assert_eq!(h.cohomology_dims(), c.cohomology_dims());
        assert_eq!(h.space().dims(), c.space().dims());
        let dual = hom_complex(&c, &Complex::unit(0));
        let reflected: BTreeMap<i64, usize> = c.space().dims().into_iter().map(|(k, n)| (-k, n)).collect();
        assert_eq!(dual.space().dims(), reflected);
    }

    /// Chain maps of degree k modulo null-homotopic ones, by enumeration.
    fn brute_force_hom_dim(c0: &Complex, c1: &Complex, k: i64) -> usize {
        let hom = HomComplex::new(c0, c1);
        let n = hom.complex().dim(k);
        assert!(n <= 16, "too big to enumerate");
        let mut cycles = Vec::new();
        for mask in 0u32..(1 << n) {
            let v = F2Vector::from_bits(&(0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            let blocks = hom.decode(k, &v);
            let is_chain_map = c0.space().degrees().all(|p| {
                let f_p = blocks.get(&p).cloned().unwrap_or_else(|| F2Matrix::zeros(c1.dim(p + k), c0.dim(p)));
                let f_p1 = blocks
                    .get(&(p + 1))
                    .cloned()
                    .unwrap_or_else(|| F2Matrix::zeros(c1.dim(p + 1 + k), c0.dim(p + 1)));
                f_p1.mul(&c0.d(p)).unwrap() == c1.d(p + k).mul(&f_p).unwrap()
            });
            if is_chain_map {
                cycles.push(v);
            }
        }
        let m = hom.complex().dim(k - 1);
        let mut boundaries = std::collections::HashSet::new();
        for mask in 0u32..(1 << m) {
            let v = F2Vector::from_bits(&(0..m).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            boundaries.insert(hom.complex().apply(k - 1, &v));
        }
        let ratio = cycles.len() / boundaries.len();
        ratio.trailing_zeros() as usize
    }

    #[test]
    fn hom_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut tested = 0;
        while tested < 12 {
            let c0 = random_complex(&mut rng, 3, 2);
            let c1 = random_complex(&mut rng, 3, 2);
            let hom = hom_complex(&c0, &c1);
            if hom.space().degrees().any(|k| hom.dim(k) > 12) {
                continue;
            }
            for k in -3..=3 {
                assert_eq!(
                    hom.cohomology_dims().get(&k).copied().unwrap_or(0),
                    brute_force_hom_dim(&c0, &c1, k),
                    "degree {k}"
                );
            }
            tested += 1;
        }
    }

    #[test]
    fn cone_examples() {
        let f2 = Complex::unit(0);
        let zero = ChainMap::zero(&f2, &f2);
        let id = ChainMap::identity(&f2);
        assert!(cone(&id).unwrap().is_acyclic());
        assert_eq!(cone(&zero).unwrap().cohomology_dims(), BTreeMap::from([(-1, 1), (0, 1)]));
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = two_term(F2Matrix::identity(1), 0);
        let maps = BTreeMap::from([(0, F2Matrix::identity(1))]);
        assert!(matches!(ChainMap::new(c.clone(), c, 0, maps), Err(Error::NotAChainMap(_))));
    }

    #[test]
    fn tensor_of_circles() {
        let d0 = F2Matrix::from_dense(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let c = two_term(d0, 0);
        assert_eq!(c.tensor(&c).cohomology_dims(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    }

    #[test]
    fn shift_examples() {
        let c = Complex::unit(0);
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).space().dims(), BTreeMap::from([(-1, 1)]));
    }

    fn random_chain_map(rng: &mut ChaCha8Rng) -> ChainMap {
        // Compose a random map with d so that f = d_t h + h d_s is a chain map,
        // then add the identity-like component where possible.
        loop {
            let s = random_complex(rng, 3, 3);
            let t = random_complex(rng, 3, 3);
            let mut h = BTreeMap::new();
            for k in 0..3 {
                let mut m = F2Matrix::zeros(t.dim(k - 1), s.dim(k));
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        m.set(i, j, rng.gen_bool(0.5));
                    }
                }
                h.insert(k, m);
            }
            let mut maps = BTreeMap::new();
            for k in 0..3 {
                let a = t.d(k - 1).mul(&h[&k]).unwrap();
                let b = h.get(&(k + 1)).map(|hk| hk.mul(&s.d(k)).unwrap());
                let m = match b {
                    Some(b) => a.add(&b).unwrap(),
                    None => a,
                };
                maps.insert(k, m);
            }
            if let Ok(f) = ChainMap::new(s, t, 0, maps) {
                return f;
            }
        }
    }

    #[test]
    fn cone_long_exact_sequence() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let f = random_chain_map(&mut rng);
            let hs = f.source().cohomology();
            let ht = f.target().cohomology();
            let hc = cone(&f).unwrap().cohomology_dims();
            for k in -2..4 {
                let coker = ht.dim(k) - f.induced_rank(k, &hs, &ht);
                let ker = hs.dim(k + 1) - f.induced_rank(k + 1, &hs, &ht);
                assert_eq!(hc.get(&k).copied().unwrap_or(0), coker + ker, "degree {k}");
            }
        }
    }

    proptest! {
        #[test]
        fn euler_characteristic_matches_cohomology(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 4, 4);
            let chi_h: i64 = c.cohomology_dims().iter().map(|(&k, &n)| sign(k) * n as i64).sum();
            prop_assert_eq!(c.euler_characteristic(), chi_h);
        }

        #[test]
        fn cone_of_identity_is_acyclic(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 4, 4);
            prop_assert!(cone(&ChainMap::identity(&c)).unwrap().is_acyclic());
        }

        #[test]
        fn double_shift_is_additive(seed in any::<u64>(), a in -3i64..3, b in -3i64..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 4, 3);
            prop_assert_eq!(c.shift(a).shift(b), c.shift(a + b));
            prop_assert_eq!(c.shift(a).shift(-a), c);
        }

        #[test]
        fn kunneth(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c0 = random_complex(&mut rng, 3, 3);
            let c1 = random_complex(&mut rng, 3, 3);
            let h0 = c0.cohomology_dims();
            let h1 = c1.cohomology_dims();
            let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
            for (&i, &a) in &h0 {
                for (&j, &b) in &h1 {
                    *expected.entry(i + j).or_default() += a * b;
                }
            }
            prop_assert_eq!(c0.tensor(&c1).cohomology_dims(), expected);
        }

        #[test]
        fn class_of_representatives_is_a_basis(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_complex(&mut rng, 4, 4);
            let h = c.cohomology();
            for (k, n) in h.dims() {
                for (i, z) in h.representatives(k).iter().enumerate() {
                    prop_assert_eq!(h.class_of(k, z).unwrap(), F2Vector::unit(n, i));
                }
            }
        }
    }
}
