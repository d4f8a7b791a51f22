//! Discrete Morse theory with local coefficients.
//!
//! A matching pairs cells with codimension-one faces. Matched pairs are
//! cancelled from the twisted cochain complex by Gaussian elimination; the
//! surviving generators sit on critical cells and the induced differential is
//! the sum over gradient paths of composite transports.

use std::collections::BTreeMap;

use crate::chain::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::simplicial::{LocalSystem, SimplicialComplex, TwistedCochains};

/// Outcome of checking a candidate matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingReport {
    /// Malformed pairs: unknown ids, non-faces, cells used twice.
    pub errors: Vec<String>,
    /// A closed gradient path, as global ids, when the matching is cyclic.
    pub cycle: Option<Vec<usize>>,
    /// Critical cells per dimension.
    pub critical: BTreeMap<usize, usize>,
}

impl MatchingReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty() && self.cycle.is_none()
    }
}

/// Checks well-formedness and acyclicity of `pairs`, given as
/// `(cell, face)` global ids.
pub fn validate_matching(base: &SimplicialComplex, pairs: &[(usize, usize)]) -> MatchingReport {
    let n = base.total_count();
    let mut errors = Vec::new();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for &(cell, face) in pairs {
        let (Some(s), Some(t)) = (base.from_global_id(cell), base.from_global_id(face)) else {
            errors.push(format!("unknown simplex id in pair [{cell}, {face}]"));
            continue;
        };
        if t.len() + 1 != s.len() || !t.iter().all(|v| s.binary_search(v).is_ok()) {
            errors.push(format!("{t:?} is not a codimension-one face of {s:?}"));
            continue;
        }
        if partner[cell].is_some() || partner[face].is_some() {
            errors.push(format!("pair [{cell}, {face}] reuses a matched cell"));
            continue;
        }
        partner[cell] = Some(face);
        partner[face] = Some(cell);
    }
    let cycle = if errors.is_empty() { find_cycle(base, &partner) } else { None };
    let mut critical = BTreeMap::new();
    for d in 0..=base.dimension().max(0) as usize {
        let offset: usize = (0..d).map(|e| base.count(e)).sum();
        let c = (0..base.count(d)).filter(|i| partner[offset + i].is_none()).count();
        critical.insert(d, c);
    }
    MatchingReport { errors, cycle, critical }
}

/// Directed Hasse diagram with matched incidences reversed: cells point to
/// their faces, except that a matched face points up to its partner.
fn successors(base: &SimplicialComplex, partner: &[Option<usize>], id: usize) -> Vec<usize> {
    let s = base.from_global_id(id).expect("valid id");
    let mut out = Vec::new();
    if s.len() > 1 {
        for f in SimplicialComplex::faces(s) {
            let fid = base.global_id(&f).expect("faces are present");
            if partner[id] != Some(fid) {
                out.push(fid);
            }
        }
    }
    if let Some(p) = partner[id] {
        if base.from_global_id(p).expect("valid id").len() > s.len() {
            out.push(p);
        }
    }
    out
}

fn find_cycle(base: &SimplicialComplex, partner: &[Option<usize>]) -> Option<Vec<usize>> {
    let n = base.total_count();
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, successors(base, partner, root), 0)];
        state[root] = 1;
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let next = top.1[top.2];
                top.2 += 1;
                match state[next] {
                    0 => {
                        state[next] = 1;
                        let succ = successors(base, partner, next);
                        stack.push((next, succ, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|f| f.0 == next).expect("on stack");
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|f| f.0).collect();
                        cycle.push(next);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[top.0] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// An acyclic matching on a simplicial complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseMatching {
    base: SimplicialComplex,
    pairs: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
}

impl MorseMatching {
    pub fn new(base: &SimplicialComplex, pairs: Vec<(usize, usize)>) -> Result<MorseMatching> {
        let report = validate_matching(base, &pairs);
        if let Some(e) = report.errors.first() {
            return Err(Error::Input(e.clone()));
        }
        if let Some(c) = report.cycle {
            return Err(Error::Input(format!("matching has a closed gradient path through {c:?}")));
        }
        let mut partner = vec![None; base.total_count()];
        for &(a, b) in &pairs {
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        Ok(MorseMatching { base: base.clone(), pairs, partner })
    }

    /// Every cell critical.
    pub fn empty(base: &SimplicialComplex) -> MorseMatching {
        MorseMatching { base: base.clone(), pairs: Vec::new(), partner: vec![None; base.total_count()] }
    }

    /// Scans cells by increasing global id and pairs each with its first
    /// free face whenever acyclicity survives.
    pub fn greedy(base: &SimplicialComplex) -> MorseMatching {
        let order: Vec<usize> = (0..base.total_count()).collect();
        Self::extend_in_order(base, &order, |faces| faces.to_vec())
    }

    /// Builds a matching by offering each cell in `order` its faces in the
    /// order returned by `faces`, keeping a pair only when it stays acyclic.
    pub fn extend_in_order(
        base: &SimplicialComplex,
        order: &[usize],
        mut faces: impl FnMut(&[usize]) -> Vec<usize>,
    ) -> MorseMatching {
        let mut partner = vec![None; base.total_count()];
        let mut pairs = Vec::new();
        for &id in order {
            let s = base.from_global_id(id).expect("valid id");
            if partner[id].is_some() || s.len() < 2 {
                continue;
            }
            let free: Vec<usize> = SimplicialComplex::faces(s)
                .iter()
                .map(|f| base.global_id(f).expect("faces are present"))
                .filter(|&f| partner[f].is_none())
                .collect();
            for f in faces(&free) {
                partner[id] = Some(f);
                partner[f] = Some(id);
                if find_cycle(base, &partner).is_none() {
                    pairs.push((id, f));
                    break;
                }
                partner[id] = None;
                partner[f] = None;
            }
        }
        MorseMatching { base: base.clone(), pairs, partner }
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    /// `(cell, face)` pairs by global id.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, id: usize) -> Option<usize> {
        self.partner[id]
    }

    pub fn is_critical(&self, id: usize) -> bool {
        self.partner[id].is_none()
    }

    /// Global ids of the critical cells.
    pub fn critical_cells(&self) -> Vec<usize> {
        (0..self.partner.len()).filter(|&i| self.partner[i].is_none()).collect()
    }

    pub fn critical_counts(&self) -> BTreeMap<usize, usize> {
        validate_matching(&self.base, &self.pairs).critical
    }
}

/// Flat positions in the twisted cochain complex of the generators on the
/// simplex with global id `id`, in flattened fibre order.
fn cell_generators(cochains: &TwistedCochains, base: &SimplicialComplex, id: usize) -> Vec<usize> {
    let s = base.from_global_id(id).expect("valid id");
    let p = s.len() - 1;
    let si = base.index_of(s).expect("simplex in the base");
    let fibre = cochains.system().fibre(s[0]);
    let c = cochains.complex();
    let mut out = Vec::new();
    for q in fibre.space().degrees() {
        for i in 0..fibre.dim(q) {
            let (n, off) = cochains.index(p, si, q, i).expect("fibre generator");
            out.push(c.flat_offset(n) + off);
        }
    }
    out
}

/// The Morse complex of `e` for the matching `m`: critical cells carrying the
/// fibre at their minimal vertex.
pub fn morse_complex(m: &MorseMatching, e: &LocalSystem) -> Result<Complex> {
    if e.base() != m.base() {
        return Err(Error::Input("local system lives on a different complex".into()));
    }
    let cochains = TwistedCochains::new(e);
    let c = cochains.complex();
    let total = c.total_differential();
    let n = total.cols();
    let mut cols: Vec<F2Vector> = (0..n).map(|j| total.column(j)).collect();
    let mut alive = vec![true; n];
    for &(cell, face) in m.pairs() {
        let xs = cell_generators(&cochains, m.base(), face);
        let ys = cell_generators(&cochains, m.base(), cell);
        let block = F2Matrix::from_columns(ys.len(), &xs.iter().map(|&x| restrict(&cols[x], &ys)).collect::<Vec<_>>());
        let inv = block.inverse().map_err(|_| {
            Error::Precondition(format!("matched block for pair [{cell}, {face}] is not invertible"))
        })?;
        for &x in xs.iter().chain(&ys) {
            alive[x] = false;
        }
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let v = restrict(&cols[a], &ys);
            if v.is_zero() {
                continue;
            }
            let coeffs = inv.mul_vec(&v)?;
            let mut col = cols[a].clone();
            for t in coeffs.ones() {
                col.add_assign(&cols[xs[t]]);
            }
            cols[a] = col;
        }
    }
    let degrees = c.basis_degrees();
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for j in (0..n).filter(|&j| alive[j]) {
        by_degree.entry(degrees[j]).or_default().push(j);
    }
    let mut space = GradedSpace::new();
    for (&k, gens) in &by_degree {
        let off = c.flat_offset(k);
        for &j in gens {
            space.push(k, c.space().labels(k)[j - off].clone());
        }
    }
    let mut diff = BTreeMap::new();
    for (&k, src) in &by_degree {
        let Some(tgt) = by_degree.get(&(k + 1)) else { continue };
        let columns: Vec<F2Vector> = src.iter().map(|&j| restrict(&cols[j], tgt)).collect();
        diff.insert(k, F2Matrix::from_columns(tgt.len(), &columns));
    }
    Complex::new(space, diff)
}

fn restrict(v: &F2Vector, rows: &[usize]) -> F2Vector {
    F2Vector::from_indices(rows.len(), rows.iter().enumerate().filter(|&(_, &r)| v.get(r)).map(|(i, _)| i))
}

/// Cohomology of the Morse side against the simplicial side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub morse: BTreeMap<i64, usize>,
    pub simplicial: BTreeMap<i64, usize>,
    /// Generators of the Morse complex per degree.
    pub critical_generators: BTreeMap<i64, usize>,
    /// Both complexes, rendered, when the dimensions disagree.
    pub dump: Option<String>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        let degrees = self.morse.keys().chain(self.simplicial.keys());
        degrees.into_iter().all(|k| {
            self.morse.get(k).copied().unwrap_or(0) == self.simplicial.get(k).copied().unwrap_or(0)
        })
    }

    /// `#generators in degree p >= dim H^p` for every `p`.
    pub fn morse_inequalities(&self) -> bool {
        self.simplicial
            .iter()
            .all(|(k, &h)| self.critical_generators.get(k).copied().unwrap_or(0) >= h)
    }
}

pub fn compare_with_simplicial(m: &MorseMatching, e: &LocalSystem) -> Result<Comparison> {
    let morse = morse_complex(m, e)?;
    let simplicial = TwistedCochains::new(e).complex().clone();
    let nonzero = |d: BTreeMap<i64, usize>| d.into_iter().filter(|&(_, v)| v > 0).collect::<BTreeMap<_, _>>();
    let mut out = Comparison {
        morse: nonzero(morse.cohomology_dims()),
        simplicial: nonzero(simplicial.cohomology_dims()),
        critical_generators: morse.space().dims(),
        dump: None,
    };
    if !out.equal() {
        out.dump = Some(format!("morse: {morse:?}\nsimplicial: {simplicial:?}"));
    }
    Ok(out)
}
