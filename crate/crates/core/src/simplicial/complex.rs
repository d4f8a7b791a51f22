use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::chain::{Complex, ComplexBuilder};
use crate::error::{Error, Result};

/// A simplex as a strictly increasing list of vertices.
pub type Simplex = Vec<usize>;

/// A finite abstract simplicial complex on vertices `0..n`.
///
/// Simplices of each dimension are kept in lexicographic order; the global
/// id of a simplex counts all lower-dimensional simplices first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: usize,
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl SimplicialComplex {
    /// Closes `simplices` under taking faces. Vertex lists are sorted;
    /// repeated vertices or vertices outside `0..n` are rejected, as is a
    /// vertex that appears in no simplex.
    pub fn new(vertices: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for v in 0..vertices {
            all.insert(vec![v]);
        }
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            if s.is_empty() {
                return Err(Error::InvalidSimplicialComplex("empty simplex".into()));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidSimplicialComplex(format!("repeated vertex in {s:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertices) {
                return Err(Error::InvalidSimplicialComplex(format!(
                    "vertex {v} out of range for {vertices} vertices"
                )));
            }
            add_with_faces(&s, &mut all);
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        for v in by_dim.iter_mut() {
            v.sort();
        }
        let mut index = HashMap::new();
        for v in &by_dim {
            for (i, s) in v.iter().enumerate() {
                index.insert(s.clone(), i);
            }
        }
        Ok(Self { vertices, by_dim, index })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Top dimension, or `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn total_count(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// Index of `s` among the simplices of its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index.contains_key(s)
    }

    pub fn global_id(&self, s: &[usize]) -> Option<usize> {
        let i = self.index_of(s)?;
        Some(self.by_dim[..s.len() - 1].iter().map(Vec::len).sum::<usize>() + i)
    }

    pub fn from_global_id(&self, mut id: usize) -> Option<&Simplex> {
        for v in &self.by_dim {
            if id < v.len() {
                return Some(&v[id]);
            }
            id -= v.len();
        }
        None
    }

    pub fn edges(&self) -> &[Simplex] {
        self.simplices(1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }

    /// Vertex neighbours, ascending.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .iter()
            .filter_map(|e| {
                if e[0] == v {
                    Some(e[1])
                } else if e[1] == v {
                    Some(e[0])
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Component index of every vertex, numbered in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.vertices];
        let adj = self.adjacency();
        let mut next = 0;
        for s in 0..self.vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.vertices > 0 && self.components().iter().all(|&c| c == 0)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for e in self.edges() {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    /// Codimension-one faces of `s`, obtained by deleting each vertex in turn.
    pub fn faces(s: &[usize]) -> Vec<Simplex> {
        (0..s.len())
            .map(|i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect())
            .collect()
    }

    /// Codimension-one cofaces of `s` present in the complex.
    pub fn cofaces(&self, s: &[usize]) -> Vec<Simplex> {
        self.simplices(s.len())
            .iter()
            .filter(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
            .cloned()
            .collect()
    }

    /// For each simplex of dimension `dim`, the indices of its
    /// codimension-one cofaces.
    pub fn coface_table(&self, dim: usize) -> Vec<Vec<usize>> {
        let mut table = vec![Vec::new(); self.count(dim)];
        for (ti, t) in self.simplices(dim + 1).iter().enumerate() {
            for f in Self::faces(t) {
                table[self.index[&f]].push(ti);
            }
        }
        table
    }

    /// Ordinary F2 simplicial cochains.
    pub fn cochain_complex(&self) -> Complex {
        let mut b = ComplexBuilder::new();
        let mut ids: Vec<Vec<usize>> = Vec::new();
        for (d, v) in self.by_dim.iter().enumerate() {
            ids.push(v.iter().map(|s| b.generator(d as i64, simplex_label(s))).collect());
        }
        for d in 0..self.by_dim.len().saturating_sub(1) {
            for (si, cof) in self.coface_table(d).iter().enumerate() {
                for &ti in cof {
                    b.entry(ids[d][si], ids[d + 1][ti]);
                }
            }
        }
        b.build().expect("simplicial coboundary squares to zero")
    }

    pub fn point() -> Self {
        Self::new(1, &[]).unwrap()
    }

    /// Two vertices joined by an edge.
    pub fn interval() -> Self {
        Self::new(2, &[vec![0, 1]]).unwrap()
    }

    /// Boundary of a triangle.
    pub fn circle() -> Self {
        Self::cycle(3)
    }

    /// A cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::new(n, &edges).unwrap()
    }

    pub fn filled_triangle() -> Self {
        Self::new(3, &[vec![0, 1, 2]]).unwrap()
    }

    /// Boundary of the tetrahedron, a 2-sphere.
    pub fn sphere() -> Self {
        Self::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    /// The 6-vertex real projective plane.
    pub fn projective_plane() -> Self {
        let t = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        Self::new(6, &t.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// The 7-vertex torus.
    pub fn torus() -> Self {
        let mut t = Vec::new();
        for i in 0..7 {
            t.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
            t.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
        }
        Self::new(7, &t).unwrap()
    }
}

fn add_with_faces(s: &[usize], all: &mut BTreeSet<Simplex>) {
    if all.contains(s) {
        return;
    }
    all.insert(s.to_vec());
    if s.len() > 1 {
        for f in SimplicialComplex::faces(s) {
            add_with_faces(&f, all);
        }
    }
}

pub(crate) fn simplex_label(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn closure_and_ids() {
        let k = SimplicialComplex::filled_triangle();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
        assert_eq!(k.global_id(&[0, 1, 2]), Some(6));
        assert_eq!(k.from_global_id(3), Some(&vec![0, 1]));
        assert!(SimplicialComplex::new(2, &[vec![0, 0]]).is_err());
        assert!(SimplicialComplex::new(2, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn standard_models() {
        let cases = [
            (SimplicialComplex::circle(), BTreeMap::from([(0, 1), (1, 1)])),
            (SimplicialComplex::filled_triangle(), BTreeMap::from([(0, 1)])),
            (SimplicialComplex::sphere(), BTreeMap::from([(0, 1), (2, 1)])),
            (SimplicialComplex::projective_plane(), BTreeMap::from([(0, 1), (1, 1), (2, 1)])),
            (SimplicialComplex::torus(), BTreeMap::from([(0, 1), (1, 2), (2, 1)])),
        ];
        for (k, dims) in cases {
            assert_eq!(k.cochain_complex().cohomology_dims(), dims);
        }
        let rp2 = SimplicialComplex::projective_plane();
        assert_eq!((rp2.count(0), rp2.count(1), rp2.count(2)), (6, 15, 10));
        let t = SimplicialComplex::torus();
        assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
    }
}
