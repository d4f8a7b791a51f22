use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::complex::SimplicialComplex;
use super::local_system::LocalSystem;
use crate::error::{Error, Result};
use crate::f2linalg::{F2Matrix, F2Vector};

/// A letter `g^{±1}` in a relator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// Presentation of the edge-path group at a basepoint.
///
/// A BFS spanning tree is fixed; every other edge `a < b` is a generator and
/// every triangle `a < b < c` contributes the relator `g(ab) g(bc) g(ac)^{-1}`
/// (tree edges are dropped). The presentation is then simplified by Tietze
/// moves: a relator in which some generator occurs exactly once is solved
/// for that generator, which is substituted everywhere and dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePathGroup {
    basepoint: usize,
    /// Parent of each vertex in the spanning tree (`None` at the basepoint).
    parent: Vec<Option<usize>>,
    /// Non-tree edges `(a, b)` with `a < b`, one per raw generator.
    edges: Vec<(usize, usize)>,
    /// Each raw generator as a word in raw surviving generators.
    expressions: Vec<Vec<Letter>>,
    /// Remaining relators in raw generator indices, in path order.
    relators: Vec<Vec<Letter>>,
    /// Raw index of each surviving generator.
    surviving: Vec<usize>,
}

impl EdgePathGroup {
    pub fn new(k: &SimplicialComplex, basepoint: usize) -> Result<EdgePathGroup> {
        if basepoint >= k.vertex_count() {
            return Err(Error::Input(format!("basepoint {basepoint} is not a vertex")));
        }
        if !k.is_connected() {
            return Err(Error::Disconnected);
        }
        let adj = k.adjacency();
        let mut parent = vec![None; k.vertex_count()];
        let mut seen = vec![false; k.vertex_count()];
        seen[basepoint] = true;
        let mut queue = VecDeque::from([basepoint]);
        let mut tree = BTreeSet::new();
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    tree.insert((v.min(w), v.max(w)));
                    queue.push_back(w);
                }
            }
        }
        let edges: Vec<(usize, usize)> =
            k.edges().iter().map(|e| (e[0], e[1])).filter(|e| !tree.contains(e)).collect();
        let gen_of: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut relators = Vec::new();
        for t in k.simplices(2) {
            let (a, b, c) = (t[0], t[1], t[2]);
            let mut word = Vec::new();
            for (e, inverse) in [((a, b), false), ((b, c), false), ((a, c), true)] {
                if let Some(&g) = gen_of.get(&e) {
                    word.push(Letter { generator: g, inverse });
                }
            }
            relators.push(word);
        }
        let mut expressions: Vec<Vec<Letter>> =
            (0..edges.len()).map(|g| vec![Letter { generator: g, inverse: false }]).collect();
        let mut relators: Vec<Vec<Letter>> =
            relators.iter().map(|r| free_reduce(r)).filter(|r| !r.is_empty()).collect();
        let mut eliminated = BTreeSet::new();
        loop {
            // Shortest relator with a generator occurring exactly once.
            let mut choice: Option<(usize, usize)> = None;
            for (ri, r) in relators.iter().enumerate() {
                let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                for l in r {
                    *counts.entry(l.generator).or_default() += 1;
                }
                if let Some(pos) = r.iter().position(|l| counts[&l.generator] == 1) {
                    if choice.is_none_or(|(best, _)| r.len() < relators[best].len()) {
                        choice = Some((ri, pos));
                    }
                }
            }
            let Some((ri, pos)) = choice else { break };
            let r = relators.remove(ri);
            let x = r[pos];
            // Rotate to x^e w = 1, so x = w^{-1} when e = +1 and x = w otherwise.
            let w: Vec<Letter> = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
            let solution = if x.inverse { w } else { invert_word(&w) };
            let substitute = |word: &[Letter]| -> Vec<Letter> {
                let mut out = Vec::new();
                for l in word {
                    if l.generator == x.generator {
                        if l.inverse {
                            out.extend(invert_word(&solution));
                        } else {
                            out.extend(solution.iter().copied());
                        }
                    } else {
                        out.push(*l);
                    }
                }
                free_reduce_linear(&out)
            };
            relators = relators.iter().map(|r| free_reduce(&substitute(r))).filter(|r| !r.is_empty()).collect();
            for e in expressions.iter_mut() {
                *e = substitute(e);
            }
            eliminated.insert(x.generator);
        }
        let surviving = (0..edges.len()).filter(|g| !eliminated.contains(g)).collect();
        Ok(EdgePathGroup { basepoint, parent, edges, expressions, relators, surviving })
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// Number of generators after simplification.
    pub fn generator_count(&self) -> usize {
        self.surviving.len()
    }

    /// Edge `(a, b)`, `a < b`, of each surviving generator.
    pub fn generator_edges(&self) -> Vec<(usize, usize)> {
        self.surviving.iter().map(|&g| self.edges[g]).collect()
    }

    /// All non-tree edges, including eliminated ones.
    pub fn raw_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Relators over surviving generators (indices into the surviving list),
    /// cyclically reduced.
    pub fn relators(&self) -> Vec<Vec<Letter>> {
        self.relators.iter().map(|r| self.to_surviving(r)).collect()
    }

    fn to_surviving(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter()
            .map(|l| Letter {
                generator: self.surviving.iter().position(|&g| g == l.generator).expect("surviving generator"),
                inverse: l.inverse,
            })
            .collect()
    }

    /// Relation matrix of the abelianization mod 2 (rows: relators).
    pub fn relation_matrix(&self) -> F2Matrix {
        let rels = self.relators();
        let mut m = F2Matrix::zeros(rels.len(), self.generator_count());
        for (i, r) in rels.iter().enumerate() {
            for l in r {
                m.flip(i, l.generator);
            }
        }
        m
    }

    /// Dimension of `H_1(π; F2) = π_ab ⊗ F2`.
    pub fn abelianization_rank_f2(&self) -> usize {
        self.generator_count() - self.relation_matrix().rank()
    }

    /// A basis of the homomorphisms `π -> Z/2`, as values on generators.
    pub fn z2_characters(&self) -> Vec<F2Vector> {
        self.relation_matrix().kernel_basis()
    }

    /// The vertex path from the basepoint to `v` in the spanning tree.
    pub fn tree_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// The loop at the basepoint represented by a surviving generator.
    pub fn generator_loop(&self, g: usize) -> Vec<usize> {
        let (a, b) = self.edges[self.surviving[g]];
        let mut path = self.tree_path(a);
        let mut back = self.tree_path(b);
        back.reverse();
        path.extend(back);
        path
    }

    /// The group element carried by the edge `a < b`, as a word in the
    /// surviving generators (empty for tree edges).
    pub fn edge_word(&self, a: usize, b: usize) -> Vec<Letter> {
        match self.edges.iter().position(|&e| e == (a, b)) {
            Some(raw) => self.to_surviving(&self.expressions[raw]),
            None => Vec::new(),
        }
    }

    /// Evaluates a word; later letters act after earlier ones.
    pub fn evaluate<T: Clone>(
        word: &[Letter],
        images: &[T],
        inverse: impl Fn(&T) -> T,
        compose: impl Fn(&T, &T) -> T,
        identity: &T,
    ) -> T {
        let mut acc = identity.clone();
        for l in word {
            let x = if l.inverse { inverse(&images[l.generator]) } else { images[l.generator].clone() };
            acc = compose(&x, &acc);
        }
        acc
    }

    /// Checks that `images` satisfy every relator.
    pub fn check_relators<T: Clone + PartialEq>(
        &self,
        images: &[T],
        inverse: impl Fn(&T) -> T,
        compose: impl Fn(&T, &T) -> T,
        identity: &T,
    ) -> Result<()> {
        for (i, r) in self.relators().iter().enumerate() {
            if &Self::evaluate(r, images, &inverse, &compose, identity) != identity {
                return Err(Error::RelatorViolation(format!("relator {i} is not satisfied")));
            }
        }
        Ok(())
    }
}

fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| Letter { generator: l.generator, inverse: !l.inverse }).collect()
}

fn free_reduce_linear(word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in word {
        match out.last() {
            Some(&last) if last.generator == l.generator && last.inverse != l.inverse => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Free and cyclic reduction.
fn free_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut out = free_reduce_linear(word);
    while out.len() >= 2 {
        let (f, l) = (out[0], out[out.len() - 1]);
        if f.generator == l.generator && f.inverse != l.inverse {
            out.remove(0);
            out.pop();
        } else {
            break;
        }
    }
    out
}

/// The degree-0 system with the given monodromy on each surviving
/// generator; other edges carry the value of the word they represent.
pub fn system_from_representation(
    k: &SimplicialComplex,
    group: &EdgePathGroup,
    images: &[F2Matrix],
) -> Result<LocalSystem> {
    if images.len() != group.generator_count() {
        return Err(Error::Input(format!(
            "{} images for {} generators",
            images.len(),
            group.generator_count()
        )));
    }
    let n = images.first().map_or(1, F2Matrix::rows);
    for m in images {
        if m.rows() != n || !m.is_invertible() {
            return Err(Error::Input("images must be invertible and of equal size".into()));
        }
    }
    group.check_relators(
        images,
        |m| m.inverse().expect("checked invertible"),
        |a, b| a.mul(b).expect("equal sizes"),
        &F2Matrix::identity(n),
    )?;
    let identity = F2Matrix::identity(n);
    let transports = group
        .raw_edges()
        .iter()
        .map(|&(a, b)| {
            let m = EdgePathGroup::evaluate(
                &group.edge_word(a, b),
                images,
                |m| m.inverse().expect("checked invertible"),
                |x, y| x.mul(y).expect("equal sizes"),
                &identity,
            );
            ((a, b), m)
        })
        .collect();
    LocalSystem::from_degree_zero(k.clone(), &vec![n; k.vertex_count()], transports)
}

/// Monodromy of `e` around each surviving generator loop of `group`.
pub fn monodromy(e: &LocalSystem, group: &EdgePathGroup) -> Vec<F2Matrix> {
    (0..group.generator_count()).map(|g| e.path_transport(&group.generator_loop(g))).collect()
}
