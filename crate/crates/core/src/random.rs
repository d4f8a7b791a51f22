//! Random instances for property tests and lemma suites.
//!
//! Everything is driven by a caller-supplied [`ChaCha8Rng`] so runs are
//! reproducible from a seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{minimal_model, module_minimal_model, AInfAlgebra, AInfModule, Basis, DGAlgebra, DGModule};
use crate::morse::MorseMatching;
use crate::twisted::TwistedComplex;
use crate::covers::{Cover, Permutation};
use crate::error::Result;
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::simplicial::{EdgePathGroup, LocalSystem, SimplicialComplex};

pub use rand::SeedableRng;

/// The PRNG used throughout: ChaCha with 8 rounds, seeded from a `u64`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, true);
            }
        }
    }
    m
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> F2Vector {
    F2Vector::from_bits(&(0..len).map(|_| rng.gen()).collect::<Vec<bool>>())
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> F2Matrix {
    loop {
        let m = random_matrix(rng, n, n, 0.5);
        if m.is_invertible() {
            return m;
        }
    }
}

/// The standard test complexes.
pub fn corpus() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("circle", SimplicialComplex::circle()),
        ("filled-triangle", SimplicialComplex::filled_triangle()),
        ("sphere", SimplicialComplex::sphere()),
        ("projective-plane", SimplicialComplex::projective_plane()),
        ("torus", SimplicialComplex::torus()),
    ]
}

/// A random homomorphism from the edge-path group into `GL_r(F2)`.
///
/// Free groups get arbitrary invertible images. Otherwise the image is a
/// random elementary abelian 2-group: each `Z/2` character is sent to an
/// involution `I + N` with `N` supported on row 0 and vanishing at (0, 0),
/// so all such involutions commute. Relators are checked.
pub fn random_representation(rng: &mut ChaCha8Rng, group: &EdgePathGroup, r: usize) -> Vec<F2Matrix> {
    let n = group.generator_count();
    if group.relators().is_empty() {
        return (0..n).map(|_| random_invertible(rng, r)).collect();
    }
    let chars = group.z2_characters();
    let mut images = vec![F2Matrix::identity(r); n];
    for chi in &chars {
        if !rng.gen_bool(0.7) {
            continue;
        }
        let mut inv = F2Matrix::identity(r);
        for j in 1..r {
            if rng.gen_bool(0.6) {
                inv.flip(0, j);
            }
        }
        for g in chi.ones() {
            images[g] = inv.mul(&images[g]).expect("square");
        }
    }
    images
}

/// Random flat degree-0 system of rank `r` on each component, with a random
/// change of basis at every vertex so that tree edges are nontrivial too.
pub fn random_flat_system(rng: &mut ChaCha8Rng, k: &SimplicialComplex, r: usize) -> Result<LocalSystem> {
    let comps = k.components();
    let ncomp = comps.iter().copied().max().map_or(0, |c| c + 1);
    let mut transports: BTreeMap<(usize, usize), F2Matrix> = BTreeMap::new();
    for c in 0..ncomp {
        let verts: Vec<usize> = (0..k.vertex_count()).filter(|&v| comps[v] == c).collect();
        let (sub, _) = induced(k, &verts);
        let group = EdgePathGroup::new(&sub, 0)?;
        let sys = if group.generator_count() == 0 {
            LocalSystem::trivial_rank(&sub, r)
        } else {
            let images = random_representation(rng, &group, r);
            crate::simplicial::system_from_representation(&sub, &group, &images)?
        };
        for ((a, b), m) in sys.transports() {
            transports.insert((verts[*a], verts[*b]), m.clone());
        }
    }
    let gauge: Vec<F2Matrix> = (0..k.vertex_count()).map(|_| random_invertible(rng, r)).collect();
    for ((a, b), m) in transports.iter_mut() {
        *m = gauge[*b].mul(m)?.mul(&gauge[*a].inverse()?)?;
    }
    LocalSystem::from_degree_zero(k.clone(), &vec![r; k.vertex_count()], transports)
}

/// Induced subcomplex on `verts` (ascending), relabelled to `0..verts.len()`.
pub fn induced(k: &SimplicialComplex, verts: &[usize]) -> (SimplicialComplex, Vec<usize>) {
    let pos: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut simplices = Vec::new();
    for d in 1..=k.dimension().max(0) as usize {
        for s in k.simplices(d) {
            if s.iter().all(|v| pos.contains_key(v)) {
                simplices.push(s.iter().map(|v| pos[v]).collect());
            }
        }
    }
    (SimplicialComplex::new(verts.len(), &simplices).expect("induced subcomplex"), verts.to_vec())
}

/// A random finite cover of degree at most `max_degree`.
///
/// For free edge-path groups the generator images are arbitrary. Otherwise
/// a random homomorphism to `(Z/2)^j` acts on itself by translation
/// (`2^j <= max_degree` sheets), padded with fixed sheets and conjugated by
/// a random relabelling.
pub fn random_cover(rng: &mut ChaCha8Rng, k: &SimplicialComplex, max_degree: usize) -> Result<Cover> {
    let group = EdgePathGroup::new(k, 0)?;
    let n = group.generator_count();
    let (d, rep): (usize, Vec<Permutation>) = if group.relators().is_empty() {
        let d = rng.gen_range(1..=max_degree);
        let rep = (0..n)
            .map(|_| {
                let mut p: Permutation = (0..d).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        (d, rep)
    } else {
        let chars = group.z2_characters();
        let max_j = (usize::BITS - 1 - max_degree.max(1).leading_zeros()) as usize;
        let j = rng.gen_range(0..=max_j.min(chars.len().max(1)));
        let regular = 1usize << j;
        let d = rng.gen_range(regular..=max_degree.max(regular));
        // Each of the j coordinates is a random combination of the characters.
        let coords: Vec<F2Vector> = (0..j)
            .map(|_| {
                let mut v = F2Vector::zeros(n);
                for c in &chars {
                    if rng.gen_bool(0.5) {
                        v.add_assign(c);
                    }
                }
                v
            })
            .collect();
        let mut relabel: Permutation = (0..d).collect();
        relabel.shuffle(rng);
        let rep = (0..n)
            .map(|g| {
                let shift: usize = coords.iter().enumerate().map(|(i, c)| (c.get(g) as usize) << i).sum();
                let mut p: Permutation = (0..d).collect();
                for (x, px) in p.iter_mut().enumerate().take(regular) {
                    *px = x ^ shift;
                }
                // Conjugate by the relabelling.
                let mut q = vec![0; d];
                for x in 0..d {
                    q[relabel[x]] = relabel[p[x]];
                }
                q
            })
            .collect();
        (d, rep)
    };
    Cover::new(k, &group, d, &rep)
}

/// Generator counts and word-length caps for random truncated free algebras.
const FREE_SHAPES: [(usize, usize); 10] = [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 1), (2, 2), (3, 1)];

/// A random truncated free DG algebra on generators `x, y, z` with degrees
/// drawn from `degrees`, together with the word length of each basis
/// element. The differential of each generator is a random sum of words of
/// length at least one in the right degree; draws with `d² ≠ 0` are
/// rejected, falling back to `d = 0`.
pub fn random_truncated_free(rng: &mut ChaCha8Rng, degrees: &[i64]) -> (DGAlgebra, Vec<usize>) {
    let (g, max_len) = FREE_SHAPES[rng.gen_range(0..FREE_SHAPES.len())];
    let names = ["x", "y", "z"];
    let gens: Vec<(&str, i64)> = (0..g).map(|i| (names[i], degrees[rng.gen_range(0..degrees.len())])).collect();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=max_len {
        let mut w = vec![0; len];
        loop {
            words.push(w.clone());
            let mut i = 0;
            while i < len {
                w[i] += 1;
                if w[i] < g {
                    break;
                }
                w[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    let degree = |w: &[usize]| w.iter().map(|&x| gens[x].1).sum::<i64>();
    let mut attempt = 0;
    let algebra = loop {
        let d: Vec<Vec<Vec<usize>>> = if attempt < 20 {
            (0..g)
                .map(|x| {
                    words
                        .iter()
                        .filter(|w| !w.is_empty() && degree(w) == gens[x].1 + 1 && rng.gen_bool(0.5))
                        .cloned()
                        .collect()
                })
                .collect()
        } else {
            vec![vec![]; g]
        };
        attempt += 1;
        if let Ok(a) = DGAlgebra::truncated_free(&gens, max_len, &d) {
            break a;
        }
    };
    let lengths = algebra.basis().labels().iter().map(|l| if l == "1" { 0 } else { l.chars().count() }).collect();
    (algebra, lengths)
}

/// A random right DG module over `a`: a direct sum of one to three shifted
/// quotients `A / A_{≥j}` by words of length at least `j`.
pub fn random_dg_module(rng: &mut ChaCha8Rng, a: &DGAlgebra, lengths: &[usize], shifts: &[i64]) -> DGModule {
    let max_len = lengths.iter().copied().max().unwrap_or(0);
    let piece = |rng: &mut ChaCha8Rng| {
        let j = rng.gen_range(1..=max_len + 1);
        let ideal: Vec<usize> = (0..a.dim()).filter(|&i| lengths[i] >= j).collect();
        let q = DGModule::quotient(a, &ideal).expect("length ideals are DG ideals");
        q.shift(shifts[rng.gen_range(0..shifts.len())], a)
    };
    let mut m = piece(rng);
    for _ in 0..rng.gen_range(0..3) {
        let p = piece(rng);
        m = m.direct_sum(&p, a);
    }
    m
}

/// A random minimal module over a random minimal connective algebra, from
/// the minimal models of a truncated free DG algebra with generators in
/// degrees `-2, -1, 0` and a random DG module over it.
pub fn random_minimal_module(rng: &mut ChaCha8Rng, cap: usize) -> AInfModule {
    let (a, lengths) = random_truncated_free(rng, &[-2, -1, 0]);
    let m = random_dg_module(rng, &a, &lengths, &[-1, 0, 1]);
    module_minimal_model(&a, &m, cap).expect("minimal model of a DG module").1
}

/// A random minimal unital algebra supported in non-negative degrees with
/// `S^0` spanned by the unit: a square zero extension of F2 by a few
/// classes in degrees 2 to 4, `F2[y]/y^m` with `|y| = 2`, or the minimal
/// model of the Massey example.
pub fn random_coconnective_algebra(rng: &mut ChaCha8Rng) -> AInfAlgebra {
    match rng.gen_range(0..3) {
        0 => {
            let k = rng.gen_range(1..=3);
            let entries: Vec<(String, i64)> =
                std::iter::once(("1".to_string(), 0)).chain((0..k).map(|i| (format!("v{i}"), if i == 0 { 2 } else { rng.gen_range(2..=4) }))).collect();
            let basis = Basis::new(entries).expect("distinct labels");
            let n = basis.len();
            let one = basis.index_of("1").unwrap();
            let mut a = AInfAlgebra::from_product(
                basis,
                |i, j| {
                    if i == one {
                        F2Vector::unit(n, j)
                    } else if j == one {
                        F2Vector::unit(n, i)
                    } else {
                        F2Vector::zeros(n)
                    }
                },
                6,
            )
            .expect("square zero extension");
            a.set_unit(one).expect("strict unit");
            a
        }
        1 => AInfAlgebra::truncated_polynomial(2, rng.gen_range(2..=4)),
        _ => minimal_model(&DGAlgebra::massey_example(), 6).algebra,
    }
}

/// A random twisted complex with `D = length` over a random coconnective
/// algebra, with `dim V_i` in `1..=2`. Differentials are drawn at random and
/// rejected until the Maurer-Cartan equation holds; after 50 rejections only
/// the blocks `δ_{i,i+1}` adjacent to one index are kept, then none.
pub fn random_twisted(rng: &mut ChaCha8Rng, length: usize) -> TwistedComplex {
    let s = random_coconnective_algebra(rng);
    let dims: Vec<usize> = (0..=length).map(|_| rng.gen_range(1..=2)).collect();
    for attempt in 0..60 {
        let mut deltas = BTreeMap::new();
        for i in 0..=length {
            for j in i + 1..=length {
                if attempt >= 50 && j != i + 1 {
                    continue;
                }
                let slot: Vec<usize> = s.basis().in_degree(1 + (j - i) as i64).collect();
                if slot.is_empty() {
                    continue;
                }
                let mut block = BTreeMap::new();
                for r in 0..dims[j] {
                    for c in 0..dims[i] {
                        if rng.gen_bool(0.5) {
                            let v = F2Vector::from_indices(s.dim(), slot.iter().copied().filter(|_| rng.gen_bool(0.5)));
                            block.insert((r, c), v);
                        }
                    }
                }
                deltas.insert((i, j), block);
            }
        }
        let t = TwistedComplex::new(s.clone(), dims.clone(), deltas).expect("well-formed blocks");
        if t.mc_check().holds() {
            return t;
        }
    }
    TwistedComplex::new(s, dims, BTreeMap::new()).expect("zero differential")
}

/// A random acyclic matching: cells are offered in random order and each
/// keeps a random free face when that stays acyclic. With probability
/// `skip` a cell is left alone, so the result is rarely maximal.
pub fn random_matching(rng: &mut ChaCha8Rng, k: &SimplicialComplex, skip: f64) -> MorseMatching {
    let mut order: Vec<usize> = (0..k.total_count()).collect();
    order.shuffle(rng);
    let keep: Vec<bool> = order.iter().map(|_| !rng.gen_bool(skip)).collect();
    let order: Vec<usize> = order.into_iter().zip(keep).filter(|&(_, k)| k).map(|(i, _)| i).collect();
    MorseMatching::extend_in_order(k, &order, |faces| {
        let mut f = faces.to_vec();
        f.shuffle(rng);
        f
    })
}

/// A flat system whose fibres are two-term complexes `F2^r -> F2^r` with
/// identity differential in degrees `0, 1` plus a rank-`r` degree-0 summand,
/// so the fibre differential is nonzero but the fibre cohomology is `F2^r`.
pub fn random_complex_system(rng: &mut ChaCha8Rng, k: &SimplicialComplex, r: usize) -> Result<LocalSystem> {
    let base = random_flat_system(rng, k, r)?;
    let mut space = crate::chain::GradedSpace::new();
    for i in 0..r {
        space.push(-1, format!("a{i}"));
    }
    for i in 0..r {
        space.push(0, format!("b{i}"));
    }
    let fibre = crate::chain::Complex::new(space, BTreeMap::from([(-1, F2Matrix::identity(r))]))?;
    base.direct_sum(&LocalSystem::trivial(k, &fibre))
}

/// A finite propagation matrix over `Z` with up to four bands at offsets in
/// `-radius..=radius`.
pub fn random_finprop(rng: &mut ChaCha8Rng, rows: usize, cols: usize, radius: i64) -> crate::finprop::FinPropMatrix {
    let bands: Vec<_> = (0..rng.gen_range(0..=4))
        .map(|_| (vec![rng.gen_range(-radius..=radius)], random_matrix(rng, rows, cols, 0.5)))
        .collect();
    crate::finprop::FinPropMatrix::new(crate::finprop::AbelianGroup::integers(), rows, cols, bands)
        .expect("bands have the declared shape")
}

/// A unital algebra `1, x, y` in degree 0 with `x·x = c y` for a random bit
/// `c` and all other products of `x, y` zero.
pub fn random_local_algebra(rng: &mut ChaCha8Rng) -> AInfAlgebra {
    let c = rng.gen_bool(0.5);
    let basis = Basis::new([("1", 0), ("x", 0), ("y", 0)]).expect("distinct labels");
    let mut a = AInfAlgebra::from_product(
        basis,
        |i, j| match (i, j) {
            (0, k) | (k, 0) => F2Vector::unit(3, k),
            (1, 1) if c => F2Vector::unit(3, 2),
            _ => F2Vector::zeros(3),
        },
        8,
    )
    .expect("degree-0 products");
    a.set_unit(0).expect("1 is a unit");
    a
}
