use f2hom::ainfty::{
    minimal_model, module_minimal_model, AInfAlgebra, AInfModule, Basis, DGAlgebra, DGModule, ModuleHomComplex, Retraction,
};
use f2hom::f2linalg::{F2Matrix, F2Vector};
use f2hom::random::{self, random_dg_module, random_minimal_module, random_truncated_free};
use f2hom::simplicial::SimplicialComplex;
use proptest::prelude::*;
use rand::Rng;

fn labelled(a: &AInfAlgebra, labels: &[&str]) -> Vec<usize> {
    labels.iter().map(|l| a.basis().index_of(l).unwrap()).collect()
}

#[test]
fn associative_algebras_pass() {
    for a in [
        AInfAlgebra::ground_field(),
        AInfAlgebra::truncated_polynomial(0, 4),
        AInfAlgebra::truncated_polynomial(-2, 3),
        AInfAlgebra::group_algebra_z2(),
    ] {
        assert!(a.check_relations().holds(), "{a}");
        assert!(a.grading_violations().is_empty());
    }
}

#[test]
fn exterior_algebra_passes() {
    let a = AInfAlgebra::truncated_polynomial(1, 2);
    let x = a.basis().index_of("x").unwrap();
    assert!(a.ops().value(&[x, x]).is_zero());
    assert!(a.check_relations().holds());
}

#[test]
fn degree_check_on_set() {
    let mut a = AInfAlgebra::truncated_polynomial(1, 2);
    let x = a.basis().index_of("x").unwrap();
    // μ^3(x, x, x) has degree 2, but x has degree 1.
    assert!(a.set(vec![x, x, x], F2Vector::unit(2, x)).is_err());
    assert!(a.set(vec![x, x, x, x], F2Vector::unit(2, x)).is_err());
    let one = a.basis().index_of("1").unwrap();
    a.set(vec![x, x, x, x], F2Vector::unit(2, one)).unwrap_err();
}

#[test]
fn non_associative_product_fails_at_arity_three() {
    let mut a = AInfAlgebra::truncated_polynomial(0, 3);
    let [x, x2] = labelled(&a, &["x", "x^2"])[..] else { unreachable!() };
    a.set(vec![x, x2], F2Vector::unit(3, x)).unwrap();
    let report = a.check_relations();
    assert_eq!(report.first_failing_arity(), Some(3));
    // (x·x)·x² = 0 while x·(x·x²) = x².
    assert!(report.violations.contains_key(&vec![x, x, x2]));
}

#[test]
fn random_mutations_are_caught_at_the_smallest_arity() {
    let mut rng = random::rng(11);
    let mut caught = 0;
    for _ in 0..40 {
        let (dga, _) = random_truncated_free(&mut rng, &[0, 1]);
        let model = minimal_model(&dga, 5);
        let mut a = model.algebra.clone();
        assert!(a.check_relations().holds());
        let entries: Vec<_> = a.ops().entries(2).map(|(t, v)| (t.clone(), v.clone())).collect();
        if entries.is_empty() {
            continue;
        }
        let (t, v) = &entries[rng.gen_range(0..entries.len())];
        a.set_unchecked(t.clone(), F2Vector::zeros(v.len()));
        let report = a.check_relations();
        if let Some(arity) = report.first_failing_arity() {
            // A corrupted product can only show up from arity 3 on.
            assert_eq!(arity, 3);
            caught += 1;
        }
    }
    assert!(caught > 0);
}

#[test]
fn zero_differential_model_is_the_algebra() {
    let a = AInfAlgebra::truncated_polynomial(1, 4);
    let dga = DGAlgebra::from_associative(&a).unwrap();
    let model = minimal_model(&dga, 6);
    assert_eq!(model.algebra.basis(), a.basis());
    assert_eq!(model.algebra.ops(), a.ops());
    assert_eq!(model.algebra.unit(), a.unit());
}

#[test]
fn interval_model_is_the_ground_field() {
    let dga = DGAlgebra::cochains(&SimplicialComplex::interval());
    let model = minimal_model(&dga, 6);
    let h = &model.algebra;
    assert_eq!(h.basis().dims().into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    assert_eq!(h.ops().value(&[0, 0]), F2Vector::unit(1, 0));
    assert_eq!(h.ops().max_arity(), 2);
    assert!(model.check_morphism(&dga).holds());
    assert!(model.linear_part(&dga).is_quasi_isomorphism());
}

/// Brute force over all cochains bounding `a · a`: the Massey product
/// `u·a + a·u` is never exact, and the indeterminacy `a·H^1 + H^1·a` is
/// zero in cohomology.
#[test]
fn massey_example_oracle() {
    let dga = DGAlgebra::massey_example();
    let n = dga.dim();
    let b = dga.basis();
    let i = |l: &str| b.index_of(l).unwrap();
    let a = F2Vector::unit(n, i("a"));
    let aa = dga.multiply(&a, &a);
    let deg1: Vec<usize> = b.in_degree(1).collect();
    let exact = |v: &F2Vector| {
        (0u32..1 << deg1.len()).any(|mask| {
            let c = F2Vector::from_indices(n, deg1.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &j)| j));
            dga.d(&c) == *v
        })
    };
    let mut bounding = 0;
    for mask in 0u32..1 << deg1.len() {
        let u = F2Vector::from_indices(n, deg1.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &j)| j));
        if dga.d(&u) != aa {
            continue;
        }
        bounding += 1;
        let m = dga.multiply(&u, &a).add(&dga.multiply(&a, &u));
        assert!(dga.d(&m).is_zero());
        assert!(!exact(&m));
    }
    assert!(bounding > 0);
    for c in ["a", "b"] {
        let z = F2Vector::unit(n, i(c));
        assert!(exact(&dga.multiply(&a, &z)) && exact(&dga.multiply(&z, &a)));
    }
}

#[test]
fn massey_example_model_has_a_triple_product() {
    let dga = DGAlgebra::massey_example();
    let model = minimal_model(&dga, 6);
    let h = &model.algebra;
    assert_eq!(h.basis().dims().into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 1)]);
    let v = h.op_by_labels(&["a", "a", "a"]).unwrap();
    assert_eq!(h.vector_label(&v), "w");
    assert!(h.check_relations().holds());
    assert!(model.check_morphism(&dga).holds());
    assert!(model.linear_part(&dga).is_quasi_isomorphism());
    assert_eq!(h.unit(), h.basis().index_of("1"));
}

#[test]
fn cochain_algebra_models() {
    for (name, k) in random::corpus() {
        let dga = DGAlgebra::cochains(&k);
        let model = minimal_model(&dga, 4);
        assert!(model.retraction.verify(dga.differential()), "{name}");
        assert!(model.algebra.check_relations().holds(), "{name}");
        assert!(model.check_morphism(&dga).holds(), "{name}");
        assert!(model.linear_part(&dga).is_quasi_isomorphism(), "{name}");
        assert_eq!(model.algebra.basis().dims(), k.cochain_complex().cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect(), "{name}");
    }
}

#[test]
fn retraction_of_an_acyclic_pair() {
    let basis = Basis::new([("u", 0), ("v", 1)]).unwrap();
    let d = F2Matrix::from_dense(&[vec![0, 0], vec![1, 0]]).unwrap();
    let r = Retraction::new(&basis, &d);
    assert!(r.cohomology.is_empty());
    assert!(r.verify(&d));
}

#[test]
fn tensor_with_rank_one_is_a_copy() {
    let a = AInfAlgebra::truncated_polynomial(1, 3);
    let t = a.tensor_with_endomorphisms(1);
    assert_eq!(t.dim(), a.dim());
    for (k, v) in a.ops().all_entries() {
        let tk: Vec<usize> = k.iter().map(|&x| t.basis().index_of(&format!("E[0,0]⊗{}", a.basis().label(x))).unwrap()).collect();
        assert_eq!(t.vector_label(&t.ops().value(&tk)), a.vector_label(v).split(" + ").map(|l| format!("E[0,0]⊗{l}")).collect::<Vec<_>>().join(" + "));
    }
    assert_eq!(t.ops().entry_count(), a.ops().entry_count());
}

#[test]
fn tensor_dimensions_per_degree() {
    let dga = DGAlgebra::massey_example();
    let h = minimal_model(&dga, 4).algebra;
    for v in 1..=3 {
        let t = h.tensor_with_endomorphisms(v);
        for (k, n) in h.basis().dims() {
            assert_eq!(t.basis().dims()[&k], n * v * v);
        }
        assert!(t.check_relations_up_to(4).holds());
    }
}

/// `2x2` matrices over `F2[x]/x²`: entries are `(c0, c1)` for `c0 + c1 x`.
type Mat = [[(u8, u8); 2]; 2];

fn mat_mul(p: &Mat, q: &Mat) -> Mat {
    let mut out = [[(0, 0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let (a0, a1) = p[i][k];
                let (b0, b1) = q[k][j];
                out[i][j].0 ^= a0 & b0;
                out[i][j].1 ^= (a0 & b1) ^ (a1 & b0);
            }
        }
    }
    out
}

fn to_mat(t: &AInfAlgebra, v: &F2Vector) -> Mat {
    let mut out = [[(0, 0); 2]; 2];
    for o in v.ones() {
        let l = t.basis().label(o);
        let (i, j) = (l.as_bytes()[2] - b'0', l.as_bytes()[4] - b'0');
        let e = &mut out[i as usize][j as usize];
        if l.ends_with("⊗1") {
            e.0 ^= 1;
        } else {
            e.1 ^= 1;
        }
    }
    out
}

#[test]
fn matrix_algebra_oracle() {
    let a = AInfAlgebra::truncated_polynomial(0, 2);
    let t = a.tensor_with_endomorphisms(2);
    assert_eq!(t.dim(), 8);
    for p in 0..8 {
        for q in 0..8 {
            let got = to_mat(&t, &t.ops().value(&[p, q]));
            let want = mat_mul(&to_mat(&t, &F2Vector::unit(8, p)), &to_mat(&t, &F2Vector::unit(8, q)));
            assert_eq!(got, want);
        }
    }
    assert!(t.is_associative_algebra());
    assert!(t.check_relations().holds());
}

#[test]
fn random_dga_models() {
    let mut rng = random::rng(5);
    for _ in 0..30 {
        let (dga, _) = random_truncated_free(&mut rng, &[-1, 0, 1, 2]);
        let model = minimal_model(&dga, 5);
        assert!(model.retraction.verify(dga.differential()));
        assert!(model.algebra.is_minimal());
        assert!(model.algebra.grading_violations().is_empty());
        assert!(model.algebra.check_relations().holds());
        assert!(model.check_morphism(&dga).holds());
        assert!(model.linear_part(&dga).is_quasi_isomorphism());
    }
}

#[test]
fn regular_module_relations() {
    let dga = DGAlgebra::massey_example();
    let h = minimal_model(&dga, 5).algebra;
    let m = AInfModule::regular(&h);
    assert!(m.check_relations().holds());
}

#[test]
fn module_models_satisfy_relations() {
    let mut rng = random::rng(8);
    for _ in 0..25 {
        let (a, lengths) = random_truncated_free(&mut rng, &[-1, 0, 1]);
        let m = random_dg_module(&mut rng, &a, &lengths, &[0, 1]);
        let (model, module) = module_minimal_model(&a, &m, 5).unwrap();
        assert!(module.is_minimal());
        assert!(module.grading_violations().is_empty());
        assert!(module.check_relations().holds());
        assert_eq!(module.basis().dims(), m.complex().cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect());
        assert_eq!(module.algebra(), &model.algebra);
    }
}

#[test]
fn regular_module_model_matches_algebra_model() {
    let dga = DGAlgebra::massey_example();
    let (model, module) = module_minimal_model(&dga, &DGModule::regular(&dga), 4).unwrap();
    assert_eq!(module.basis().labels(), model.algebra.basis().labels());
    let regular = AInfModule::regular(&model.algebra);
    assert_eq!(module.ops(), regular.ops());
}

#[test]
fn filtration_holds_for_random_modules() {
    let mut rng = random::rng(3);
    for _ in 0..30 {
        let p = random_minimal_module(&mut rng, 4);
        let report = p.filtration_check().unwrap();
        assert!(report.holds());
        assert!(report.subquotients.iter().all(|s| s.is_module));
        assert_eq!(report.subquotients.iter().map(|s| s.labels.len()).sum::<usize>(), p.dim());
    }
}

#[test]
fn misgraded_entry_is_flagged() {
    let mut rng = random::rng(4);
    let mut tried = 0;
    while tried < 20 {
        let mut p = random_minimal_module(&mut rng, 4);
        let a = p.algebra().clone();
        let degrees: Vec<i64> = p.basis().degrees().to_vec();
        let (Some(&top), Some(&bottom)) = (degrees.last(), degrees.first()) else { continue };
        if top == bottom || a.dim() == 0 {
            continue;
        }
        tried += 1;
        let src = 0;
        let dst = p.dim() - 1;
        let zero = a.basis().in_degree(0).next().unwrap_or(0);
        p.set_unchecked(vec![src, zero], F2Vector::unit(p.dim(), dst));
        let report = p.filtration_check().unwrap();
        assert!(!report.holds());
        assert!(!report.grading_violations.is_empty());
    }
}

#[test]
fn filtration_requires_connective_minimal_algebra() {
    let a = AInfAlgebra::truncated_polynomial(1, 2);
    assert!(AInfModule::regular(&a).filtration_check().is_err());
}

#[test]
fn ground_field_hom_is_one_dimensional() {
    let f = AInfAlgebra::ground_field();
    let m = AInfModule::regular(&f);
    let h = ModuleHomComplex::new(&m, &m, 5).unwrap();
    let dims = h.complex().cohomology_dims();
    assert_eq!(dims.get(&0), Some(&1));
    let id = h.identity().unwrap();
    assert!(h.d(0, &id).is_zero());
    assert!(!h.complex().cohomology().is_exact(0, &id));
}

/// Classical `Hom_A(M, N)` by brute force over all linear maps.
fn classical_hom_dim(m: &AInfModule, n: &AInfModule) -> usize {
    let (dm, dn, da) = (m.dim(), n.dim(), m.algebra().dim());
    let mut count = 0usize;
    for mask in 0u64..1 << (dm * dn) {
        let f = |v: &F2Vector| {
            let mut out = F2Vector::zeros(dn);
            for i in v.ones() {
                for j in 0..dn {
                    if mask >> (i * dn + j) & 1 == 1 {
                        out.flip(j);
                    }
                }
            }
            out
        };
        let linear = (0..dm).all(|i| {
            (0..da).all(|a| {
                let lhs = f(&m.ops().value(&[i, a]));
                let fi = f(&F2Vector::unit(dm, i));
                let mut rhs = F2Vector::zeros(dn);
                for j in fi.ones() {
                    rhs.add_assign(&n.ops().value(&[j, a]));
                }
                lhs == rhs
            })
        });
        count += linear as usize;
    }
    count.trailing_zeros() as usize
}

#[test]
fn group_algebra_hom_matches_classical() {
    let a = AInfAlgebra::group_algebra_z2();
    let regular = AInfModule::regular(&a);
    let trivial = AInfModule::augmentation(&a, 0, 1, |_| true).unwrap();
    assert!(trivial.check_relations().holds());
    for (m, n) in [(&regular, &trivial), (&trivial, &trivial), (&regular, &regular), (&trivial, &regular)] {
        let h = ModuleHomComplex::new(m, n, 6).unwrap();
        let h0 = h.complex().cohomology_dims().get(&0).copied().unwrap_or(0);
        assert_eq!(h0, classical_hom_dim(m, n));
    }
    let h = ModuleHomComplex::new(&regular, &trivial, 6).unwrap();
    assert_eq!(h.complex().cohomology_dims().get(&0), Some(&1));
}

#[test]
fn identity_is_a_nonzero_class() {
    let mut rng = random::rng(21);
    for _ in 0..10 {
        let p = random_minimal_module(&mut rng, 3);
        if p.dim() == 0 || p.dim() > 4 || p.algebra().dim() > 3 {
            continue;
        }
        let h = ModuleHomComplex::new(&p, &p, 2).unwrap();
        let id = h.identity().unwrap();
        assert!(h.d(0, &id).is_zero());
        assert!(!h.complex().cohomology().is_exact(0, &id));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative_and_leibniz(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let a = AInfAlgebra::truncated_polynomial(0, 2);
        let m = AInfModule::regular(&a);
        let t = AInfModule::augmentation(&a, 0, 1, |x| x == a.basis().index_of("1").unwrap()).unwrap();
        let cap = 4;
        let hmt = ModuleHomComplex::new(&m, &t, cap).unwrap();
        let htt = ModuleHomComplex::new(&t, &t, cap).unwrap();
        let hmm = ModuleHomComplex::new(&m, &m, cap).unwrap();
        let pick = |h: &ModuleHomComplex, k: i64, rng: &mut rand_chacha::ChaCha8Rng| random::random_vector(rng, h.complex().dim(k));
        let (ku, kt) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let u = pick(&hmm, ku, &mut rng);
        let x = pick(&hmt, kt, &mut rng);
        let compose = |o: (&ModuleHomComplex, i64, &F2Vector), i: (&ModuleHomComplex, i64, &F2Vector), r: &ModuleHomComplex| {
            ModuleHomComplex::compose(o, i, r).unwrap()
        };
        // d(x ∘ u) = dx ∘ u + x ∘ du
        let xu = compose((&hmt, kt, &x), (&hmm, ku, &u), &hmt);
        let lhs = hmt.d(kt + ku, &xu);
        let rhs = compose((&hmt, kt + 1, &hmt.d(kt, &x)), (&hmm, ku, &u), &hmt)
            .add(&compose((&hmt, kt, &x), (&hmm, ku + 1, &hmm.d(ku, &u)), &hmt));
        prop_assert_eq!(lhs, rhs);
        // (y ∘ x) ∘ u = y ∘ (x ∘ u)
        let y = pick(&htt, 0, &mut rng);
        let left = compose((&hmt, kt, &compose((&htt, 0, &y), (&hmt, kt, &x), &hmt)), (&hmm, ku, &u), &hmt);
        let right = compose((&htt, 0, &y), (&hmt, kt + ku, &xu), &hmt);
        prop_assert_eq!(left, right);
        // Identities are units.
        let id_m = hmm.identity().unwrap();
        prop_assert_eq!(compose((&hmt, kt, &x), (&hmm, 0, &id_m), &hmt), x.clone());
    }
}
