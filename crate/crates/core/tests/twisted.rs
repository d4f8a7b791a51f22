mod oracle;

use std::collections::BTreeMap;

use f2hom::ainfty::AInfAlgebra;
use f2hom::chain::Complex;
use f2hom::f2linalg::F2Vector;
use f2hom::random::{self, random_twisted};
use f2hom::twisted::{Block, TwistedComplex};
use rand::Rng;

fn dense(c: &Complex, k: i64) -> oracle::Dense {
    c.d(k).to_dense()
}

/// Independent check that `x` is a cocycle and not a coboundary.
fn nonzero_class(c: &Complex, k: i64, x: &F2Vector) -> bool {
    let bits: Vec<u8> = (0..x.len()).map(|i| x.get(i) as u8).collect();
    if c.dim(k + 1) > 0 && oracle::mul_vec(&dense(c, k), &bits).iter().any(|&b| b == 1) {
        return false;
    }
    let image = dense(c, k - 1);
    let with_x: oracle::Dense = image.iter().zip(&bits).map(|(row, &b)| row.iter().copied().chain([b]).collect()).collect();
    c.dim(k - 1) == 0 || oracle::rank(&with_x) > oracle::rank(&image)
}

fn block(entries: &[((usize, usize), F2Vector)]) -> Block {
    entries.iter().cloned().collect()
}

fn y_algebra(m: usize) -> (AInfAlgebra, usize) {
    let s = AInfAlgebra::truncated_polynomial(2, m);
    let y = s.basis().index_of("x").unwrap();
    (s, y)
}

#[test]
fn zero_differential_passes() {
    let (s, _) = y_algebra(3);
    let t = TwistedComplex::new(s, vec![1, 2, 1], BTreeMap::new()).unwrap();
    assert!(t.mc_check().holds());
}

#[test]
fn two_term_square_zero_passes() {
    let (s, y) = y_algebra(2);
    let d = BTreeMap::from([((0, 1), block(&[((0, 0), F2Vector::unit(2, y))]))]);
    let t = TwistedComplex::new(s, vec![1, 1], d).unwrap();
    assert!(t.mc_check().holds());
}

#[test]
fn corrupted_delta_is_caught() {
    let (s, y) = y_algebra(3);
    let good = BTreeMap::from([((0, 1), block(&[((0, 0), F2Vector::unit(3, y))]))]);
    assert!(TwistedComplex::new(s.clone(), vec![1, 1, 1], good.clone()).unwrap().mc_check().holds());
    let mut bad = good;
    bad.insert((1, 2), block(&[((0, 0), F2Vector::unit(3, y))]));
    let report = TwistedComplex::new(s, vec![1, 1, 1], bad).unwrap().mc_check();
    assert!(!report.holds());
    assert!(report.violations.contains_key(&(0, 2)));
}

#[test]
fn wrong_degree_or_shape_rejected() {
    let (s, y) = y_algebra(3);
    let one = s.basis().index_of("1").unwrap();
    assert!(TwistedComplex::new(s.clone(), vec![1, 1], BTreeMap::from([((0, 1), block(&[((0, 0), F2Vector::unit(3, one))]))])).is_err());
    assert!(TwistedComplex::new(s.clone(), vec![1, 1], BTreeMap::from([((1, 0), block(&[((0, 0), F2Vector::unit(3, y))]))])).is_err());
    assert!(TwistedComplex::new(s, vec![1, 1], BTreeMap::from([((0, 1), block(&[((1, 0), F2Vector::unit(3, y))]))])).is_err());
}

#[test]
fn single_summand_end_complex() {
    let (s, _) = y_algebra(3);
    let t = TwistedComplex::new(s.clone(), vec![2], BTreeMap::new()).unwrap();
    let end = t.end_complex().unwrap();
    let want: BTreeMap<i64, usize> = s.basis().dims().into_iter().map(|(k, n)| (k, 4 * n)).collect();
    assert_eq!(end.complex().cohomology_dims().into_iter().filter(|&(_, d)| d > 0).collect::<BTreeMap<_, _>>(), want);
}

#[test]
fn ground_field_end_complex() {
    let s = AInfAlgebra::ground_field();
    let dims = vec![1, 2, 1];
    let t = TwistedComplex::new(s, dims.clone(), BTreeMap::new()).unwrap();
    let end = t.end_complex().unwrap();
    // Hom(V_i, V_j) sits in degree i - j.
    let mut want: BTreeMap<i64, usize> = BTreeMap::new();
    for i in 0..3 {
        for j in 0..3 {
            *want.entry(i as i64 - j as i64).or_default() += dims[i] * dims[j];
        }
    }
    assert_eq!(end.complex().cohomology_dims(), want);
}

#[test]
fn random_end_complexes_square_to_zero() {
    let mut rng = random::rng(41);
    let mut nontrivial = 0;
    for _ in 0..20 {
        let d = rng.gen_range(1..=3);
        let t = random_twisted(&mut rng, d);
        assert!(t.mc_check().holds());
        nontrivial += usize::from(!t.deltas().is_empty());
        let end = t.end_complex().unwrap();
        let c = end.complex();
        for k in c.space().degrees() {
            if c.dim(k + 1) > 0 && c.dim(k + 2) > 0 {
                let sq = oracle::mul(&dense(c, k + 1), &dense(c, k));
                assert!(sq.iter().flatten().all(|&b| b == 0));
            }
        }
        let id = t.identity(&end).unwrap();
        assert!(c.apply(0, &id).is_zero());
        assert!(nonzero_class(c, 0, &id));
    }
    assert!(nontrivial >= 10, "{nontrivial}");
}

#[test]
fn witness_absent_for_one_summand() {
    let (s, _) = y_algebra(3);
    let t = TwistedComplex::new(s, vec![2], BTreeMap::new()).unwrap();
    assert_eq!(t.coconnective_witness().unwrap(), None);
}

#[test]
fn witness_for_a_two_term_complex() {
    let (s, y) = y_algebra(2);
    let d = BTreeMap::from([((0, 1), block(&[((0, 0), F2Vector::unit(2, y))]))]);
    let t = TwistedComplex::new(s, vec![1, 1], d).unwrap();
    let w = t.coconnective_witness().unwrap().unwrap();
    assert_eq!(w.degree, -1);
    let end = t.end_complex().unwrap();
    assert!(nonzero_class(end.complex(), -1, &w.cocycle));
}

#[test]
fn random_witnesses_are_nonzero_classes() {
    let mut rng = random::rng(43);
    for d in [1usize, 2, 3, 1, 2, 3, 2, 3] {
        let t = random_twisted(&mut rng, d);
        let w = t.coconnective_witness().unwrap().unwrap();
        assert_eq!(w.degree, -(d as i64));
        let end = t.end_complex().unwrap();
        assert!(nonzero_class(end.complex(), w.degree, &w.cocycle));
    }
}

#[test]
fn witness_preconditions() {
    let a = AInfAlgebra::truncated_polynomial(-1, 2);
    let t = TwistedComplex::new(a, vec![1, 1], BTreeMap::new()).unwrap();
    assert!(t.coconnective_witness().is_err());
    let (s, _) = y_algebra(2);
    let t = TwistedComplex::new(s, vec![0, 1], BTreeMap::new()).unwrap();
    assert!(t.coconnective_witness().is_err());
}
