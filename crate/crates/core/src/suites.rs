//! Randomized lemma suites.
//!
//! Each suite draws `count` instances from a [`ChaCha8Rng`](crate::random::rng)
//! seeded with `seed` and records a verdict per instance.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ainfty::AInfAlgebra;
use crate::error::{Error, Result};
use crate::f2linalg::F2Vector;
use crate::finprop::{FinPropMatrix, GroupAlgebraElement};
use crate::hochschild::{hh_homology, AInfBimodule};
use crate::morse::compare_with_simplicial;
use crate::random;
use crate::simplicial::LocalSystem;

pub const SUITES: [&str; 6] = ["filtration", "coconnective", "adjunction", "morse", "hochschild-stab", "finprop"];

pub const PRNG: &str = "ChaCha8";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub index: usize,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub prng: String,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub instances: Vec<Instance>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.instances.len()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (prng {}, seed {}, count {})", self.suite, self.prng, self.seed, self.count)?;
        for i in &self.instances {
            writeln!(f, "  #{:<4} {} {}", i.index, if i.pass { "pass" } else { "FAIL" }, i.detail)?;
        }
        write!(f, "{}/{} passed", self.passed, self.instances.len())
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteReport> {
    let check: Check = match name {
        "filtration" => filtration,
        "coconnective" => coconnective,
        "adjunction" => adjunction,
        "morse" => morse,
        "hochschild-stab" => hochschild_stab,
        "finprop" => finprop,
        _ => return Err(Error::Input(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))),
    };
    let mut rng = random::rng(seed);
    let mut instances = Vec::with_capacity(count);
    for index in 0..count {
        let (pass, detail) = match check(&mut rng) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        instances.push(Instance { index, pass, detail });
    }
    let passed = instances.iter().filter(|i| i.pass).count();
    Ok(SuiteReport { suite: name.to_string(), prng: PRNG.to_string(), seed, count, passed, instances })
}

/// A random minimal module over a connective algebra has a filtration by
/// degree closed under all operations, and a misgraded copy is flagged.
fn filtration(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut p = loop {
        let p = random::random_minimal_module(rng, 4);
        let d = p.basis().degrees();
        if d.first() != d.last() {
            break p;
        }
    };
    let report = p.filtration_check()?;
    let clean = report.holds() && report.subquotients.iter().all(|s| s.is_module);
    let zero = p.algebra().basis().in_degree(0).next().unwrap_or(0);
    let top = p.dim() - 1;
    p.set_unchecked(vec![0, zero], F2Vector::unit(p.dim(), top));
    let mutated = p.filtration_check()?;
    let flagged = !mutated.holds();
    Ok((
        clean && flagged,
        format!(
            "dim {}, {} subquotients, mutation {}",
            p.dim(),
            report.subquotients.len(),
            if flagged { "flagged" } else { "missed" }
        ),
    ))
}

/// Twisted complexes of length `D` in 1..=3 over coconnective algebras carry
/// a nonzero endomorphism class in degree `-D`.
fn coconnective(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let d = rng.gen_range(1..=3);
    let t = random::random_twisted(rng, d);
    let Some(w) = t.coconnective_witness()? else {
        return Ok((false, format!("D = {d}: no witness")));
    };
    let end = t.end_complex()?;
    let h = end.complex().cohomology();
    let ok = w.degree == -(d as i64) && h.is_cocycle(w.degree, &w.cocycle) && !h.is_exact(w.degree, &w.cocycle);
    Ok((ok, format!("D = {d}, dims {:?}, witness {} in degree {}", t.dims(), w.label, w.degree)))
}

/// `H(base, π_* E) = H(total, E)` for random covers and systems.
fn adjunction(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut corpus = random::corpus();
    let (name, k) = corpus.swap_remove(rng.gen_range(0..corpus.len()));
    let c = random::random_cover(rng, &k, 4)?;
    let r = rng.gen_range(1..=3);
    let e = random::random_flat_system(rng, c.total(), r)?;
    let report = c.adjunction_check(&e)?;
    Ok((report.holds(), format!("{name}, {} sheets, rank {r}, dims {:?}", c.sheets(), report.base_dims)))
}

/// Morse cohomology of a random matching equals simplicial cohomology and
/// satisfies the Morse inequalities.
fn morse(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut corpus = random::corpus();
    let (name, k) = corpus.swap_remove(rng.gen_range(0..corpus.len()));
    let skip = rng.gen_range(0.0..0.4);
    let m = random::random_matching(rng, &k, skip);
    let e: LocalSystem = if rng.gen_bool(0.25) {
        random::random_complex_system(rng, &k, 1)?
    } else {
        let r = rng.gen_range(1..=3);
        random::random_flat_system(rng, &k, r)?
    };
    let c = compare_with_simplicial(&m, &e)?;
    Ok((
        c.equal() && c.morse_inequalities(),
        format!("{name}, {} pairs, dims {:?}", m.pairs().len(), c.morse),
    ))
}

/// Hochschild homology below the horizon agrees between caps `c` and `c + 1`.
fn hochschild_stab(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (name, a): (String, AInfAlgebra) = match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(2..=4);
            (format!("F2[x]/x^{n}"), AInfAlgebra::truncated_polynomial(0, n).with_arity_cap(8))
        }
        1 => ("F2[Z/2]".to_string(), AInfAlgebra::group_algebra_z2().with_arity_cap(8)),
        _ => ("local".to_string(), random::random_local_algebra(rng)),
    };
    let cap = rng.gen_range(4..=6);
    let b = AInfBimodule::diagonal(&a);
    let lo = hh_homology(&b, cap, true)?;
    let hi = hh_homology(&b, cap + 1, true)?;
    let Some(exact) = lo.exact_up_to else {
        return Ok((false, format!("{name}: no horizon")));
    };
    let agree = (0..=exact).all(|n| lo.dims.get(&n) == hi.dims.get(&n));
    Ok((agree, format!("{name}, caps {cap}/{}, exact up to {exact}, HH {:?}", cap + 1, lo.dims)))
}

/// Associativity, unitality and propagation bounds for random finite
/// propagation matrices, and agreement with group-ring products in the
/// 1x1 case.
fn finprop(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let d: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
    let a = random::random_finprop(rng, d[0], d[1], 2);
    let b = random::random_finprop(rng, d[1], d[2], 2);
    let c = random::random_finprop(rng, d[2], d[3], 2);
    let ab = a.multiply(&b)?;
    let assoc = ab.multiply(&c)? == a.multiply(&b.multiply(&c)?)?;
    let z = a.group().clone();
    let unit = FinPropMatrix::identity(z.clone(), d[0]).multiply(&a)? == a
        && a.multiply(&FinPropMatrix::identity(z.clone(), d[1]))? == a;
    let bound = ab.propagation() <= a.propagation() + b.propagation();
    let terms = |rng: &mut ChaCha8Rng| -> Vec<Vec<i64>> { (0..rng.gen_range(0..=4)).map(|_| vec![rng.gen_range(-3..=3)]).collect() };
    let (x, y) = (GroupAlgebraElement::new(z.clone(), terms(rng))?, GroupAlgebraElement::new(z, terms(rng))?);
    let ring = FinPropMatrix::from_group_element(&x).multiply(&FinPropMatrix::from_group_element(&y))?
        == FinPropMatrix::from_group_element(&x.multiply(&y)?);
    Ok((
        assoc && unit && bound && ring,
        format!("shapes {d:?}, assoc {assoc}, unit {unit}, propagation {bound}, 1x1 {ring}"),
    ))
}
