use std::collections::BTreeMap;
use std::fmt;

use super::table::{OpTable, Tuple};
use super::Basis;
use crate::error::{Error, Result};
use crate::f2linalg::F2Vector;

/// An A∞ algebra over F2 with finitely many stored operations.
///
/// `μ^d` has degree `2 - d`. Statements about the relations are made up to
/// `arity_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfAlgebra {
    basis: Basis,
    ops: OpTable,
    arity_cap: usize,
    unit: Option<usize>,
}

/// Outcome of [`AInfAlgebra::check_relations`] and the module and bimodule
/// relation checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub arity_cap: usize,
    /// Input tuples on which the relation sum is nonzero, with the sum.
    pub violations: BTreeMap<Tuple, F2Vector>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Smallest total arity with a violation.
    pub fn first_failing_arity(&self) -> Option<usize> {
        self.violations.keys().map(Vec::len).min()
    }
}

impl AInfAlgebra {
    pub fn new(basis: Basis, arity_cap: usize) -> AInfAlgebra {
        let n = basis.len();
        AInfAlgebra { basis, ops: OpTable::new(n), arity_cap, unit: None }
    }

    /// Builds a graded associative algebra from its structure constants
    /// `x · y` on basis pairs.
    pub fn from_product(
        basis: Basis,
        product: impl Fn(usize, usize) -> F2Vector,
        arity_cap: usize,
    ) -> Result<AInfAlgebra> {
        let mut a = AInfAlgebra::new(basis, arity_cap);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                a.set(vec![i, j], product(i, j))?;
            }
        }
        Ok(a)
    }

    /// F2 in degree 0.
    pub fn ground_field() -> AInfAlgebra {
        let basis = Basis::new([("1", 0)]).unwrap();
        let mut a = AInfAlgebra::from_product(basis, |_, _| F2Vector::unit(1, 0), 6).unwrap();
        a.unit = Some(0);
        a
    }

    /// `F2[x] / x^n` with `x` in degree `degree`; basis `1, x, x^2, ...`.
    pub fn truncated_polynomial(degree: i64, n: usize) -> AInfAlgebra {
        assert!(n >= 1);
        let labels: Vec<(String, i64)> = (0..n)
            .map(|p| {
                let l = match p {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{p}"),
                };
                (l, degree * p as i64)
            })
            .collect();
        let basis = Basis::new(labels.clone()).unwrap();
        let pos: Vec<usize> = labels.iter().map(|(l, _)| basis.index_of(l).unwrap()).collect();
        let mut a = AInfAlgebra::from_product(
            basis,
            |i, j| {
                let (p, q) = (pos.iter().position(|&x| x == i).unwrap(), pos.iter().position(|&x| x == j).unwrap());
                if p + q < n {
                    F2Vector::unit(n, pos[p + q])
                } else {
                    F2Vector::zeros(n)
                }
            },
            6,
        )
        .unwrap();
        a.unit = Some(pos[0]);
        a
    }

    /// The group algebra `F2[Z/2]` with basis `1, g`.
    pub fn group_algebra_z2() -> AInfAlgebra {
        let basis = Basis::new([("1", 0), ("g", 0)]).unwrap();
        let mut a = AInfAlgebra::from_product(basis, |i, j| F2Vector::unit(2, i ^ j), 6).unwrap();
        a.unit = Some(0);
        a
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn arity_cap(&self) -> usize {
        self.arity_cap
    }

    pub fn with_arity_cap(mut self, cap: usize) -> AInfAlgebra {
        self.arity_cap = cap;
        self
    }

    pub fn ops(&self) -> &OpTable {
        &self.ops
    }

    /// The basis index of a strict unit, if one has been declared.
    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    /// Declares `e` a strict unit after checking `μ^2(e, x) = μ^2(x, e) = x`
    /// and that no other operation takes `e` as an input.
    pub fn set_unit(&mut self, e: usize) -> Result<()> {
        if self.basis.degree(e) != 0 {
            return Err(Error::InvalidAlgebra("a unit has degree 0".into()));
        }
        for x in 0..self.dim() {
            let ex = F2Vector::unit(self.dim(), x);
            if self.ops.value(&[e, x]) != ex || self.ops.value(&[x, e]) != ex {
                return Err(Error::InvalidAlgebra(format!("{} is not a two-sided unit", self.basis.label(e))));
            }
        }
        for (t, _) in self.ops.all_entries() {
            if t.len() != 2 && t.contains(&e) {
                return Err(Error::InvalidAlgebra(format!(
                    "μ^{} takes the unit as an input",
                    t.len()
                )));
            }
        }
        self.unit = Some(e);
        Ok(())
    }

    pub fn degree_of(&self, inputs: &[usize]) -> i64 {
        inputs.iter().map(|&i| self.basis.degree(i)).sum::<i64>() + 2 - inputs.len() as i64
    }

    /// Sets `μ^d(inputs)`, checking that the value is homogeneous of degree
    /// `Σ deg + 2 - d`.
    pub fn set(&mut self, inputs: Tuple, value: F2Vector) -> Result<()> {
        if inputs.iter().any(|&i| i >= self.dim()) || value.len() != self.dim() {
            return Err(Error::DimensionMismatch("operation input out of range".into()));
        }
        let want = self.degree_of(&inputs);
        if let Some(bad) = value.ones().find(|&o| self.basis.degree(o) != want) {
            return Err(Error::Degree(format!(
                "μ^{}({}) has a term {} of degree {}, expected {want}",
                inputs.len(),
                self.labels(&inputs),
                self.basis.label(bad),
                self.basis.degree(bad)
            )));
        }
        self.ops.set(inputs, value);
        Ok(())
    }

    /// Sets an operation value without the degree check (for corrupting
    /// structures in tests).
    pub fn set_unchecked(&mut self, inputs: Tuple, value: F2Vector) {
        self.ops.set(inputs, value);
    }

    /// Value on labelled inputs.
    pub fn op_by_labels(&self, inputs: &[&str]) -> Result<F2Vector> {
        let t = inputs
            .iter()
            .map(|l| self.basis.index_of(l).ok_or_else(|| Error::Input(format!("unknown label {l:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ops.value(&t))
    }

    pub fn apply(&self, inputs: &[&F2Vector]) -> F2Vector {
        self.ops.apply(inputs)
    }

    pub fn multiply(&self, x: &F2Vector, y: &F2Vector) -> F2Vector {
        self.ops.apply(&[x, y])
    }

    pub fn is_minimal(&self) -> bool {
        self.ops.entries(1).next().is_none()
    }

    /// Entries whose value has the wrong degree.
    pub fn grading_violations(&self) -> Vec<Tuple> {
        self.ops
            .all_entries()
            .filter(|(t, v)| v.ones().any(|o| self.basis.degree(o) != self.degree_of(t)))
            .map(|(t, _)| t.clone())
            .collect()
    }

    pub fn check_relations(&self) -> RelationReport {
        self.check_relations_up_to(self.arity_cap)
    }

    pub fn check_relations_up_to(&self, cap: usize) -> RelationReport {
        RelationReport { arity_cap: cap, violations: self.ops.relation_sums(cap) }
    }

    /// Whether only `μ^2` is nonzero.
    pub fn is_associative_algebra(&self) -> bool {
        self.ops.arities().all(|d| d == 2)
    }

    pub fn labels(&self, t: &[usize]) -> String {
        t.iter().map(|&i| self.basis.label(i)).collect::<Vec<_>>().join(", ")
    }

    pub fn vector_label(&self, v: &F2Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.ones().map(|i| self.basis.label(i)).collect::<Vec<_>>().join(" + ")
    }

    /// `End(V) ⊗ A` for `dim V = v_dim`, with
    /// `μ^d(φ_d ⊗ x_d, ..., φ_1 ⊗ x_1) = (φ_d ∘ ... ∘ φ_1) ⊗ μ^d(x_d, ..., x_1)`.
    ///
    /// The basis element `E[i,j]⊗x` is the matrix unit sending `e_j` to
    /// `e_i`, at index `x * v_dim^2 + i * v_dim + j`.
    pub fn tensor_with_endomorphisms(&self, v_dim: usize) -> AInfAlgebra {
        assert!(v_dim >= 1);
        let v2 = v_dim * v_dim;
        let mut entries = Vec::new();
        for x in 0..self.dim() {
            for i in 0..v_dim {
                for j in 0..v_dim {
                    entries.push((format!("E[{i},{j}]⊗{}", self.basis.label(x)), self.basis.degree(x)));
                }
            }
        }
        let basis = Basis::new(entries).expect("distinct labels");
        let n = basis.len();
        let idx = |x: usize, i: usize, j: usize| x * v2 + i * v_dim + j;
        let mut out = AInfAlgebra::new(basis, self.arity_cap);
        for (t, v) in self.ops.all_entries() {
            let d = t.len();
            // Index chains c_0, ..., c_d: the k-th input is E[c_k, c_{k+1}].
            let mut chain = vec![0usize; d + 1];
            loop {
                let inputs: Tuple = (0..d).map(|k| idx(t[k], chain[k], chain[k + 1])).collect();
                let value = F2Vector::from_indices(n, v.ones().map(|o| idx(o, chain[0], chain[d])));
                out.ops.set(inputs, value);
                let mut k = 0;
                while k <= d {
                    chain[k] += 1;
                    if chain[k] < v_dim {
                        break;
                    }
                    chain[k] = 0;
                    k += 1;
                }
                if k > d {
                    break;
                }
            }
        }
        if let Some(u) = self.unit {
            if v_dim == 1 {
                out.unit = Some(idx(u, 0, 0));
            }
        }
        out
    }
}

impl fmt::Display for AInfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, n) in self.basis.dims() {
            writeln!(f, "degree {d}: {n}")?;
        }
        for arity in self.ops.arities() {
            for (t, v) in self.ops.entries(arity) {
                writeln!(f, "μ^{arity}({}) = {}", self.labels(t), self.vector_label(v))?;
            }
        }
        Ok(())
    }
}
