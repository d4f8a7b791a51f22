use std::collections::{BTreeMap, HashMap};

use crate::f2linalg::F2Vector;

/// Input tuple of basis indices, in written order.
pub type Tuple = Vec<usize>;

/// Sparse multilinear operations on a space of dimension `dim`: for each
/// arity, the nonzero values on basis tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpTable {
    dim: usize,
    ops: BTreeMap<usize, BTreeMap<Tuple, F2Vector>>,
}

impl OpTable {
    pub fn new(dim: usize) -> OpTable {
        OpTable { dim, ops: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the value on `inputs`; a zero value removes the entry.
    pub fn set(&mut self, inputs: Tuple, value: F2Vector) {
        assert_eq!(value.len(), self.dim, "output length");
        assert!(!inputs.is_empty(), "operations have at least one input");
        let arity = inputs.len();
        if value.is_zero() {
            if let Some(m) = self.ops.get_mut(&arity) {
                m.remove(&inputs);
                if m.is_empty() {
                    self.ops.remove(&arity);
                }
            }
        } else {
            self.ops.entry(arity).or_default().insert(inputs, value);
        }
    }

    pub fn add(&mut self, inputs: Tuple, value: &F2Vector) {
        let current = self.get(&inputs).cloned().unwrap_or_else(|| F2Vector::zeros(self.dim));
        self.set(inputs, current.add(value));
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&F2Vector> {
        self.ops.get(&inputs.len())?.get(inputs)
    }

    pub fn value(&self, inputs: &[usize]) -> F2Vector {
        self.get(inputs).cloned().unwrap_or_else(|| F2Vector::zeros(self.dim))
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.keys().copied()
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    pub fn entries(&self, arity: usize) -> impl Iterator<Item = (&Tuple, &F2Vector)> {
        self.ops.get(&arity).into_iter().flatten()
    }

    pub fn all_entries(&self) -> impl Iterator<Item = (&Tuple, &F2Vector)> {
        self.ops.values().flatten()
    }

    pub fn entry_count(&self) -> usize {
        self.ops.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Evaluates the arity-`inputs.len()` operation on vectors.
    pub fn apply(&self, inputs: &[&F2Vector]) -> F2Vector {
        let mut out = F2Vector::zeros(self.dim);
        for (t, v) in self.entries(inputs.len()) {
            if t.iter().zip(inputs).all(|(&i, x)| x.get(i)) {
                out.add_assign(v);
            }
        }
        out
    }

    /// Re-indexes into a space of dimension `dim` through `map`.
    pub fn remap(&self, map: &[usize], dim: usize) -> OpTable {
        let mut out = OpTable::new(dim);
        for (t, v) in self.all_entries() {
            let t2 = t.iter().map(|&i| map[i]).collect();
            out.set(t2, F2Vector::from_indices(dim, v.ones().map(|i| map[i])));
        }
        out
    }

    pub fn merge(&mut self, other: &OpTable) {
        assert_eq!(self.dim, other.dim);
        for (t, v) in other.all_entries() {
            self.add(t.clone(), v);
        }
    }

    /// The A∞ relation sums
    /// `Σ μ^{i+1+j}(x_n, ..., μ^k(...), ..., x_1)` for all total arities
    /// `n <= max_arity`, keyed by input tuple; only nonzero sums are kept.
    pub fn relation_sums(&self, max_arity: usize) -> BTreeMap<Tuple, F2Vector> {
        self.composition_sums(self, max_arity)
    }

    /// `Σ outer(.., inner(..), ..)` over all entries, keyed by the combined
    /// input tuple, for total arities up to `max_arity`. Both tables act on
    /// the same index space; only nonzero sums are kept.
    pub fn composition_sums(&self, inner: &OpTable, max_arity: usize) -> BTreeMap<Tuple, F2Vector> {
        let mut acc: HashMap<Tuple, F2Vector> = HashMap::new();
        // Inner operations indexed by which basis element their value contains.
        let mut by_output: HashMap<usize, Vec<&Tuple>> = HashMap::new();
        for (t, v) in inner.all_entries() {
            for o in v.ones() {
                by_output.entry(o).or_default().push(t);
            }
        }
        for (outer, v) in self.all_entries() {
            for (pos, &slot) in outer.iter().enumerate() {
                let Some(found) = by_output.get(&slot) else { continue };
                for s in found {
                    if outer.len() + s.len() - 1 > max_arity {
                        continue;
                    }
                    let key: Tuple = outer[..pos].iter().chain(s.iter()).chain(&outer[pos + 1..]).copied().collect();
                    acc.entry(key).or_insert_with(|| F2Vector::zeros(self.dim)).add_assign(v);
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}
