use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use crate::bits::BitRelation;
use crate::error::{resource, Result};
use crate::order::lattice::{FiniteLattice, FiniteOrder};
use crate::order::poset::FinitePoset;
use crate::partial::congruence::{ClosureEngine, Congruence};
use crate::partial::lattice::FinitePartialLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConBound {
    pub max_elements: usize,
    pub max_congruences: usize,
}

impl Default for ConBound {
    fn default() -> Self {
        ConBound { max_elements: 8, max_congruences: 20_000 }
    }
}

/// Above this many congruences no join table is cached.
const JOIN_TABLE_LIMIT: usize = 1024;

/// All congruences of a finite partial lattice, ordered by inclusion.
///
/// Index 0 is `0_P` and the last index is `1_P`.
#[derive(Debug)]
pub struct ConLattice {
    engine: ClosureEngine,
    congs: Vec<BitRelation>,
    index: HashMap<BitRelation, usize>,
    principal: Vec<usize>,
    join_table: OnceLock<Option<Vec<u32>>>,
    lattice: OnceLock<Option<FiniteLattice>>,
}

pub fn con_lattice(p: &FinitePartialLattice, bound: ConBound) -> Result<ConLattice> {
    ConLattice::new(p, bound)
}

impl ConLattice {
    pub fn new(p: &FinitePartialLattice, bound: ConBound) -> Result<Self> {
        let n = p.len();
        if n > bound.max_elements {
            return resource(format!(
                "Con P enumeration bounded by {} elements, got {n}",
                bound.max_elements
            ));
        }
        let engine = ClosureEngine::new(p);
        let mut principal_rel = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                principal_rel.push(engine.close_pairs([(x, y)]));
            }
        }
        let mut gens: Vec<BitRelation> = principal_rel.clone();
        gens.sort();
        gens.dedup();
        let mut found: HashMap<BitRelation, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        let zero = engine.base().clone();
        for r in std::iter::once(zero).chain(gens.iter().cloned()) {
            if found.insert(r.clone(), ()).is_none() {
                queue.push_back(r);
            }
        }
        while let Some(c) = queue.pop_front() {
            for g in &gens {
                if g.is_subset(&c) {
                    continue;
                }
                let mut u = c.clone();
                u.union_with(g);
                let j = engine.close(u);
                if !found.contains_key(&j) {
                    if found.len() >= bound.max_congruences {
                        return resource(format!(
                            "more than {} congruences",
                            bound.max_congruences
                        ));
                    }
                    found.insert(j.clone(), ());
                    queue.push_back(j);
                }
            }
        }
        let mut congs: Vec<BitRelation> = found.into_keys().collect();
        congs.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        let index: HashMap<BitRelation, usize> =
            congs.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let principal = principal_rel.iter().map(|r| index[r]).collect();
        Ok(ConLattice {
            engine,
            congs,
            index,
            principal,
            join_table: OnceLock::new(),
            lattice: OnceLock::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.congs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn carrier_size(&self) -> usize {
        self.engine.size()
    }

    pub fn engine(&self) -> &ClosureEngine {
        &self.engine
    }

    pub fn relation(&self, i: usize) -> &BitRelation {
        &self.congs[i]
    }

    pub fn congruence(&self, i: usize) -> Congruence {
        Congruence::from_closed(self.congs[i].clone())
    }

    pub fn relations(&self) -> &[BitRelation] {
        &self.congs
    }

    pub fn index_of(&self, rel: &BitRelation) -> Option<usize> {
        self.index.get(rel).copied()
    }

    /// Index of the least congruence containing `rel`.
    pub fn close_index(&self, rel: BitRelation) -> usize {
        self.index[&self.engine.close(rel)]
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.congs.len() - 1
    }

    pub fn theta_plus(&self, x: usize, y: usize) -> usize {
        self.principal[x * self.engine.size() + y]
    }

    pub fn theta(&self, x: usize, y: usize) -> usize {
        self.join(self.theta_plus(x, y), self.theta_plus(y, x))
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.congs[i].is_subset(&self.congs[j])
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.index[&self.congs[i].intersection(&self.congs[j])]
    }

    fn join_uncached(&self, i: usize, j: usize) -> usize {
        if self.leq(i, j) {
            return j;
        }
        if self.leq(j, i) {
            return i;
        }
        let mut u = self.congs[i].clone();
        u.union_with(&self.congs[j]);
        self.close_index(u)
    }

    fn join_table(&self) -> Option<&Vec<u32>> {
        self.join_table
            .get_or_init(|| {
                let m = self.len();
                (m <= JOIN_TABLE_LIMIT).then(|| {
                    let mut t = vec![0u32; m * m];
                    for i in 0..m {
                        for j in i..m {
                            let v = self.join_uncached(i, j) as u32;
                            t[i * m + j] = v;
                            t[j * m + i] = v;
                        }
                    }
                    t
                })
            })
            .as_ref()
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        match self.join_table() {
            Some(t) => t[i * self.len() + j] as usize,
            None => self.join_uncached(i, j),
        }
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.zero(), |acc, x| self.join(acc, x))
    }

    /// Con P as a [`FiniteLattice`] (labels `c0`, `c1`, …). Fails above the
    /// table limit.
    pub fn lattice(&self) -> Result<&FiniteLattice> {
        self.lattice
            .get_or_init(|| {
                let m = self.len();
                (m <= JOIN_TABLE_LIMIT).then(|| {
                    let labels = (0..m).map(|i| format!("c{i}")).collect();
                    let rel = BitRelation::from_fn(m, |i, j| self.leq(i, j));
                    let poset = FinitePoset::from_order_unchecked(labels, rel);
                    let join = (0..m * m).map(|k| self.join(k / m, k % m)).collect();
                    let meet = (0..m * m).map(|k| self.meet(k / m, k % m)).collect();
                    FiniteLattice::from_tables_unchecked(poset, join, meet)
                })
            })
            .as_ref()
            .ok_or_else(|| {
                crate::Error::Resource(format!(
                    "Con P has {} elements; lattice tables are bounded by {JOIN_TABLE_LIMIT}",
                    self.len()
                ))
            })
    }

    /// Non-order pairs `(x, y)` of congruence `i`, the candidate generators.
    pub fn generator_pairs(&self, i: usize) -> Vec<(usize, usize)> {
        let base = self.engine.base();
        self.congs[i].pairs().filter(|&(x, y)| !base.get(x, y)).collect()
    }
}

impl FiniteOrder for ConLattice {
    fn size(&self) -> usize {
        self.len()
    }
    fn order_leq(&self, a: usize, b: usize) -> bool {
        self.leq(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn con(l: FiniteLattice) -> ConLattice {
        ConLattice::new(&FinitePartialLattice::from_lattice(l), ConBound::default()).unwrap()
    }

    #[test]
    fn point_has_one_congruence() {
        assert_eq!(con(FiniteLattice::chain(1)).len(), 1);
    }

    #[test]
    fn chain_con_is_boolean() {
        for n in 2..=4 {
            let c = con(FiniteLattice::chain(n));
            assert_eq!(c.len(), 1 << (n - 1));
            let l = c.lattice().unwrap();
            assert!(l.is_distributive());
            let atoms = (0..c.len()).filter(|&i| l.poset().covers().contains(&(0, i))).count();
            assert_eq!(atoms, n - 1);
        }
    }

    #[test]
    fn m3_and_n5() {
        assert_eq!(con(FiniteLattice::m3()).len(), 2);
        assert_eq!(con(FiniteLattice::n5()).len(), 5);
    }

    #[test]
    fn resource_bound_is_reported() {
        let p = FinitePartialLattice::from_lattice(FiniteLattice::chain(4));
        let err = ConLattice::new(&p, ConBound { max_elements: 8, max_congruences: 3 }).unwrap_err();
        assert!(matches!(err, crate::Error::Resource(_)));
    }
}
