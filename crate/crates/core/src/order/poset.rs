use crate::bits::{BitRelation, BitSet};
use crate::error::{invalid, Result};

/// A finite partially ordered set over indices `0..n` with string labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: BitRelation,
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FinitePoset {
    /// Builds a poset from any generating relation. The reflexive-transitive
    /// closure is taken; cycles are rejected.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
            return invalid(format!("pair ({i}, {j}) out of range for {n} elements"));
        }
        Self::from_relation(labels, BitRelation::from_pairs(n, pairs.iter().copied()))
    }

    pub fn from_relation(labels: Vec<String>, mut rel: BitRelation) -> Result<Self> {
        let n = labels.len();
        if rel.size() != n {
            return invalid("relation size does not match label count");
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return invalid(format!("duplicate element label {l:?}"));
            }
        }
        for i in 0..n {
            rel.set(i, i);
        }
        rel.transitive_close();
        for i in 0..n {
            for j in i + 1..n {
                if rel.get(i, j) && rel.get(j, i) {
                    return invalid(format!(
                        "order has a cycle through {:?} and {:?}",
                        labels[i], labels[j]
                    ));
                }
            }
        }
        Ok(FinitePoset { labels, leq: rel })
    }

    /// Trusted constructor: `leq` must already be a partial order.
    pub(crate) fn from_order_unchecked(labels: Vec<String>, leq: BitRelation) -> Self {
        debug_assert_eq!(labels.len(), leq.size());
        FinitePoset { labels, leq }
    }

    pub fn unlabeled(rel: BitRelation) -> Result<Self> {
        Self::from_relation(default_labels(rel.size()), rel)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_order_unchecked(default_labels(n), BitRelation::identity(n))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return invalid("label count mismatch");
        }
        Self::from_relation(labels, self.leq.clone())
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn relation(&self) -> &BitRelation {
        &self.leq
    }

    /// Elements above `i`.
    pub fn up_set(&self, i: usize) -> BitSet {
        self.leq.row(i)
    }

    pub fn down_set(&self, i: usize) -> BitSet {
        BitSet::from_indices(self.len(), (0..self.len()).filter(|&j| self.leq(j, i)))
    }

    pub fn upper_bounds(&self, xs: &[usize]) -> BitSet {
        let mut s = BitSet::full(self.len());
        for &x in xs {
            s.intersect_with(&self.leq.row(x));
        }
        s
    }

    pub fn lower_bounds(&self, xs: &[usize]) -> BitSet {
        BitSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&j| xs.iter().all(|&x| self.leq(j, x))),
        )
    }

    /// Least element of a set, if it has one.
    pub fn least_of(&self, set: &BitSet) -> Option<usize> {
        set.iter().find(|&u| set.iter().all(|v| self.leq(u, v)))
    }

    pub fn greatest_of(&self, set: &BitSet) -> Option<usize> {
        set.iter().find(|&u| set.iter().all(|v| self.leq(v, u)))
    }

    pub fn sup(&self, xs: &[usize]) -> Option<usize> {
        self.least_of(&self.upper_bounds(xs))
    }

    pub fn inf(&self, xs: &[usize]) -> Option<usize> {
        self.greatest_of(&self.lower_bounds(xs))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least_of(&BitSet::full(self.len()))
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest_of(&BitSet::full(self.len()))
    }

    pub fn is_antichain(&self, xs: &[usize]) -> bool {
        xs.iter()
            .enumerate()
            .all(|(k, &x)| xs[k + 1..].iter().all(|&y| x != y && !self.comparable(x, y)))
    }

    /// Maximal elements of `xs`, sorted and deduplicated.
    pub fn maximal(&self, xs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = xs
            .iter()
            .copied()
            .filter(|&x| !xs.iter().any(|&y| self.lt(x, y)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn minimal(&self, xs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = xs
            .iter()
            .copied()
            .filter(|&x| !xs.iter().any(|&y| self.lt(y, x)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `{a, b, …}` rendering of a subset.
    pub fn labels_of(&self, xs: &[usize]) -> String {
        let v: Vec<&str> = xs.iter().map(|&x| self.label(x)).collect();
        format!("{{{}}}", v.join(", "))
    }

    pub fn dual(&self) -> FinitePoset {
        FinitePoset { labels: self.labels.clone(), leq: self.leq.transpose() }
    }

    /// Pairs `(i, j)` with `j` covering `i`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Order-preserving check for a map into another poset.
    pub fn monotone_violation(&self, target: &FinitePoset, map: &[usize]) -> Option<(usize, usize)> {
        self.leq
            .pairs()
            .find(|&(i, j)| !target.leq(map[i], map[j]))
    }

    pub fn is_order_embedding(&self, target: &FinitePoset, map: &[usize]) -> bool {
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| self.leq(i, j) == target.leq(map[i], map[j]))
        })
    }
}
