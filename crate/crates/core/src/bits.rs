//! Dense bit sets and square bit matrices over element indices.

use std::fmt;

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

/// A fixed-capacity set of indices `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, words: vec![0; words_for(len)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let w = &mut self.words[i / WORD];
        let mask = 1u64 << (i % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / WORD] &= !(1u64 << (i % WORD));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Returns true if anything was added.
    pub fn union_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let next = *a | b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `0..n`, stored row-major: row `i` is the set of `j`
/// with `(i, j)` in the relation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRelation {
    n: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitRelation {
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        BitRelation { n, stride, bits: vec![0; stride * n.max(1)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.set(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j);
            }
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (i, j) in pairs {
            r.set(i, j);
        }
        r
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    r.set(i, j);
                }
            }
        }
        r
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) -> bool {
        let w = &mut self.bits[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitSet {
        BitSet { len: self.n, words: self.row_words(i).to_vec() }
    }

    /// `row(i) |= set`; returns true if the row grew.
    pub fn or_row(&mut self, i: usize, set: &[u64]) -> bool {
        let mut changed = false;
        let row = &mut self.bits[i * self.stride..(i + 1) * self.stride];
        for (a, b) in row.iter_mut().zip(set) {
            let next = *a | b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }

    /// `row(dst) |= row(src)`; returns true if the row grew.
    pub fn or_row_from(&mut self, dst: usize, src: usize) -> bool {
        if dst == src {
            return false;
        }
        let mut changed = false;
        for w in 0..self.stride {
            let s = self.bits[src * self.stride + w];
            let d = &mut self.bits[dst * self.stride + w];
            let next = *d | s;
            changed |= next != *d;
            *d = next;
        }
        changed
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &BitRelation) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitRelation) -> bool {
        let mut changed = false;
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            let next = *a | b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }

    pub fn intersection(&self, other: &BitRelation) -> BitRelation {
        let mut r = self.clone();
        for (a, b) in r.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
        r
    }

    pub fn transpose(&self) -> BitRelation {
        let mut t = BitRelation::empty(self.n);
        for (i, j) in self.pairs() {
            t.set(j, i);
        }
        t
    }

    /// Warshall closure; returns true if anything was added.
    pub fn transitive_close(&mut self) -> bool {
        let mut changed = false;
        for k in 0..self.n {
            for i in 0..self.n {
                if i != k && self.get(i, k) {
                    changed |= self.or_row_from(i, k);
                }
            }
        }
        changed
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let mut c = self.clone();
        !c.transitive_close()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            let row = self.row_words(i);
            row.iter().enumerate().flat_map(move |(wi, &w)| {
                let mut w = w;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((i, wi * WORD + t))
                })
            })
        })
    }
}

impl fmt::Debug for BitRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Intersection of the rows of `rel` indexed by `rows`, as raw words.
pub(crate) fn rows_intersection(rel: &BitRelation, rows: &[usize]) -> Vec<u64> {
    let mut acc = rel.row_words(rows[0]).to_vec();
    for &r in &rows[1..] {
        for (a, b) in acc.iter_mut().zip(rel.row_words(r)) {
            *a &= b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warshall_closes_chain() {
        let mut r = BitRelation::from_pairs(4, [(0, 1), (1, 2), (2, 3)]);
        assert!(r.transitive_close());
        assert!(r.get(0, 3));
        assert!(!r.get(3, 0));
        assert!(r.is_transitive());
    }

    #[test]
    fn bitset_iter_crosses_word_boundary() {
        let s = BitSet::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.count(), 4);
    }

    #[test]
    fn pairs_roundtrip() {
        let r = BitRelation::from_pairs(70, [(0, 69), (69, 0), (5, 5)]);
        let v: Vec<_> = r.pairs().collect();
        assert_eq!(v, vec![(0, 69), (5, 5), (69, 0)]);
    }
}
