//! Posets and lattices up to isomorphism.
//!
//! Posets of size `n` are grown from posets of size `n - 1` by adding a new
//! maximal element above some down-set; every poset arises this way by
//! deleting one of its maximal elements. Isomorphs are rejected through a
//! canonical code: the least adjacency bitstring over all relabellings that
//! keep elements sorted by (down-set size, up-set size).

use std::collections::HashSet;

use rayon::prelude::*;

use crate::bits::BitRelation;
use crate::error::{resource, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::{default_labels, FinitePoset};

pub const MAX_ENUM_SIZE: usize = 8;

fn code_of(rel: &BitRelation, perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut code = 0u64;
    for k in 0..n {
        for l in 0..n {
            if rel.get(perm[k], perm[l]) {
                code |= 1 << (k * n + l);
            }
        }
    }
    code
}

fn invariant(rel: &BitRelation, i: usize) -> (usize, usize) {
    let n = rel.size();
    let down = (0..n).filter(|&j| rel.get(j, i)).count();
    let up = (0..n).filter(|&j| rel.get(i, j)).count();
    (down, up)
}

/// Canonical code and the permutation realizing it (`perm[k]` is the old
/// index placed at position `k`).
pub fn canonical_form(rel: &BitRelation) -> (u64, Vec<usize>) {
    let n = rel.size();
    assert!(n <= MAX_ENUM_SIZE, "canonical form supports at most {MAX_ENUM_SIZE} elements");
    let mut elems: Vec<usize> = (0..n).collect();
    elems.sort_by_key(|&i| invariant(rel, i));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &e in &elems {
        match blocks.last_mut() {
            Some(b) if invariant(rel, b[0]) == invariant(rel, e) => b.push(e),
            _ => blocks.push(vec![e]),
        }
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut perm = Vec::with_capacity(n);
    fn rec(
        rel: &BitRelation,
        blocks: &mut [Vec<usize>],
        bi: usize,
        perm: &mut Vec<usize>,
        best: &mut Option<(u64, Vec<usize>)>,
    ) {
        if bi == blocks.len() {
            let c = code_of(rel, perm);
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                *best = Some((c, perm.clone()));
            }
            return;
        }
        let block = blocks[bi].clone();
        permute(rel, blocks, bi, &block, &mut vec![false; block.len()], perm, best);
    }
    fn permute(
        rel: &BitRelation,
        blocks: &mut [Vec<usize>],
        bi: usize,
        block: &[usize],
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        best: &mut Option<(u64, Vec<usize>)>,
    ) {
        if used.iter().all(|&u| u) {
            rec(rel, blocks, bi + 1, perm, best);
            return;
        }
        for k in 0..block.len() {
            if !used[k] {
                used[k] = true;
                perm.push(block[k]);
                permute(rel, blocks, bi, block, used, perm, best);
                perm.pop();
                used[k] = false;
            }
        }
    }
    rec(rel, &mut blocks, 0, &mut perm, &mut best);
    best.expect("at least one permutation")
}

fn permuted(rel: &BitRelation, perm: &[usize]) -> BitRelation {
    BitRelation::from_fn(perm.len(), |k, l| rel.get(perm[k], perm[l]))
}

fn down_sets(rel: &BitRelation) -> Vec<Vec<usize>> {
    let n = rel.size();
    (0u32..(1 << n))
        .filter(|&m| {
            (0..n).all(|x| m >> x & 1 == 0 || (0..n).all(|y| !rel.get(y, x) || m >> y & 1 == 1))
        })
        .map(|m| (0..n).filter(|&x| m >> x & 1 == 1).collect())
        .collect()
}

/// Order relations of all posets with exactly `n` elements, one per
/// isomorphism class, each in canonical position.
pub fn poset_relations(n: usize) -> Result<Vec<BitRelation>> {
    if n > MAX_ENUM_SIZE {
        return resource(format!("poset enumeration is bounded by {MAX_ENUM_SIZE} elements"));
    }
    let mut level = vec![BitRelation::empty(0)];
    for m in 1..=n {
        let candidates: Vec<(u64, BitRelation)> = level
            .par_iter()
            .flat_map_iter(|rel| {
                down_sets(rel).into_iter().map(move |ds| {
                    let mut next = BitRelation::identity(m);
                    for (i, j) in rel.pairs() {
                        next.set(i, j);
                    }
                    for &d in &ds {
                        next.set(d, m - 1);
                    }
                    let (code, perm) = canonical_form(&next);
                    (code, permuted(&next, &perm))
                })
            })
            .collect();
        let mut seen = HashSet::new();
        let mut next_level: Vec<(u64, BitRelation)> = candidates
            .into_iter()
            .filter(|(c, _)| seen.insert(*c))
            .collect();
        next_level.sort_by_key(|(c, _)| *c);
        level = next_level.into_iter().map(|(_, r)| r).collect();
    }
    Ok(level)
}

pub fn posets_up_to_iso(n: usize) -> Result<Vec<FinitePoset>> {
    Ok(poset_relations(n)?
        .into_iter()
        .map(|r| FinitePoset::from_order_unchecked(default_labels(n), r))
        .collect())
}

/// All lattices with exactly `n` elements up to isomorphism. Bottom is index
/// 0 and top is index `n - 1`.
pub fn lattices_up_to_iso(n: usize) -> Result<Vec<FiniteLattice>> {
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![FiniteLattice::chain(1)]);
    }
    let inner = poset_relations(n - 2)?;
    let out = inner
        .par_iter()
        .filter_map(|rel| {
            let r = BitRelation::from_fn(n, |i, j| {
                i == 0 || j == n - 1 || (i > 0 && j > 0 && i < n - 1 && j < n - 1 && rel.get(i - 1, j - 1))
            });
            FiniteLattice::from_poset(FinitePoset::from_order_unchecked(default_labels(n), r)).ok()
        })
        .collect();
    Ok(out)
}

/// All lattices with at most `n` elements.
pub fn lattices_up_to(n: usize) -> Result<Vec<FiniteLattice>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(lattices_up_to_iso(k)?);
    }
    Ok(out)
}

/// An order isomorphism `a → b` as an index map, if one exists.
pub fn find_isomorphism(a: &FinitePoset, b: &FinitePoset) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let inv_a: Vec<_> = (0..n).map(|i| invariant(a.relation(), i)).collect();
    let inv_b: Vec<_> = (0..n).map(|i| invariant(b.relation(), i)).collect();
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        a: &FinitePoset,
        b: &FinitePoset,
        inv_a: &[(usize, usize)],
        inv_b: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == a.len() {
            return true;
        }
        for v in 0..b.len() {
            if used[v] || inv_a[k] != inv_b[v] {
                continue;
            }
            let ok = (0..k).all(|j| a.leq(j, k) == b.leq(map[j], v) && a.leq(k, j) == b.leq(v, map[j]));
            if ok {
                map[k] = v;
                used[v] = true;
                if rec(k + 1, a, b, inv_a, inv_b, map, used) {
                    return true;
                }
                used[v] = false;
            }
        }
        false
    }
    rec(0, a, b, &inv_a, &inv_b, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| poset_relations(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn lattice_counts_small() {
        let counts: Vec<usize> = (1..=6).map(|n| lattices_up_to_iso(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15]);
    }

    #[test]
    fn canonical_form_is_invariant() {
        let r = BitRelation::from_fn(4, |i, j| i == j || (i == 0 && j > 0) || (i == 1 && j == 3));
        let (c1, _) = canonical_form(&r);
        let perm = [3, 1, 0, 2];
        let r2 = BitRelation::from_fn(4, |k, l| r.get(perm[k], perm[l]));
        assert_eq!(canonical_form(&r2).0, c1);
    }

    #[test]
    fn isomorphism_found() {
        let m3 = FiniteLattice::m3();
        let five = lattices_up_to_iso(5).unwrap();
        assert_eq!(
            five.iter().filter(|l| find_isomorphism(l.poset(), m3.poset()).is_some()).count(),
            1
        );
    }
}
