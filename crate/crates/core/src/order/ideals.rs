use crate::bits::{BitRelation, BitSet};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::FinitePoset;
use crate::order::semilattice::FiniteSemilattice;

/// Nonempty down-sets closed under binary joins; these always contain 0.
pub fn ideals(s: &FiniteSemilattice) -> Vec<BitSet> {
    let n = s.len();
    let mut out: Vec<BitSet> = Vec::new();
    // Every ideal of a finite semilattice is principal: the down-set of its join.
    for t in 0..n {
        let set = BitSet::from_indices(n, (0..n).filter(|&x| s.leq(x, t)));
        if !out.contains(&set) {
            out.push(set);
        }
    }
    out.sort_by_key(|i| (i.count(), i.clone()));
    out
}

/// `Id S` ordered by inclusion.
pub fn ideal_lattice(s: &FiniteSemilattice) -> FiniteLattice {
    let ids = ideals(s);
    let labels = ids
        .iter()
        .map(|i| {
            let names: Vec<&str> = i.iter().map(|x| s.label(x)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let rel = BitRelation::from_fn(ids.len(), |a, b| ids[a].is_subset(&ids[b]));
    FiniteLattice::from_poset(FinitePoset::from_order_unchecked(labels, rel))
        .expect("ideals of a finite semilattice form a lattice")
}

/// Every element of a finite lattice is compact, so this is the ⟨∨,0⟩-reduct.
pub fn compact_elements(l: &FiniteLattice) -> FiniteSemilattice {
    FiniteSemilattice::from_lattice(l)
}

/// Brute-force oracle for tests: nonempty subsets that are down-closed and join-closed.
pub fn ideals_brute_force(s: &FiniteSemilattice) -> Vec<BitSet> {
    let n = s.len();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set = BitSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        let down = set.iter().all(|x| (0..n).all(|y| !s.leq(y, x) || set.contains(y)));
        let closed = set.iter().all(|x| set.iter().all(|y| set.contains(s.join(x, y))));
        if down && closed {
            out.push(set);
        }
    }
    out.sort_by_key(|i| (i.count(), i.clone()));
    out
}
