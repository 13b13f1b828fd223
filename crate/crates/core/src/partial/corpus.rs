use crate::enumerate::posets_up_to_iso;
use crate::error::{resource, Result};
use crate::order::poset::FinitePoset;
use crate::partial::lattice::{antichains, FinitePartialLattice};

/// Above this many optional entries on one poset the corpus refuses to
/// enumerate all subsets.
const MAX_OPTIONAL_ENTRIES: usize = 16;

/// Every partial lattice on the poset: each antichain whose supremum
/// (infimum) exists may or may not carry a defined join (meet).
pub fn partial_lattices_on(poset: &FinitePoset) -> Result<Vec<FinitePartialLattice>> {
    let mut joinable = Vec::new();
    let mut meetable = Vec::new();
    for a in antichains(poset) {
        if let Some(s) = poset.sup(&a) {
            joinable.push((a.clone(), s));
        }
        if let Some(i) = poset.inf(&a) {
            meetable.push((a, i));
        }
    }
    let k = joinable.len() + meetable.len();
    if k > MAX_OPTIONAL_ENTRIES {
        return resource(format!("{k} optional join/meet entries on one poset"));
    }
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u32..(1 << k) {
        let pick = |off: usize, v: &[(Vec<usize>, usize)]| {
            v.iter()
                .enumerate()
                .filter(|(i, _)| mask >> (off + i) & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect::<Vec<_>>()
        };
        let joins = pick(0, &joinable);
        let meets = pick(joinable.len(), &meetable);
        out.push(FinitePartialLattice::new(poset.clone(), joins, meets)?);
    }
    Ok(out)
}

/// Partial lattices with `1 ≤ |P| ≤ max_size`, one poset per isomorphism
/// class, all choices of defined operations on it.
pub fn partial_lattice_corpus(max_size: usize) -> Result<Vec<FinitePartialLattice>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        for poset in posets_up_to_iso(n)? {
            out.extend(partial_lattices_on(&poset)?);
        }
    }
    Ok(out)
}
