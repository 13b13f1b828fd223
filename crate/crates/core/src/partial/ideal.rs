use crate::bits::BitSet;
use crate::partial::lattice::FinitePartialLattice;

/// Least lower subset containing `xs` closed under the defined joins.
/// The ideal generated by the empty set is empty.
pub fn ideal_generated(p: &FinitePartialLattice, xs: &[usize]) -> BitSet {
    generated(p, xs, true)
}

/// Least upper subset containing `xs` closed under the defined meets.
pub fn filter_generated(p: &FinitePartialLattice, xs: &[usize]) -> BitSet {
    generated(p, xs, false)
}

fn generated(p: &FinitePartialLattice, xs: &[usize], lower: bool) -> BitSet {
    let n = p.len();
    let mut set = BitSet::new(n);
    let add = |set: &mut BitSet, x: usize| {
        let mut grew = false;
        for y in 0..n {
            let inside = if lower { p.leq(y, x) } else { p.leq(x, y) };
            if inside {
                grew |= set.insert(y);
            }
        }
        grew
    };
    for &x in xs {
        add(&mut set, x);
    }
    let rules = if lower { p.join_rules() } else { p.meet_rules() };
    loop {
        let mut grew = false;
        for (args, v) in rules {
            if !set.contains(*v) && args.iter().all(|&a| set.contains(a)) {
                grew |= add(&mut set, *v);
            }
        }
        if !grew {
            return set;
        }
    }
}
