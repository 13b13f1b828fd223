//! Complete join/meet homomorphisms between finite lattices and their adjoints.

use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::order::lattice::{FiniteLattice, FiniteOrder};

fn fmt_subset(l: &FiniteLattice, xs: &[usize]) -> String {
    let names: Vec<&str> = xs.iter().map(|&x| l.label(x)).collect();
    format!("{{{}}}", names.join(", "))
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for x in start..n {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn check_map(source: &FiniteLattice, target: &FiniteLattice, map: &[usize]) -> Result<()> {
    if map.len() != source.len() {
        return invalid("map length differs from source size");
    }
    if map.iter().any(|&v| v >= target.len()) {
        return invalid("map value out of range");
    }
    Ok(())
}

/// Finds a subset whose join is not preserved. Every finite join is an
/// iterated binary join and the empty join is the bottom, so the empty set
/// and pairs already decide completeness; subsets of size three and the
/// whole carrier are also checked.
fn join_violation(source: &FiniteLattice, target: &FiniteLattice, map: &[usize]) -> Option<Vec<usize>> {
    let mut candidates = subsets_up_to(source.len(), 3);
    candidates.push((0..source.len()).collect());
    candidates.into_iter().find(|xs| {
        map[source.join_all(xs.iter().copied())] != target.join_all(xs.iter().map(|&x| map[x]))
    })
}

fn meet_violation(source: &FiniteLattice, target: &FiniteLattice, map: &[usize]) -> Option<Vec<usize>> {
    let mut candidates = subsets_up_to(source.len(), 3);
    candidates.push((0..source.len()).collect());
    candidates.into_iter().find(|xs| {
        map[source.meet_all(xs.iter().copied())] != target.meet_all(xs.iter().map(|&x| map[x]))
    })
}

/// A map preserving all joins, the empty one included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteJoinHom {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    map: Vec<usize>,
}

/// A map preserving all meets, the empty one included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteMeetHom {
    source: Arc<FiniteLattice>,
    target: Arc<FiniteLattice>,
    map: Vec<usize>,
}

impl CompleteJoinHom {
    pub fn new(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, map: Vec<usize>) -> Result<Self> {
        check_map(&source, &target, &map)?;
        if let Some(xs) = join_violation(&source, &target, &map) {
            return invalid(format!(
                "map does not preserve the join of {}",
                fmt_subset(&source, &xs)
            ));
        }
        Ok(CompleteJoinHom { source, target, map })
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        let map = (0..l.len()).collect();
        CompleteJoinHom { source: l.clone(), target: l, map }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `f*(b)`: the greatest `a` with `f(a) ≤ b`.
    pub fn upper_adjoint(&self) -> CompleteMeetHom {
        let map = upper_adjoint_generic(&*self.source, &*self.target, &self.map)
            .expect("complete join homomorphisms have upper adjoints");
        CompleteMeetHom { source: self.target.clone(), target: self.source.clone(), map }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &CompleteJoinHom) -> Result<CompleteJoinHom> {
        if *self.target != *next.source {
            return invalid("composition of non-composable homomorphisms");
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(CompleteJoinHom { source: self.source.clone(), target: next.target.clone(), map })
    }
}

impl CompleteMeetHom {
    pub fn new(source: Arc<FiniteLattice>, target: Arc<FiniteLattice>, map: Vec<usize>) -> Result<Self> {
        check_map(&source, &target, &map)?;
        if let Some(xs) = meet_violation(&source, &target, &map) {
            return invalid(format!(
                "map does not preserve the meet of {}",
                fmt_subset(&source, &xs)
            ));
        }
        Ok(CompleteMeetHom { source, target, map })
    }

    pub fn identity(l: Arc<FiniteLattice>) -> Self {
        let map = (0..l.len()).collect();
        CompleteMeetHom { source: l.clone(), target: l, map }
    }

    pub fn source(&self) -> &Arc<FiniteLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteLattice> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `g†(a)`: the least `b` with `a ≤ g(b)`.
    pub fn lower_adjoint(&self) -> CompleteJoinHom {
        let map = lower_adjoint_generic(&*self.source, &*self.target, &self.map)
            .expect("complete meet homomorphisms have lower adjoints");
        CompleteJoinHom { source: self.target.clone(), target: self.source.clone(), map }
    }

    pub fn then(&self, next: &CompleteMeetHom) -> Result<CompleteMeetHom> {
        if *self.target != *next.source {
            return invalid("composition of non-composable homomorphisms");
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(CompleteMeetHom { source: self.source.clone(), target: next.target.clone(), map })
    }
}

pub fn adjoint_of_join_hom(f: &CompleteJoinHom) -> CompleteMeetHom {
    f.upper_adjoint()
}

pub fn adjoint_of_meet_hom(g: &CompleteMeetHom) -> CompleteJoinHom {
    g.lower_adjoint()
}

/// First `(a, b)` where `f(a) ≤ b ⇔ a ≤ g(b)` fails.
pub fn adjunction_violation(f: &CompleteJoinHom, g: &CompleteMeetHom) -> Option<(usize, usize)> {
    let (a_lat, b_lat) = (f.source(), f.target());
    for a in 0..a_lat.len() {
        for b in 0..b_lat.len() {
            if b_lat.leq(f.apply(a), b) != a_lat.leq(a, g.apply(b)) {
                return Some((a, b));
            }
        }
    }
    None
}

/// For `g: B → A`, the map `a ↦ least b with a ≤ g(b)`, or `None` if some
/// such set has no least element.
pub fn lower_adjoint_generic<B: FiniteOrder + ?Sized, A: FiniteOrder + ?Sized>(
    b_dom: &B,
    a_cod: &A,
    g: &[usize],
) -> Option<Vec<usize>> {
    (0..a_cod.size())
        .map(|a| {
            let cands: Vec<usize> = (0..b_dom.size()).filter(|&b| a_cod.order_leq(a, g[b])).collect();
            cands
                .iter()
                .copied()
                .find(|&b| cands.iter().all(|&c| b_dom.order_leq(b, c)))
        })
        .collect()
}

/// For `f: A → B`, the map `b ↦ greatest a with f(a) ≤ b`.
pub fn upper_adjoint_generic<A: FiniteOrder + ?Sized, B: FiniteOrder + ?Sized>(
    a_dom: &A,
    b_cod: &B,
    f: &[usize],
) -> Option<Vec<usize>> {
    (0..b_cod.size())
        .map(|b| {
            let cands: Vec<usize> = (0..a_dom.size()).filter(|&a| b_cod.order_leq(f[a], b)).collect();
            cands
                .iter()
                .copied()
                .find(|&a| cands.iter().all(|&c| a_dom.order_leq(c, a)))
        })
        .collect()
}

/// All complete join homomorphisms `a → b`, by backtracking along a linear
/// extension: join-reducible elements have forced values.
pub fn enumerate_complete_join_homs(a: &FiniteLattice, b: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (a.poset().down_set(x).count(), x));
    // For a join-reducible x, two strictly smaller elements joining to x.
    let split: Vec<Option<(usize, usize)>> = (0..n)
        .map(|x| {
            (0..n).find_map(|y| {
                (0..n).find_map(|z| {
                    (a.lt_strict(y, x) && a.lt_strict(z, x) && a.join(y, z) == x).then_some((y, z))
                })
            })
        })
        .collect();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    fn rec(
        k: usize,
        order: &[usize],
        split: &[Option<(usize, usize)>],
        a: &FiniteLattice,
        b: &FiniteLattice,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            let n = a.len();
            let ok = (0..n).all(|i| (0..n).all(|j| map[a.join(i, j)] == b.join(map[i], map[j])));
            if ok {
                out.push(map.clone());
            }
            return;
        }
        let x = order[k];
        if x == a.bottom() {
            map[x] = b.bottom();
            rec(k + 1, order, split, a, b, map, out);
        } else if let Some((y, z)) = split[x] {
            map[x] = b.join(map[y], map[z]);
            rec(k + 1, order, split, a, b, map, out);
        } else {
            let lower: Vec<usize> = order[..k].iter().copied().filter(|&y| a.leq(y, x)).collect();
            for v in 0..b.len() {
                if lower.iter().all(|&y| b.leq(map[y], v)) {
                    map[x] = v;
                    rec(k + 1, order, split, a, b, map, out);
                }
            }
        }
        map[x] = usize::MAX;
    }
    rec(0, &order, &split, a, b, &mut map, &mut out);
    out
}

impl FiniteLattice {
    #[inline]
    pub(crate) fn lt_strict(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(l: FiniteLattice) -> Arc<FiniteLattice> {
        Arc::new(l)
    }

    #[test]
    fn identity_adjoint_is_identity() {
        let l = arc(FiniteLattice::m3());
        let f = CompleteJoinHom::identity(l.clone());
        assert_eq!(f.upper_adjoint().map(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn chain_embedding_adjoint() {
        let f = CompleteJoinHom::new(
            arc(FiniteLattice::chain(2)),
            arc(FiniteLattice::chain(3)),
            vec![0, 2],
        )
        .unwrap();
        // Oracle: f*(b) = max{a : f(a) ≤ b} computed by hand.
        assert_eq!(f.upper_adjoint().map(), &[0, 0, 1]);
        assert!(adjunction_violation(&f, &f.upper_adjoint()).is_none());
    }

    #[test]
    fn rejects_non_hom_with_witness() {
        let err = CompleteJoinHom::new(
            arc(FiniteLattice::chain(2)),
            arc(FiniteLattice::chain(2)),
            vec![1, 1],
        )
        .unwrap_err();
        assert!(err.to_string().contains("{}"));
    }

    #[test]
    fn surjective_meet_hom_lower_adjoint_is_embedding() {
        let a = arc(FiniteLattice::boolean(2));
        let c = arc(FiniteLattice::chain(2));
        // Projection onto the first coordinate.
        let g = CompleteMeetHom::new(a.clone(), c.clone(), vec![0, 1, 0, 1]).unwrap();
        let gd = g.lower_adjoint();
        assert!(a.poset().is_order_embedding(c.poset(), g.map()) == false);
        assert!(c.poset().is_order_embedding(a.poset(), gd.map()));
        for x in 0..a.len() {
            assert_eq!(g.apply(gd.apply(g.apply(x))), g.apply(x));
        }
    }

    #[test]
    fn enumerated_homs_are_complete() {
        let a = FiniteLattice::boolean(2);
        let b = FiniteLattice::chain(3);
        let homs = enumerate_complete_join_homs(&a, &b);
        // Brute force oracle over all 3^4 maps.
        let mut brute = 0;
        for code in 0..81usize {
            let map: Vec<usize> = (0..4).map(|i| code / 3usize.pow(i) % 3).collect();
            if join_violation(&a, &b, &map).is_none() {
                brute += 1;
                assert!(homs.contains(&map));
            }
        }
        assert_eq!(homs.len(), brute);
    }
}
