use std::sync::Arc;

use crate::bits::{BitRelation, BitSet};
use crate::error::{invalid, precondition, Result};
use crate::partial::conlat::ConLattice;
use crate::partial::congruence::ClosureEngine;
use crate::partial::ideal::{filter_generated, ideal_generated};
use crate::partial::lattice::FinitePartialLattice;

/// An order-preserving map sending each defined join (meet) to the
/// corresponding defined join (meet) of the image.
#[derive(Clone, Debug)]
pub struct PartialLatticeHom {
    source: Arc<FinitePartialLattice>,
    target: Arc<FinitePartialLattice>,
    map: Vec<usize>,
}

fn names(p: &FinitePartialLattice, xs: &[usize]) -> String {
    let v: Vec<&str> = xs.iter().map(|&x| p.label(x)).collect();
    format!("{{{}}}", v.join(", "))
}

/// Reason the map fails to be a homomorphism, if it does.
pub fn hom_violation(
    source: &FinitePartialLattice,
    target: &FinitePartialLattice,
    map: &[usize],
) -> Option<String> {
    if map.len() != source.len() {
        return Some("map length differs from source size".into());
    }
    if map.iter().any(|&v| v >= target.len()) {
        return Some("map value out of range".into());
    }
    if let Some((i, j)) = source.poset().monotone_violation(target.poset(), map) {
        return Some(format!(
            "not order-preserving: {} ≤ {} but {} ≰ {}",
            source.label(i),
            source.label(j),
            target.label(map[i]),
            target.label(map[j])
        ));
    }
    // Into a lattice the binary rule instances suffice by induction; into a
    // partial lattice every defined antichain join must be checked.
    let (joins, meets) = if target.is_total() {
        (source.join_rules().to_vec(), source.meet_rules().to_vec())
    } else {
        (source.explicit_joins(), source.explicit_meets())
    };
    for (xs, a) in &joins {
        let img: Vec<usize> = xs.iter().map(|&x| map[x]).collect();
        if target.defined_join(&img) != Some(map[*a]) {
            return Some(format!(
                "join of {} = {} is not sent to the join of {}",
                names(source, xs),
                source.label(*a),
                names(target, &img)
            ));
        }
    }
    for (ys, b) in &meets {
        let img: Vec<usize> = ys.iter().map(|&y| map[y]).collect();
        if target.defined_meet(&img) != Some(map[*b]) {
            return Some(format!(
                "meet of {} = {} is not sent to the meet of {}",
                names(source, ys),
                source.label(*b),
                names(target, &img)
            ));
        }
    }
    None
}

impl PartialLatticeHom {
    pub fn new(
        source: Arc<FinitePartialLattice>,
        target: Arc<FinitePartialLattice>,
        map: Vec<usize>,
    ) -> Result<Self> {
        if let Some(why) = hom_violation(&source, &target, &map) {
            return invalid(why);
        }
        Ok(PartialLatticeHom { source, target, map })
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinitePartialLattice>,
        target: Arc<FinitePartialLattice>,
        map: Vec<usize>,
    ) -> Self {
        PartialLatticeHom { source, target, map }
    }

    pub fn identity(p: Arc<FinitePartialLattice>) -> Self {
        let map = (0..p.len()).collect();
        PartialLatticeHom { source: p.clone(), target: p, map }
    }

    pub fn source(&self) -> &Arc<FinitePartialLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePartialLattice> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn then(&self, next: &PartialLatticeHom) -> Result<PartialLatticeHom> {
        if self.target.len() != next.source.len() {
            return invalid("composition of non-composable homomorphisms");
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(PartialLatticeHom { source: self.source.clone(), target: next.target.clone(), map })
    }

    /// `f(a) ≤ f(b)` implies `a ≤ b`.
    pub fn is_embedding(&self) -> bool {
        self.source.poset().is_order_embedding(self.target.poset(), &self.map)
    }

    /// `ker f = {(x, y) : f(x) ≤ f(y)}`.
    pub fn kernel(&self) -> BitRelation {
        let n = self.source.len();
        BitRelation::from_fn(n, |x, y| self.target.leq(self.map[x], self.map[y]))
    }

    /// `(Con f)(a)`: the congruence of the target generated by the image pairs.
    pub fn con_f(&self, a: &BitRelation) -> BitRelation {
        let eng = ClosureEngine::new(&self.target);
        eng.close_pairs(a.pairs().map(|(x, y)| (self.map[x], self.map[y])))
    }

    /// `(Res f)(b)`: preimage of `b`.
    pub fn res_f(&self, b: &BitRelation) -> BitRelation {
        let n = self.source.len();
        BitRelation::from_fn(n, |x, y| b.get(self.map[x], self.map[y]))
    }

    /// `Con f` as an index map `Con P → Con Q`.
    pub fn con_f_map(&self, con_p: &ConLattice, con_q: &ConLattice) -> Vec<usize> {
        (0..con_p.len())
            .map(|i| {
                let pairs = con_p.relation(i).pairs().map(|(x, y)| (self.map[x], self.map[y]));
                con_q.close_index(BitRelation::from_pairs(self.target.len(), pairs))
            })
            .collect()
    }

    /// `Res f` as an index map `Con Q → Con P`.
    pub fn res_f_map(&self, con_p: &ConLattice, con_q: &ConLattice) -> Vec<usize> {
        (0..con_q.len())
            .map(|j| {
                con_p
                    .index_of(&self.res_f(con_q.relation(j)))
                    .expect("preimage of a congruence is a congruence")
            })
            .collect()
    }
}

/// All homomorphisms `source → target`, in lexicographic order of their maps.
pub fn enumerate_homs(source: &FinitePartialLattice, target: &FinitePartialLattice) -> Vec<Vec<usize>> {
    let n = source.len();
    let (joins, meets) = if target.is_total() {
        (source.join_rules().to_vec(), source.meet_rules().to_vec())
    } else {
        (source.explicit_joins(), source.explicit_meets())
    };
    // Each rule is checked as soon as its last element is assigned.
    let mut due: Vec<Vec<(bool, usize)>> = vec![Vec::new(); n];
    for (k, (xs, a)) in joins.iter().enumerate() {
        let last = xs.iter().copied().chain([*a]).max().unwrap();
        due[last].push((true, k));
    }
    for (k, (ys, b)) in meets.iter().enumerate() {
        let last = ys.iter().copied().chain([*b]).max().unwrap();
        due[last].push((false, k));
    }
    let mut out = Vec::new();
    let mut map = vec![0; n];
    fn rec(
        x: usize,
        ctx: (&FinitePartialLattice, &FinitePartialLattice),
        rules: (&[(Vec<usize>, usize)], &[(Vec<usize>, usize)]),
        due: &[Vec<(bool, usize)>],
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let (src, tgt) = ctx;
        if x == src.len() {
            out.push(map.clone());
            return;
        }
        'cand: for v in 0..tgt.len() {
            for y in 0..x {
                if (src.leq(y, x) && !tgt.leq(map[y], v)) || (src.leq(x, y) && !tgt.leq(v, map[y])) {
                    continue 'cand;
                }
            }
            map[x] = v;
            for &(is_join, k) in &due[x] {
                let (xs, a) = if is_join { &rules.0[k] } else { &rules.1[k] };
                let img: Vec<usize> = xs.iter().map(|&z| map[z]).collect();
                let got = if is_join { tgt.defined_join(&img) } else { tgt.defined_meet(&img) };
                if got != Some(map[*a]) {
                    continue 'cand;
                }
            }
            rec(x + 1, ctx, rules, due, map, out);
        }
    }
    rec(0, (source, target), (&joins, &meets), &due, &mut map, &mut out);
    out
}

/// First congruence `a` of the source with `(Res f)(Con f)(a) ≠ a`, or `None`
/// when `f` has the congruence extension property.
pub fn cep_check(f: &PartialLatticeHom, con_p: &ConLattice) -> Option<usize> {
    (0..con_p.len()).find(|&i| {
        let a = con_p.relation(i);
        f.res_f(&f.con_f(a)) != *a
    })
}

/// When `f[P]` generates `Q` both as an ideal and as a filter, checks that
/// `(Con f)(1_P) = 1_Q`.
pub fn cofinality_surjection_check(f: &PartialLatticeHom) -> Result<bool> {
    let q = f.target();
    let img: Vec<usize> = {
        let mut v = f.map().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    };
    let full = BitSet::full(q.len());
    let ideal = ideal_generated(q, &img);
    let filter = filter_generated(q, &img);
    if ideal != full || filter != full {
        let show = |s: &BitSet| {
            let v: Vec<usize> = s.iter().collect();
            names(q, &v)
        };
        return precondition(format!(
            "image does not generate the target: ideal {}, filter {}",
            show(&ideal),
            show(&filter)
        ));
    }
    let one_p = BitRelation::full(f.source().len());
    Ok(f.con_f(&one_p) == BitRelation::full(q.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;
    use crate::partial::conlat::ConBound;

    fn lat(l: FiniteLattice) -> Arc<FinitePartialLattice> {
        Arc::new(FinitePartialLattice::from_lattice(l))
    }

    #[test]
    fn identity_maps_are_identity() {
        let p = lat(FiniteLattice::n5());
        let f = PartialLatticeHom::identity(p.clone());
        let c = ConLattice::new(&p, ConBound::default()).unwrap();
        let cf = f.con_f_map(&c, &c);
        let rf = f.res_f_map(&c, &c);
        assert_eq!(cf, (0..c.len()).collect::<Vec<_>>());
        assert_eq!(rf, cf);
        assert_eq!(cep_check(&f, &c), None);
    }

    #[test]
    fn chain_inclusion_restriction() {
        let f = PartialLatticeHom::new(lat(FiniteLattice::chain(2)), lat(FiniteLattice::chain(3)), vec![0, 2])
            .unwrap();
        let one_q = BitRelation::full(3);
        assert_eq!(f.res_f(&one_q), BitRelation::full(2));
    }

    #[test]
    fn collapse_fails_cep() {
        let p = lat(FiniteLattice::chain(2));
        let f = PartialLatticeHom::new(p.clone(), lat(FiniteLattice::chain(1)), vec![0, 0]).unwrap();
        let c = ConLattice::new(&p, ConBound::default()).unwrap();
        assert_eq!(cep_check(&f, &c), Some(0));
    }

    #[test]
    fn rejects_non_hom() {
        let err = PartialLatticeHom::new(lat(FiniteLattice::boolean(2)), lat(FiniteLattice::chain(3)), vec![0, 1, 1, 1])
            .unwrap_err();
        assert!(err.to_string().contains("meet"));
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let b2 = lat(FiniteLattice::boolean(2));
        let c3 = lat(FiniteLattice::chain(3));
        for (s, t) in [(&b2, &c3), (&c3, &b2), (&b2, &b2)] {
            let fast = enumerate_homs(s, t);
            let mut slow = Vec::new();
            for code in 0..t.len().pow(s.len() as u32) {
                let map: Vec<usize> = (0..s.len()).map(|i| code / t.len().pow(i as u32) % t.len()).collect();
                if hom_violation(s, t, &map).is_none() {
                    slow.push(map);
                }
            }
            slow.sort();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn cofinality_cases() {
        let f = PartialLatticeHom::new(lat(FiniteLattice::chain(3)), lat(FiniteLattice::chain(2)), vec![0, 1, 1])
            .unwrap();
        assert!(cofinality_surjection_check(&f).unwrap());
        // Bottom and top of the 3-chain generate it as ideal and filter.
        let g = PartialLatticeHom::new(lat(FiniteLattice::chain(2)), lat(FiniteLattice::chain(3)), vec![0, 2])
            .unwrap();
        assert!(cofinality_surjection_check(&g).unwrap());
        let h = PartialLatticeHom::new(lat(FiniteLattice::chain(2)), lat(FiniteLattice::chain(3)), vec![0, 1])
            .unwrap();
        assert!(matches!(cofinality_surjection_check(&h), Err(crate::Error::Precondition(_))));
    }
}
