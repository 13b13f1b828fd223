use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::BitRelation;
use crate::error::{invalid, refuted, Result};
use crate::order::poset::FinitePoset;
use crate::partial::hom::{enumerate_homs, hom_violation};
use crate::partial::lattice::FinitePartialLattice;

use super::square::TruncatedSquare;

/// `R = P ⊔_K Q` with the inclusions `u: P → R`, `v: Q → R`.
///
/// Elements of `K` come first (labels `k:*`), then the rest of `P` (`p:*`),
/// then the rest of `Q` (`q:*`).
#[derive(Clone, Debug)]
pub struct Pushout {
    pub r: Arc<FinitePartialLattice>,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

pub fn pushout(sq: &TruncatedSquare) -> Result<Pushout> {
    if !sq.is_embedding_case() {
        return invalid("pushout needs both maps to be embeddings");
    }
    let (k, p, q) = (&sq.k, &sq.p, &sq.q);
    let mut labels = Vec::new();
    let mut u = vec![usize::MAX; p.len()];
    let mut v = vec![usize::MAX; q.len()];
    for z in 0..k.len() {
        u[sq.f[z]] = labels.len();
        v[sq.g[z]] = labels.len();
        labels.push(format!("k:{}", k.label(z)));
    }
    for x in 0..p.len() {
        if u[x] == usize::MAX {
            u[x] = labels.len();
            labels.push(format!("p:{}", p.label(x)));
        }
    }
    for y in 0..q.len() {
        if v[y] == usize::MAX {
            v[y] = labels.len();
            labels.push(format!("q:{}", q.label(y)));
        }
    }
    let n = labels.len();
    let mut in_p = vec![None; n];
    let mut in_q = vec![None; n];
    for (x, &r) in u.iter().enumerate() {
        in_p[r] = Some(x);
    }
    for (y, &r) in v.iter().enumerate() {
        in_q[r] = Some(y);
    }
    let through_k = |x: usize, y: usize, from_p: bool| {
        (0..k.len()).any(|z| {
            if from_p {
                p.leq(x, sq.f[z]) && q.leq(sq.g[z], y)
            } else {
                q.leq(x, sq.g[z]) && p.leq(sq.f[z], y)
            }
        })
    };
    let rel = BitRelation::from_fn(n, |a, b| {
        match (in_p[a], in_q[a], in_p[b], in_q[b]) {
            (Some(x), _, Some(y), _) if p.leq(x, y) => true,
            (_, Some(x), _, Some(y)) if q.leq(x, y) => true,
            (Some(x), _, _, Some(y)) if through_k(x, y, true) => true,
            (_, Some(x), Some(y), _) if through_k(x, y, false) => true,
            _ => false,
        }
    });
    if !rel.is_transitive() {
        return refuted("the four-case relation on P ∪ Q is not transitive");
    }
    let poset = FinitePoset::from_relation(labels, rel)?;
    let lift = |entries: Vec<(Vec<usize>, usize)>, m: &[usize]| -> Vec<(Vec<usize>, usize)> {
        entries
            .into_iter()
            .map(|(xs, a)| (xs.iter().map(|&x| m[x]).collect(), m[a]))
            .collect()
    };
    let mut joins = lift(p.explicit_joins(), &u);
    joins.extend(lift(q.explicit_joins(), &v));
    let mut meets = lift(p.explicit_meets(), &u);
    meets.extend(lift(q.explicit_meets(), &v));
    let r = FinitePartialLattice::new(poset, joins, meets)
        .or_else(|e| refuted(format!("inherited operations are not sups/infs in R: {e}")))?;
    Ok(Pushout { r: Arc::new(r), u, v })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    /// Pairs `(g1, g2)` of homs `P → T`, `Q → T` with `g1∘f = g2∘g`.
    pub commuting_pairs: usize,
    /// Homs `R → T`, enumerated independently.
    pub homs_from_r: usize,
}

/// For each commuting pair the glued map must be a hom `R → T`, and the
/// homs `R → T` must be exactly the glued maps.
pub fn universal_property_check(
    sq: &TruncatedSquare,
    po: &Pushout,
    t: &FinitePartialLattice,
) -> Result<UniversalReport> {
    let homs_p = enumerate_homs(&sq.p, t);
    let all_q = enumerate_homs(&sq.q, t);
    let homs_q = by_restriction(&all_q, &sq.g);
    let from_r = enumerate_homs(&po.r, t);
    let mut glued_all = Vec::new();
    for g1 in &homs_p {
        let key: Vec<usize> = sq.f.iter().map(|&x| g1[x]).collect();
        for &g2 in homs_q.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
            let mut h = vec![0; po.r.len()];
            for (x, &r) in po.u.iter().enumerate() {
                h[r] = g1[x];
            }
            for (y, &r) in po.v.iter().enumerate() {
                h[r] = g2[y];
            }
            if let Some(why) = hom_violation(&po.r, t, &h) {
                return refuted(format!("no mediating hom for (g1, g2) = ({g1:?}, {g2:?}): {why}"));
            }
            glued_all.push(h);
        }
    }
    glued_all.sort();
    if glued_all != from_r {
        let extra = from_r.iter().find(|h| glued_all.binary_search(h).is_err());
        return refuted(match extra {
            Some(h) => format!("hom {h:?} from R does not come from a commuting pair"),
            None => "two commuting pairs glue to the same hom".to_string(),
        });
    }
    Ok(UniversalReport { commuting_pairs: glued_all.len(), homs_from_r: from_r.len() })
}

fn by_restriction<'a>(homs: &'a [Vec<usize>], along: &[usize]) -> HashMap<Vec<usize>, Vec<&'a Vec<usize>>> {
    let mut out: HashMap<Vec<usize>, Vec<&Vec<usize>>> = HashMap::new();
    for h in homs {
        out.entry(along.iter().map(|&y| h[y]).collect()).or_default().push(h);
    }
    out
}

/// The same property by counting, with the homs `P → T` and `Q → T`
/// supplied by the caller.
///
/// When `u` and `v` are jointly onto `R`, `h ↦ (h∘u, h∘v)` injects the homs
/// `R → T` into the commuting pairs, so each pair has exactly one mediator
/// iff the two sets have the same size.
pub fn universal_property_count_check(
    sq: &TruncatedSquare,
    po: &Pushout,
    t: &FinitePartialLattice,
    homs_p: &[Vec<usize>],
    homs_q: &[Vec<usize>],
) -> Result<UniversalReport> {
    let mut hit = vec![false; po.r.len()];
    for &r in po.u.iter().chain(&po.v) {
        hit[r] = true;
    }
    if hit.contains(&false) {
        return refuted("u and v are not jointly onto R");
    }
    let mut keys: HashMap<Vec<usize>, usize> = HashMap::new();
    for g2 in homs_q {
        *keys.entry(sq.g.iter().map(|&y| g2[y]).collect()).or_default() += 1;
    }
    let commuting: usize =
        homs_p.iter().map(|g1| keys.get(&sq.f.iter().map(|&x| g1[x]).collect::<Vec<_>>()).copied().unwrap_or(0)).sum();
    let from_r = enumerate_homs(&po.r, t);
    for h in &from_r {
        if (0..sq.k.len()).any(|z| h[po.u[sq.f[z]]] != h[po.v[sq.g[z]]]) {
            return refuted(format!("hom {h:?} from R does not commute over K"));
        }
    }
    if commuting != from_r.len() {
        return refuted(format!("{commuting} commuting pairs but {} homs from R", from_r.len()));
    }
    Ok(UniversalReport { commuting_pairs: commuting, homs_from_r: from_r.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;

    fn lat(l: FiniteLattice) -> Arc<FinitePartialLattice> {
        Arc::new(FinitePartialLattice::from_lattice(l))
    }

    #[test]
    fn q_equal_k_gives_p() {
        let k = lat(FiniteLattice::chain(2));
        let p = lat(FiniteLattice::boolean(2));
        let sq = TruncatedSquare::new(k.clone(), p.clone(), k.clone(), vec![0, 3], vec![0, 1]).unwrap();
        let po = pushout(&sq).unwrap();
        assert_eq!(po.r.len(), 4);
        assert!(crate::enumerate::find_isomorphism(po.r.poset(), p.poset()).is_some());
        assert_eq!(po.r.defined_join(&[po.u[1], po.u[2]]), Some(po.u[3]));
    }

    #[test]
    fn two_chains_over_a_point() {
        let k = lat(FiniteLattice::chain(1));
        let p = lat(FiniteLattice::chain(2));
        let sq = TruncatedSquare::new(k, p.clone(), p, vec![0], vec![0]).unwrap();
        let po = pushout(&sq).unwrap();
        assert_eq!(po.r.len(), 3);
        assert_eq!(po.r.poset().labels(), &["k:0", "p:1", "q:1"]);
        assert!(!po.r.poset().comparable(1, 2));
        assert!(po.r.leq(0, 1) && po.r.leq(0, 2));
        assert_eq!(po.r.defined_join(&[1, 2]), None);
        assert!(po.r.join_rules().is_empty());
        let t = lat(FiniteLattice::chain(3));
        let rep = universal_property_check(&sq, &po, &t).unwrap();
        assert_eq!(rep.commuting_pairs, rep.homs_from_r);
        assert_eq!(rep.commuting_pairs, 9 + 4 + 1);
    }

    #[test]
    fn counting_check_agrees_with_gluing() {
        let one = lat(FiniteLattice::chain(1));
        let two = lat(FiniteLattice::chain(2));
        let b2 = lat(FiniteLattice::boolean(2));
        let m3 = lat(FiniteLattice::m3());
        let n5 = lat(FiniteLattice::n5());
        let squares = [
            TruncatedSquare::new(one.clone(), b2.clone(), m3.clone(), vec![0], vec![4]).unwrap(),
            TruncatedSquare::new(two.clone(), b2.clone(), n5.clone(), vec![0, 3], vec![0, 4]).unwrap(),
            TruncatedSquare::new(two.clone(), m3.clone(), m3.clone(), vec![0, 1], vec![0, 2]).unwrap(),
        ];
        for sq in &squares {
            let po = pushout(sq).unwrap();
            for t in [&two, &b2, &m3, &n5] {
                let glued = universal_property_check(sq, &po, t).unwrap();
                let counted = universal_property_count_check(
                    sq,
                    &po,
                    t,
                    &enumerate_homs(&sq.p, t),
                    &enumerate_homs(&sq.q, t),
                )
                .unwrap();
                assert_eq!(glued, counted);
            }
        }
    }
}
