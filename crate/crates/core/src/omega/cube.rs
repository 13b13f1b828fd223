//! The truncated cube over `M3` whose congruence image has no lifting.
//!
//! Bottom `1`; middle `X_L`, `X_C`, `X_R`, all `2`; top `T_L = 2`, `M3`,
//! `T_R = 2`. The maps out of `X_C` and the maps `X_L → T_L`, `X_R → T_R`
//! are identities, `f: X_L → M3` sends 1 to `a` and `g: X_R → M3` sends 1
//! to `c`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitRelation;
use crate::enumerate::lattices_up_to_iso;
use crate::error::{refuted, resource, Result};
use crate::order::lattice::FiniteLattice;
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::hom::{enumerate_homs, PartialLatticeHom};
use crate::partial::lattice::FinitePartialLattice;

pub const CUBE_MAX_SIZE: usize = 8;

const A: usize = 1;
const C: usize = 3;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CubeReport {
    pub max_size: usize,
    /// Lattices up to isomorphism per size `1..=max_size`.
    pub lattice_counts: Vec<usize>,
    pub simple_lattices: usize,
    /// Triples `(u, w, v)` of homs into a simple lattice with
    /// `u = w∘f`, `u = v` and `v = w∘g`.
    pub commuting_triples: usize,
    /// Commuting triples on which `w(a) = w∘f(1) = u(1) = v(1) = w∘g(1) = w(c)`
    /// was replayed.
    pub forced_chain_verified: usize,
    /// Commuting triples whose `w` has zero-isolating `Con w`.
    pub liftings: usize,
}

fn lat(l: FiniteLattice) -> Arc<FinitePartialLattice> {
    Arc::new(FinitePartialLattice::from_lattice(l))
}

/// `Con h` of every edge of the cube is a ⟨∨,0⟩-embedding, and every
/// vertex except the bottom has `Con ≅ 2`. Returns `|Con|` per vertex.
pub fn cube_diagram_self_check() -> Result<Vec<(String, usize)>> {
    let one = lat(FiniteLattice::chain(1));
    let two = lat(FiniteLattice::chain(2));
    let m3 = lat(FiniteLattice::m3());
    let b = ConBound::default();
    let edges: Vec<(&str, &Arc<FinitePartialLattice>, &Arc<FinitePartialLattice>, Vec<usize>)> = vec![
        ("1 → X_L", &one, &two, vec![0]),
        ("1 → X_C", &one, &two, vec![0]),
        ("1 → X_R", &one, &two, vec![0]),
        ("X_L → T_L", &two, &two, vec![0, 1]),
        ("X_C → T_L", &two, &two, vec![0, 1]),
        ("X_C → T_R", &two, &two, vec![0, 1]),
        ("X_R → T_R", &two, &two, vec![0, 1]),
        ("f: X_L → M3", &two, &m3, vec![0, A]),
        ("g: X_R → M3", &two, &m3, vec![0, C]),
    ];
    for (name, s, t, map) in edges {
        let h = PartialLatticeHom::new(s.clone(), t.clone(), map)?;
        let (cs, ct) = (ConLattice::new(s, b)?, ConLattice::new(t, b)?);
        let m = h.con_f_map(&cs, &ct);
        let injective = (0..m.len()).all(|i| (i + 1..m.len()).all(|j| m[i] != m[j]));
        if m[cs.zero()] != ct.zero() || !injective {
            return refuted(format!("Con of {name} is not a ⟨∨,0⟩-embedding"));
        }
    }
    let mut sizes = vec![("1".to_string(), ConLattice::new(&one, b)?.len())];
    for name in ["X_L", "X_C", "X_R", "T_L", "T_R"] {
        sizes.push((name.to_string(), ConLattice::new(&two, b)?.len()));
    }
    sizes.push(("M3".to_string(), ConLattice::new(&m3, b)?.len()));
    if sizes[0].1 != 1 || sizes[1..].iter().any(|(_, k)| *k != 2) {
        return refuted("congruence image is not the truncated cube of 2's");
    }
    Ok(sizes)
}

fn is_simple(l: &FinitePartialLattice) -> bool {
    l.len() >= 2 && ConLattice::new(l, ConBound::default()).is_ok_and(|c| c.len() == 2)
}

struct Counts {
    commuting: usize,
    chain: usize,
    liftings: usize,
}

fn search(l: &Arc<FinitePartialLattice>, m3: &Arc<FinitePartialLattice>, two: &FinitePartialLattice) -> Result<Counts> {
    let homs_2 = enumerate_homs(two, l);
    let homs_m3 = enumerate_homs(m3, l);
    let mut out = Counts { commuting: 0, chain: 0, liftings: 0 };
    let full_m3 = BitRelation::from_fn(m3.len(), |_, _| true);
    let order_l = BitRelation::from_fn(l.len(), |x, y| l.leq(x, y));
    for w in &homs_m3 {
        for u in &homs_2 {
            if u[0] != w[0] || u[1] != w[A] {
                continue;
            }
            for v in &homs_2 {
                if v != u || v[0] != w[0] || v[1] != w[C] {
                    continue;
                }
                out.commuting += 1;
                // w(a) = wf(1) = u(1) = v(1) = wg(1) = w(c)
                let chain = [w[A], w[A], u[1], v[1], w[C], w[C]];
                if chain.windows(2).any(|p| p[0] != p[1]) {
                    return refuted(format!("forced chain breaks for w = {w:?}"));
                }
                out.chain += 1;
                let hw = PartialLatticeHom::new(m3.clone(), l.clone(), w.clone())?;
                if hw.con_f(&full_m3) != order_l {
                    out.liftings += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Searches every simple lattice with at most `max_size` elements for a
/// lifting of the top of the cube.
pub fn cube_verify(max_size: usize) -> Result<CubeReport> {
    if max_size > CUBE_MAX_SIZE {
        return resource(format!("cube search is bounded by {CUBE_MAX_SIZE} elements"));
    }
    cube_diagram_self_check()?;
    let m3 = lat(FiniteLattice::m3());
    let two = FinitePartialLattice::from_lattice(FiniteLattice::chain(2));
    let mut rep = CubeReport { max_size, ..Default::default() };
    for n in 1..=max_size {
        let lats = lattices_up_to_iso(n)?;
        rep.lattice_counts.push(lats.len());
        let simple: Vec<Arc<FinitePartialLattice>> =
            lats.into_iter().map(lat).filter(|l| is_simple(l)).collect();
        rep.simple_lattices += simple.len();
        let counts: Vec<Counts> = simple.par_iter().map(|l| search(l, &m3, &two)).collect::<Result<_>>()?;
        for c in counts {
            rep.commuting_triples += c.commuting;
            rep.forced_chain_verified += c.chain;
            rep.liftings += c.liftings;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_check_and_small_search() {
        let sizes = cube_diagram_self_check().unwrap();
        assert_eq!(sizes.len(), 7);
        let rep = cube_verify(5).unwrap();
        assert_eq!(rep.lattice_counts, vec![1, 1, 1, 2, 5]);
        // 2 and M3; N5 has the congruence collapsing its long side.
        assert_eq!(rep.simple_lattices, 2);
        assert_eq!(rep.liftings, 0);
        assert_eq!(rep.forced_chain_verified, rep.commuting_triples);
        assert!(rep.commuting_triples > 0);
    }
}
