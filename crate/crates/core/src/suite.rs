//! Named, seeded suites that exhaustively or randomly exercise the
//! library against brute-force oracles.
//!
//! `Scale::Full` runs at the sizes the acceptance target uses;
//! `Scale::Small` shrinks every bound for quick runs.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::amalgam::{
    extend::{join_zero_violation, meet_formula},
    mediating_gamma, pushout, universal_property_count_check, verify_claims, CongruencePairLattice,
    MeasuredPartialLattice, TruncatedSquare,
};
use crate::bits::BitRelation;
use crate::enumerate::lattices_up_to_iso;
use crate::error::{invalid, refuted, Error, Result};
use crate::format::lattice_json;
use crate::free::{cep_via_quotient, eval, fl_enumerate, terms_up_to_depth, FreeLatticeOrder, Term};
use crate::omega::chain::OmegaChainPair;
use crate::omega::interval::random_interval_set;
use crate::omega::{chi, cube_verify, dyadic_scan, dyadic_witness, sample_measure_axioms, window_extract, Sequence};
use crate::order::galois::{adjunction_violation, enumerate_complete_join_homs, CompleteJoinHom};
use crate::order::lattice::FiniteLattice;
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::congruence::{congruence_closure, is_congruence};
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::corpus::partial_lattice_corpus;
use crate::partial::hom::{enumerate_homs, hom_violation, PartialLatticeHom};
use crate::partial::lattice::FinitePartialLattice;
use crate::partial::measure::con_hom_violation;
use crate::report::{Outcome, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Full,
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            _ => invalid(format!("unknown scale {s:?} (small or full)")),
        }
    }
}

pub const SUITES: [&str; 10] = [
    "closure-oracle",
    "con-distributive",
    "duality",
    "free-lattice",
    "pushout",
    "claims",
    "extension",
    "measure-axioms",
    "obstruction",
    "cube",
];

/// Known lattice counts up to isomorphism for `n = 1..=7`.
pub const LATTICE_COUNTS: [usize; 7] = [1, 1, 1, 2, 5, 15, 53];

pub fn run_suite(name: &str, seed: u64, scale: Scale) -> Result<Outcome> {
    match name {
        "closure-oracle" => closure_oracle(scale),
        "con-distributive" => con_distributive(scale),
        "duality" => duality(seed, scale),
        "free-lattice" => free_lattice(scale),
        "pushout" => pushout_suite(scale),
        "claims" => claims(scale),
        "extension" => extension(scale),
        "measure-axioms" => measure_axioms(seed, scale),
        "obstruction" => obstruction(scale),
        "cube" => cube(scale),
        _ => invalid(format!("unknown suite {name:?}; known: {}", SUITES.join(", "))),
    }
}

fn arc(p: FinitePartialLattice) -> Arc<FinitePartialLattice> {
    Arc::new(p)
}

fn lattices_up_to(n: usize) -> Result<Vec<FiniteLattice>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(lattices_up_to_iso(k)?);
    }
    Ok(out)
}

/// Every transitive relation containing the order, by subset enumeration.
fn quasi_orders_above(p: &FinitePartialLattice) -> Vec<BitRelation> {
    let n = p.len();
    let off: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !p.leq(x, y)).collect();
    let base = p.poset().relation().clone();
    (0u32..1 << off.len())
        .filter_map(|mask| {
            let mut r = base.clone();
            for (i, &(x, y)) in off.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    r.set(x, y);
                }
            }
            r.is_transitive().then_some(r)
        })
        .collect()
}

fn closure_oracle(scale: Scale) -> Result<Outcome> {
    let max = if scale == Scale::Full { 4 } else { 3 };
    let corpus = partial_lattice_corpus(max)?;
    let results: Vec<(usize, usize)> = corpus
        .par_iter()
        .map(|p| {
            let n = p.len();
            let cons: Vec<BitRelation> = quasi_orders_above(p).into_iter().filter(|r| is_congruence(p, r)).collect();
            let off: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !p.leq(x, y)).collect();
            let mut seeds = 0;
            for mask in 0u32..1 << off.len() {
                let seed: Vec<(usize, usize)> =
                    off.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let mut expected = BitRelation::full(n);
                for c in &cons {
                    if seed.iter().all(|&(x, y)| c.get(x, y)) {
                        expected = expected.intersection(c);
                    }
                }
                let got = congruence_closure(p, &seed);
                if *got.relation() != expected {
                    return refuted(format!(
                        "closure of {seed:?} on a {n}-element partial lattice differs from the filtered quasi-orders"
                    ));
                }
                seeds += 1;
            }
            Ok((seeds, cons.len()))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::verified(json!({
        "max_size": max,
        "partial_lattices": corpus.len(),
        "seed_sets": results.iter().map(|r| r.0).sum::<usize>(),
        "congruences": results.iter().map(|r| r.1).sum::<usize>(),
    })))
}

fn con_distributive(scale: Scale) -> Result<Outcome> {
    let max = if scale == Scale::Full { 7 } else { 5 };
    let mut counts = Vec::new();
    let mut con_sizes = Vec::new();
    for n in 1..=max {
        let lats = lattices_up_to_iso(n)?;
        counts.push(lats.len());
        if lats.len() != LATTICE_COUNTS[n - 1] {
            return refuted(format!("{} lattices of size {n}, expected {}", lats.len(), LATTICE_COUNTS[n - 1]));
        }
        for l in lats {
            let p = FinitePartialLattice::from_lattice(l.clone());
            let con = ConLattice::new(&p, ConBound::default())?;
            let cl = con.lattice()?;
            if let Some((x, y, z)) = cl.distributivity_witness() {
                let name = |i: usize| cl.label(i).to_string();
                return Ok(Outcome::refuted(
                    json!({ "lattice": lattice_json(&l) }),
                    Witness::Distributivity { lattice: lattice_json(cl), elements: [name(x), name(y), name(z)] },
                ));
            }
            con_sizes.push(con.len());
        }
    }
    Ok(Outcome::verified(json!({
        "max_size": max,
        "lattice_counts": counts,
        "largest_con": con_sizes.iter().max(),
    })))
}

struct DualityCounts {
    homs: usize,
}

fn duality_instance(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>, map: &[usize]) -> Result<()> {
    let f = CompleteJoinHom::new(a.clone(), b.clone(), map.to_vec())?;
    let g = f.upper_adjoint();
    let fail = |what: &str| refuted(format!("{what} fails for the complete join hom {map:?}"));
    for x in 0..a.len() {
        for y in 0..b.len() {
            if b.leq(f.apply(x), y) != a.leq(x, g.apply(y)) {
                return fail("adjunction");
            }
        }
    }
    if adjunction_violation(&f, &g).is_some() {
        return fail("adjunction check");
    }
    if g.lower_adjoint().map() != f.map() {
        return fail("double dual f** = f");
    }
    if g.lower_adjoint().upper_adjoint().map() != g.map() {
        return fail("double dual g†* = g");
    }
    if (0..b.len()).any(|y| g.apply(f.apply(g.apply(y))) != g.apply(y)) {
        return fail("g∘g†∘g = g");
    }
    if (0..a.len()).any(|x| f.apply(g.apply(f.apply(x))) != f.apply(x)) {
        return fail("f∘f*∘f = f");
    }
    Ok(())
}

fn duality(seed: u64, scale: Scale) -> Result<Outcome> {
    let (max, random) = if scale == Scale::Full { (5, 10_000) } else { (4, 500) };
    let lats: Vec<Arc<FiniteLattice>> = lattices_up_to(max)?.into_iter().map(Arc::new).collect();
    let pairs: Vec<(usize, usize)> = (0..lats.len()).flat_map(|i| (0..lats.len()).map(move |j| (i, j))).collect();
    let counts: Vec<DualityCounts> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let homs = enumerate_complete_join_homs(&lats[i], &lats[j]);
            for h in &homs {
                duality_instance(&lats[i], &lats[j], h)?;
            }
            Ok(DualityCounts { homs: homs.len() })
        })
        .collect::<Result<_>>()?;
    // Random instances: a seeded pair of size-6 lattices and a seeded hom
    // among all complete join homs between them.
    let six: Vec<Arc<FiniteLattice>> = lattices_up_to_iso(6)?.into_iter().map(Arc::new).collect();
    let mut cache: Vec<Option<Vec<Vec<usize>>>> = vec![None; six.len() * six.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let (i, j) = (rng.gen_range(0..six.len()), rng.gen_range(0..six.len()));
        let homs = cache[i * six.len() + j].get_or_insert_with(|| enumerate_complete_join_homs(&six[i], &six[j]));
        let h = &homs[rng.gen_range(0..homs.len())];
        duality_instance(&six[i], &six[j], h)?;
    }
    Ok(Outcome::verified(json!({
        "max_size": max,
        "lattice_pairs": pairs.len(),
        "exhaustive_homs": counts.iter().map(|c| c.homs).sum::<usize>(),
        "random_instances": random,
        "seed": seed,
    })))
}

fn universe_positions(ord: &FreeLatticeOrder, terms: &[Term]) -> Vec<usize> {
    terms.iter().map(|t| ord.index_of(t).expect("term is in the universe")).collect()
}

fn free_lattice(scale: Scale) -> Result<Outcome> {
    let (max_lat, depth, corpus_max) = if scale == Scale::Full { (5, 3, 4) } else { (4, 3, 3) };
    let lats = lattices_up_to(max_lat)?;
    // (a) and, with the identity evaluation, part of (c).
    let identity_pairs: Vec<usize> = lats
        .par_iter()
        .map(|l| {
            let p = FinitePartialLattice::from_lattice(l.clone());
            let terms = terms_up_to_depth(l.len(), depth)?;
            let ord = FreeLatticeOrder::new(&p, &terms)?;
            let id: Vec<usize> = (0..l.len()).collect();
            let vals: Vec<usize> = terms.iter().map(|t| eval(l, &id, t)).collect();
            let at = universe_positions(&ord, &terms);
            for i in 0..terms.len() {
                for j in 0..terms.len() {
                    if ord.leq_index(at[i], at[j]) != l.leq(vals[i], vals[j]) {
                        return refuted(format!(
                            "free order and evaluation disagree on {} ≤ {} over a {}-element lattice",
                            terms[i].render(l.poset().labels()),
                            terms[j].render(l.poset().labels()),
                            l.len()
                        ));
                    }
                }
            }
            Ok(terms.len() * terms.len())
        })
        .collect::<Result<_>>()?;
    // (b)
    let anti = FinitePartialLattice::from_poset(crate::order::poset::FinitePoset::antichain(2))?;
    let en = fl_enumerate(&anti, 3)?;
    if en.classes.len() != 4 || !en.complete {
        return refuted(format!("free lattice on two generators: {} classes, complete = {}", en.classes.len(), en.complete));
    }
    // (c) every positive pair over small partial lattices survives every
    // hom into every lattice of size ≤ max_lat.
    let targets: Vec<(FiniteLattice, FinitePartialLattice)> =
        lats.iter().map(|l| (l.clone(), FinitePartialLattice::from_lattice(l.clone()))).collect();
    let sources: Vec<FinitePartialLattice> = partial_lattice_corpus(3)?
        .into_iter()
        .chain(lats.iter().filter(|l| l.len() <= 4).map(|l| FinitePartialLattice::from_lattice(l.clone())))
        .collect();
    let sound: Vec<usize> = sources
        .par_iter()
        .map(|p| {
            let terms = terms_up_to_depth(p.len(), depth)?;
            let ord = FreeLatticeOrder::new(p, &terms)?;
            let at = universe_positions(&ord, &terms);
            let positive: Vec<(usize, usize)> = (0..terms.len())
                .flat_map(|i| (0..terms.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| ord.leq_index(at[i], at[j]))
                .collect();
            let mut evals = 0;
            for (l, lp) in &targets {
                for h in enumerate_homs(p, lp) {
                    let vals: Vec<usize> = terms.iter().map(|t| eval(l, &h, t)).collect();
                    if let Some(&(i, j)) = positive.iter().find(|&&(i, j)| !l.leq(vals[i], vals[j])) {
                        return refuted(format!(
                            "{} ≤ {} is refuted by a hom into a {}-element lattice",
                            terms[i].render(p.poset().labels()),
                            terms[j].render(p.poset().labels()),
                            l.len()
                        ));
                    }
                    evals += 1;
                }
            }
            Ok(evals)
        })
        .collect::<Result<_>>()?;
    // (d)
    let corpus = partial_lattice_corpus(corpus_max)?;
    let ceps: Vec<usize> = corpus
        .par_iter()
        .map(|p| {
            let con = ConLattice::new(p, ConBound::default())?;
            for i in 0..con.len() {
                if let Some(why) = cep_via_quotient(p, &con.congruence(i))? {
                    return refuted(why);
                }
            }
            Ok(con.len())
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::verified(json!({
        "identity_pairs": identity_pairs.iter().sum::<usize>(),
        "antichain2_classes": en.classes.len(),
        "antichain2_complete": en.complete,
        "soundness_evaluations": sound.iter().sum::<usize>(),
        "cep_congruences": ceps.iter().sum::<usize>(),
        "term_depth": depth,
    })))
}

/// Every embedding square `K → P`, `K → Q` with `K` a lattice.
/// Automorphisms of `p`: bijective homs whose inverse is a hom.
fn automorphisms(p: &FinitePartialLattice) -> Vec<Vec<usize>> {
    enumerate_homs(p, p)
        .into_iter()
        .filter(|m| {
            let mut inv = vec![usize::MAX; m.len()];
            for (x, &y) in m.iter().enumerate() {
                inv[y] = x;
            }
            !inv.contains(&usize::MAX) && hom_violation(p, p, &inv).is_none()
        })
        .collect()
}

/// Is `(f, g)` the least pair in its orbit under `Aut P × Aut Q × Aut K`
/// (and, when the sides coincide, under swapping them)?
fn is_canonical(f: &[usize], g: &[usize], aut_p: &[Vec<usize>], aut_q: &[Vec<usize>], aut_k: &[Vec<usize>], swap: bool) -> bool {
    let cur = (f, g);
    for s in aut_k {
        for a in aut_p {
            let f2: Vec<usize> = s.iter().map(|&z| a[f[z]]).collect();
            for b in aut_q {
                let g2: Vec<usize> = s.iter().map(|&z| b[g[z]]).collect();
                if (f2.as_slice(), g2.as_slice()) < cur {
                    return false;
                }
                if swap {
                    // Swapped sides: P and Q are the same structure.
                    let f3: Vec<usize> = s.iter().map(|&z| a[g[z]]).collect();
                    let g3: Vec<usize> = s.iter().map(|&z| b[f[z]]).collect();
                    if (f3.as_slice(), g3.as_slice()) < cur {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Embedding squares over the given sides and bottoms, one per isomorphism
/// class, each with the corpus indices of its two sides. Isomorphic squares
/// (related by automorphisms of K, P, Q, or by swapping equal sides) have
/// isomorphic pushouts and congruence data.
fn embedding_squares(
    sides: &[Arc<FinitePartialLattice>],
    bottoms: &[Arc<FinitePartialLattice>],
) -> Vec<(usize, usize, TruncatedSquare)> {
    let emb = |k: &Arc<FinitePartialLattice>, p: &Arc<FinitePartialLattice>| -> Vec<Vec<usize>> {
        enumerate_homs(k, p)
            .into_iter()
            .filter(|m| PartialLatticeHom::new(k.clone(), p.clone(), m.clone()).is_ok_and(|h| h.is_embedding()))
            .collect()
    };
    let auts: Vec<Vec<Vec<usize>>> = sides.iter().map(|p| automorphisms(p)).collect();
    let mut out = Vec::new();
    for k in bottoms {
        let aut_k = automorphisms(k);
        let embs: Vec<Vec<Vec<usize>>> = sides.iter().map(|p| emb(k, p)).collect();
        for (i, p) in sides.iter().enumerate() {
            for (j, q) in sides.iter().enumerate().skip(i) {
                for f in &embs[i] {
                    for g in &embs[j] {
                        if !is_canonical(f, g, &auts[i], &auts[j], &aut_k, i == j) {
                            continue;
                        }
                        if let Ok(sq) = TruncatedSquare::new(k.clone(), p.clone(), q.clone(), f.clone(), g.clone()) {
                            out.push((i, j, sq));
                        }
                    }
                }
            }
        }
    }
    out
}

fn pushout_suite(scale: Scale) -> Result<Outcome> {
    let max = if scale == Scale::Full { 4 } else { 3 };
    let sides: Vec<Arc<FinitePartialLattice>> = partial_lattice_corpus(max)?.into_iter().map(arc).collect();
    let bottoms: Vec<Arc<FinitePartialLattice>> =
        lattices_up_to(max)?.into_iter().map(|l| arc(FinitePartialLattice::from_lattice(l))).collect();
    let squares = embedding_squares(&sides, &bottoms);
    let targets = &sides;
    // homs[i][t]: every hom from side i into target t.
    let homs: Vec<Vec<Vec<Vec<usize>>>> =
        sides.par_iter().map(|p| targets.iter().map(|t| enumerate_homs(p, t)).collect()).collect();
    let pairs: Vec<usize> = squares
        .par_iter()
        .map(|(i, j, sq)| {
            let po = pushout(sq)?;
            let mut commuting = 0;
            for (ti, t) in targets.iter().enumerate() {
                let rep = universal_property_count_check(sq, &po, t, &homs[*i][ti], &homs[*j][ti])?;
                if rep.commuting_pairs != rep.homs_from_r {
                    return refuted("mediating homs are not unique");
                }
                commuting += rep.commuting_pairs;
            }
            Ok(commuting)
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::verified(json!({
        "max_size": max,
        "squares": squares.len(),
        "targets": targets.len(),
        "commuting_pairs": pairs.iter().sum::<usize>(),
    })))
}

/// All ⟨∨,0⟩-homomorphisms `Con P → S`.
fn con_homs(con: &ConLattice, s: &FiniteSemilattice) -> Vec<Vec<usize>> {
    let n = con.len();
    let mut out = Vec::new();
    let mut map = vec![0; n];
    fn rec(i: usize, map: &mut Vec<usize>, con: &ConLattice, s: &FiniteSemilattice, out: &mut Vec<Vec<usize>>) {
        if i == map.len() {
            if con_hom_violation(con, s, map).is_none() {
                out.push(map.clone());
            }
            return;
        }
        for v in 0..s.len() {
            // Monotone on the part already assigned.
            if (0..i).all(|j| !con.leq(j, i) || s.leq(map[j], v)) && (0..i).all(|j| !con.leq(i, j) || s.leq(v, map[j])) {
                map[i] = v;
                rec(i + 1, map, con, s, out);
            }
        }
    }
    rec(0, &mut map, con, s, &mut out);
    out
}

fn claims(scale: Scale) -> Result<Outcome> {
    let (max, s_max) = if scale == Scale::Full { (3, 3) } else { (2, 2) };
    let sides: Vec<Arc<FinitePartialLattice>> = partial_lattice_corpus(max)?.into_iter().map(arc).collect();
    let bottoms: Vec<Arc<FinitePartialLattice>> =
        lattices_up_to(max)?.into_iter().map(|l| arc(FinitePartialLattice::from_lattice(l))).collect();
    let squares = embedding_squares(&sides, &bottoms);
    let ss: Vec<Arc<FiniteSemilattice>> = lattices_up_to(s_max)?
        .into_iter()
        .filter(FiniteLattice::is_distributive)
        .map(|l| Arc::new(FiniteSemilattice::from_lattice(&l)))
        .collect();
    let bound = ConBound::default();
    let con_side: Vec<Arc<ConLattice>> =
        sides.iter().map(|p| ConLattice::new(p, bound).map(Arc::new)).collect::<Result<_>>()?;
    // measures[i][k]: every measure on side i with values in ss[k].
    let measures: Vec<Vec<Vec<MeasuredPartialLattice>>> = sides
        .par_iter()
        .zip(&con_side)
        .map(|(p, con)| {
            ss.iter()
                .map(|s| {
                    con_homs(con, s)
                        .into_iter()
                        .map(|h| MeasuredPartialLattice::from_con(p.clone(), con.clone(), s.clone(), h))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let gammas: Vec<usize> = squares
        .par_iter()
        .map(|(i, j, sq)| {
            let con_k = Arc::new(ConLattice::new(&sq.k, bound)?);
            let cpl = CongruencePairLattice::from_parts(sq, con_k, con_side[*i].clone(), con_side[*j].clone())?;
            let po = pushout(sq)?;
            let rep = verify_claims(&cpl, &po, bound)?;
            if !rep.all_hold() {
                return refuted(format!("claims fail: {rep:?}"));
            }
            let mut count = 0;
            for k in 0..ss.len() {
                let (mus, nus) = (&measures[*i][k], &measures[*j][k]);
                // Measures on Q bucketed by their restriction to K.
                let mut by_k: HashMap<Vec<usize>, Vec<&MeasuredPartialLattice>> = HashMap::new();
                for nu in nus {
                    by_k.entry(nu.pull_back(&cpl.con_k, &sq.g)).or_default().push(nu);
                }
                for mu in mus {
                    let Some(matching) = by_k.get(&mu.pull_back(&cpl.con_k, &sq.f)) else {
                        continue;
                    };
                    for nu in matching {
                        let g = mediating_gamma(sq, &cpl, mu, nu)?;
                        let alpha_ok = (0..cpl.con_p.len()).all(|x| g.values[cpl.alpha()[x]] == mu.hom()[x]);
                        let beta_ok = (0..cpl.con_q.len()).all(|y| g.values[cpl.beta()[y]] == nu.hom()[y]);
                        if !alpha_ok || !beta_ok {
                            return refuted("γ∘α = μ or γ∘β = ν fails");
                        }
                        count += 1;
                    }
                }
            }
            Ok(count)
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::verified(json!({
        "max_size": max,
        "squares": squares.len(),
        "semilattices": ss.len(),
        "compatible_measure_pairs": gammas.iter().sum::<usize>(),
    })))
}

/// Cofinal ⟨∨,0⟩-subsemilattices of `b` (listed as sorted index sets).
fn cofinal_subsemilattices(b: &FiniteSemilattice) -> Vec<Vec<usize>> {
    let n = b.len();
    let top = (0..n).find(|&x| (0..n).all(|y| b.leq(y, x))).expect("finite semilattice with top");
    (0u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<usize>>())
        .filter(|a| {
            a.contains(&b.zero())
                && a.contains(&top)
                && a.iter().all(|&x| a.iter().all(|&y| a.contains(&b.join(x, y))))
        })
        .collect()
}

/// All ⟨∨,0⟩-homs from `a ⊆ b` into `s`, aligned with `a`.
fn sub_homs(b: &FiniteSemilattice, a: &[usize], s: &FiniteLattice) -> Vec<Vec<usize>> {
    let k = a.len();
    let total = s.len().pow(k as u32);
    (0..total)
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let v = code % s.len();
                    code /= s.len();
                    v
                })
                .collect::<Vec<usize>>()
        })
        .filter(|f| {
            let pos = |x: usize| a.iter().position(|&y| y == x).unwrap();
            f[pos(b.zero())] == s.bottom()
                && (0..k).all(|i| (0..k).all(|j| f[pos(b.join(a[i], a[j]))] == s.join(f[i], f[j])))
        })
        .collect()
}

fn extension(scale: Scale) -> Result<Outcome> {
    let max = if scale == Scale::Full { 5 } else { 4 };
    let lats = lattices_up_to(max)?;
    let ss: Vec<&FiniteLattice> = lats.iter().filter(|l| l.is_distributive()).collect();
    let bs: Vec<FiniteSemilattice> = lats.iter().map(FiniteSemilattice::from_lattice).collect();
    let mut instances = 0usize;
    for s in &ss {
        for b in &bs {
            for a in cofinal_subsemilattices(b) {
                for f in sub_homs(b, &a, s) {
                    let g = meet_formula(b, &a, &f, s);
                    let extends = a.iter().zip(&f).all(|(&x, &v)| g[x] == v);
                    let hom = g[b.zero()] == s.bottom()
                        && (0..b.len()).all(|x| (0..b.len()).all(|y| g[b.join(x, y)] == s.join(g[x], g[y])));
                    if !extends || !hom {
                        return refuted(format!("meet formula fails for A = {a:?}, f = {f:?} into a distributive S"));
                    }
                    instances += 1;
                }
            }
        }
    }
    // Negative control over the nondistributive S.
    let mut control = Value::Null;
    let nondistributive: Vec<FiniteLattice> = lattices_up_to(5)?.into_iter().filter(|l| !l.is_distributive()).collect();
    let control_bs: Vec<FiniteSemilattice> = lattices_up_to(6)?.iter().map(FiniteSemilattice::from_lattice).collect();
    'search: for s in &nondistributive {
        for b in &control_bs {
            for a in cofinal_subsemilattices(b) {
                for f in sub_homs(b, &a, s) {
                    let g = meet_formula(b, &a, &f, s);
                    if let Some((x, y)) = join_zero_violation(b, s, &g) {
                        let name = |l: &FiniteLattice, i: usize| l.label(i).to_string();
                        control = json!({
                            "s": lattice_json(s),
                            "b": lattice_json(&b.to_lattice()),
                            "a": a.iter().map(|&i| b.label(i)).collect::<Vec<_>>(),
                            "f": f.iter().map(|&v| name(s, v)).collect::<Vec<_>>(),
                            "g": g.iter().map(|&v| name(s, v)).collect::<Vec<_>>(),
                            "join_fails_at": [b.label(x), b.label(y)],
                        });
                        break 'search;
                    }
                }
            }
        }
    }
    if control.is_null() {
        return refuted("no nondistributive S breaks the meet formula");
    }
    Ok(Outcome::verified(json!({
        "max_size": max,
        "distributive_s": ss.len(),
        "instances": instances,
        "negative_control": control,
    })))
}

fn measure_axioms(seed: u64, scale: Scale) -> Result<Outcome> {
    let samples = if scale == Scale::Full { 10_000 } else { 1_000 };
    let max_point = 16;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = random_interval_set(&mut rng, max_point);
        let y = random_interval_set(&mut rng, max_point);
        let (u, i, d, c) = (x.union(&y), x.intersection(&y), x.difference(&y), x.complement());
        for n in 0..max_point + 4 {
            let (a, b) = (x.contains(n), y.contains(n));
            if u.contains(n) != (a || b) || i.contains(n) != (a && b) || d.contains(n) != (a && !b) || c.contains(n) == a {
                return refuted(format!("interval operations disagree with membership at {n} for {x} and {y}"));
            }
        }
        if chi(&u) != chi(&x).max(chi(&y)) || chi(&i) != chi(&x).min(chi(&y)) || chi(&c) != 1 - chi(&x) {
            return refuted(format!("χ is not a homomorphism on {x} and {y}"));
        }
    }
    let dyadic = dyadic_witness(64);
    let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
    let control = OmegaChainPair::new(s, Sequence::constant_tail(vec![0, 1]), Sequence::constant_tail(vec![2, 2, 1]), 16)?;
    let rd = sample_measure_axioms(&dyadic, seed, samples, max_point);
    let rc = sample_measure_axioms(&control, seed.wrapping_add(1), samples, max_point);
    for (name, r) in [("dyadic", &rd), ("constant", &rc)] {
        if let Some(v) = &r.violation {
            return refuted(format!("{name} chain pair: {v}"));
        }
    }
    Ok(Outcome::verified(json!({
        "samples": samples,
        "seed": seed,
        "dyadic": { "join_instances": rd.join_instances, "meet_instances": rd.meet_instances },
        "constant": { "join_instances": rc.join_instances, "meet_instances": rc.meet_instances },
    })))
}

fn obstruction(scale: Scale) -> Result<Outcome> {
    let window = if scale == Scale::Full { 12 } else { 6 };
    let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
    let control = OmegaChainPair::new(s.clone(), Sequence::constant_tail(vec![0, 1]), Sequence::constant_tail(vec![2, 2, 1]), 16)?;
    let idx: Vec<u64> = (0..window).collect();
    let (one, two) = window_extract(&control, window, 1, &idx, 64)?;
    for ex in [&one, &two] {
        for &k in &idx {
            if !(s.leq(control.a(k), ex.c) && s.leq(ex.c, control.b(k))) {
                return refuted(format!("extracted c fails a_{k} ≤ c ≤ b_{k} on the interpolating instance"));
            }
        }
        if ex.report.lower.len() != idx.len() || ex.report.upper.len() != idx.len() || ex.report.first_violation.is_some() {
            return refuted("chain replay incomplete on the interpolating instance");
        }
    }
    let dy = dyadic_witness(64);
    let scan = dyadic_scan(&dy, 8, 3, 65);
    if let Some((q, _)) = scan.iter().find(|(_, k)| k.is_none()) {
        return refuted(format!("dyadic {q} interpolates up to index 64"));
    }
    let worst = scan.iter().filter_map(|(_, k)| *k).max();
    let c = dy.a(window);
    let (d1, d2) = window_extract(&dy, window, c, &idx, 65)?;
    if d1.report.first_violation.is_none() || d2.report.first_violation.is_none() {
        return refuted("the dyadic window extraction did not expose a failed index");
    }
    Ok(Outcome::verified(json!({
        "window": window,
        "control_c": s.label(one.c),
        "control_2d_c": s.label(two.c),
        "dyadics_scanned": scan.len(),
        "latest_failure_index": worst,
        "dyadic_window_c": d1.report.c,
        "dyadic_window_violation": d1.report.first_violation,
    })))
}

fn cube(scale: Scale) -> Result<Outcome> {
    let max = if scale == Scale::Full { 7 } else { 5 };
    let rep = cube_verify(max)?;
    if rep.forced_chain_verified != rep.commuting_triples {
        return refuted("forced chain not replayed on every commuting triple");
    }
    if rep.liftings > 0 {
        return refuted(format!("{} liftings found", rep.liftings));
    }
    Ok(Outcome::verified(serde_json::to_value(&rep).expect("cube report serializes")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("bogus", 0, Scale::Small), Err(Error::Invalid(_))));
    }

    #[test]
    fn small_suites_verify() {
        for name in ["closure-oracle", "duality", "extension", "measure-axioms", "obstruction", "cube", "claims"] {
            let o = run_suite(name, 42, Scale::Small).unwrap();
            assert_eq!(o.verdict, Verdict::Verified, "{name}");
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("duality", 7, Scale::Small).unwrap();
        let b = run_suite("duality", 7, Scale::Small).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn automorphism_groups() {
        let m3 = FinitePartialLattice::from_lattice(FiniteLattice::m3());
        assert_eq!(automorphisms(&m3).len(), 6);
        let b2 = FinitePartialLattice::from_lattice(FiniteLattice::boolean(2));
        assert_eq!(automorphisms(&b2).len(), 2);
        let n5 = FinitePartialLattice::from_lattice(FiniteLattice::n5());
        assert_eq!(automorphisms(&n5).len(), 1);
    }

    #[test]
    fn square_orbits_partition_all_squares() {
        let sides: Vec<Arc<FinitePartialLattice>> = partial_lattice_corpus(3).unwrap().into_iter().map(arc).collect();
        let bottoms: Vec<Arc<FinitePartialLattice>> =
            lattices_up_to(2).unwrap().into_iter().map(|l| arc(FinitePartialLattice::from_lattice(l))).collect();
        let kept = embedding_squares(&sides, &bottoms);
        // Every square, with equal sides counted as ordered pairs.
        let mut all = std::collections::BTreeSet::new();
        for (ki, k) in bottoms.iter().enumerate() {
            for (i, p) in sides.iter().enumerate() {
                for (j, q) in sides.iter().enumerate().skip(i) {
                    for f in enumerate_homs(k, p) {
                        for g in enumerate_homs(k, q) {
                            let ok = |m: &Vec<usize>, t: &Arc<FinitePartialLattice>| {
                                PartialLatticeHom::new(k.clone(), t.clone(), m.clone()).is_ok_and(|h| h.is_embedding())
                            };
                            if ok(&f, p) && ok(&g, q)
                                && TruncatedSquare::new(k.clone(), p.clone(), q.clone(), f.clone(), g.clone()).is_ok()
                            {
                                all.insert((ki, i, j, f.clone(), g));
                            }
                        }
                    }
                }
            }
        }
        let mut covered = std::collections::BTreeSet::new();
        let mut total = 0;
        for (i, j, sq) in &kept {
            let ki = bottoms.iter().position(|b| Arc::ptr_eq(b, &sq.k)).unwrap();
            let (ap, aq, ak) = (automorphisms(&sq.p), automorphisms(&sq.q), automorphisms(&sq.k));
            let mut orbit = std::collections::BTreeSet::new();
            for s in &ak {
                for a in &ap {
                    for b in &aq {
                        let f2: Vec<usize> = s.iter().map(|&z| a[sq.f[z]]).collect();
                        let g2: Vec<usize> = s.iter().map(|&z| b[sq.g[z]]).collect();
                        if i == j {
                            orbit.insert((ki, *i, *j, g2.clone(), f2.clone()));
                        }
                        orbit.insert((ki, *i, *j, f2, g2));
                    }
                }
            }
            total += orbit.len();
            covered.extend(orbit);
        }
        assert_eq!(total, covered.len(), "two kept squares share an orbit");
        assert_eq!(covered, all);
        assert!(kept.len() < all.len());
    }

    #[test]
    fn con_homs_of_two_chain() {
        let p = FinitePartialLattice::from_lattice(FiniteLattice::chain(2));
        let con = ConLattice::new(&p, ConBound::default()).unwrap();
        let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
        // Con of the 2-chain is {≤, full}; the top may go anywhere.
        assert_eq!(con.len(), 2);
        assert_eq!(con_homs(&con, &s).len(), 3);
    }
}
