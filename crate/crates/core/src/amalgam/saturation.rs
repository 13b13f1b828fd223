//! One saturation step for measured partial lattices, and the two gadgets
//! fed into it.

use std::sync::Arc;

use crate::error::{invalid, precondition, refuted, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::hom::hom_violation;
use crate::partial::lattice::FinitePartialLattice;

use super::extend::extend_hom_cofinal;
use super::measured::MeasuredPartialLattice;
use super::pairs::{mediating_gamma, CongruencePairLattice};
use super::pushout::pushout;
use super::square::{reduce_to_embeddings, TruncatedSquare};

/// Output of [`saturation_step`]: `⟨L′, ψ′⟩` with `e′: L → L′` and
/// `f′: P → L′` such that `f′∘e = e′∘f`.
#[derive(Clone, Debug)]
pub struct SaturationStep {
    pub result: MeasuredPartialLattice,
    pub e_prime: Vec<usize>,
    pub f_prime: Vec<usize>,
    /// Size of the pushout before the kernel projection.
    pub pushout_size: usize,
    /// Size of the congruence-pair lattice.
    pub c_size: usize,
    pub gamma: Vec<usize>,
}

/// Amalgamates `⟨P, μ⟩ ← ⟨K, λ⟩ → ⟨L, φ⟩` along the embedding `e: K → P`
/// and the hom `f: K → L`, then projects to a proper measured structure.
pub fn saturation_step(
    l: &MeasuredPartialLattice,
    k: &Arc<FinitePartialLattice>,
    p: &MeasuredPartialLattice,
    e: &[usize],
    f: &[usize],
    bound: ConBound,
) -> Result<SaturationStep> {
    let sq = TruncatedSquare::new(k.clone(), p.lattice().clone(), l.lattice().clone(), e.to_vec(), f.to_vec())?;
    if !sq.f_hom().is_embedding() {
        return invalid("e: K → P is not an embedding");
    }
    let s = p.codomain().clone();
    let s_lat = s.to_lattice();
    if !s_lat.is_distributive() {
        return precondition("the value semilattice is not distributive");
    }
    let red = reduce_to_embeddings(&sq, p, l, bound)?;
    let po = pushout(&red.square)?;
    let cpl = CongruencePairLattice::from_parts(
        &red.square,
        red.lambda.con().clone(),
        red.mu.con().clone(),
        red.nu.con().clone(),
    )?;
    let gamma = mediating_gamma(&red.square, &cpl, &red.mu, &red.nu)?;

    // Extend γ along ψ[C] ⊆ Con R, which is cofinal since ψ(1, 1) = 1_R.
    let con_r = Arc::new(ConLattice::new(&po.r, bound)?);
    let b = FiniteSemilattice::from_lattice(con_r.lattice()?);
    let mut a = Vec::with_capacity(cpl.len());
    let mut fa = Vec::with_capacity(cpl.len());
    for c in 0..cpl.len() {
        let rel = cpl.psi(&po, c);
        let idx = con_r.index_of(&rel).ok_or_else(|| crate::Error::Refuted("ψ(c) is not a congruence of R".into()))?;
        match a.iter().position(|&x| x == idx) {
            Some(j) if fa[j] != gamma.values[c] => {
                return refuted("ψ identifies two elements of C with different γ values");
            }
            Some(_) => {}
            None => {
                a.push(idx);
                fa.push(gamma.values[c]);
            }
        }
    }
    let hom_r = extend_hom_cofinal(&b, &a, &fa, &s_lat)?;
    let measured_r = MeasuredPartialLattice::from_con(po.r.clone(), con_r, s.clone(), hom_r)?;
    let (result, proj) = measured_r.kernel_projection(bound)?;

    let e_prime: Vec<usize> = red.proj_q.iter().map(|&y| proj[po.v[y]]).collect();
    let f_prime: Vec<usize> = red.proj_p.iter().map(|&x| proj[po.u[x]]).collect();
    let target = result.lattice();
    if let Some(why) = hom_violation(l.lattice(), target, &e_prime) {
        return refuted(format!("e′ is not a homomorphism: {why}"));
    }
    if let Some(why) = hom_violation(p.lattice(), target, &f_prime) {
        return refuted(format!("f′ is not a homomorphism: {why}"));
    }
    if let Some(z) = (0..k.len()).find(|&z| f_prime[e[z]] != e_prime[f[z]]) {
        return refuted(format!("square does not commute at {}", k.label(z)));
    }
    if result.pull_back(p.con(), &f_prime) != p.hom() {
        return refuted("ψ′∘Con f′ differs from μ");
    }
    if result.pull_back(l.con(), &e_prime) != l.hom() {
        return refuted("ψ′∘Con e′ differs from φ");
    }
    if !result.is_proper() {
        return refuted("the resulting measure does not isolate zero");
    }
    Ok(SaturationStep {
        result,
        e_prime,
        f_prime,
        pushout_size: po.r.len(),
        c_size: cpl.len(),
        gamma: gamma.values,
    })
}

/// The left side `⟨K, λ⟩ ↪ ⟨P, μ⟩` of a saturation step, with `f: K → L`.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub k: Arc<FinitePartialLattice>,
    pub p: MeasuredPartialLattice,
    pub e: Vec<usize>,
    pub f: Vec<usize>,
}

fn labelled(l: FiniteLattice, labels: &[&str]) -> Arc<FinitePartialLattice> {
    let l = l.with_labels(labels.iter().map(|s| s.to_string()).collect()).expect("fresh labels");
    Arc::new(FinitePartialLattice::from_lattice(l))
}

/// `K = {a < b < c}` inside the square `P = {a, b, t, c}`, measured by
/// `μΘ(a,b) = μΘ(t,c) = φΘ(a,b)` and `μΘ(a,t) = μΘ(b,c) = φΘ(b,c)`.
pub fn rc_gadget(l: &MeasuredPartialLattice, a: usize, b: usize, c: usize, bound: ConBound) -> Result<Gadget> {
    let lat = l.lattice();
    if [a, b, c].iter().any(|&x| x >= lat.len()) {
        return invalid("element out of range");
    }
    if !(lat.leq(a, b) && lat.leq(b, c)) {
        return invalid(format!("{} ≤ {} ≤ {} fails", lat.label(a), lat.label(b), lat.label(c)));
    }
    let k = labelled(FiniteLattice::chain(3), &["a", "b", "c"]);
    let p = labelled(FiniteLattice::boolean(2), &["a", "b", "t", "c"]);
    let lower = l.value(b, a);
    let upper = l.value(c, b);
    let values = [((1, 0), lower), ((3, 2), lower), ((2, 0), upper), ((3, 1), upper)];
    let p = MeasuredPartialLattice::from_principal_values(p, l.codomain().clone(), &values, bound)?;
    Ok(Gadget { k, p, e: vec![0, 1, 3], f: vec![a, b, c] })
}

/// Runs the relative-complement gadget and returns the step with the new
/// complement `x` of `e′(b)` in `[e′(a), e′(c)]`.
pub fn relative_complement_step(
    l: &MeasuredPartialLattice,
    a: usize,
    b: usize,
    c: usize,
    bound: ConBound,
) -> Result<(SaturationStep, usize)> {
    let g = rc_gadget(l, a, b, c, bound)?;
    let step = saturation_step(l, &g.k, &g.p, &g.e, &g.f, bound)?;
    let r = step.result.lattice();
    let x = step.f_prime[2];
    let (a2, b2, c2) = (step.e_prime[a], step.e_prime[b], step.e_prime[c]);
    if r.defined_meet(&[b2, x]) != Some(a2) && !(b2 == a2 && x == a2) {
        return refuted("b ∧ x = a fails in L′");
    }
    if r.defined_join(&[b2, x]) != Some(c2) && !(b2 == c2 && x == c2) {
        return refuted("b ∨ x = c fails in L′");
    }
    Ok((step, x))
}

/// `K = {o < i}` inside `P = {o < x < i}` with `μΘ(o,x) = α` and
/// `μΘ(x,i) = φΘ(o,i)`. Needs `α ≤ φΘ(o,i)`.
pub fn chain_gadget(l: &MeasuredPartialLattice, o: usize, i: usize, alpha: usize, bound: ConBound) -> Result<Gadget> {
    let lat = l.lattice();
    let s = l.codomain();
    if o >= lat.len() || i >= lat.len() || alpha >= s.len() {
        return invalid("element out of range");
    }
    if !lat.leq(o, i) {
        return invalid(format!("{} ≤ {} fails", lat.label(o), lat.label(i)));
    }
    let top = l.value(i, o);
    if !s.leq(alpha, top) {
        return precondition(format!("{} is not below φΘ({}, {}) = {}", s.label(alpha), lat.label(o), lat.label(i), s.label(top)));
    }
    let k = labelled(FiniteLattice::chain(2), &["o", "i"]);
    let p = labelled(FiniteLattice::chain(3), &["o", "x", "i"]);
    let p = MeasuredPartialLattice::from_principal_values(p, s.clone(), &[((1, 0), alpha), ((2, 1), top)], bound)?;
    Ok(Gadget { k, p, e: vec![0, 2], f: vec![o, i] })
}

/// Runs the chain gadget and checks that `α` is a value of the new measure.
pub fn chain_refinement_step(
    l: &MeasuredPartialLattice,
    o: usize,
    i: usize,
    alpha: usize,
    bound: ConBound,
) -> Result<SaturationStep> {
    let g = chain_gadget(l, o, i, alpha, bound)?;
    let step = saturation_step(l, &g.k, &g.p, &g.e, &g.f, bound)?;
    if !step.result.hom().contains(&alpha) {
        return refuted(format!("{} is not in the range of the new measure", l.codomain().label(alpha)));
    }
    Ok(step)
}

/// Some `x ∈ [o, i]` with `a∧x = b∧x = o` and `a∨x = b∨x = i`.
pub fn perspectivity_check(l: &FiniteLattice, o: usize, i: usize, a: usize, b: usize) -> Option<usize> {
    (0..l.len()).find(|&x| {
        l.leq(o, x)
            && l.leq(x, i)
            && l.meet(a, x) == o
            && l.meet(b, x) == o
            && l.join(a, x) == i
            && l.join(b, x) == i
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> Arc<FiniteSemilattice> {
        Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)))
    }

    fn chain3_measured(lower: usize, upper: usize) -> MeasuredPartialLattice {
        let l = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(3)));
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::boolean(2)));
        MeasuredPartialLattice::from_principal_values(l, s, &[((1, 0), lower), ((2, 1), upper)], ConBound::default())
            .unwrap()
    }

    #[test]
    fn perspectivity_in_m3_and_chain() {
        let m3 = FiniteLattice::m3();
        let (o, i) = (m3.bottom(), m3.top());
        let atoms: Vec<usize> = (0..5).filter(|&x| x != o && x != i).collect();
        let w = perspectivity_check(&m3, o, i, atoms[0], atoms[1]).unwrap();
        assert_eq!(w, atoms[2]);
        let c = FiniteLattice::chain(4);
        assert_eq!(perspectivity_check(&c, 0, 3, 1, 2), None);
    }

    #[test]
    fn identity_step_is_kernel_projection() {
        let l = chain3_measured(0, 1);
        let k = l.lattice().clone();
        let step = saturation_step(&l, &k, &l, &[0, 1, 2], &[0, 1, 2], ConBound::default()).unwrap();
        let (proj, _) = l.kernel_projection(ConBound::default()).unwrap();
        assert_eq!(step.result.lattice().len(), proj.lattice().len());
        assert_eq!(step.result.hom(), proj.hom());
    }

    #[test]
    fn gadget_on_equal_values_is_proper_square() {
        let l = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(3)));
        let l = MeasuredPartialLattice::from_principal_values(l, s2(), &[((1, 0), 1), ((2, 1), 1)], ConBound::default())
            .unwrap();
        let g = rc_gadget(&l, 0, 1, 2, ConBound::default()).unwrap();
        assert_eq!(g.p.lattice().len(), 4);
        assert!(g.p.is_proper());
    }

    #[test]
    fn complement_appears() {
        let l = chain3_measured(1, 2);
        let (step, x) = relative_complement_step(&l, 0, 1, 2, ConBound::default()).unwrap();
        assert!(step.result.is_proper());
        assert_eq!(step.result.lattice().len(), 4);
        assert_ne!(x, step.e_prime[1]);
    }

    #[test]
    fn alpha_enters_range() {
        // L = 2-chain measured by the top of 2², refined at an atom.
        let l = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(2)));
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::boolean(2)));
        let l = MeasuredPartialLattice::from_principal_values(l, s, &[((1, 0), 3)], ConBound::default()).unwrap();
        assert!(!l.hom().contains(&1));
        let step = chain_refinement_step(&l, 0, 1, 1, ConBound::default()).unwrap();
        assert!(step.result.hom().contains(&1));
        assert_eq!(step.result.lattice().len(), 3);
    }
}
