//! Extracting an interpolant from a lift of σ, in one and two dimensions.
//!
//! Both extractors work on finite fragments: `f` only needs to be defined
//! on the triples the inequality chains pass through for the sampled
//! indices. The hypotheses are checked on the fragment, the candidate `c`
//! is computed, and each chain is replayed step by step.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, precondition, refuted, Result};
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::lattice::FinitePartialLattice;
use crate::partial::measure::con_hom_violation;

use super::chain::{lower_probe, OmegaChainPair, ValueSemilattice};
use super::interval::IntervalSet;
use super::triple::{Space, Triple};

/// A lattice (or meet-semilattice) `L` with the maps into `S` that the
/// extractors read: `ψΘ_L`, `ψΘ⁺_L` and `ρ`.
pub trait LiftTarget<S: ValueSemilattice> {
    type Elem: Clone + Eq + fmt::Debug;
    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn psi_theta(&self, s: &S, x: &Self::Elem, y: &Self::Elem) -> S::Elem;
    fn psi_theta_plus(&self, s: &S, x: &Self::Elem, y: &Self::Elem) -> S::Elem;
    fn rho(&self, s: &S, x: &Self::Elem) -> S::Elem;
}

/// The Boolean algebra `2^(3(n+1))` with atoms `(i, j)` for `i < 3` and
/// `j ≤ n`; atom `(i, n)` stands for the tail of component `i`. Elements are
/// bitmasks, and every map into `S` is the join of per-atom values.
#[derive(Clone, Debug)]
pub struct BooleanWindow<E> {
    pub n: u64,
    pub values: Vec<E>,
}

impl<E: Clone> BooleanWindow<E> {
    pub fn new(n: u64, values: Vec<E>) -> Result<Self> {
        if 3 * (n + 1) > 128 {
            return invalid("window too wide for 128 atoms");
        }
        if values.len() != 3 * (n as usize + 1) {
            return invalid("one value per atom is required");
        }
        Ok(BooleanWindow { n, values })
    }

    fn atom(&self, i: usize, j: u64) -> u32 {
        (i as u64 * (self.n + 1) + j) as u32
    }

    /// `x ↦ (x ∩ [0, n), χ(x))` componentwise; a Boolean homomorphism.
    pub fn trace(&self, t: &Triple) -> u128 {
        let mut m = 0u128;
        for i in 0..3 {
            for j in t.0[i].members_below(self.n) {
                m |= 1 << self.atom(i, j);
            }
            if !t.0[i].is_bounded() {
                m |= 1 << self.atom(i, self.n);
            }
        }
        m
    }

    fn value_of<S: ValueSemilattice<Elem = E>>(&self, s: &S, mask: u128) -> E {
        s.join_all((0..self.values.len()).filter(|&k| mask >> k & 1 == 1).map(|k| &self.values[k]))
    }
}

impl<S: ValueSemilattice> LiftTarget<S> for BooleanWindow<S::Elem> {
    type Elem = u128;

    fn leq(&self, x: &u128, y: &u128) -> bool {
        x & !y == 0
    }

    fn meet(&self, x: &u128, y: &u128) -> u128 {
        x & y
    }

    fn join(&self, x: &u128, y: &u128) -> u128 {
        x | y
    }

    fn psi_theta(&self, s: &S, x: &u128, y: &u128) -> S::Elem {
        self.value_of(s, x ^ y)
    }

    fn psi_theta_plus(&self, s: &S, x: &u128, y: &u128) -> S::Elem {
        self.value_of(s, x & !y)
    }

    fn rho(&self, s: &S, x: &u128) -> S::Elem {
        self.value_of(s, *x)
    }
}

/// The window lift of a chain pair with tail value `c`: atoms of component
/// 0 carry `a_j`, atoms of components 1 and 2 carry `b_j`, tails carry `c`.
/// It factors σ on the fragments exactly when `c` interpolates below `n`.
pub fn window_lift<S: ValueSemilattice>(cp: &OmegaChainPair<S>, n: u64, c: S::Elem) -> Result<BooleanWindow<S::Elem>> {
    let mut values = Vec::with_capacity(3 * (n as usize + 1));
    for i in 0..3 {
        for j in 0..n {
            values.push(if i == 0 { cp.a(j) } else { cp.b(j) });
        }
        values.push(c.clone());
    }
    BooleanWindow::new(n, values)
}

/// A finite lattice `L` with `ψ: Con L → S` and `ρ: L → S` as tables.
#[derive(Clone, Debug)]
pub struct ConTarget {
    pub l: Arc<FinitePartialLattice>,
    pub con: Arc<ConLattice>,
    pub s: Arc<FiniteSemilattice>,
    pub psi: Vec<usize>,
    pub rho: Vec<usize>,
}

impl ConTarget {
    pub fn new(
        l: Arc<FinitePartialLattice>,
        s: Arc<FiniteSemilattice>,
        psi: Vec<usize>,
        rho: Vec<usize>,
        bound: ConBound,
    ) -> Result<Self> {
        if !l.is_total() {
            return invalid("L must be a lattice");
        }
        let con = Arc::new(ConLattice::new(&l, bound)?);
        if psi.len() != con.len() || rho.len() != l.len() {
            return invalid("ψ or ρ table has the wrong length");
        }
        if let Some((i, j)) = con_hom_violation(&con, &s, &psi) {
            return invalid(format!("ψ is not a ⟨∨,0⟩-homomorphism at c{i}, c{j}"));
        }
        for x in 0..l.len() {
            for y in 0..l.len() {
                if l.leq(x, y) && !s.leq(rho[x], rho[y]) {
                    return invalid(format!("ρ is not order-preserving at {}, {}", l.label(x), l.label(y)));
                }
            }
        }
        Ok(ConTarget { l, con, s, psi, rho })
    }

    fn lattice(&self) -> &crate::order::lattice::FiniteLattice {
        self.l.as_lattice().expect("checked total")
    }
}

impl LiftTarget<FiniteSemilattice> for ConTarget {
    type Elem = usize;

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.l.leq(*x, *y)
    }

    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.lattice().meet(*x, *y)
    }

    fn join(&self, x: &usize, y: &usize) -> usize {
        self.lattice().join(*x, *y)
    }

    fn psi_theta(&self, _: &FiniteSemilattice, x: &usize, y: &usize) -> usize {
        self.psi[self.con.theta(*x, *y)]
    }

    fn psi_theta_plus(&self, _: &FiniteSemilattice, x: &usize, y: &usize) -> usize {
        self.psi[self.con.theta_plus(*x, *y)]
    }

    fn rho(&self, _: &FiniteSemilattice, x: &usize) -> usize {
        self.rho[*x]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub index: u64,
    /// The intermediate value the chain passes through: `a_ξ` on the
    /// lower side, `b_η` on the upper side.
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub c: String,
    pub lower: Vec<ChainStep>,
    pub upper: Vec<ChainStep>,
    pub horizon: u64,
    /// First `k` below the horizon with `¬(a_k ≤ c ≤ b_k)`.
    pub first_violation: Option<u64>,
}

/// Extractor output: the element `c` and the report.
#[derive(Clone, Debug)]
pub struct Extracted<E> {
    pub c: E,
    pub report: ObstructionReport,
}

fn w() -> IntervalSet {
    IntervalSet::omega()
}

fn e() -> IntervalSet {
    IntervalSet::empty()
}

/// `⟨ω, ω∖η, ω⟩`.
fn upper_probe(eta: u64) -> Triple {
    Triple::new(w(), IntervalSet::from(eta), w())
}

/// `⟨ω, ω∖η, ∅⟩`.
fn upper_meet(eta: u64) -> Triple {
    Triple::new(w(), IntervalSet::from(eta), e())
}

fn images<S, T>(
    target: &T,
    f: &dyn Fn(&Triple) -> Option<T::Elem>,
    frag: &[Triple],
    name: &str,
) -> Result<Vec<T::Elem>>
where
    S: ValueSemilattice,
    T: LiftTarget<S>,
{
    let _ = target;
    frag.iter()
        .map(|t| f(t).ok_or_else(|| crate::Error::Invalid(format!("{name} is undefined on {t}"))))
        .collect()
}

/// Order, meets (and joins if `joins`) that exist inside `space` and inside
/// the fragment must be preserved.
fn fragment_hom_violation<S, T>(
    target: &T,
    frag: &[Triple],
    img: &[T::Elem],
    space: Space,
    joins: bool,
) -> Option<String>
where
    S: ValueSemilattice,
    T: LiftTarget<S>,
{
    let pos = |t: &Triple| frag.iter().position(|u| u == t);
    for i in 0..frag.len() {
        for j in 0..frag.len() {
            let (x, y) = (&frag[i], &frag[j]);
            if x.leq(y) && !target.leq(&img[i], &img[j]) {
                return Some(format!("order {x} ≤ {y} is not preserved"));
            }
            let m = x.meet(y);
            if m.is_in(space) {
                if let Some(k) = pos(&m) {
                    if img[k] != target.meet(&img[i], &img[j]) {
                        return Some(format!("meet of {x} and {y} is not preserved"));
                    }
                }
            }
            if joins {
                let jn = x.join(y);
                if jn.is_in(space) {
                    if let Some(k) = pos(&jn) {
                        if img[k] != target.join(&img[i], &img[j]) {
                            return Some(format!("join of {x} and {y} is not preserved"));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Given `f: P → L` and `ψ: Con L → S` with `ψ∘Con f = φ` on the fragment,
/// computes `c = ψΘ_L(f⟨∅,∅,∅⟩, f⟨ω,ω,∅⟩ ∧ f⟨ω,∅,ω⟩)` and replays
/// `a_ξ ≤ c` and `c ≤ b_η`.
pub fn obstruction_extract_1d<S, T>(
    cp: &OmegaChainPair<S>,
    target: &T,
    f: &dyn Fn(&Triple) -> Option<T::Elem>,
    xis: &[u64],
    etas: &[u64],
    horizon: u64,
) -> Result<Extracted<S::Elem>>
where
    S: ValueSemilattice,
    T: LiftTarget<S>,
{
    let s = &cp.s;
    let z = Triple::zero();
    let p = Triple::new(w(), w(), e());
    let q = Triple::new(w(), e(), w());
    let mut frag = vec![z.clone(), p.clone(), q.clone()];
    frag.extend(xis.iter().map(|&x| lower_probe(x)));
    for &eta in etas {
        frag.push(upper_probe(eta));
        frag.push(upper_meet(eta));
    }
    frag.sort();
    frag.dedup();
    let img = images::<S, T>(target, f, &frag, "f")?;
    let at = |t: &Triple| img[frag.iter().position(|u| u == t).expect("in fragment")].clone();
    if let Some(why) = fragment_hom_violation::<S, T>(target, &frag, &img, Space::P, true) {
        return precondition(format!("f is not a homomorphism on the fragment: {why}"));
    }
    for (i, x) in frag.iter().enumerate() {
        for (j, y) in frag.iter().enumerate() {
            let lhs = target.psi_theta_plus(s, &img[i], &img[j]);
            let rhs = cp.mu(x, y)?;
            if lhs != rhs {
                return precondition(format!(
                    "ψ∘Con f differs from φ on Θ⁺({x}, {y}): {} vs {}",
                    s.render(&lhs),
                    s.render(&rhs)
                ));
            }
        }
    }
    let (fz, fp, fq) = (at(&z), at(&p), at(&q));
    let top = target.meet(&fp, &fq);
    let c = target.psi_theta(s, &fz, &top);
    let mut lower = Vec::new();
    for &xi in xis {
        let probe = lower_probe(xi);
        let fx = at(&probe);
        if !target.leq(&fx, &top) {
            return refuted(format!("f⟨ω,ω,∅⟩ ∧ f⟨ω,∅,ω⟩ ≥ f{probe} fails"));
        }
        let v = target.psi_theta(s, &fz, &fx);
        if !s.leq(&v, &c) {
            return refuted(format!("ψΘ(f⟨∅,∅,∅⟩, f{probe}) ≰ c"));
        }
        if v != cp.mu(&probe, &z)? || v != cp.a(xi) {
            return refuted(format!("ψΘ(f⟨∅,∅,∅⟩, f{probe}) ≠ a_{xi}"));
        }
        lower.push(ChainStep { index: xi, value: s.render(&v) });
    }
    let mut upper = Vec::new();
    for &eta in etas {
        let r = upper_probe(eta);
        let m = upper_meet(eta);
        let (fr, fm) = (at(&r), at(&m));
        if !target.leq(&fq, &fr) {
            return refuted(format!("f⟨ω,∅,ω⟩ ≤ f{r} fails"));
        }
        if p.meet(&r) != m || !m.is_in(Space::P) || fm != target.meet(&fp, &fr) {
            return refuted(format!("f⟨ω,ω,∅⟩ ∧ f{r} ≠ f{m}"));
        }
        let v = target.psi_theta(s, &fz, &fm);
        if !s.leq(&c, &v) {
            return refuted(format!("c ≰ ψΘ(f⟨∅,∅,∅⟩, f{m})"));
        }
        if v != cp.sigma(&m)? || v != cp.b(eta) {
            return refuted(format!("ψΘ(f⟨∅,∅,∅⟩, f{m}) ≠ b_{eta}"));
        }
        upper.push(ChainStep { index: eta, value: s.render(&v) });
    }
    let report = ObstructionReport {
        c: s.render(&c),
        lower,
        upper,
        horizon,
        first_violation: cp.interpolation_failure(&c, horizon),
    };
    Ok(Extracted { c, report })
}

/// Given meet-homs `f, f′: V → L` with `f∘e = f′∘e′` on `U` and
/// `ρ∘f = ρ∘f′ = ν` on the fragment, computes
/// `c = ρ(f⟨ω,ω,∅⟩ ∧ f′⟨ω,ω,∅⟩)` and replays both chains.
pub fn obstruction_extract_2d<S, T>(
    cp: &OmegaChainPair<S>,
    target: &T,
    f: &dyn Fn(&Triple) -> Option<T::Elem>,
    f_prime: &dyn Fn(&Triple) -> Option<T::Elem>,
    xis: &[u64],
    etas: &[u64],
    horizon: u64,
) -> Result<Extracted<S::Elem>>
where
    S: ValueSemilattice,
    T: LiftTarget<S>,
{
    let s = &cp.s;
    let p = Triple::new(w(), w(), e());
    // f sees p, the lower probes, ⟨ω,ω∖η,ω⟩ and ⟨ω,ω∖η,∅⟩; f′ sees p,
    // the lower probes and ⟨ω,ω,ω∖η⟩.
    let mut frag_f = vec![p.clone()];
    let mut frag_g = vec![p.clone()];
    for &xi in xis {
        frag_f.push(lower_probe(xi));
        frag_g.push(lower_probe(xi));
    }
    for &eta in etas {
        frag_f.push(upper_probe(eta));
        frag_f.push(upper_meet(eta));
        frag_g.push(upper_probe(eta).swap());
    }
    for fr in [&mut frag_f, &mut frag_g] {
        fr.sort();
        fr.dedup();
    }
    let img_f = images::<S, T>(target, f, &frag_f, "f")?;
    let img_g = images::<S, T>(target, f_prime, &frag_g, "f′")?;
    let at = |frag: &[Triple], img: &[T::Elem], t: &Triple| img[frag.iter().position(|u| u == t).expect("in fragment")].clone();
    for (frag, img, name) in [(&frag_f, &img_f, "f"), (&frag_g, &img_g, "f′")] {
        if let Some(why) = fragment_hom_violation::<S, T>(target, frag, img, Space::V, false) {
            return precondition(format!("{name} is not a meet-homomorphism on the fragment: {why}"));
        }
        for (t, x) in frag.iter().zip(img.iter()) {
            let lhs = target.rho(s, x);
            let rhs = cp.sigma(t)?;
            if lhs != rhs {
                return precondition(format!("ρ∘{name} differs from ν at {t}: {} vs {}", s.render(&lhs), s.render(&rhs)));
            }
        }
    }
    // f∘e = f′∘e′ on the U-elements the proof uses.
    let mut u_elems: Vec<Triple> = xis.iter().map(|&x| lower_probe(x)).collect();
    u_elems.extend(etas.iter().map(|&eta| upper_probe(eta)));
    for u in &u_elems {
        debug_assert!(u.is_in(Space::U));
        if at(&frag_f, &img_f, u) != at(&frag_g, &img_g, &u.swap()) {
            return precondition(format!("f∘e and f′∘e′ differ at {u}"));
        }
    }
    let fp = at(&frag_f, &img_f, &p);
    let gp = at(&frag_g, &img_g, &p);
    let top = target.meet(&fp, &gp);
    let c = target.rho(s, &top);
    let mut lower = Vec::new();
    for &xi in xis {
        let probe = lower_probe(xi);
        let fx = at(&frag_f, &img_f, &probe);
        if !target.leq(&fx, &fp) || !target.leq(&at(&frag_g, &img_g, &probe), &gp) {
            return refuted(format!("f⟨ω,ω,∅⟩ ∧ f′⟨ω,ω,∅⟩ ≥ f{probe} fails"));
        }
        let v = target.rho(s, &fx);
        if !s.leq(&v, &c) || v != cp.a(xi) {
            return refuted(format!("ρ(f{probe}) = a_{xi} ≤ c fails"));
        }
        lower.push(ChainStep { index: xi, value: s.render(&v) });
    }
    let mut upper = Vec::new();
    for &eta in etas {
        let r = upper_probe(eta);
        let m = upper_meet(eta);
        // f′⟨ω,ω,∅⟩ ≤ f′⟨ω,ω,ω∖η⟩ = f′(s⟨ω,ω∖η,ω⟩) = f⟨ω,ω∖η,ω⟩.
        let g_r = at(&frag_g, &img_g, &r.swap());
        if !target.leq(&gp, &g_r) {
            return refuted(format!("f′⟨ω,ω,∅⟩ ≤ f′{} fails", r.swap()));
        }
        let fr = at(&frag_f, &img_f, &r);
        let fm = at(&frag_f, &img_f, &m);
        if fm != target.meet(&fp, &fr) || !target.leq(&top, &fm) {
            return refuted(format!("f⟨ω,ω,∅⟩ ∧ f′⟨ω,ω,∅⟩ ≤ f{m} fails"));
        }
        let v = target.rho(s, &fm);
        if !s.leq(&c, &v) || v != cp.b(eta) {
            return refuted(format!("c ≤ ρ(f{m}) = b_{eta} fails"));
        }
        upper.push(ChainStep { index: eta, value: s.render(&v) });
    }
    let report = ObstructionReport {
        c: s.render(&c),
        lower,
        upper,
        horizon,
        first_violation: cp.interpolation_failure(&c, horizon),
    };
    Ok(Extracted { c, report })
}

/// Runs both extractors on the window lift of `cp` with tail value `c`.
pub fn window_extract<S: ValueSemilattice>(
    cp: &OmegaChainPair<S>,
    window: u64,
    c: S::Elem,
    indices: &[u64],
    horizon: u64,
) -> Result<(Extracted<S::Elem>, Extracted<S::Elem>)> {
    if indices.iter().any(|&k| k >= window) {
        return invalid("sampled indices must lie inside the window");
    }
    let lift = window_lift(cp, window, c)?;
    let f = |t: &Triple| Some(lift.trace(t));
    let g = |t: &Triple| Some(lift.trace(&t.swap()));
    let one = obstruction_extract_1d(cp, &lift, &f, indices, indices, horizon)?;
    let two = obstruction_extract_2d(cp, &lift, &f, &g, indices, indices, horizon)?;
    Ok((one, two))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::chain::{dyadic_witness, Sequence};
    use crate::order::lattice::FiniteLattice;

    fn control() -> OmegaChainPair<FiniteSemilattice> {
        let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
        OmegaChainPair::new(s, Sequence::constant_tail(vec![0, 1]), Sequence::constant_tail(vec![2, 2, 1]), 16).unwrap()
    }

    #[test]
    fn interpolant_instance_passes_both() {
        let cp = control();
        let idx: Vec<u64> = (0..8).collect();
        let (one, two) = window_extract(&cp, 8, 1, &idx, 64).unwrap();
        assert_eq!(one.c, 1);
        assert_eq!(two.c, 1);
        assert_eq!(one.report.first_violation, None);
        assert_eq!(two.report.first_violation, None);
        assert_eq!(one.report.lower.len(), 8);
        assert_eq!(two.report.upper.len(), 8);
    }

    #[test]
    fn dyadic_window_names_violation() {
        let cp = dyadic_witness(40);
        let idx: Vec<u64> = (0..10).collect();
        let c = cp.a(10);
        let (one, two) = window_extract(&cp, 10, c.clone(), &idx, 64).unwrap();
        assert_eq!(one.c, c);
        assert_eq!(two.c, c);
        let k = one.report.first_violation.expect("dyadic c fails eventually");
        assert!(k >= 10);
        assert!(!(cp.a(k) <= c && c <= cp.b(k)));
        assert_eq!(two.report.first_violation, Some(k));
    }

    #[test]
    fn tampered_psi_rejected() {
        let cp = control();
        let mut lift = window_lift(&cp, 4, 1).unwrap();
        lift.values[1] = 2;
        let f = |t: &Triple| Some(lift.trace(t));
        let err = obstruction_extract_1d(&cp, &lift, &f, &[0, 1, 2], &[0, 1, 2], 16).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(_)));
    }

    #[test]
    fn non_interpolating_tail_fails_factorization() {
        // c = 2 is above b_2 = 1, so the lift is not a factorization.
        let cp = control();
        let err = window_extract(&cp, 4, 2, &[0, 1, 2, 3], 16).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(ref m) if m.contains("differs")));
    }

    #[test]
    fn missing_fragment_value_is_invalid() {
        let cp = control();
        let lift = window_lift(&cp, 4, 1).unwrap();
        let f = |t: &Triple| (t != &Triple::zero()).then(|| lift.trace(t));
        let err = obstruction_extract_1d(&cp, &lift, &f, &[0], &[0], 4).unwrap_err();
        assert!(matches!(err, crate::Error::Invalid(_)));
    }

    #[test]
    fn trivial_finite_target() {
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        let cp = OmegaChainPair::new(
            (*s).clone(),
            Sequence::constant_tail(vec![0]),
            Sequence::constant_tail(vec![0]),
            4,
        )
        .unwrap();
        let l = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(1)));
        let t = ConTarget::new(l, s, vec![0], vec![0], ConBound::default()).unwrap();
        let f = |_: &Triple| Some(0usize);
        let out = obstruction_extract_1d(&cp, &t, &f, &[0, 1], &[0, 1], 8).unwrap();
        assert_eq!(out.c, 0);
        assert_eq!(out.report.first_violation, None);
        let out = obstruction_extract_2d(&cp, &t, &f, &f, &[0, 1], &[0, 1], 8).unwrap();
        assert_eq!(out.c, 0);
    }
}
