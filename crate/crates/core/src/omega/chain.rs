//! Increasing and decreasing ω-chains in a ⟨∨,0⟩-semilattice, the map σ on
//! `P*` and the measure μ on `P`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::order::semilattice::FiniteSemilattice;

use super::interval::IntervalSet;
use super::triple::{Space, Triple};

/// The value semilattice `S` of a chain pair.
pub trait ValueSemilattice {
    type Elem: Clone + Eq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    fn join_all<'a>(&self, xs: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        xs.into_iter().fold(self.zero(), |acc, x| self.join(&acc, x))
    }
}

impl ValueSemilattice for FiniteSemilattice {
    type Elem = usize;

    fn zero(&self) -> usize {
        FiniteSemilattice::zero(self)
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        FiniteSemilattice::join(self, *a, *b)
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        FiniteSemilattice::leq(self, *a, *b)
    }

    fn render(&self, a: &usize) -> String {
        self.label(*a).to_string()
    }
}

/// Nonnegative rationals under `max`; the chains used here are dyadic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyadicMax;

impl ValueSemilattice for DyadicMax {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn join(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a.max(b).clone()
    }

    fn leq(&self, a: &BigRational, b: &BigRational) -> bool {
        a <= b
    }

    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

pub type TailRule<E> = Arc<dyn Fn(u64) -> E + Send + Sync>;

/// A sequence given by an explicit table and a rule past its end.
#[derive(Clone)]
pub enum Tail<E> {
    /// Repeat the last table entry.
    Constant,
    Rule(TailRule<E>),
}

#[derive(Clone)]
pub struct Sequence<E> {
    pub table: Vec<E>,
    pub tail: Tail<E>,
}

impl<E: Clone> Sequence<E> {
    pub fn constant_tail(table: Vec<E>) -> Self {
        Sequence { table, tail: Tail::Constant }
    }

    pub fn get(&self, k: u64) -> E {
        match self.table.get(k as usize) {
            Some(v) => v.clone(),
            None => match &self.tail {
                Tail::Constant => self.table.last().expect("nonempty table").clone(),
                Tail::Rule(r) => r(k),
            },
        }
    }
}

impl<E: fmt::Debug> fmt::Debug for Sequence<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tail = match self.tail {
            Tail::Constant => "constant",
            Tail::Rule(_) => "rule",
        };
        f.debug_struct("Sequence").field("table", &self.table).field("tail", &tail).finish()
    }
}

/// An increasing `a⃗` and a decreasing `b⃗` with `a_0 = 0` and `a⃗ ≤ b⃗`.
#[derive(Clone, Debug)]
pub struct OmegaChainPair<S: ValueSemilattice> {
    pub s: S,
    pub a: Sequence<S::Elem>,
    pub b: Sequence<S::Elem>,
}

impl<S: ValueSemilattice> OmegaChainPair<S> {
    /// Validates the chain conditions on indices below `horizon` (and at
    /// least on both tables).
    pub fn new(s: S, a: Sequence<S::Elem>, b: Sequence<S::Elem>, horizon: u64) -> Result<Self> {
        if a.table.is_empty() || b.table.is_empty() {
            return invalid("chain tables must be nonempty");
        }
        let cp = OmegaChainPair { s, a, b };
        let h = horizon.max(cp.a.table.len() as u64).max(cp.b.table.len() as u64);
        if cp.a.get(0) != cp.s.zero() {
            return invalid("a_0 must be 0");
        }
        for k in 1..h {
            if !cp.s.leq(&cp.a.get(k - 1), &cp.a.get(k)) {
                return invalid(format!("a is not increasing at {k}"));
            }
            if !cp.s.leq(&cp.b.get(k), &cp.b.get(k - 1)) {
                return invalid(format!("b is not decreasing at {k}"));
            }
        }
        // With a increasing and b decreasing, a_{h-1} ≤ b_{h-1} gives a ≤ b below h.
        if !cp.s.leq(&cp.a.get(h - 1), &cp.b.get(h - 1)) {
            return invalid(format!("a_{} ≰ b_{}", h - 1, h - 1));
        }
        Ok(cp)
    }

    pub fn a(&self, k: u64) -> S::Elem {
        self.a.get(k)
    }

    pub fn b(&self, k: u64) -> S::Elem {
        self.b.get(k)
    }

    /// `σ(⟨x0,x1,x2⟩)`: `a_{sup x0}` if `x1 ∪ x2 = ∅`, else `b_{min(x1 ∪ x2)}`.
    pub fn sigma(&self, t: &Triple) -> Result<S::Elem> {
        if !t.is_in(Space::PStar) {
            return invalid(format!("{t} is not in P*"));
        }
        let rest = t.0[1].union(&t.0[2]);
        Ok(match rest.min_elem() {
            None => self.a(t.0[0].sup().expect("bounded in P*")),
            Some(m) => self.b(m),
        })
    }

    /// `μ(x, y) = σ(x ∖ y)` for `x, y ∈ P`.
    pub fn mu(&self, x: &Triple, y: &Triple) -> Result<S::Elem> {
        for t in [x, y] {
            if !t.is_in(Space::P) {
                return invalid(format!("{t} is not in P"));
            }
        }
        self.sigma(&x.difference(y))
    }

    /// First `k < horizon` with `¬(a_k ≤ c ≤ b_k)`.
    pub fn interpolation_failure(&self, c: &S::Elem, horizon: u64) -> Option<u64> {
        (0..horizon).find(|&k| !(self.s.leq(&self.a(k), c) && self.s.leq(c, &self.b(k))))
    }
}

fn floor_sqrt2_scaled(k: u64) -> BigInt {
    // ⌊√2 · 2^k⌋ = ⌊√(2 · 4^k)⌋.
    (BigInt::from(2u8) << (2 * k as usize)).sqrt()
}

/// `a_k = ⌊√2·2^k⌋ / 2^k` (with `a_0 = 0`), `b_k = a_k + 2^{-k}`; the
/// first `depth + 1` entries are tabulated.
pub fn dyadic_witness(depth: u64) -> OmegaChainPair<DyadicMax> {
    let a_of = |k: u64| -> BigRational {
        if k == 0 {
            BigRational::zero()
        } else {
            BigRational::new(floor_sqrt2_scaled(k), BigInt::one() << k as usize)
        }
    };
    let b_of = |k: u64| BigRational::new(floor_sqrt2_scaled(k) + 1, BigInt::one() << k as usize);
    let n = depth.max(1);
    let a = Sequence { table: (0..=n).map(a_of).collect(), tail: Tail::Rule(Arc::new(a_of)) };
    let b = Sequence { table: (0..=n).map(b_of).collect(), tail: Tail::Rule(Arc::new(b_of)) };
    OmegaChainPair::new(DyadicMax, a, b, n + 1).expect("dyadic chains are valid")
}

/// Every dyadic `m / 2^e` with `e ≤ max_exp` and `0 ≤ m / 2^e ≤ bound`,
/// paired with the first index `k < horizon` at which it fails to
/// interpolate (`None` if it never fails below the horizon).
pub fn dyadic_scan(
    cp: &OmegaChainPair<DyadicMax>,
    max_exp: u32,
    bound: u64,
    horizon: u64,
) -> Vec<(BigRational, Option<u64>)> {
    let den = 1u64 << max_exp;
    (0..=bound * den)
        .map(|m| {
            let q = BigRational::new(BigInt::from(m), BigInt::from(den));
            let k = cp.interpolation_failure(&q, horizon);
            (q, k)
        })
        .collect()
}

/// A sampled measure-axiom failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", content = "triples", rename_all = "snake_case")]
pub enum OmegaViolation {
    Comparable(Triple, Triple),
    Triangle(Triple, Triple, Triple),
    JoinSplit(Triple, Triple, Triple),
    MeetSplit(Triple, Triple, Triple),
    SigmaAdditivity(Triple, Triple),
}

impl fmt::Display for OmegaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaViolation::Comparable(x, y) => write!(f, "axiom (i): μ({x}, {y}) ≠ 0 although x ≤ y"),
            OmegaViolation::Triangle(x, y, z) => write!(f, "axiom (ii) fails at {x}, {y}, {z}"),
            OmegaViolation::JoinSplit(x, y, b) => write!(f, "axiom (iii) fails for X = {{{x}, {y}}} against {b}"),
            OmegaViolation::MeetSplit(a, x, y) => write!(f, "axiom (iv) fails for {a} against Y = {{{x}, {y}}}"),
            OmegaViolation::SigmaAdditivity(s, t) => write!(f, "σ is not additive on {s}, {t}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleReport {
    pub samples: usize,
    pub join_instances: usize,
    pub meet_instances: usize,
    pub violation: Option<OmegaViolation>,
}

/// Checks σ additivity on `P*` and the four measure axioms for μ on `P`
/// over `samples` seeded draws.
pub fn sample_measure_axioms<S: ValueSemilattice>(
    cp: &OmegaChainPair<S>,
    seed: u64,
    samples: usize,
    max_point: u64,
) -> SampleReport {
    use rand::SeedableRng;
    use super::triple::random_triple;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let s = &cp.s;
    let mu = |x: &Triple, y: &Triple| cp.mu(x, y).expect("sampled in P");
    let mut rep = SampleReport { samples, ..Default::default() };
    let zero = s.zero();
    if cp.sigma(&Triple::zero()).ok() != Some(zero.clone()) {
        rep.violation = Some(OmegaViolation::SigmaAdditivity(Triple::zero(), Triple::zero()));
        return rep;
    }
    for _ in 0..samples {
        let p1 = random_triple(&mut rng, Space::PStar, max_point);
        let p2 = random_triple(&mut rng, Space::PStar, max_point);
        let lhs = cp.sigma(&p1.join(&p2)).expect("P* is join-closed");
        let rhs = s.join(&cp.sigma(&p1).unwrap(), &cp.sigma(&p2).unwrap());
        if lhs != rhs {
            rep.violation = Some(OmegaViolation::SigmaAdditivity(p1, p2));
            return rep;
        }
        let x = random_triple(&mut rng, Space::P, max_point);
        let y = random_triple(&mut rng, Space::P, max_point);
        let z = random_triple(&mut rng, Space::P, max_point);
        // (i) on x ≤ x ∨ y, which is in P.
        let xy = x.join(&y);
        if mu(&x, &xy) != zero || (x.leq(&y) && mu(&x, &y) != zero) {
            rep.violation = Some(OmegaViolation::Comparable(x, xy));
            return rep;
        }
        if !s.leq(&mu(&x, &z), &s.join(&mu(&x, &y), &mu(&y, &z))) {
            rep.violation = Some(OmegaViolation::Triangle(x, y, z));
            return rep;
        }
        // (iii): x ∨ y is always defined in P.
        rep.join_instances += 1;
        if mu(&xy, &z) != s.join(&mu(&x, &z), &mu(&y, &z)) {
            rep.violation = Some(OmegaViolation::JoinSplit(x, y, z));
            return rep;
        }
        // (iv): x ∧ y only when it lies in P; also try the meet with a
        // comparable element so that the axiom is exercised every round.
        for (u, v) in [(x.clone(), y.clone()), (xy.clone(), x.join(&z))] {
            let m = u.meet(&v);
            if m.is_in(Space::P) {
                rep.meet_instances += 1;
                if mu(&z, &m) != s.join(&mu(&z, &u), &mu(&z, &v)) {
                    rep.violation = Some(OmegaViolation::MeetSplit(z, u, v));
                    return rep;
                }
            }
        }
    }
    rep
}

impl OmegaViolation {
    /// Recomputes the failure against `cp`; `false` means the claimed
    /// violation does not occur. Inputs outside `P` (or `P*`) are invalid.
    pub fn recheck<S: ValueSemilattice>(&self, cp: &OmegaChainPair<S>) -> Result<bool> {
        let s = &cp.s;
        let in_p = |ts: &[&Triple], space: Space| -> Result<()> {
            match ts.iter().find(|t| !t.is_in(space)) {
                Some(t) => invalid(format!("{t} is outside the domain")),
                None => Ok(()),
            }
        };
        Ok(match self {
            OmegaViolation::Comparable(x, y) => {
                in_p(&[x, y], Space::P)?;
                x.leq(y) && cp.mu(x, y)? != s.zero()
            }
            OmegaViolation::Triangle(x, y, z) => {
                in_p(&[x, y, z], Space::P)?;
                !s.leq(&cp.mu(x, z)?, &s.join(&cp.mu(x, y)?, &cp.mu(y, z)?))
            }
            OmegaViolation::JoinSplit(x, y, z) => {
                in_p(&[x, y, z], Space::P)?;
                cp.mu(&x.join(y), z)? != s.join(&cp.mu(x, z)?, &cp.mu(y, z)?)
            }
            OmegaViolation::MeetSplit(z, x, y) => {
                let m = x.meet(y);
                in_p(&[x, y, z, &m], Space::P)?;
                cp.mu(z, &m)? != s.join(&cp.mu(z, x)?, &cp.mu(z, y)?)
            }
            OmegaViolation::SigmaAdditivity(x, y) => {
                in_p(&[x, y], Space::PStar)?;
                cp.sigma(&x.join(y))? != s.join(&cp.sigma(x)?, &cp.sigma(y)?)
            }
        })
    }
}

/// `x ↦ ⟨ξ+1, ∅, ∅⟩`, the lower probe used by both extractors.
pub fn lower_probe(xi: u64) -> Triple {
    Triple::new(IntervalSet::ordinal(xi + 1), IntervalSet::empty(), IntervalSet::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub(crate) fn constant_control() -> OmegaChainPair<FiniteSemilattice> {
        let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
        OmegaChainPair::new(
            s,
            Sequence::constant_tail(vec![0, 1]),
            Sequence::constant_tail(vec![2, 2, 1]),
            16,
        )
        .unwrap()
    }

    #[test]
    fn dyadic_values() {
        let cp = dyadic_witness(8);
        assert_eq!(cp.a(0), q(0, 1));
        assert_eq!(cp.a(1), q(1, 1));
        assert_eq!(cp.a(3), q(11, 8));
        assert_eq!(cp.b(3), q(12, 8));
        assert_eq!(cp.b(0), q(2, 1));
        // Past the table the rule takes over.
        assert_eq!(cp.a(20), BigRational::new(BigInt::from(1482910), BigInt::from(1 << 20)));
    }

    #[test]
    fn sigma_examples() {
        let cp = constant_control();
        let e = IntervalSet::empty;
        assert_eq!(cp.sigma(&Triple::zero()).unwrap(), 0);
        assert_eq!(cp.sigma(&Triple::new(IntervalSet::ordinal(3), e(), e())).unwrap(), cp.a(2));
        let t = Triple::new(IntervalSet::omega(), IntervalSet::from(5), e());
        assert_eq!(cp.sigma(&t).unwrap(), cp.b(5));
        assert!(cp.sigma(&Triple::new(IntervalSet::omega(), e(), e())).is_err());
        assert_eq!(cp.mu(&Triple::new(IntervalSet::ordinal(3), e(), e()), &Triple::zero()).unwrap(), cp.a(2));
    }

    #[test]
    fn invalid_chains_rejected() {
        let s = FiniteSemilattice::from_lattice(&FiniteLattice::chain(3));
        let bad_zero = OmegaChainPair::new(s.clone(), Sequence::constant_tail(vec![1]), Sequence::constant_tail(vec![2]), 4);
        assert!(bad_zero.is_err());
        let crossing = OmegaChainPair::new(s, Sequence::constant_tail(vec![0, 2]), Sequence::constant_tail(vec![2, 1]), 4);
        assert!(crossing.is_err());
    }

    #[test]
    fn sampled_axioms_hold() {
        let rep = sample_measure_axioms(&constant_control(), 1, 500, 10);
        assert_eq!(rep.violation, None);
        assert!(rep.meet_instances > 0);
        let rep = sample_measure_axioms(&dyadic_witness(16), 2, 500, 12);
        assert_eq!(rep.violation, None);
    }

    #[test]
    fn no_dyadic_interpolant_up_to_denominator_16() {
        let cp = dyadic_witness(8);
        assert!(dyadic_scan(&cp, 4, 3, 64).iter().all(|(_, k)| k.is_some()));
    }
}
