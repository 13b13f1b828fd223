//! Triples in `A = Int ω × Int ω × Int ω` and the subspaces `U`, `V`, `P*`, `P`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::interval::{chi, random_interval_set, IntervalSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triple(pub [IntervalSet; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub a: bool,
    pub u: bool,
    pub v: bool,
    pub p_star: bool,
    pub p: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    A,
    U,
    V,
    PStar,
    P,
}

impl Triple {
    pub fn new(x0: IntervalSet, x1: IntervalSet, x2: IntervalSet) -> Self {
        Triple([x0, x1, x2])
    }

    pub fn zero() -> Self {
        Triple::new(IntervalSet::empty(), IntervalSet::empty(), IntervalSet::empty())
    }

    pub fn one() -> Self {
        Triple::new(IntervalSet::omega(), IntervalSet::omega(), IntervalSet::omega())
    }

    pub fn chis(&self) -> [u8; 3] {
        [chi(&self.0[0]), chi(&self.0[1]), chi(&self.0[2])]
    }

    pub fn membership(&self) -> Membership {
        let [c0, c1, c2] = self.chis();
        Membership {
            a: true,
            u: c0 == c1 && c1 == c2,
            v: c0 == c1,
            p_star: c0 == 0 || !self.0[1].union(&self.0[2]).is_empty(),
            p: c0 == c1.max(c2),
        }
    }

    pub fn is_in(&self, space: Space) -> bool {
        let m = self.membership();
        match space {
            Space::A => m.a,
            Space::U => m.u,
            Space::V => m.v,
            Space::PStar => m.p_star,
            Space::P => m.p,
        }
    }

    fn zip(&self, other: &Self, op: impl Fn(&IntervalSet, &IntervalSet) -> IntervalSet) -> Self {
        Triple([op(&self.0[0], &other.0[0]), op(&self.0[1], &other.0[1]), op(&self.0[2], &other.0[2])])
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip(other, IntervalSet::union)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip(other, IntervalSet::intersection)
    }

    /// `x ∖ y = x ∧ ¬y`.
    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, IntervalSet::difference)
    }

    pub fn leq(&self, other: &Self) -> bool {
        (0..3).all(|i| self.0[i].leq(&other.0[i]))
    }

    /// `⟨x0, x1, x2⟩ ↦ ⟨x0, x2, x1⟩`.
    pub fn swap(&self) -> Self {
        Triple([self.0[0].clone(), self.0[2].clone(), self.0[1].clone()])
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}, {}⟩", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn require_p(x: &Triple) -> Result<()> {
    if x.is_in(Space::P) {
        Ok(())
    } else {
        invalid(format!("{x} is not in P"))
    }
}

/// The join in `P`, defined iff the Boolean join lies in `P`.
pub fn p_join(x: &Triple, y: &Triple) -> Result<Option<Triple>> {
    require_p(x)?;
    require_p(y)?;
    let j = x.join(y);
    Ok(j.is_in(Space::P).then_some(j))
}

/// The meet in `P`, defined iff the Boolean meet lies in `P`.
pub fn p_meet(x: &Triple, y: &Triple) -> Result<Option<Triple>> {
    require_p(x)?;
    require_p(y)?;
    let m = x.meet(y);
    Ok(m.is_in(Space::P).then_some(m))
}

/// A random triple of the given space, with finite breakpoints below
/// `max_point`.
pub fn random_triple<R: rand::Rng>(rng: &mut R, space: Space, max_point: u64) -> Triple {
    let mut t = Triple::new(
        random_interval_set(rng, max_point),
        random_interval_set(rng, max_point),
        random_interval_set(rng, max_point),
    );
    let cut = max_point;
    let force = |x: &IntervalSet, c: u8| -> IntervalSet {
        match (chi(x), c) {
            (0, 1) => x.union(&IntervalSet::from(cut)),
            (1, 0) => x.intersection(&IntervalSet::ordinal(cut)),
            _ => x.clone(),
        }
    };
    match space {
        Space::A => {}
        Space::U => {
            let c = chi(&t.0[0]);
            t.0[1] = force(&t.0[1], c);
            t.0[2] = force(&t.0[2], c);
        }
        Space::V => {
            t.0[1] = force(&t.0[1], chi(&t.0[0]));
        }
        Space::P => {
            let [_, c1, c2] = t.chis();
            t.0[0] = force(&t.0[0], c1.max(c2));
        }
        Space::PStar => {
            if chi(&t.0[0]) == 1 && t.0[1].union(&t.0[2]).is_empty() {
                t.0[1] = IntervalSet::range(rng.gen_range(0..cut.max(1)), cut.max(1));
            }
        }
    }
    debug_assert!(t.is_in(space));
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn flags(t: &Triple) -> [bool; 5] {
        let m = t.membership();
        [m.a, m.u, m.v, m.p_star, m.p]
    }

    #[test]
    fn membership_examples() {
        let e = IntervalSet::empty;
        let w = IntervalSet::omega;
        assert_eq!(flags(&Triple::zero()), [true; 5]);
        assert_eq!(flags(&Triple::new(w(), e(), e())), [true, false, false, false, false]);
        assert_eq!(flags(&Triple::new(w(), w(), e())), [true, false, true, true, true]);
    }

    #[test]
    fn p_join_example() {
        let x = Triple::new(IntervalSet::omega(), IntervalSet::omega(), IntervalSet::empty());
        let y = Triple::new(IntervalSet::from(2), IntervalSet::empty(), IntervalSet::from(5));
        let j = p_join(&x, &y).unwrap().unwrap();
        assert_eq!(j, Triple::new(IntervalSet::omega(), IntervalSet::omega(), IntervalSet::from(5)));
        assert_eq!(p_join(&x, &x).unwrap(), Some(x.clone()));
        let outside = Triple::new(IntervalSet::empty(), IntervalSet::empty(), IntervalSet::from(5));
        assert!(p_join(&x, &outside).is_err());
    }

    #[test]
    fn containments_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for space in [Space::A, Space::U, Space::V, Space::PStar, Space::P] {
            for _ in 0..300 {
                let t = random_triple(&mut rng, space, 10);
                assert!(t.is_in(space));
                let m = t.membership();
                assert!(!m.u || m.v);
                assert!(!m.v || m.p_star);
            }
        }
        for _ in 0..500 {
            let x = random_triple(&mut rng, Space::P, 10);
            let y = random_triple(&mut rng, Space::P, 10);
            assert!(x.difference(&y).is_in(Space::PStar));
            assert!(x.join(&y).is_in(Space::P));
        }
    }
}
