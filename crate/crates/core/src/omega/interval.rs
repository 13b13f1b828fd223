//! The interval algebra `Int ω`: finite unions of intervals `[a, b)` of
//! naturals, possibly ending with `[a, ∞)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Stored as the strictly increasing points where membership flips,
/// starting from "not a member" at 0⁻. An odd number of points means the
/// set is unbounded. This form is canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntervalSet {
    flips: Vec<u64>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { flips: Vec::new() }
    }

    /// `ω = [0, ∞)`.
    pub fn omega() -> Self {
        IntervalSet { flips: vec![0] }
    }

    /// `[a, b)`, empty when `a ≥ b`.
    pub fn range(a: u64, b: u64) -> Self {
        if a >= b {
            Self::empty()
        } else {
            IntervalSet { flips: vec![a, b] }
        }
    }

    /// `[a, ∞)`.
    pub fn from(a: u64) -> Self {
        IntervalSet { flips: vec![a] }
    }

    /// The ordinal `n = {0, …, n-1}`.
    pub fn ordinal(n: u64) -> Self {
        Self::range(0, n)
    }

    /// Builds from intervals `(a, Some(b))` for `[a, b)` and `(a, None)`
    /// for `[a, ∞)`, in any order, overlapping or adjacent.
    pub fn from_intervals(intervals: &[(u64, Option<u64>)]) -> Result<Self> {
        let mut out = Self::empty();
        for &(a, b) in intervals {
            let piece = match b {
                Some(b) if b <= a => return invalid(format!("interval [{a}, {b}) is empty or reversed")),
                Some(b) => Self::range(a, b),
                None => Self::from(a),
            };
            out = out.union(&piece);
        }
        Ok(out)
    }

    pub fn intervals(&self) -> Vec<(u64, Option<u64>)> {
        self.flips.chunks(2).map(|c| (c[0], c.get(1).copied())).collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.flips.partition_point(|&p| p <= n) % 2 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.flips.len() % 2 == 0
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let mut points: Vec<u64> = self.flips.iter().chain(&other.flips).copied().collect();
        points.push(0);
        points.sort_unstable();
        points.dedup();
        let mut flips = Vec::new();
        let mut state = false;
        for p in points {
            let s = op(self.contains(p), other.contains(p));
            if s != state {
                flips.push(p);
                state = s;
            }
        }
        IntervalSet { flips }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        self.combine(&Self::empty(), |a, _| !a)
    }

    /// Containment.
    pub fn leq(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn min_elem(&self) -> Option<u64> {
        self.flips.first().copied()
    }

    /// Largest element of a bounded set, `0` for the empty set, `None` when
    /// unbounded.
    pub fn sup(&self) -> Option<u64> {
        if !self.is_bounded() {
            None
        } else {
            Some(self.flips.last().map_or(0, |&b| b - 1))
        }
    }

    /// Members below `n`.
    pub fn members_below(&self, n: u64) -> Vec<u64> {
        (0..n).filter(|&k| self.contains(k)).collect()
    }
}

/// `χ(x)`: 0 if `x` is bounded, 1 otherwise.
pub fn chi(x: &IntervalSet) -> u8 {
    u8::from(!x.is_bounded())
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .intervals()
            .into_iter()
            .map(|(a, b)| match b {
                Some(b) => format!("[{a},{b})"),
                None => format!("[{a},∞)"),
            })
            .collect();
        write!(f, "{}", parts.join("∪"))
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.intervals().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(u64, Option<u64>)>::deserialize(d)?;
        IntervalSet::from_intervals(&raw).map_err(serde::de::Error::custom)
    }
}

/// A random set with breakpoints below `max_point`.
pub fn random_interval_set<R: rand::Rng>(rng: &mut R, max_point: u64) -> IntervalSet {
    let k = rng.gen_range(0..=4usize);
    let mut pts: Vec<u64> = (0..k).map(|_| rng.gen_range(0..max_point.max(1))).collect();
    pts.sort_unstable();
    pts.dedup();
    IntervalSet { flips: pts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(IntervalSet::range(0, 3).union(&IntervalSet::range(3, 5)), IntervalSet::range(0, 5));
        assert_eq!(IntervalSet::from(2).complement(), IntervalSet::range(0, 2));
        assert_eq!(IntervalSet::range(0, 4).intersection(&IntervalSet::from(2)), IntervalSet::range(2, 4));
        assert_eq!(chi(&IntervalSet::empty()), 0);
        assert_eq!(chi(&IntervalSet::range(0, 5)), 0);
        assert_eq!(chi(&IntervalSet::from(3)), 1);
        assert_eq!(IntervalSet::range(0, 3).sup(), Some(2));
        assert_eq!(IntervalSet::empty().sup(), Some(0));
        assert_eq!(IntervalSet::omega().to_string(), "[0,∞)");
    }

    #[test]
    fn json_round_trip() {
        let x = IntervalSet::from_intervals(&[(1, Some(3)), (7, None)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[[1,3],[7,null]]");
        assert_eq!(serde_json::from_str::<IntervalSet>(&s).unwrap(), x);
        assert!(serde_json::from_str::<IntervalSet>("[[3,1]]").is_err());
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::btree_set(0u64..40, 0..6)
            .prop_map(|s| IntervalSet { flips: s.into_iter().collect() })
    }

    proptest! {
        #[test]
        fn ops_agree_pointwise(x in arb_set(), y in arb_set()) {
            let u = x.union(&y);
            let i = x.intersection(&y);
            let d = x.difference(&y);
            let c = x.complement();
            for n in 0..48 {
                prop_assert_eq!(u.contains(n), x.contains(n) || y.contains(n));
                prop_assert_eq!(i.contains(n), x.contains(n) && y.contains(n));
                prop_assert_eq!(d.contains(n), x.contains(n) && !y.contains(n));
                prop_assert_eq!(c.contains(n), !x.contains(n));
            }
            prop_assert_eq!(chi(&u), chi(&x).max(chi(&y)));
            prop_assert_eq!(chi(&i), chi(&x).min(chi(&y)));
        }
    }
}
