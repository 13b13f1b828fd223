use crate::bits::BitRelation;
use crate::error::{invalid, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::FinitePoset;

/// A finite ⟨∨,0⟩-semilattice given by its join table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSemilattice {
    poset: FinitePoset,
    join: Vec<usize>,
    zero: usize,
}

impl FiniteSemilattice {
    pub fn from_join_table(labels: Vec<String>, join: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || join.len() != n * n {
            return invalid("join table must be n×n over a nonempty carrier");
        }
        if join.iter().any(|&v| v >= n) {
            return invalid("join table value out of range");
        }
        let j = |a: usize, b: usize| join[a * n + b];
        for a in 0..n {
            if j(a, a) != a {
                return invalid(format!("join not idempotent at {:?}", labels[a]));
            }
            for b in 0..n {
                if j(a, b) != j(b, a) {
                    return invalid(format!(
                        "join not commutative at {:?}, {:?}",
                        labels[a], labels[b]
                    ));
                }
                for c in 0..n {
                    if j(j(a, b), c) != j(a, j(b, c)) {
                        return invalid(format!(
                            "join not associative at {:?}, {:?}, {:?}",
                            labels[a], labels[b], labels[c]
                        ));
                    }
                }
            }
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| j(z, a) == a))
            .ok_or_else(|| crate::Error::Invalid("join table has no zero".into()))?;
        let rel = BitRelation::from_fn(n, |a, b| j(a, b) == b);
        let poset = FinitePoset::from_order_unchecked(labels, rel);
        Ok(FiniteSemilattice { poset, join, zero })
    }

    /// The ⟨∨,0⟩-reduct of a finite lattice.
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        let n = l.len();
        let join = (0..n * n).map(|k| l.join(k / n, k % n)).collect();
        FiniteSemilattice { poset: l.poset().clone(), join, zero: l.bottom() }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.zero, |acc, x| self.join(acc, x))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    /// A finite ⟨∨,0⟩-semilattice is a lattice; this computes the meets.
    pub fn to_lattice(&self) -> FiniteLattice {
        FiniteLattice::from_poset(self.poset.clone()).expect("finite join-semilattice with zero")
    }

    /// Distributivity in the semilattice sense: `a ≤ b∨c` implies
    /// `a = b'∨c'` for some `b' ≤ b`, `c' ≤ c`. For finite semilattices this
    /// coincides with lattice distributivity of `to_lattice()`.
    pub fn is_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    !self.leq(a, self.join(b, c))
                        || (0..n).any(|b2| {
                            self.leq(b2, b)
                                && (0..n).any(|c2| self.leq(c2, c) && self.join(b2, c2) == a)
                        })
                })
            })
        })
    }

    /// Checks that `map` is a ⟨∨,0⟩-homomorphism into `target`.
    pub fn is_join_zero_hom(&self, target: &FiniteSemilattice, map: &[usize]) -> bool {
        map[self.zero] == target.zero
            && (0..self.len()).all(|a| {
                (0..self.len()).all(|b| map[self.join(a, b)] == target.join(map[a], map[b]))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_table_detects_zero() {
        let s = FiniteSemilattice::from_join_table(
            vec!["0".into(), "1".into()],
            vec![0, 1, 1, 1],
        )
        .unwrap();
        assert_eq!(s.zero(), 0);
        assert!(s.leq(0, 1));
    }

    #[test]
    fn rejects_bad_table() {
        assert!(FiniteSemilattice::from_join_table(
            vec!["0".into(), "1".into()],
            vec![0, 1, 0, 1]
        )
        .is_err());
    }

    #[test]
    fn semilattice_distributivity_matches_lattice() {
        for l in [FiniteLattice::m3(), FiniteLattice::n5(), FiniteLattice::boolean(2)] {
            let s = FiniteSemilattice::from_lattice(&l);
            assert_eq!(s.is_distributive(), l.is_distributive());
        }
    }
}
