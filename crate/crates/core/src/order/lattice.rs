use crate::bits::BitRelation;
use crate::error::{invalid, Result};
use crate::order::poset::{default_labels, FinitePoset};

/// A finite lattice with precomputed binary join and meet tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Computes the tables from the order; fails if some pair lacks a sup or inf.
    pub fn from_poset(poset: FinitePoset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return invalid("a lattice must be nonempty");
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let s = poset.sup(&[i, j]).ok_or_else(|| {
                    crate::Error::Invalid(format!(
                        "{:?} and {:?} have no least upper bound",
                        poset.label(i),
                        poset.label(j)
                    ))
                })?;
                let m = poset.inf(&[i, j]).ok_or_else(|| {
                    crate::Error::Invalid(format!(
                        "{:?} and {:?} have no greatest lower bound",
                        poset.label(i),
                        poset.label(j)
                    ))
                })?;
                join[i * n + j] = s;
                join[j * n + i] = s;
                meet[i * n + j] = m;
                meet[j * n + i] = m;
            }
        }
        let bottom = poset.bottom().expect("finite lattice has a bottom");
        let top = poset.top().expect("finite lattice has a top");
        Ok(FiniteLattice { poset, join, meet, bottom, top })
    }

    /// Builds from an order given as a predicate on indices.
    pub fn from_leq_fn(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::from_poset(FinitePoset::unlabeled(BitRelation::from_fn(n, leq))?)
    }

    /// Builds from tables already known to be consistent.
    pub(crate) fn from_tables_unchecked(
        poset: FinitePoset,
        join: Vec<usize>,
        meet: Vec<usize>,
    ) -> Self {
        let bottom = poset.bottom().expect("bottom");
        let top = poset.top().expect("top");
        FiniteLattice { poset, join, meet, bottom, top }
    }

    pub fn chain(n: usize) -> Self {
        Self::from_leq_fn(n, |i, j| i <= j).expect("chain")
    }

    /// The Boolean lattice of subsets of a `k`-element set, indexed by bitmask.
    pub fn boolean(k: u32) -> Self {
        let n = 1usize << k;
        let labels = (0..n)
            .map(|m| {
                let items: Vec<String> =
                    (0..k).filter(|b| m >> b & 1 == 1).map(|b| b.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let poset = FinitePoset::from_order_unchecked(
            labels,
            BitRelation::from_fn(n, |i, j| i & !j == 0),
        );
        Self::from_poset(poset).expect("boolean")
    }

    /// The five-element modular nondistributive lattice with atoms a, b, c.
    pub fn m3() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let p = FinitePoset::new(labels, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("m3");
        Self::from_poset(p).expect("m3")
    }

    /// The pentagon 0 < a < c < 1, 0 < b < 1.
    pub fn n5() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        let p = FinitePoset::new(labels, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)]).expect("n5");
        Self::from_poset(p).expect("n5")
    }

    pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> Self {
        let (na, nb) = (a.len(), b.len());
        let labels = (0..na * nb)
            .map(|k| format!("({},{})", a.label(k / nb), b.label(k % nb)))
            .collect();
        let rel = BitRelation::from_fn(na * nb, |x, y| {
            a.leq(x / nb, y / nb) && b.leq(x % nb, y % nb)
        });
        Self::from_poset(FinitePoset::from_order_unchecked(labels, rel)).expect("product")
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        let poset = self.poset.with_labels(labels)?;
        Ok(FiniteLattice { poset, ..self.clone() })
    }

    pub fn relabel_default(&self) -> Self {
        self.with_labels(default_labels(self.len())).expect("same size")
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
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    #[inline]
    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    #[inline]
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            poset: self.poset.dual(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// First triple violating `x∧(y∨z) = (x∧y)∨(x∧z)`.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in y + 1..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z))
                    {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// First `(o, a, i)` with `o ≤ a ≤ i` and no relative complement of `a` in `[o, i]`.
    pub fn relative_complement_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for o in 0..n {
            for i in 0..n {
                if !self.leq(o, i) {
                    continue;
                }
                for a in 0..n {
                    if !(self.leq(o, a) && self.leq(a, i)) {
                        continue;
                    }
                    let found = (0..n).any(|x| self.meet(a, x) == o && self.join(a, x) == i);
                    if !found {
                        return Some((o, a, i));
                    }
                }
            }
        }
        None
    }

    pub fn is_relatively_complemented(&self) -> bool {
        self.relative_complement_witness().is_none()
    }

    /// First `(a, x, y)` violating binary MID, `a∨(x∧y) = (a∨x)∧(a∨y)`.
    ///
    /// A finite family reduces to the binary case: if the law holds for two
    /// members it holds for `x_1 ∧ (x_2 ∧ … ∧ x_k)` by induction on `k`, and the
    /// empty family is the top element, where both sides are the top.
    pub fn mid_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for x in 0..n {
                for y in x + 1..n {
                    if self.join(a, self.meet(x, y)) != self.meet(self.join(a, x), self.join(a, y))
                    {
                        return Some((a, x, y));
                    }
                }
            }
        }
        None
    }

    pub fn is_cobrouwerian_finite(&self) -> bool {
        self.mid_witness().is_none()
    }

    /// The family form of MID, checked literally over every nonempty family.
    /// Exponential; used to test the binary reduction.
    pub fn mid_holds_for_all_families(&self) -> bool {
        let n = self.len();
        assert!(n <= 16, "family check is exponential");
        (0..n).all(|a| {
            (1u32..(1 << n)).all(|mask| {
                let fam: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                self.join(a, self.meet_all(fam.iter().copied()))
                    == self.meet_all(fam.iter().map(|&x| self.join(a, x)))
            })
        })
    }

    pub fn is_simple_lattice_hom(&self, target: &FiniteLattice, map: &[usize]) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                map[self.join(i, j)] == target.join(map[i], map[j])
                    && map[self.meet(i, j)] == target.meet(map[i], map[j])
            })
        })
    }

    /// Treats a subset as a subposet; returns it as a lattice if it is one.
    pub fn subset_as_lattice(&self, subset: &[usize]) -> Option<FiniteLattice> {
        let labels = subset.iter().map(|&i| self.label(i).to_string()).collect();
        let rel = BitRelation::from_fn(subset.len(), |x, y| self.leq(subset[x], subset[y]));
        FiniteLattice::from_poset(FinitePoset::from_order_unchecked(labels, rel)).ok()
    }
}

/// Anything with a decidable finite order on `0..size`.
pub trait FiniteOrder {
    fn size(&self) -> usize;
    fn order_leq(&self, a: usize, b: usize) -> bool;
}

impl FiniteOrder for FiniteLattice {
    fn size(&self) -> usize {
        self.len()
    }
    fn order_leq(&self, a: usize, b: usize) -> bool {
        self.leq(a, b)
    }
}

impl FiniteOrder for FinitePoset {
    fn size(&self) -> usize {
        self.len()
    }
    fn order_leq(&self, a: usize, b: usize) -> bool {
        self.leq(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates_on_small_lattices() {
        assert!(FiniteLattice::chain(2).is_distributive());
        assert!(!FiniteLattice::m3().is_distributive());
        assert!(FiniteLattice::boolean(2).is_distributive());

        assert!(FiniteLattice::boolean(2).is_relatively_complemented());
        assert_eq!(
            FiniteLattice::chain(3).relative_complement_witness(),
            Some((0, 1, 2))
        );
        assert!(FiniteLattice::m3().is_relatively_complemented());

        assert!(FiniteLattice::chain(5).is_cobrouwerian_finite());
        assert!(!FiniteLattice::m3().is_cobrouwerian_finite());
        assert!(FiniteLattice::boolean(3).is_cobrouwerian_finite());
    }

    #[test]
    fn m3_mid_witness_is_among_atoms() {
        let (a, x, y) = FiniteLattice::m3().mid_witness().unwrap();
        for e in [a, x, y] {
            assert!((1..=3).contains(&e));
        }
    }

    #[test]
    fn binary_mid_matches_family_mid() {
        for l in [
            FiniteLattice::m3(),
            FiniteLattice::n5(),
            FiniteLattice::boolean(3),
            FiniteLattice::chain(4),
        ] {
            assert_eq!(l.is_cobrouwerian_finite(), l.mid_holds_for_all_families());
        }
    }

    #[test]
    fn product_of_chains_is_boolean() {
        let p = FiniteLattice::product(&FiniteLattice::chain(2), &FiniteLattice::chain(2));
        assert_eq!(p.len(), 4);
        assert!(p.is_distributive());
        assert_eq!(p.join(1, 2), 3);
    }

    #[test]
    fn rejects_non_lattice() {
        let p = FinitePoset::antichain(2);
        assert!(FiniteLattice::from_poset(p).is_err());
    }
}
