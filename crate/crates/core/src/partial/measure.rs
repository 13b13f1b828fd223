use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, precondition, Result};
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::conlat::ConLattice;
use crate::partial::lattice::FinitePartialLattice;

/// A semilattice-valued map on ordered pairs of a partial lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    n: usize,
    codomain: Arc<FiniteSemilattice>,
    table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasureViolation {
    /// Axiom (i): nonzero on a comparable pair.
    Comparable { x: usize, y: usize },
    /// Axiom (ii): `μ(x,z) ≰ μ(x,y) ∨ μ(y,z)`.
    Triangle { x: usize, y: usize, z: usize },
    /// Axiom (iii): `μ(⋁X, b) ≠ ⋁ μ(x, b)`.
    JoinSplit { args: Vec<usize>, value: usize, b: usize },
    /// Axiom (iv): `μ(a, ⋀Y) ≠ ⋁ μ(a, y)`.
    MeetSplit { args: Vec<usize>, value: usize, a: usize },
}

impl fmt::Display for MeasureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureViolation::Comparable { x, y } => {
                write!(f, "axiom (i): μ({x},{y}) ≠ 0 although {x} ≤ {y}")
            }
            MeasureViolation::Triangle { x, y, z } => {
                write!(f, "axiom (ii): μ({x},{z}) ≰ μ({x},{y}) ∨ μ({y},{z})")
            }
            MeasureViolation::JoinSplit { args, value, b } => {
                write!(f, "axiom (iii): μ({value},{b}) differs from the join over X = {args:?}")
            }
            MeasureViolation::MeetSplit { args, value, a } => {
                write!(f, "axiom (iv): μ({a},{value}) differs from the join over Y = {args:?}")
            }
        }
    }
}

impl Measure {
    pub fn new(n: usize, codomain: Arc<FiniteSemilattice>, table: Vec<usize>) -> Result<Self> {
        if table.len() != n * n {
            return invalid("measure table must have n² entries");
        }
        if table.iter().any(|&v| v >= codomain.len()) {
            return invalid("measure value out of range");
        }
        Ok(Measure { n, codomain, table })
    }

    pub fn zero(n: usize, codomain: Arc<FiniteSemilattice>) -> Self {
        let z = codomain.zero();
        Measure { n, codomain, table: vec![z; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn codomain(&self) -> &Arc<FiniteSemilattice> {
        &self.codomain
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// First violated axiom of the measure definition.
    pub fn axiom_violation(&self, p: &FinitePartialLattice) -> Option<MeasureViolation> {
        let s = &*self.codomain;
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                if p.leq(x, y) && self.get(x, y) != s.zero() {
                    return Some(MeasureViolation::Comparable { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !s.leq(self.get(x, z), s.join(self.get(x, y), self.get(y, z))) {
                        return Some(MeasureViolation::Triangle { x, y, z });
                    }
                }
            }
        }
        for (xs, a) in p.join_rules() {
            for b in 0..n {
                if self.get(*a, b) != s.join_all(xs.iter().map(|&x| self.get(x, b))) {
                    return Some(MeasureViolation::JoinSplit { args: xs.clone(), value: *a, b });
                }
            }
        }
        for (ys, b) in p.meet_rules() {
            for a in 0..n {
                if self.get(a, *b) != s.join_all(ys.iter().map(|&y| self.get(a, y))) {
                    return Some(MeasureViolation::MeetSplit { args: ys.clone(), value: *b, a });
                }
            }
        }
        None
    }

    /// The measure isolates zero: `μ(x,y) = 0` only when `x ≤ y`.
    pub fn is_proper(&self, p: &FinitePartialLattice) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.get(x, y) != self.codomain.zero() || p.leq(x, y)))
    }
}

/// First `(i, j)` (or `(0, 0)` for the zero) where `hom` fails to be a
/// ⟨∨,0⟩-homomorphism `Con P → S`.
pub fn con_hom_violation(con: &ConLattice, s: &FiniteSemilattice, hom: &[usize]) -> Option<(usize, usize)> {
    if hom[con.zero()] != s.zero() {
        return Some((0, 0));
    }
    for i in 0..con.len() {
        for j in i + 1..con.len() {
            if hom[con.join(i, j)] != s.join(hom[i], hom[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// `μ(x,y) = φ̄(Θ⁺(x,y))`.
pub fn measure_from_hom(con: &ConLattice, hom: &[usize], s: Arc<FiniteSemilattice>) -> Measure {
    let n = con.carrier_size();
    let table = (0..n * n).map(|k| hom[con.theta_plus(k / n, k % n)]).collect();
    Measure { n, codomain: s, table }
}

const SUBSET_DECOMPOSITION_CAP: usize = 12;

/// Minimal generating sets of principal congruences for congruence `c`:
/// exhaustive when `c` has at most a dozen generator pairs, otherwise two
/// greedy reductions (forward and reverse).
pub fn minimal_decompositions(con: &ConLattice, c: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs = con.generator_pairs(c);
    let k = pairs.len();
    if k == 0 {
        return vec![vec![]];
    }
    let gen: Vec<usize> = pairs.iter().map(|&(x, y)| con.theta_plus(x, y)).collect();
    if k <= SUBSET_DECOMPOSITION_CAP {
        let mut cl = vec![con.zero(); 1 << k];
        for mask in 1usize..(1 << k) {
            let low = mask.trailing_zeros() as usize;
            cl[mask] = con.join(cl[mask & (mask - 1)], gen[low]);
        }
        return (1usize..(1 << k))
            .filter(|&m| cl[m] == c && (0..k).all(|b| m >> b & 1 == 0 || cl[m ^ (1 << b)] != c))
            .map(|m| (0..k).filter(|&b| m >> b & 1 == 1).map(|b| pairs[b]).collect())
            .collect();
    }
    let greedy = |order: Vec<usize>| {
        let mut keep: Vec<usize> = order.clone();
        for &b in &order {
            let trial: Vec<usize> = keep.iter().copied().filter(|&x| x != b).collect();
            if con.join_all(trial.iter().map(|&t| gen[t])) == c {
                keep = trial;
            }
        }
        keep.into_iter().map(|b| pairs[b]).collect::<Vec<_>>()
    };
    let mut out = vec![greedy((0..k).collect()), greedy((0..k).rev().collect())];
    out.dedup();
    out
}

/// The integral `μ̄`: on each congruence, the join of `μ` over a generator
/// decomposition. Every minimal decomposition found must agree, `μ̄` must
/// be a ⟨∨,0⟩-homomorphism, and `μ = μ̄ ∘ Θ⁺`; otherwise `μ` is not a measure.
pub fn hom_from_measure(p: &FinitePartialLattice, con: &ConLattice, mu: &Measure) -> Result<Vec<usize>> {
    if mu.size() != p.len() || con.carrier_size() != p.len() {
        return invalid("measure and congruence lattice must share the carrier");
    }
    if let Some(v) = mu.axiom_violation(p) {
        return precondition(v.to_string());
    }
    let s = &**mu.codomain();
    let mut hom = Vec::with_capacity(con.len());
    for c in 0..con.len() {
        let decs = minimal_decompositions(con, c);
        let values: Vec<usize> = decs
            .iter()
            .map(|d| s.join_all(d.iter().map(|&(x, y)| mu.get(x, y))))
            .collect();
        if let Some(k) = values.iter().position(|&v| v != values[0]) {
            return precondition(format!(
                "integral is inconsistent on congruence c{c}: decompositions {:?} and {:?} disagree",
                decs[0], decs[k]
            ));
        }
        hom.push(values[0]);
    }
    if let Some((i, j)) = con_hom_violation(con, s, &hom) {
        return precondition(format!("integral does not preserve the join of c{i} and c{j}"));
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            if hom[con.theta_plus(x, y)] != mu.get(x, y) {
                return precondition(format!("integral disagrees with μ at ({x},{y})"));
            }
        }
    }
    Ok(hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;
    use crate::partial::conlat::ConBound;

    #[test]
    fn zero_measure_gives_zero_hom() {
        let p = FinitePartialLattice::from_lattice(FiniteLattice::n5());
        let con = ConLattice::new(&p, ConBound::default()).unwrap();
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        let mu = Measure::zero(5, s);
        assert_eq!(hom_from_measure(&p, &con, &mu).unwrap(), vec![0; con.len()]);
    }

    #[test]
    fn identity_on_two_chain() {
        let p = FinitePartialLattice::from_lattice(FiniteLattice::chain(2));
        let con = ConLattice::new(&p, ConBound::default()).unwrap();
        let s = Arc::new(FiniteSemilattice::from_lattice(con.lattice().unwrap()));
        let id: Vec<usize> = (0..con.len()).collect();
        let mu = measure_from_hom(&con, &id, s);
        assert_eq!(mu.get(1, 0), con.theta_plus(1, 0));
        assert_eq!(mu.get(1, 0), con.one());
        assert_eq!(mu.get(0, 1), 0);
        assert_eq!(mu.axiom_violation(&p), None);
    }

    #[test]
    fn broken_measure_rejected() {
        let p = FinitePartialLattice::from_lattice(FiniteLattice::chain(3));
        let con = ConLattice::new(&p, ConBound::default()).unwrap();
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        // Nonzero on (2,0) but zero on (2,1) and (1,0) breaks the triangle law.
        let mut t = vec![0; 9];
        t[2 * 3] = 1;
        let mu = Measure::new(3, s, t).unwrap();
        let err = hom_from_measure(&p, &con, &mu).unwrap_err();
        assert!(err.to_string().contains("axiom (ii)"));
    }
}
