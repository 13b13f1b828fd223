use std::sync::Arc;

use crate::bits::BitRelation;
use crate::error::{invalid, precondition, Result};
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::congruence::{quotient, Congruence};
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::lattice::FinitePartialLattice;
use crate::partial::measure::{con_hom_violation, hom_from_measure, measure_from_hom, Measure};

/// A partial lattice `P` with a ⟨∨,0⟩-homomorphism `Con P → S`.
#[derive(Clone, Debug)]
pub struct MeasuredPartialLattice {
    p: Arc<FinitePartialLattice>,
    con: Arc<ConLattice>,
    s: Arc<FiniteSemilattice>,
    hom: Vec<usize>,
}

impl MeasuredPartialLattice {
    pub fn from_con(
        p: Arc<FinitePartialLattice>,
        con: Arc<ConLattice>,
        s: Arc<FiniteSemilattice>,
        hom: Vec<usize>,
    ) -> Result<Self> {
        if con.carrier_size() != p.len() {
            return invalid("congruence lattice belongs to another carrier");
        }
        if hom.len() != con.len() || hom.iter().any(|&v| v >= s.len()) {
            return invalid("hom table does not fit Con P → S");
        }
        if let Some((i, j)) = con_hom_violation(&con, &s, &hom) {
            return invalid(format!("not a ⟨∨,0⟩-homomorphism at c{i}, c{j}"));
        }
        Ok(MeasuredPartialLattice { p, con, s, hom })
    }

    pub fn new(
        p: Arc<FinitePartialLattice>,
        s: Arc<FiniteSemilattice>,
        hom: Vec<usize>,
        bound: ConBound,
    ) -> Result<Self> {
        let con = Arc::new(ConLattice::new(&p, bound)?);
        Self::from_con(p, con, s, hom)
    }

    pub fn from_measure(p: Arc<FinitePartialLattice>, mu: &Measure, bound: ConBound) -> Result<Self> {
        let con = Arc::new(ConLattice::new(&p, bound)?);
        let hom = hom_from_measure(&p, &con, mu)?;
        Ok(MeasuredPartialLattice { p, con, s: mu.codomain().clone(), hom })
    }

    /// The hom sending each congruence `c` to the join of the values given
    /// on the principal congruences `Θ⁺(x,y) ⊆ c`. Every given value must be
    /// reproduced, and the result must be a ⟨∨,0⟩-homomorphism.
    pub fn from_principal_values(
        p: Arc<FinitePartialLattice>,
        s: Arc<FiniteSemilattice>,
        values: &[((usize, usize), usize)],
        bound: ConBound,
    ) -> Result<Self> {
        let con = Arc::new(ConLattice::new(&p, bound)?);
        let gens: Vec<(usize, usize)> =
            values.iter().map(|&((x, y), v)| (con.theta_plus(x, y), v)).collect();
        let hom: Vec<usize> = (0..con.len())
            .map(|c| s.join_all(gens.iter().filter(|&&(g, _)| con.leq(g, c)).map(|&(_, v)| v)))
            .collect();
        for &((x, y), v) in values {
            if hom[con.theta_plus(x, y)] != v {
                return precondition(format!(
                    "value on Θ⁺({}, {}) is not reproduced by the generated hom",
                    p.label(x),
                    p.label(y)
                ));
            }
        }
        if let Some((i, j)) = con_hom_violation(&con, &s, &hom) {
            return precondition(format!("generated map is not a ⟨∨,0⟩-homomorphism at c{i}, c{j}"));
        }
        Ok(MeasuredPartialLattice { p, con, s, hom })
    }

    pub fn lattice(&self) -> &Arc<FinitePartialLattice> {
        &self.p
    }

    pub fn con(&self) -> &Arc<ConLattice> {
        &self.con
    }

    pub fn codomain(&self) -> &Arc<FiniteSemilattice> {
        &self.s
    }

    pub fn hom(&self) -> &[usize] {
        &self.hom
    }

    /// `μΘ⁺(x,y)`.
    pub fn value(&self, x: usize, y: usize) -> usize {
        self.hom[self.con.theta_plus(x, y)]
    }

    pub fn measure(&self) -> Measure {
        measure_from_hom(&self.con, &self.hom, self.s.clone())
    }

    /// The hom isolates zero.
    pub fn is_proper(&self) -> bool {
        (1..self.con.len()).all(|c| self.hom[c] != self.s.zero())
    }

    /// `{(x, y) : μΘ⁺(x,y) = 0}`.
    pub fn zero_kernel(&self) -> BitRelation {
        let n = self.p.len();
        BitRelation::from_fn(n, |x, y| self.value(x, y) == self.s.zero())
    }

    /// Quotient by the zero kernel, with the induced hom and the projection.
    pub fn kernel_projection(&self, bound: ConBound) -> Result<(MeasuredPartialLattice, Vec<usize>)> {
        let d = self.zero_kernel();
        if self.con.index_of(&d).is_none() {
            return precondition("zero kernel is not a congruence; the hom does not preserve joins");
        }
        let q = quotient(&self.p, &Congruence::from_closed(d))?;
        let qp = Arc::new(q.lattice);
        let con_q = Arc::new(ConLattice::new(&qp, bound)?);
        let pr = &q.projection;
        let n = self.p.len();
        // Con(P/d) is the interval [d, 1] of Con P, via preimages.
        let hom: Vec<usize> = (0..con_q.len())
            .map(|c| {
                let rel = con_q.relation(c);
                let pre = BitRelation::from_fn(n, |x, y| rel.get(pr[x], pr[y]));
                self.hom[self.con.index_of(&pre).expect("preimage of a congruence")]
            })
            .collect();
        let m = MeasuredPartialLattice::from_con(qp, con_q, self.s.clone(), hom)?;
        Ok((m, q.projection))
    }

    /// `μ ∘ Con f` for a homomorphism `f: K → P`, as a map on `Con K`.
    pub fn pull_back(&self, con_k: &ConLattice, f: &[usize]) -> Vec<usize> {
        (0..con_k.len())
            .map(|c| {
                let pairs = con_k.relation(c).pairs().map(|(x, y)| (f[x], f[y]));
                self.hom[self.con.close_index(BitRelation::from_pairs(self.p.len(), pairs))]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;

    fn s3() -> Arc<FiniteSemilattice> {
        Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(3)))
    }

    #[test]
    fn chain_with_zero_middle_pair_projects_to_two_chain() {
        let p = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(3)));
        let m = MeasuredPartialLattice::from_principal_values(
            p,
            s3(),
            &[((1, 0), 0), ((2, 1), 2)],
            ConBound::default(),
        )
        .unwrap();
        assert!(!m.is_proper());
        let (k, pr) = m.kernel_projection(ConBound::default()).unwrap();
        assert_eq!(k.lattice().len(), 2);
        assert_eq!(pr, vec![0, 0, 1]);
        assert!(k.is_proper());
        assert_eq!(k.value(1, 0), 2);
    }

    #[test]
    fn zero_hom_projects_to_point() {
        let p = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::n5()));
        let con = ConLattice::new(&p, ConBound::default()).unwrap();
        let m = MeasuredPartialLattice::new(p, s3(), vec![0; con.len()], ConBound::default()).unwrap();
        let (k, _) = m.kernel_projection(ConBound::default()).unwrap();
        assert_eq!(k.lattice().len(), 1);
    }

    #[test]
    fn proper_is_unchanged() {
        let p = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(3)));
        let m = MeasuredPartialLattice::from_principal_values(
            p,
            s3(),
            &[((1, 0), 1), ((2, 1), 2)],
            ConBound::default(),
        )
        .unwrap();
        assert!(m.is_proper());
        let (k, pr) = m.kernel_projection(ConBound::default()).unwrap();
        assert_eq!(pr, vec![0, 1, 2]);
        assert_eq!(k.hom(), m.hom());
    }
}
