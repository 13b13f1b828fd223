use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::BitRelation;
use crate::error::{invalid, precondition, refuted, Result};
use crate::order::galois::lower_adjoint_generic;
use crate::order::lattice::FiniteLattice;
use crate::partial::conlat::{ConBound, ConLattice};

use super::measured::MeasuredPartialLattice;
use super::pushout::Pushout;
use super::square::{compatibility_violation, TruncatedSquare};

/// `C = {(a, b) ∈ Con P × Con Q : a↾K = b↾K}`, ordered componentwise.
#[derive(Debug)]
pub struct CongruencePairLattice {
    pub con_k: Arc<ConLattice>,
    pub con_p: Arc<ConLattice>,
    pub con_q: Arc<ConLattice>,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    lattice: FiniteLattice,
    alpha: Vec<usize>,
    beta: Vec<usize>,
}

fn restriction(con_small: &ConLattice, con_big: &ConLattice, emb: &[usize]) -> Vec<usize> {
    (0..con_big.len())
        .map(|c| {
            let r = con_big.relation(c);
            let pre = BitRelation::from_fn(emb.len(), |x, y| r.get(emb[x], emb[y]));
            con_small.index_of(&pre).expect("restriction of a congruence")
        })
        .collect()
}

impl CongruencePairLattice {
    pub fn new(sq: &TruncatedSquare, bound: ConBound) -> Result<Self> {
        if !sq.is_embedding_case() {
            return invalid("the congruence-pair lattice is built for embeddings");
        }
        let con_k = Arc::new(ConLattice::new(&sq.k, bound)?);
        let con_p = Arc::new(ConLattice::new(&sq.p, bound)?);
        let con_q = Arc::new(ConLattice::new(&sq.q, bound)?);
        Self::from_parts(sq, con_k, con_p, con_q)
    }

    pub fn from_parts(
        sq: &TruncatedSquare,
        con_k: Arc<ConLattice>,
        con_p: Arc<ConLattice>,
        con_q: Arc<ConLattice>,
    ) -> Result<Self> {
        let rp = restriction(&con_k, &con_p, &sq.f);
        let rq = restriction(&con_k, &con_q, &sq.g);
        let mut by_k: Vec<Vec<usize>> = vec![Vec::new(); con_k.len()];
        for (b, &d) in rq.iter().enumerate() {
            by_k[d].push(b);
        }
        let mut pairs = Vec::new();
        for (a, &d) in rp.iter().enumerate() {
            for &b in &by_k[d] {
                pairs.push((a, b));
            }
        }
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        let leq = |i: usize, j: usize| {
            let ((a1, b1), (a2, b2)) = (pairs[i], pairs[j]);
            con_p.leq(a1, a2) && con_q.leq(b1, b2)
        };
        let lattice = FiniteLattice::from_leq_fn(pairs.len(), leq)
            .or_else(|e| refuted(format!("C is not a lattice: {e}")))?;
        // α = ξ† and β = η† for the projections ξ, η.
        let xi: Vec<usize> = pairs.iter().map(|&(a, _)| a).collect();
        let eta: Vec<usize> = pairs.iter().map(|&(_, b)| b).collect();
        let alpha = lower_adjoint_generic(&lattice, con_p.as_ref(), &xi)
            .ok_or_else(|| crate::Error::Refuted("the projection C → Con P has no lower adjoint".into()))?;
        let beta = lower_adjoint_generic(&lattice, con_q.as_ref(), &eta)
            .ok_or_else(|| crate::Error::Refuted("the projection C → Con Q has no lower adjoint".into()))?;
        Ok(CongruencePairLattice { con_k, con_p, con_q, pairs, index, lattice, alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, c: usize) -> (usize, usize) {
        self.pairs[c]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, b)).copied()
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    /// `α: Con P → C`.
    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// `β: Con Q → C`.
    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    /// `φ(c) = (c↾P, c↾Q)` for a congruence `c` of `R`.
    pub fn phi(&self, po: &Pushout, c: &BitRelation) -> Option<usize> {
        let a = BitRelation::from_fn(po.u.len(), |x, y| c.get(po.u[x], po.u[y]));
        let b = BitRelation::from_fn(po.v.len(), |x, y| c.get(po.v[x], po.v[y]));
        self.index_of(self.con_p.index_of(&a)?, self.con_q.index_of(&b)?)
    }

    /// `ψ(a, b)`: the congruence of `R` generated by `a ∪ b`, which is the
    /// least `c` with `φ(c) ≥ (a, b)`.
    pub fn psi(&self, po: &Pushout, c: usize) -> BitRelation {
        let (a, b) = self.pairs[c];
        let pairs = self.con_p.relation(a).pairs().map(|(x, y)| (po.u[x], po.u[y]));
        let pairs = pairs.chain(self.con_q.relation(b).pairs().map(|(x, y)| (po.v[x], po.v[y])));
        let eng = crate::partial::congruence::ClosureEngine::new(&po.r);
        eng.close_pairs(pairs.collect::<Vec<_>>())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimsReport {
    pub c_size: usize,
    /// `φ∘ψ = id_C`, equivalently `φ` is onto.
    pub phi_surjective: bool,
    pub psi_injective: bool,
    /// `ψ(1_P, 1_Q) = 1_R`.
    pub psi_top_is_one: bool,
    /// `Con R` was enumerated and `ψ` agreed with the adjoint of `φ` computed
    /// over it; `None` when `Con R` was beyond the bound.
    pub psi_matches_adjoint: Option<bool>,
}

impl ClaimsReport {
    pub fn all_hold(&self) -> bool {
        self.phi_surjective && self.psi_injective && self.psi_top_is_one && self.psi_matches_adjoint != Some(false)
    }
}

pub fn verify_claims(cpl: &CongruencePairLattice, po: &Pushout, bound: ConBound) -> Result<ClaimsReport> {
    let psi: Vec<BitRelation> = (0..cpl.len()).map(|c| cpl.psi(po, c)).collect();
    let phi_surjective = (0..cpl.len()).all(|c| cpl.phi(po, &psi[c]) == Some(c));
    let mut sorted = psi.clone();
    sorted.sort();
    sorted.dedup();
    let psi_injective = sorted.len() == psi.len();
    let top = cpl.lattice().top();
    let psi_top_is_one = psi[top] == BitRelation::full(po.r.len());
    let psi_matches_adjoint = match ConLattice::new(&po.r, bound) {
        Ok(con_r) => {
            let phi: Vec<usize> = (0..con_r.len())
                .map(|c| cpl.phi(po, con_r.relation(c)).ok_or(()))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| crate::Error::Refuted("a restriction of a congruence of R is not in C".into()))?;
            let adj = lower_adjoint_generic(&con_r, cpl.lattice(), &phi);
            Some(adj.is_some_and(|adj| (0..cpl.len()).all(|c| con_r.relation(adj[c]) == &psi[c])))
        }
        Err(crate::Error::Resource(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ClaimsReport { c_size: cpl.len(), phi_surjective, psi_injective, psi_top_is_one, psi_matches_adjoint })
}

/// The ⟨∨,0⟩-homomorphism `γ: C → S` with `γ∘α = μ` and `γ∘β = ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma {
    pub values: Vec<usize>,
    /// Every `(x, y)` with `α(x) ∨ β(y) = c`, per `c`.
    pub representations: Vec<Vec<(usize, usize)>>,
}

/// Builds `γ(α(x) ∨ β(y)) = μ(x) ∨ ν(y)`, checking that every element of
/// `C` has a representation and that all representations agree.
pub fn mediating_gamma(
    sq: &TruncatedSquare,
    cpl: &CongruencePairLattice,
    mu: &MeasuredPartialLattice,
    nu: &MeasuredPartialLattice,
) -> Result<Gamma> {
    if mu.codomain() != nu.codomain() {
        return invalid("measures take values in different semilattices");
    }
    if mu.con().len() != cpl.con_p.len() || nu.con().len() != cpl.con_q.len() {
        return invalid("measures are not on the sides of the square");
    }
    if let Some(w) = compatibility_violation(sq, &cpl.con_k, mu, nu) {
        return precondition(w);
    }
    let s = mu.codomain();
    let l = cpl.lattice();
    let mut values: Vec<Option<usize>> = vec![None; cpl.len()];
    let mut reps: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cpl.len()];
    for x in 0..cpl.con_p.len() {
        for y in 0..cpl.con_q.len() {
            let c = l.join(cpl.alpha[x], cpl.beta[y]);
            let v = s.join(mu.hom()[x], nu.hom()[y]);
            match values[c] {
                None => values[c] = Some(v),
                Some(w) if w != v => {
                    let (x0, y0) = reps[c][0];
                    return refuted(format!(
                        "γ is not well defined at C element {c}: (c{x0}, c{y0}) gives {}, (c{x}, c{y}) gives {}",
                        s.label(w),
                        s.label(v)
                    ));
                }
                _ => {}
            }
            reps[c].push((x, y));
        }
    }
    if let Some(c) = values.iter().position(Option::is_none) {
        let (a, b) = cpl.pairs[c];
        return refuted(format!("element (c{a}, c{b}) of C is not of the form α(x) ∨ β(y)"));
    }
    let values: Vec<usize> = values.into_iter().map(Option::unwrap).collect();
    if values[l.bottom()] != s.zero() {
        return refuted("γ(0) ≠ 0");
    }
    for i in 0..cpl.len() {
        for j in i + 1..cpl.len() {
            if values[l.join(i, j)] != s.join(values[i], values[j]) {
                return refuted(format!("γ does not preserve the join of C elements {i} and {j}"));
            }
        }
    }
    if let Some(x) = (0..cpl.con_p.len()).find(|&x| values[cpl.alpha[x]] != mu.hom()[x]) {
        return refuted(format!("γ∘α ≠ μ at c{x}"));
    }
    if let Some(y) = (0..cpl.con_q.len()).find(|&y| values[cpl.beta[y]] != nu.hom()[y]) {
        return refuted(format!("γ∘β ≠ ν at c{y}"));
    }
    Ok(Gamma { values, representations: reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::pushout::pushout;
    use crate::order::semilattice::FiniteSemilattice;
    use crate::partial::lattice::FinitePartialLattice;

    fn lat(l: FiniteLattice) -> Arc<FinitePartialLattice> {
        Arc::new(FinitePartialLattice::from_lattice(l))
    }

    #[test]
    fn diagonal_case() {
        let k = lat(FiniteLattice::chain(3));
        let sq = TruncatedSquare::new(k.clone(), k.clone(), k.clone(), vec![0, 1, 2], vec![0, 1, 2]).unwrap();
        let c = CongruencePairLattice::new(&sq, ConBound::default()).unwrap();
        assert_eq!(c.len(), c.con_p.len());
        assert!(c.pairs().iter().all(|&(a, b)| a == b));
        let po = pushout(&sq).unwrap();
        let rep = verify_claims(&c, &po, ConBound::default()).unwrap();
        assert!(rep.all_hold());
        assert_eq!(rep.psi_matches_adjoint, Some(true));
    }

    #[test]
    fn three_chains_over_two_chain() {
        let k = lat(FiniteLattice::chain(2));
        let p = lat(FiniteLattice::chain(3));
        let sq = TruncatedSquare::new(k, p.clone(), p, vec![0, 2], vec![0, 2]).unwrap();
        let c = CongruencePairLattice::new(&sq, ConBound::default()).unwrap();
        // Restrictions to K agree iff both collapse or neither does.
        assert_eq!(c.len(), 1 + 3 * 3);
        let po = pushout(&sq).unwrap();
        assert!(verify_claims(&c, &po, ConBound::default()).unwrap().all_hold());
    }

    #[test]
    fn gamma_on_m3_amalgam() {
        let k = lat(FiniteLattice::chain(2));
        let m3 = lat(FiniteLattice::m3());
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        let sq = TruncatedSquare::new(k, m3.clone(), m3.clone(), vec![0, 4], vec![0, 4]).unwrap();
        let b = ConBound::default();
        let c = CongruencePairLattice::new(&sq, b).unwrap();
        let mu = MeasuredPartialLattice::new(m3, s, vec![0, 1], b).unwrap();
        let g = mediating_gamma(&sq, &c, &mu, &mu).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(g.values, vec![0, 1]);
    }

    #[test]
    fn zero_measures_give_zero_gamma() {
        let k = lat(FiniteLattice::chain(2));
        let p = lat(FiniteLattice::chain(3));
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(3)));
        let sq = TruncatedSquare::new(k, p.clone(), p.clone(), vec![0, 1], vec![0, 2]).unwrap();
        let b = ConBound::default();
        let c = CongruencePairLattice::new(&sq, b).unwrap();
        let mu = MeasuredPartialLattice::new(p, s, vec![0; 4], b).unwrap();
        let g = mediating_gamma(&sq, &c, &mu, &mu).unwrap();
        assert!(g.values.iter().all(|&v| v == 0));
    }
}
