use std::sync::Arc;

use crate::error::{invalid, precondition, refuted, Result};
use crate::partial::conlat::{ConBound, ConLattice};
use crate::partial::hom::{hom_violation, PartialLatticeHom};
use crate::partial::lattice::FinitePartialLattice;

use super::measured::MeasuredPartialLattice;

/// Two homomorphisms `f: K → P`, `g: K → Q` out of a lattice `K`.
#[derive(Clone, Debug)]
pub struct TruncatedSquare {
    pub k: Arc<FinitePartialLattice>,
    pub p: Arc<FinitePartialLattice>,
    pub q: Arc<FinitePartialLattice>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl TruncatedSquare {
    pub fn new(
        k: Arc<FinitePartialLattice>,
        p: Arc<FinitePartialLattice>,
        q: Arc<FinitePartialLattice>,
        f: Vec<usize>,
        g: Vec<usize>,
    ) -> Result<Self> {
        if !k.is_total() {
            return invalid("the bottom of a square must be a lattice");
        }
        if let Some(why) = hom_violation(&k, &p, &f) {
            return invalid(format!("f: {why}"));
        }
        if let Some(why) = hom_violation(&k, &q, &g) {
            return invalid(format!("g: {why}"));
        }
        Ok(TruncatedSquare { k, p, q, f, g })
    }

    pub fn f_hom(&self) -> PartialLatticeHom {
        PartialLatticeHom::new_unchecked(self.k.clone(), self.p.clone(), self.f.clone())
    }

    pub fn g_hom(&self) -> PartialLatticeHom {
        PartialLatticeHom::new_unchecked(self.k.clone(), self.q.clone(), self.g.clone())
    }

    pub fn is_embedding_case(&self) -> bool {
        self.f_hom().is_embedding() && self.g_hom().is_embedding()
    }
}

/// First congruence of `K`, rendered with its generators, on which
/// `μ ∘ Con f` and `ν ∘ Con g` differ.
pub fn compatibility_violation(
    sq: &TruncatedSquare,
    con_k: &ConLattice,
    mu: &MeasuredPartialLattice,
    nu: &MeasuredPartialLattice,
) -> Option<String> {
    let lf = mu.pull_back(con_k, &sq.f);
    let lg = nu.pull_back(con_k, &sq.g);
    (0..con_k.len()).find(|&c| lf[c] != lg[c]).map(|c| {
        let gens: Vec<String> = con_k
            .generator_pairs(c)
            .iter()
            .map(|&(x, y)| format!("({}, {})", sq.k.label(x), sq.k.label(y)))
            .collect();
        format!(
            "μ∘Con f and ν∘Con g differ on the congruence of K generated by [{}]: {} vs {}",
            gens.join(", "),
            mu.codomain().label(lf[c]),
            nu.codomain().label(lg[c])
        )
    })
}

/// A square reduced to embeddings, with the induced measures and the
/// projections from the original objects.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub square: TruncatedSquare,
    pub lambda: MeasuredPartialLattice,
    pub mu: MeasuredPartialLattice,
    pub nu: MeasuredPartialLattice,
    pub proj_k: Vec<usize>,
    pub proj_p: Vec<usize>,
    pub proj_q: Vec<usize>,
}

/// Quotients `K`, `P`, `Q` by the zero kernels of `λ = μ∘Con f = ν∘Con g`,
/// `μ`, `ν`; the induced maps between the quotients are embeddings.
pub fn reduce_to_embeddings(
    sq: &TruncatedSquare,
    mu: &MeasuredPartialLattice,
    nu: &MeasuredPartialLattice,
    bound: ConBound,
) -> Result<Reduced> {
    if mu.lattice().as_ref() != sq.p.as_ref() || nu.lattice().as_ref() != sq.q.as_ref() {
        return invalid("measures are not on the sides of the square");
    }
    if mu.codomain() != nu.codomain() {
        return invalid("measures take values in different semilattices");
    }
    let con_k = Arc::new(ConLattice::new(&sq.k, bound)?);
    if let Some(w) = compatibility_violation(sq, &con_k, mu, nu) {
        return precondition(w);
    }
    let lambda_hom = mu.pull_back(&con_k, &sq.f);
    let lambda = MeasuredPartialLattice::from_con(sq.k.clone(), con_k, mu.codomain().clone(), lambda_hom)?;
    let (lambda2, pk) = lambda.kernel_projection(bound)?;
    let (mu2, pa) = mu.kernel_projection(bound)?;
    let (nu2, pb) = nu.kernel_projection(bound)?;
    let induced = |h: &[usize], proj: &[usize], size: usize| -> Result<Vec<usize>> {
        let mut out = vec![usize::MAX; size];
        for (x, &px) in pk.iter().enumerate() {
            let v = proj[h[x]];
            if out[px] != usize::MAX && out[px] != v {
                return refuted("induced map on the quotient of K is not well defined");
            }
            out[px] = v;
        }
        Ok(out)
    };
    let k2 = lambda2.lattice().len();
    let f2 = induced(&sq.f, &pa, k2)?;
    let g2 = induced(&sq.g, &pb, k2)?;
    let square = TruncatedSquare::new(
        lambda2.lattice().clone(),
        mu2.lattice().clone(),
        nu2.lattice().clone(),
        f2,
        g2,
    )
    .or_else(|e| refuted(format!("induced maps are not homomorphisms: {e}")))?;
    if !square.is_embedding_case() {
        return refuted("induced maps on the quotients are not embeddings");
    }
    Ok(Reduced { square, lambda: lambda2, mu: mu2, nu: nu2, proj_k: pk, proj_p: pa, proj_q: pb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;
    use crate::order::semilattice::FiniteSemilattice;

    fn lat(l: FiniteLattice) -> Arc<FinitePartialLattice> {
        Arc::new(FinitePartialLattice::from_lattice(l))
    }

    #[test]
    fn collapsed_bottom_edge() {
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        let k = lat(FiniteLattice::chain(2));
        let p = lat(FiniteLattice::chain(3));
        let q = lat(FiniteLattice::chain(2));
        // K sits on the lower edge of P, which μ sends to 0.
        let sq = TruncatedSquare::new(k, p.clone(), q.clone(), vec![0, 1], vec![0, 0]).unwrap();
        let b = ConBound::default();
        let mu = MeasuredPartialLattice::from_principal_values(p, s.clone(), &[((1, 0), 0), ((2, 1), 1)], b)
            .unwrap();
        let nu = MeasuredPartialLattice::from_principal_values(q, s, &[((1, 0), 1)], b).unwrap();
        let r = reduce_to_embeddings(&sq, &mu, &nu, b).unwrap();
        assert_eq!(r.square.k.len(), 1);
        assert_eq!(r.square.p.len(), 2);
        assert_eq!(r.square.q.len(), 2);
        assert!(r.mu.is_proper() && r.nu.is_proper());
    }

    #[test]
    fn incompatible_measures_rejected() {
        let s = Arc::new(FiniteSemilattice::from_lattice(&FiniteLattice::chain(2)));
        let k = lat(FiniteLattice::chain(2));
        let sq = TruncatedSquare::new(k.clone(), k.clone(), k.clone(), vec![0, 1], vec![0, 1]).unwrap();
        let b = ConBound::default();
        let mu = MeasuredPartialLattice::from_principal_values(k.clone(), s.clone(), &[((1, 0), 1)], b).unwrap();
        let nu = MeasuredPartialLattice::from_principal_values(k, s, &[((1, 0), 0)], b).unwrap();
        let err = reduce_to_embeddings(&sq, &mu, &nu, b).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(ref m) if m.contains("(1, 0)")));
    }
}
