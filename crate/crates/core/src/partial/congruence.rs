use std::sync::Arc;

use crate::bits::{rows_intersection, BitRelation};
use crate::error::{invalid, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::FinitePoset;
use crate::partial::hom::PartialLatticeHom;
use crate::partial::lattice::FinitePartialLattice;

/// A quasi-order on the carrier containing the order and closed under the
/// join and meet rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    rel: BitRelation,
}

impl Congruence {
    pub(crate) fn from_closed(rel: BitRelation) -> Self {
        Congruence { rel }
    }

    /// Wraps `rel` after checking that it is a congruence of `p`.
    pub fn new(p: &FinitePartialLattice, rel: BitRelation) -> Result<Self> {
        if rel.size() != p.len() {
            return invalid("relation size differs from carrier size");
        }
        if !is_congruence(p, &rel) {
            return invalid("relation is not a congruence");
        }
        Ok(Congruence { rel })
    }

    pub fn relation(&self) -> &BitRelation {
        &self.rel
    }

    pub fn into_relation(self) -> BitRelation {
        self.rel
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.rel.get(x, y)
    }

    #[inline]
    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.rel.get(x, y) && self.rel.get(y, x)
    }

    /// Equivalence classes, each sorted, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.rel.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let cls: Vec<usize> = (i..n).filter(|&j| self.equiv(i, j)).collect();
            for &j in &cls {
                seen[j] = true;
            }
            out.push(cls);
        }
        out
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rel.pairs().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Transitivity,
    Join,
    Meet,
}

pub const DEFAULT_RULE_ORDER: [Rule; 3] = [Rule::Transitivity, Rule::Join, Rule::Meet];

/// The data needed to close a relation, detached from labels.
#[derive(Clone, Debug)]
pub struct ClosureEngine {
    n: usize,
    base: BitRelation,
    join_rules: Vec<(Vec<usize>, usize)>,
    meet_rules: Vec<(Vec<usize>, usize)>,
}

impl ClosureEngine {
    pub fn new(p: &FinitePartialLattice) -> Self {
        ClosureEngine {
            n: p.len(),
            base: p.poset().relation().clone(),
            join_rules: p.join_rules().to_vec(),
            meet_rules: p.meet_rules().to_vec(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &BitRelation {
        &self.base
    }

    fn apply(&self, rule: Rule, rel: &mut BitRelation) -> bool {
        match rule {
            Rule::Transitivity => rel.transitive_close(),
            Rule::Join => {
                // a = ⋁X and x ≤c y for all x ∈ X give a ≤c y.
                let mut changed = false;
                for (xs, a) in &self.join_rules {
                    let common = rows_intersection(rel, xs);
                    changed |= rel.or_row(*a, &common);
                }
                changed
            }
            Rule::Meet => {
                // b = ⋀Y and s ≤c y for all y ∈ Y give s ≤c b.
                let mut changed = false;
                for (ys, b) in &self.meet_rules {
                    for s in 0..self.n {
                        if !rel.get(s, *b) && ys.iter().all(|&y| rel.get(s, y)) {
                            rel.set(s, *b);
                            changed = true;
                        }
                    }
                }
                changed
            }
        }
    }

    /// Least congruence containing `rel`.
    pub fn close_with_order(&self, mut rel: BitRelation, order: &[Rule]) -> BitRelation {
        rel.union_with(&self.base);
        loop {
            let mut changed = false;
            for &r in order {
                changed |= self.apply(r, &mut rel);
            }
            if !changed {
                return rel;
            }
        }
    }

    pub fn close(&self, rel: BitRelation) -> BitRelation {
        self.close_with_order(rel, &DEFAULT_RULE_ORDER)
    }

    pub fn close_pairs(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> BitRelation {
        self.close(BitRelation::from_pairs(self.n, pairs))
    }
}

pub fn congruence_closure(p: &FinitePartialLattice, seeds: &[(usize, usize)]) -> Congruence {
    Congruence { rel: ClosureEngine::new(p).close_pairs(seeds.iter().copied()) }
}

/// The least congruence with `a ≤ b`.
pub fn theta_plus(p: &FinitePartialLattice, a: usize, b: usize) -> Congruence {
    congruence_closure(p, &[(a, b)])
}

/// The least congruence with `a ≡ b`, i.e. `Θ⁺(a,b) ∨ Θ⁺(b,a)`.
pub fn theta(p: &FinitePartialLattice, a: usize, b: usize) -> Congruence {
    congruence_closure(p, &[(a, b), (b, a)])
}

/// Congruence join: closure of the union.
pub fn congruence_join(p: &FinitePartialLattice, a: &Congruence, b: &Congruence) -> Congruence {
    let mut r = a.rel.clone();
    r.union_with(&b.rel);
    Congruence { rel: ClosureEngine::new(p).close(r) }
}

/// Direct check of the congruence conditions.
pub fn is_congruence(p: &FinitePartialLattice, rel: &BitRelation) -> bool {
    if !p.poset().relation().is_subset(rel) || !rel.is_transitive() {
        return false;
    }
    let n = p.len();
    let joins_ok = p.join_rules().iter().all(|(xs, a)| {
        (0..n).all(|y| !xs.iter().all(|&x| rel.get(x, y)) || rel.get(*a, y))
    });
    let meets_ok = p.meet_rules().iter().all(|(ys, b)| {
        (0..n).all(|s| !ys.iter().all(|&y| rel.get(s, y)) || rel.get(s, *b))
    });
    joins_ok && meets_ok
}

/// `P/c` with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub lattice: FinitePartialLattice,
    pub projection: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Quotient {
    pub fn projection_hom(&self, source: Arc<FinitePartialLattice>) -> Result<PartialLatticeHom> {
        PartialLatticeHom::new(source, Arc::new(self.lattice.clone()), self.projection.clone())
    }
}

fn class_label(p: &FinitePartialLattice, cls: &[usize]) -> String {
    if cls.len() == 1 {
        p.label(cls[0]).to_string()
    } else {
        let names: Vec<&str> = cls.iter().map(|&i| p.label(i)).collect();
        format!("[{}]", names.join(","))
    }
}

pub fn quotient(p: &FinitePartialLattice, c: &Congruence) -> Result<Quotient> {
    if c.rel.size() != p.len() {
        return invalid("congruence carrier differs");
    }
    let classes = c.classes();
    let mut projection = vec![0; p.len()];
    for (k, cls) in classes.iter().enumerate() {
        for &x in cls {
            projection[x] = k;
        }
    }
    let labels: Vec<String> = classes.iter().map(|cls| class_label(p, cls)).collect();
    let m = classes.len();
    let rel = BitRelation::from_fn(m, |a, b| c.leq(classes[a][0], classes[b][0]));
    let poset = FinitePoset::from_relation(labels, rel)?;
    let lattice = if p.is_total() {
        FinitePartialLattice::from_lattice(FiniteLattice::from_poset(poset)?)
    } else {
        let map_entries = |entries: Vec<(Vec<usize>, usize)>| -> Vec<(Vec<usize>, usize)> {
            entries
                .into_iter()
                .map(|(xs, a)| {
                    let mut ys: Vec<usize> = xs.iter().map(|&x| projection[x]).collect();
                    ys.sort_unstable();
                    ys.dedup();
                    (ys, projection[a])
                })
                .collect()
        };
        FinitePartialLattice::new(
            poset,
            map_entries(p.explicit_joins()),
            map_entries(p.explicit_meets()),
        )?
    };
    Ok(Quotient { lattice, projection, classes })
}
