//! Terms over a finite partial lattice and the order of the free lattice
//! generated by it.
//!
//! `s ⊑ t` is the least relation on a finite universe of terms closed under
//!
//! * (R1) `p ≤ q` in `P` gives `p ⊑ q`, and `s ⊑ s`;
//! * (R2) `s1 ⊑ t`, `s2 ⊑ t` give `s1 ∨ s2 ⊑ t`;
//! * (R3) `s ⊑ t1`, `s ⊑ t2` give `s ⊑ t1 ∧ t2`;
//! * (R4) `si ⊑ t` gives `s1 ∧ s2 ⊑ t`;
//! * (R5) `s ⊑ ti` gives `s ⊑ t1 ∨ t2`;
//! * (R6) `a = ⋁X` defined and `x ⊑ t` for all `x ∈ X` give `a ⊑ t`;
//! * (R7) `b = ⋀Y` defined and `s ⊑ y` for all `y ∈ Y` give `s ⊑ b`;
//! * (R8) `s ⊑ p ⊑ t` with `p` a generator gives `s ⊑ t`.
//!
//! Every rule is sound in the free lattice. Completeness is tested against
//! evaluation, not proved here.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::bits::{rows_intersection, BitRelation};
use crate::error::{invalid, resource, Result};
use crate::order::lattice::FiniteLattice;
use crate::partial::congruence::{quotient, Congruence};
use crate::partial::lattice::FinitePartialLattice;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Gen(usize),
    Join(Vec<Term>),
    Meet(Vec<Term>),
}

impl Term {
    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(vec![a, b]).canonical()
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(vec![a, b]).canonical()
    }

    pub fn join_of(ts: impl IntoIterator<Item = Term>) -> Term {
        Term::Join(ts.into_iter().collect()).canonical()
    }

    pub fn meet_of(ts: impl IntoIterator<Item = Term>) -> Term {
        Term::Meet(ts.into_iter().collect()).canonical()
    }

    /// Flattened, children sorted and deduplicated; a node left with one
    /// child is replaced by it.
    pub fn canonical(self) -> Term {
        fn flat(kind_join: bool, children: Vec<Term>) -> Term {
            let mut out = BTreeSet::new();
            for c in children {
                match (c.canonical(), kind_join) {
                    (Term::Join(cs), true) | (Term::Meet(cs), false) => out.extend(cs),
                    (c, _) => {
                        out.insert(c);
                    }
                }
            }
            let mut v: Vec<Term> = out.into_iter().collect();
            if v.len() == 1 {
                return v.pop().unwrap();
            }
            if kind_join {
                Term::Join(v)
            } else {
                Term::Meet(v)
            }
        }
        match self {
            Term::Gen(g) => Term::Gen(g),
            Term::Join(cs) => flat(true, cs),
            Term::Meet(cs) => flat(false, cs),
        }
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::Gen(_) => &[],
            Term::Join(cs) | Term::Meet(cs) => cs,
        }
    }

    /// Generators have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn max_generator(&self) -> usize {
        match self {
            Term::Gen(g) => *g,
            _ => self.children().iter().map(Term::max_generator).max().unwrap_or(0),
        }
    }

    fn collect_subterms(&self, out: &mut Vec<Term>) {
        for c in self.children() {
            c.collect_subterms(out);
        }
        out.push(self.clone());
    }

    pub fn subterms(&self) -> Vec<Term> {
        let mut out = Vec::new();
        self.collect_subterms(&mut out);
        out
    }

    /// Prefix form, e.g. `(join x (meet y z))`.
    pub fn render(&self, labels: &[String]) -> String {
        let mut s = String::new();
        self.render_into(labels, &mut s);
        s
    }

    fn render_into(&self, labels: &[String], s: &mut String) {
        match self {
            Term::Gen(g) => match labels.get(*g) {
                Some(l) => s.push_str(l),
                None => {
                    let _ = write!(s, "#{g}");
                }
            },
            Term::Join(cs) | Term::Meet(cs) => {
                s.push_str(if matches!(self, Term::Join(_)) { "(join" } else { "(meet" });
                for c in cs {
                    s.push(' ');
                    c.render_into(labels, s);
                }
                s.push(')');
            }
        }
    }

    /// Parses prefix form against the given generator labels.
    pub fn parse(text: &str, labels: &[String]) -> Result<Term> {
        let spaced = text.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let t = parse_at(&tokens, &mut pos, labels)?;
        if pos != tokens.len() {
            return invalid(format!("trailing input after term: {}", tokens[pos..].join(" ")));
        }
        Ok(t.canonical())
    }
}

fn parse_at(tokens: &[&str], pos: &mut usize, labels: &[String]) -> Result<Term> {
    let Some(&tok) = tokens.get(*pos) else {
        return invalid("unexpected end of term");
    };
    *pos += 1;
    match tok {
        "(" => {
            let Some(&op) = tokens.get(*pos) else {
                return invalid("unexpected end of term");
            };
            *pos += 1;
            let is_join = match op {
                "join" | "∨" | "v" => true,
                "meet" | "∧" | "^" => false,
                other => return invalid(format!("unknown operator '{other}'")),
            };
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return invalid("unbalanced parentheses"),
                    Some(&")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_at(tokens, pos, labels)?),
                }
            }
            if children.len() < 2 {
                return invalid(format!("'{op}' needs at least two arguments"));
            }
            Ok(if is_join { Term::Join(children) } else { Term::Meet(children) })
        }
        ")" => invalid("unexpected ')'"),
        name => labels
            .iter()
            .position(|l| l == name)
            .map(Term::Gen)
            .ok_or_else(|| crate::Error::Invalid(format!("unknown generator '{name}'"))),
    }
}

/// Above this many terms the universe is refused.
pub const MAX_UNIVERSE: usize = 8192;

/// The least fixed point of (R1)–(R8) over a finite universe of terms.
#[derive(Clone, Debug)]
pub struct FreeLatticeOrder {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
    rel: BitRelation,
}

impl FreeLatticeOrder {
    /// The universe is the subterms of `terms` plus every generator.
    pub fn new(p: &FinitePartialLattice, terms: &[Term]) -> Result<Self> {
        let mut universe: Vec<Term> = (0..p.len()).map(Term::Gen).collect();
        let mut index: HashMap<Term, usize> =
            universe.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        for t in terms {
            let t = t.clone().canonical();
            if t.max_generator() >= p.len() {
                return invalid("term references a generator outside P");
            }
            for s in t.subterms() {
                if !index.contains_key(&s) {
                    index.insert(s.clone(), universe.len());
                    universe.push(s);
                }
            }
            if universe.len() > MAX_UNIVERSE {
                return resource(format!("term universe exceeds {MAX_UNIVERSE} terms"));
            }
        }
        let rel = Self::fixpoint(p, &universe, &index);
        Ok(FreeLatticeOrder { terms: universe, index, rel })
    }

    fn fixpoint(p: &FinitePartialLattice, universe: &[Term], index: &HashMap<Term, usize>) -> BitRelation {
        let m = universe.len();
        let n = p.len();
        let kids: Vec<Vec<usize>> =
            universe.iter().map(|t| t.children().iter().map(|c| index[c]).collect()).collect();
        let joins: Vec<usize> = (0..m).filter(|&i| matches!(universe[i], Term::Join(_))).collect();
        let meets: Vec<usize> = (0..m).filter(|&i| matches!(universe[i], Term::Meet(_))).collect();
        // Generators occupy indices 0..n.
        let mut rel = BitRelation::identity(m);
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    rel.set(a, b);
                }
            }
        }
        let union_rows = |r: &BitRelation, rows: &[usize]| -> Vec<u64> {
            let mut acc = r.row_words(rows[0]).to_vec();
            for &k in &rows[1..] {
                for (a, b) in acc.iter_mut().zip(r.row_words(k)) {
                    *a |= b;
                }
            }
            acc
        };
        loop {
            let mut changed = false;
            // Row rules: R2, R4, R6, R8.
            for &s in &joins {
                let w = rows_intersection(&rel, &kids[s]);
                changed |= rel.or_row(s, &w);
            }
            for &s in &meets {
                let w = union_rows(&rel, &kids[s]);
                changed |= rel.or_row(s, &w);
            }
            for (xs, a) in p.join_rules() {
                let w = rows_intersection(&rel, xs);
                changed |= rel.or_row(*a, &w);
            }
            for s in 0..m {
                for g in 0..n {
                    if g != s && rel.get(s, g) {
                        changed |= rel.or_row_from(s, g);
                    }
                }
            }
            // Column rules on the transpose: R3, R5, R7.
            let mut tr = rel.transpose();
            let mut tchanged = false;
            for &t in &meets {
                let w = rows_intersection(&tr, &kids[t]);
                tchanged |= tr.or_row(t, &w);
            }
            for &t in &joins {
                let w = union_rows(&tr, &kids[t]);
                tchanged |= tr.or_row(t, &w);
            }
            for (ys, b) in p.meet_rules() {
                let w = rows_intersection(&tr, ys);
                tchanged |= tr.or_row(*b, &w);
            }
            if tchanged {
                rel = tr.transpose();
            }
            if !changed && !tchanged {
                return rel;
            }
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn leq_index(&self, i: usize, j: usize) -> bool {
        self.rel.get(i, j)
    }

    /// `None` when either term (after canonicalization) is outside the universe.
    pub fn leq(&self, s: &Term, t: &Term) -> Option<bool> {
        let i = self.index_of(&s.clone().canonical())?;
        let j = self.index_of(&t.clone().canonical())?;
        Some(self.rel.get(i, j))
    }

    pub fn relation(&self) -> &BitRelation {
        &self.rel
    }
}

pub fn fl_leq(p: &FinitePartialLattice, s: &Term, t: &Term) -> Result<bool> {
    let ord = FreeLatticeOrder::new(p, &[s.clone(), t.clone()])?;
    Ok(ord.leq(s, t).expect("terms are in the universe"))
}

pub fn fl_eq(p: &FinitePartialLattice, s: &Term, t: &Term) -> Result<bool> {
    let ord = FreeLatticeOrder::new(p, &[s.clone(), t.clone()])?;
    Ok(ord.leq(s, t).unwrap() && ord.leq(t, s).unwrap())
}

/// Value of `t` in `l` under the generator assignment `h`.
pub fn eval(l: &FiniteLattice, h: &[usize], t: &Term) -> usize {
    match t {
        Term::Gen(g) => h[*g],
        Term::Join(cs) => cs.iter().map(|c| eval(l, h, c)).reduce(|a, b| l.join(a, b)).unwrap(),
        Term::Meet(cs) => cs.iter().map(|c| eval(l, h, c)).reduce(|a, b| l.meet(a, b)).unwrap(),
    }
}

/// Canonical forms of all binary terms of depth at most `depth` over `n`
/// generators.
pub fn terms_up_to_depth(n: usize, depth: usize) -> Result<Vec<Term>> {
    let mut level: BTreeSet<Term> = (0..n).map(Term::Gen).collect();
    for _ in 1..depth {
        let prev: Vec<Term> = level.iter().cloned().collect();
        for (i, a) in prev.iter().enumerate() {
            for b in &prev[i + 1..] {
                level.insert(Term::join(a.clone(), b.clone()));
                level.insert(Term::meet(a.clone(), b.clone()));
            }
            if level.len() > MAX_UNIVERSE {
                return resource(format!("more than {MAX_UNIVERSE} terms of depth {depth}"));
            }
        }
    }
    Ok(level.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeEnumeration {
    /// One representative per class, in canonical term order.
    pub classes: Vec<Term>,
    /// Class counts after each depth, starting at depth 1.
    pub counts: Vec<usize>,
    /// The classes are closed under join and meet, hence are the whole
    /// free lattice.
    pub complete: bool,
}

fn class_representatives(ord: &FreeLatticeOrder, candidates: &[Term]) -> Vec<Term> {
    let mut sorted: Vec<Term> = candidates.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut reps: Vec<(Term, usize)> = Vec::new();
    for t in sorted {
        let i = ord.index_of(&t).unwrap();
        if !reps.iter().any(|&(_, j)| ord.leq_index(i, j) && ord.leq_index(j, i)) {
            reps.push((t, i));
        }
    }
    reps.into_iter().map(|(t, _)| t).collect()
}

/// Distinct classes among terms built from the generators by at most
/// `depth − 1` rounds of pairwise joins and meets of class representatives.
pub fn fl_enumerate(p: &FinitePartialLattice, depth: usize) -> Result<FreeEnumeration> {
    if depth == 0 {
        return invalid("depth must be at least 1");
    }
    let gens: Vec<Term> = (0..p.len()).map(Term::Gen).collect();
    let ord = FreeLatticeOrder::new(p, &gens)?;
    let mut reps = class_representatives(&ord, &gens);
    let mut counts = vec![reps.len()];
    for _ in 1..depth {
        let cands = extend_once(&reps);
        if cands.len() > MAX_UNIVERSE {
            return resource(format!("more than {MAX_UNIVERSE} candidate terms"));
        }
        let ord = FreeLatticeOrder::new(p, &cands)?;
        reps = class_representatives(&ord, &cands);
        counts.push(reps.len());
    }
    let complete = closed_under_operations(p, &reps)?;
    Ok(FreeEnumeration { classes: reps, counts, complete })
}

fn extend_once(reps: &[Term]) -> Vec<Term> {
    let mut out: Vec<Term> = reps.to_vec();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            out.push(Term::join(a.clone(), b.clone()));
            out.push(Term::meet(a.clone(), b.clone()));
        }
    }
    out
}

/// Every pairwise join and meet of `reps` is equivalent to some member.
/// Stops at the first pair that is not.
fn closed_under_operations(p: &FinitePartialLattice, reps: &[Term]) -> Result<bool> {
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            for t in [Term::join(a.clone(), b.clone()), Term::meet(a.clone(), b.clone())] {
                let mut universe = reps.to_vec();
                universe.push(t.clone());
                let ord = FreeLatticeOrder::new(p, &universe)?;
                let k = ord.index_of(&t).unwrap();
                let found = reps.iter().any(|r| {
                    let j = ord.index_of(r).unwrap();
                    ord.leq_index(k, j) && ord.leq_index(j, k)
                });
                if !found {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Checks that the free-lattice embedding has the congruence extension
/// property at `a` through the quotient map `P → P/a`: the congruence of the
/// free lattice generated by `a` restricts to exactly `a` because it is
/// contained in the kernel of the induced map into the free lattice over
/// `P/a`. Returns a description of the first failure.
pub fn cep_via_quotient(p: &FinitePartialLattice, a: &Congruence) -> Result<Option<String>> {
    let q = quotient(p, a)?;
    let pr = &q.projection;
    let ql = &q.lattice;
    // The image of each defined join of P must be a join in the free lattice
    // over P/a, so that the projection induces a lattice homomorphism.
    let mut terms: Vec<Term> = Vec::new();
    for (xs, _) in p.join_rules().iter().chain(p.meet_rules()) {
        terms.push(Term::join_of(xs.iter().map(|&x| Term::Gen(pr[x]))));
        terms.push(Term::meet_of(xs.iter().map(|&x| Term::Gen(pr[x]))));
    }
    let ord = FreeLatticeOrder::new(ql, &terms)?;
    let eq = |s: &Term, t: &Term| ord.leq(s, t).unwrap() && ord.leq(t, s).unwrap();
    for (xs, v) in p.join_rules() {
        let t = Term::join_of(xs.iter().map(|&x| Term::Gen(pr[x])));
        if !eq(&Term::Gen(pr[*v]), &t) {
            return Ok(Some(format!(
                "join {} = {} is not preserved in the free lattice over the quotient",
                p.poset().labels_of(xs),
                p.label(*v)
            )));
        }
    }
    for (ys, v) in p.meet_rules() {
        let t = Term::meet_of(ys.iter().map(|&y| Term::Gen(pr[y])));
        if !eq(&Term::Gen(pr[*v]), &t) {
            return Ok(Some(format!(
                "meet {} = {} is not preserved in the free lattice over the quotient",
                p.poset().labels_of(ys),
                p.label(*v)
            )));
        }
    }
    for x in 0..p.len() {
        for y in 0..p.len() {
            let below = ord.leq_index(pr[x], pr[y]);
            if below != a.leq(x, y) {
                return Ok(Some(format!(
                    "pair ({}, {}): congruence says {}, free lattice over the quotient says {}",
                    p.label(x),
                    p.label(y),
                    a.leq(x, y),
                    below
                )));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::lattices_up_to;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn free_order_survives_evaluation(
            s in 0usize..10_000,
            t in 0usize..10_000,
            target in 0usize..25,
            gens in prop::collection::vec(0usize..5, 3),
        ) {
            let p = antichain(3);
            let terms = terms_up_to_depth(3, 3).unwrap();
            let (s, t) = (&terms[s % terms.len()], &terms[t % terms.len()]);
            let lats = lattices_up_to(5).unwrap();
            let l = &lats[target % lats.len()];
            let h: Vec<usize> = gens.iter().map(|g| g % l.len()).collect();
            if fl_leq(&p, s, t).unwrap() {
                prop_assert!(l.leq(eval(l, &h, s), eval(l, &h, t)));
            }
        }
    }

    use crate::order::poset::FinitePoset;

    fn antichain(n: usize) -> FinitePartialLattice {
        let labels = ["x", "y", "z", "w"].iter().take(n).map(|s| s.to_string()).collect();
        FinitePartialLattice::from_poset(FinitePoset::antichain(n).with_labels(labels).unwrap()).unwrap()
    }

    fn t(s: &str, p: &FinitePartialLattice) -> Term {
        Term::parse(s, p.poset().labels()).unwrap()
    }

    #[test]
    fn parse_and_render() {
        let p = antichain(3);
        let a = t("(join x (meet y z))", &p);
        assert_eq!(a.render(p.poset().labels()), "(join x (meet y z))");
        assert_eq!(t("(join (join x y) z)", &p), t("(join z (join y x))", &p));
        assert!(Term::parse("(join x)", p.poset().labels()).is_err());
        assert!(Term::parse("(join x q)", p.poset().labels()).is_err());
        assert!(Term::parse("(join x y", p.poset().labels()).is_err());
    }

    #[test]
    fn two_generator_facts() {
        let p = antichain(2);
        assert!(fl_leq(&p, &t("(meet x y)", &p), &t("(join x y)", &p)).unwrap());
        assert!(!fl_leq(&p, &t("x", &p), &t("y", &p)).unwrap());
        assert!(fl_eq(&p, &t("(join x y)", &p), &t("(join y x)", &p)).unwrap());
        assert!(fl_eq(&p, &t("x", &p), &t("(join x (meet x y))", &p)).unwrap());
        assert!(!fl_eq(&p, &t("x", &p), &t("y", &p)).unwrap());
    }

    #[test]
    fn three_generators_not_distributive() {
        let p = antichain(3);
        let lhs = t("(meet x (join y z))", &p);
        let rhs = t("(join (meet x y) (meet x z))", &p);
        assert!(fl_leq(&p, &rhs, &lhs).unwrap());
        assert!(!fl_leq(&p, &lhs, &rhs).unwrap());
    }

    #[test]
    fn enumerate_small() {
        let e = fl_enumerate(&antichain(2), 2).unwrap();
        assert_eq!(e.classes.len(), 4);
        assert!(e.complete);
        let e = fl_enumerate(&FinitePartialLattice::from_lattice(FiniteLattice::n5()), 3).unwrap();
        assert_eq!(e.classes.len(), 5);
        assert!(e.complete);
    }

    #[test]
    fn defined_join_is_preserved() {
        let l = FiniteLattice::boolean(2);
        let p = FinitePartialLattice::new(l.poset().clone(), vec![(vec![1, 2], 3)], vec![]).unwrap();
        assert!(fl_eq(&p, &Term::Gen(3), &Term::join(Term::Gen(1), Term::Gen(2))).unwrap());
        assert!(!fl_eq(&p, &Term::Gen(0), &Term::meet(Term::Gen(1), Term::Gen(2))).unwrap());
    }
}
