use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::FinitePoset;

/// A poset with partial joins and meets on nonempty finite subsets, each
/// defined value being the genuine supremum (infimum) of its arguments.
///
/// Keys are stored reduced to their maximal (for joins) or minimal (for
/// meets) elements: `sup X = sup max(X)`, so both carry the same information
/// and give the same congruence rule. When every join and meet is defined
/// the structure keeps the lattice tables instead of an explicit map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePartialLattice {
    poset: FinitePoset,
    joins: BTreeMap<Vec<usize>, usize>,
    meets: BTreeMap<Vec<usize>, usize>,
    total: Option<FiniteLattice>,
    join_rules: Vec<(Vec<usize>, usize)>,
    meet_rules: Vec<(Vec<usize>, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub op: &'static str,
    pub args: Vec<String>,
    pub value: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every table entry against the order; never fails.
pub fn validate(
    poset: &FinitePoset,
    joins: &[(Vec<usize>, usize)],
    meets: &[(Vec<usize>, usize)],
) -> ValidationReport {
    let n = poset.len();
    let mut report = ValidationReport::default();
    let name = |i: usize| {
        if i < n {
            poset.label(i).to_string()
        } else {
            format!("#{i}")
        }
    };
    for (op, entries) in [("join", joins), ("meet", meets)] {
        for (args, value) in entries {
            let mk = |reason: String| Violation {
                op,
                args: args.iter().map(|&a| name(a)).collect(),
                value: name(*value),
                reason,
            };
            if args.is_empty() {
                report.violations.push(mk("empty argument set".into()));
                continue;
            }
            if *value >= n || args.iter().any(|&a| a >= n) {
                report.violations.push(mk("element out of range".into()));
                continue;
            }
            let (bound_ok, extremal) = if op == "join" {
                (
                    args.iter().all(|&a| poset.leq(a, *value)),
                    poset.sup(args) == Some(*value),
                )
            } else {
                (
                    args.iter().all(|&a| poset.leq(*value, a)),
                    poset.inf(args) == Some(*value),
                )
            };
            if !bound_ok {
                let what = if op == "join" { "an upper" } else { "a lower" };
                report.violations.push(mk(format!("value is not {what} bound")));
            } else if !extremal {
                let what = if op == "join" { "least upper" } else { "greatest lower" };
                report.violations.push(mk(format!("value is not the {what} bound")));
            }
        }
    }
    report
}

fn binary_rules(l: &FiniteLattice, join: bool) -> Vec<(Vec<usize>, usize)> {
    let n = l.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !l.poset().comparable(i, j) {
                out.push((vec![i, j], if join { l.join(i, j) } else { l.meet(i, j) }));
            }
        }
    }
    out
}

impl FinitePartialLattice {
    pub fn new(
        poset: FinitePoset,
        joins: Vec<(Vec<usize>, usize)>,
        meets: Vec<(Vec<usize>, usize)>,
    ) -> Result<Self> {
        if poset.is_empty() {
            return invalid("a partial lattice must be nonempty");
        }
        let report = validate(&poset, &joins, &meets);
        if let Some(v) = report.violations.first() {
            return invalid(format!(
                "{} of [{}] = {}: {}",
                v.op,
                v.args.join(", "),
                v.value,
                v.reason
            ));
        }
        let mut jm = BTreeMap::new();
        for (args, v) in joins {
            let key = poset.maximal(&args);
            if key.len() >= 2 {
                jm.insert(key, v);
            }
        }
        let mut mm = BTreeMap::new();
        for (args, v) in meets {
            let key = poset.minimal(&args);
            if key.len() >= 2 {
                mm.insert(key, v);
            }
        }
        let join_rules = jm.iter().map(|(k, &v)| (k.clone(), v)).collect();
        let meet_rules = mm.iter().map(|(k, &v)| (k.clone(), v)).collect();
        Ok(FinitePartialLattice { poset, joins: jm, meets: mm, total: None, join_rules, meet_rules })
    }

    /// A poset with no nontrivial joins or meets.
    pub fn from_poset(poset: FinitePoset) -> Result<Self> {
        Self::new(poset, vec![], vec![])
    }

    /// A lattice, all of whose joins and meets are defined.
    pub fn from_lattice(l: FiniteLattice) -> Self {
        // Binary instances are enough for every rule: ⋁X = x ∨ ⋁(X∖{x}).
        let join_rules = binary_rules(&l, true);
        let meet_rules = binary_rules(&l, false);
        FinitePartialLattice {
            poset: l.poset().clone(),
            joins: BTreeMap::new(),
            meets: BTreeMap::new(),
            total: Some(l),
            join_rules,
            meet_rules,
        }
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

    pub fn is_total(&self) -> bool {
        self.total.is_some()
    }

    pub fn as_lattice(&self) -> Option<&FiniteLattice> {
        self.total.as_ref()
    }

    /// Rule instances for congruence generation: for total structures the
    /// binary incomparable pairs, otherwise the stored entries.
    pub fn join_rules(&self) -> &[(Vec<usize>, usize)] {
        &self.join_rules
    }

    pub fn meet_rules(&self) -> &[(Vec<usize>, usize)] {
        &self.meet_rules
    }

    /// `Some(a)` iff `a = ⋁xs` is defined (trivially so when `xs` has a greatest element).
    pub fn defined_join(&self, xs: &[usize]) -> Option<usize> {
        if xs.is_empty() {
            return None;
        }
        if let Some(l) = &self.total {
            return Some(xs.iter().fold(xs[0], |acc, &x| l.join(acc, x)));
        }
        let key = self.poset.maximal(xs);
        if key.len() == 1 {
            return Some(key[0]);
        }
        self.joins.get(&key).copied()
    }

    pub fn defined_meet(&self, xs: &[usize]) -> Option<usize> {
        if xs.is_empty() {
            return None;
        }
        if let Some(l) = &self.total {
            return Some(xs.iter().fold(xs[0], |acc, &x| l.meet(acc, x)));
        }
        let key = self.poset.minimal(xs);
        if key.len() == 1 {
            return Some(key[0]);
        }
        self.meets.get(&key).copied()
    }

    /// All defined joins on antichains of size at least two.
    pub fn explicit_joins(&self) -> Vec<(Vec<usize>, usize)> {
        match &self.total {
            None => self.joins.iter().map(|(k, &v)| (k.clone(), v)).collect(),
            Some(l) => antichains(&self.poset)
                .into_iter()
                .map(|a| {
                    let v = l.join_all(a.iter().copied());
                    (a, v)
                })
                .collect(),
        }
    }

    pub fn explicit_meets(&self) -> Vec<(Vec<usize>, usize)> {
        match &self.total {
            None => self.meets.iter().map(|(k, &v)| (k.clone(), v)).collect(),
            Some(l) => antichains(&self.poset)
                .into_iter()
                .map(|a| {
                    let v = l.meet_all(a.iter().copied());
                    (a, v)
                })
                .collect(),
        }
    }

    pub fn dual(&self) -> FinitePartialLattice {
        match &self.total {
            Some(l) => Self::from_lattice(l.dual()),
            None => Self::new(self.poset.dual(), self.explicit_meets(), self.explicit_joins())
                .expect("dual of a partial lattice"),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        match &self.total {
            Some(l) => Ok(Self::from_lattice(l.with_labels(labels)?)),
            None => Self::new(
                self.poset.with_labels(labels)?,
                self.explicit_joins(),
                self.explicit_meets(),
            ),
        }
    }

    /// The greatest and least elements if present.
    pub fn bounds(&self) -> (Option<usize>, Option<usize>) {
        (self.poset.bottom(), self.poset.top())
    }
}

/// Antichains of size at least two.
pub fn antichains(p: &FinitePoset) -> Vec<Vec<usize>> {
    let n = p.len();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(p: &FinitePoset, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        for x in start..p.len() {
            if cur.iter().all(|&c| !p.comparable(c, x)) {
                cur.push(x);
                rec(p, x + 1, cur, out);
                cur.pop();
            }
        }
    }
    if n > 0 {
        rec(p, 0, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn lattice_is_valid_partial_lattice() {
        let l = FiniteLattice::boolean(2);
        let p = FinitePartialLattice::from_lattice(l.clone());
        let r = validate(l.poset(), &p.explicit_joins(), &p.explicit_meets());
        assert!(r.is_valid());
        assert_eq!(p.defined_join(&[1, 2]), Some(3));
    }

    #[test]
    fn non_upper_bound_reported() {
        let poset = FinitePoset::new(labels(3), &[(0, 1), (0, 2)]).unwrap();
        let r = validate(&poset, &[(vec![1, 2], 0)], &[]);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].args, vec!["e1", "e2"]);
        assert_eq!(r.violations[0].value, "e0");
        assert!(r.violations[0].reason.contains("upper bound"));
    }

    #[test]
    fn keys_are_reduced() {
        let l = FiniteLattice::boolean(2);
        let p = FinitePartialLattice::new(l.poset().clone(), vec![(vec![0, 1, 2], 3)], vec![])
            .unwrap();
        assert_eq!(p.defined_join(&[1, 2]), Some(3));
        assert_eq!(p.defined_join(&[0, 1]), Some(1));
        assert_eq!(p.defined_meet(&[1, 2]), None);
        assert_eq!(p.join_rules(), &[(vec![1, 2], 3)]);
    }
}
