use crate::error::{precondition, Result};
use crate::order::poset::FinitePoset;
use crate::order::semilattice::FiniteSemilattice;

/// Least-indexed `z` with `X ≤ z ≤ Y`, if any.
pub fn interpolation_check(p: &FinitePoset, xs: &[usize], ys: &[usize]) -> Result<Option<usize>> {
    if xs.is_empty() || ys.is_empty() {
        return precondition("interpolation needs nonempty X and Y");
    }
    for &x in xs {
        for &y in ys {
            if !p.leq(x, y) {
                return precondition(format!(
                    "X ≤ Y fails at ({}, {})",
                    p.label(x),
                    p.label(y)
                ));
            }
        }
    }
    Ok((0..p.len()).find(|&z| xs.iter().all(|&x| p.leq(x, z)) && ys.iter().all(|&y| p.leq(z, y))))
}

/// Least-indexed `c` with `a ≤ b∨c` and `c ≤ x` for all `x ∈ X`, if any.
pub fn interval_axiom_check(
    s: &FiniteSemilattice,
    a: usize,
    b: usize,
    xs: &[usize],
) -> Result<Option<usize>> {
    if let Some(&x) = xs.iter().find(|&&x| !s.leq(a, s.join(b, x))) {
        return precondition(format!(
            "a ≤ b∨x fails for x = {}",
            s.label(x)
        ));
    }
    Ok((0..s.len()).find(|&c| s.leq(a, s.join(b, c)) && xs.iter().all(|&x| s.leq(c, x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::lattice::FiniteLattice;

    #[test]
    fn interpolation_examples() {
        let c2 = FiniteLattice::chain(2);
        assert_eq!(interpolation_check(c2.poset(), &[0], &[1]).unwrap(), Some(0));
        let b2 = FiniteLattice::boolean(2);
        assert_eq!(interpolation_check(b2.poset(), &[1, 2], &[3]).unwrap(), Some(3));
        let err = interpolation_check(c2.poset(), &[1], &[0]).unwrap_err();
        assert!(err.to_string().contains("(1, 0)"));
    }

    #[test]
    fn interval_axiom_examples() {
        let b2 = FiniteSemilattice::from_lattice(&FiniteLattice::boolean(2));
        // a = top, b = atom {0}, X = {atom {1}}.
        assert_eq!(interval_axiom_check(&b2, 3, 1, &[2]).unwrap(), Some(2));
        // a ≤ b: c = 0.
        assert_eq!(interval_axiom_check(&b2, 1, 1, &[1]).unwrap(), Some(0));
        assert!(interval_axiom_check(&b2, 3, 1, &[1]).is_err());
    }
}
