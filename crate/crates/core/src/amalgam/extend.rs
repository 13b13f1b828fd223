//! Extending ⟨∨,0⟩-homomorphisms along cofinal subsemilattices.

use crate::error::{invalid, precondition, Result};
use crate::order::lattice::FiniteLattice;
use crate::order::semilattice::FiniteSemilattice;

/// Checks that `a` is a ⟨∨,0⟩-subsemilattice of `b` and that `f` (aligned
/// with `a`) is a ⟨∨,0⟩-homomorphism into `s`.
fn check_sub_and_hom(b: &FiniteSemilattice, a: &[usize], f: &[usize], s: &FiniteLattice) -> Result<()> {
    if a.len() != f.len() {
        return invalid("A and f differ in length");
    }
    if a.iter().any(|&x| x >= b.len()) || f.iter().any(|&v| v >= s.len()) {
        return invalid("element out of range");
    }
    let pos = |x: usize| a.iter().position(|&y| y == x);
    let Some(z) = pos(b.zero()) else {
        return invalid("A does not contain the zero of B");
    };
    if f[z] != s.bottom() {
        return invalid("f does not send zero to zero");
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let Some(k) = pos(b.join(a[i], a[j])) else {
                return invalid(format!("A is not closed under the join of {} and {}", b.label(a[i]), b.label(a[j])));
            };
            if f[k] != s.join(f[i], f[j]) {
                return invalid(format!("f does not preserve the join of {} and {}", b.label(a[i]), b.label(a[j])));
            }
        }
    }
    Ok(())
}

/// `g(x) = ⋀{f(a) : a ∈ A, x ≤ a}`, with the empty meet read as the top of
/// `S`. No hypotheses are checked.
pub fn meet_formula(b: &FiniteSemilattice, a: &[usize], f: &[usize], s: &FiniteLattice) -> Vec<usize> {
    (0..b.len())
        .map(|x| s.meet_all(a.iter().zip(f).filter(|&(&y, _)| b.leq(x, y)).map(|(_, &v)| v)))
        .collect()
}

/// First `(x, y)` at which `g: B → S` fails to preserve `∨`, or `(0, 0)`
/// when it fails to preserve zero.
pub fn join_zero_violation(b: &FiniteSemilattice, s: &FiniteLattice, g: &[usize]) -> Option<(usize, usize)> {
    if g[b.zero()] != s.bottom() {
        return Some((b.zero(), b.zero()));
    }
    for x in 0..b.len() {
        for y in x + 1..b.len() {
            if g[b.join(x, y)] != s.join(g[x], g[y]) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Extends `f: A → S` to `B` by the meet formula. `A` must be cofinal in
/// `B` and `S` distributive.
pub fn extend_hom_cofinal(b: &FiniteSemilattice, a: &[usize], f: &[usize], s: &FiniteLattice) -> Result<Vec<usize>> {
    check_sub_and_hom(b, a, f, s)?;
    if let Some(x) = (0..b.len()).find(|&x| !a.iter().any(|&y| b.leq(x, y))) {
        return precondition(format!("A is not cofinal: nothing in A lies above {}", b.label(x)));
    }
    if let Some((x, y, z)) = s.distributivity_witness() {
        return precondition(format!(
            "S is not distributive: {} ∧ ({} ∨ {}) differs from ({} ∧ {}) ∨ ({} ∧ {})",
            s.label(x),
            s.label(y),
            s.label(z),
            s.label(x),
            s.label(y),
            s.label(x),
            s.label(z)
        ));
    }
    Ok(meet_formula(b, a, f, s))
}

/// Monogenic extension `B = A[e] = A ∪ {x ∨ e : x ∈ A}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monogenic {
    /// For each `(x_i, y_i) ∈ A²` with `x_i ≤ y_i ∨ e`, an element `b_i`
    /// with `f(x_i) ≤ f(y_i) ∨ b_i` and `b_i ≤ f(z)` for all `z ∈ A` above `e`.
    pub witnesses: Vec<((usize, usize), usize)>,
    /// The image of `e`, between every `b_i` and every `f(z)`.
    pub image: usize,
    pub g: Vec<usize>,
}

/// Extends `f` to `A[e]` by choosing the image of `e` as the meet of `f`
/// over the elements of `A` above `e`, then `g(x ∨ e) = f(x) ∨ ē`.
pub fn monogenic_extension(
    b: &FiniteSemilattice,
    a: &[usize],
    f: &[usize],
    s: &FiniteLattice,
    e: usize,
) -> Result<Monogenic> {
    check_sub_and_hom(b, a, f, s)?;
    if e >= b.len() {
        return invalid("generator out of range");
    }
    let in_a = |x: usize| a.iter().position(|&y| y == x);
    for x in 0..b.len() {
        if in_a(x).is_none() && !a.iter().any(|&y| b.join(y, e) == x) {
            return invalid(format!("B is not generated by A and {}: {} is missing", b.label(e), b.label(x)));
        }
    }
    let above: Vec<usize> = (0..a.len()).filter(|&j| b.leq(e, a[j])).collect();
    if above.is_empty() {
        return precondition(format!("A is not cofinal: nothing in A lies above {}", b.label(e)));
    }
    let fz: Vec<usize> = above.iter().map(|&j| f[j]).collect();
    let meet_fz = s.meet_all(fz.iter().copied());
    let mut witnesses = Vec::new();
    for i in 0..a.len() {
        for j in 0..a.len() {
            if !b.leq(a[i], b.join(a[j], e)) {
                continue;
            }
            // Interval axiom: some c ≤ every f(z) with f(x_i) ≤ f(y_i) ∨ c.
            let c = (0..s.len())
                .filter(|&c| s.leq(f[i], s.join(f[j], c)) && fz.iter().all(|&z| s.leq(c, z)))
                .min_by_key(|&c| (0..s.len()).filter(|&d| s.leq(d, c)).count());
            let Some(c) = c else {
                return precondition(format!(
                    "interval axiom fails in S for ({}, {})",
                    b.label(a[i]),
                    b.label(a[j])
                ));
            };
            witnesses.push(((a[i], a[j]), c));
        }
    }
    // Interpolation between the b_i and the f(z_j); the meet of the upper
    // family is the canonical choice.
    let image = meet_fz;
    if let Some(&((x, y), _)) = witnesses.iter().find(|&&(_, c)| !s.leq(c, image)) {
        return precondition(format!(
            "no interpolant: witness for ({}, {}) is not below the meet",
            b.label(x),
            b.label(y)
        ));
    }
    let mut g: Vec<Option<usize>> = vec![None; b.len()];
    for (k, &x) in a.iter().enumerate() {
        g[x] = Some(f[k]);
    }
    for (k, &x) in a.iter().enumerate() {
        let target = b.join(x, e);
        let v = s.join(f[k], image);
        match g[target] {
            None => g[target] = Some(v),
            Some(w) if w != v => {
                return precondition(format!(
                    "g({} ∨ {}) is not well defined",
                    b.label(x),
                    b.label(e)
                ));
            }
            _ => {}
        }
    }
    Ok(Monogenic { witnesses, image, g: g.into_iter().map(Option::unwrap).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3() -> FiniteSemilattice {
        FiniteSemilattice::from_lattice(&FiniteLattice::boolean(3))
    }

    #[test]
    fn identity_extension() {
        let s = FiniteLattice::chain(3);
        let b = FiniteSemilattice::from_lattice(&s);
        let g = extend_hom_cofinal(&b, &[0, 1, 2], &[0, 1, 2], &s).unwrap();
        assert_eq!(g, vec![0, 1, 2]);
    }

    #[test]
    fn monogenic_agrees_with_meet_formula() {
        // A = {0, {0}, {0,1,2}} inside the 8-element Boolean B, e = {1}.
        let b = FiniteSemilattice::from_lattice(&FiniteLattice::boolean(2));
        let s = FiniteLattice::chain(3);
        let a = [0, 1, 3];
        let f = [0, 1, 2];
        let m = monogenic_extension(&b, &a, &f, &s, 2).unwrap();
        let g = extend_hom_cofinal(&b, &a, &f, &s).unwrap();
        assert_eq!(m.g, g);
        assert_eq!(join_zero_violation(&b, &s, &g), None);
    }

    #[test]
    fn m3_rejected() {
        let s = FiniteLattice::m3();
        let b = b3();
        let err = extend_hom_cofinal(&b, &[0, 7], &[0, 4], &s).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(ref m) if m.contains("distributive")));
    }

    #[test]
    fn non_cofinal_rejected() {
        let s = FiniteLattice::chain(2);
        let err = extend_hom_cofinal(&b3(), &[0, 1], &[0, 1], &s).unwrap_err();
        assert!(matches!(err, crate::Error::Precondition(ref m) if m.contains("cofinal")));
    }
}
