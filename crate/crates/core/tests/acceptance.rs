//! Acceptance criteria. Each line runs the full-scale suite and a small
//! oracle computed here from first principles, then checks the time limit.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use latwb_core::amalgam::extend::meet_formula;
use latwb_core::amalgam::{pushout, universal_property_check, TruncatedSquare};
use latwb_core::free::{fl_leq, Term};
use latwb_core::omega::IntervalSet;
use latwb_core::order::galois::CompleteJoinHom;
use latwb_core::order::lattice::FiniteLattice;
use latwb_core::order::poset::FinitePoset;
use latwb_core::order::semilattice::FiniteSemilattice;
use latwb_core::partial::conlat::{ConBound, ConLattice};
use latwb_core::partial::lattice::FinitePartialLattice;
use latwb_core::report::Verdict;
use latwb_core::suite::{run_suite, Scale};

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: usize,
    title: &'static str,
    suite: &'static str,
    limit: Duration,
    oracle: Check,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Quasi-orders containing the order of `l` and compatible with `∨` and `∧`,
/// found by trying every set of extra pairs.
fn brute_congruences(l: &FiniteLattice) -> Vec<Vec<bool>> {
    let n = l.len();
    let extra: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !l.leq(x, y)).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << extra.len() {
        let mut r = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                r[x * n + y] = l.leq(x, y);
            }
        }
        for (b, &(x, y)) in extra.iter().enumerate() {
            if mask >> b & 1 == 1 {
                r[x * n + y] = true;
            }
        }
        let transitive =
            (0..n).all(|x| (0..n).all(|y| !r[x * n + y] || (0..n).all(|z| !r[y * n + z] || r[x * n + z])));
        let compatible = (0..n).all(|x| {
            (0..n).all(|y| {
                !r[x * n + y]
                    || (0..n).all(|z| r[l.join(x, z) * n + l.join(y, z)] && r[l.meet(x, z) * n + l.meet(y, z)])
            })
        });
        if transitive && compatible {
            out.push(r);
        }
    }
    out
}

fn small_lattices() -> Vec<(&'static str, FiniteLattice)> {
    vec![
        ("chain 3", FiniteLattice::chain(3)),
        ("chain 4", FiniteLattice::chain(4)),
        ("2^2", FiniteLattice::boolean(2)),
        ("M3", FiniteLattice::m3()),
        ("N5", FiniteLattice::n5()),
    ]
}

fn oracle_closure() -> Result<String, String> {
    let mut counts = Vec::new();
    for (name, l) in small_lattices() {
        let brute = brute_congruences(&l);
        let p = FinitePartialLattice::from_lattice(l.clone());
        let con = ConLattice::new(&p, ConBound::default()).map_err(|e| e.to_string())?;
        ensure(con.len() == brute.len(), format!("{name}: {} congruences, brute force {}", con.len(), brute.len()))?;
        for r in &brute {
            let found = con.relations().iter().any(|c| {
                (0..l.len()).all(|x| (0..l.len()).all(|y| c.get(x, y) == r[x * l.len() + y]))
            });
            ensure(found, format!("{name}: a brute-force congruence is missing"))?;
        }
        counts.push(format!("{name}={}", brute.len()));
    }
    // Lattice congruences of these lattices, counted by hand.
    ensure(counts.join(" ") == "chain 3=4 chain 4=8 2^2=4 M3=2 N5=5", format!("counts {counts:?}"))?;
    Ok(counts.join(", "))
}

fn oracle_distributive() -> Result<String, String> {
    for (name, l) in small_lattices() {
        let cons = brute_congruences(&l);
        let sub = |a: &Vec<bool>, b: &Vec<bool>| a.iter().zip(b).all(|(x, y)| !x || *y);
        let meet = |a: &Vec<bool>, b: &Vec<bool>| -> Vec<bool> { a.iter().zip(b).map(|(x, y)| *x && *y).collect() };
        let join = |a: &Vec<bool>, b: &Vec<bool>| -> Vec<bool> {
            cons.iter()
                .filter(|c| sub(a, c) && sub(b, c))
                .min_by_key(|c| c.iter().filter(|x| **x).count())
                .cloned()
                .unwrap()
        };
        for a in &cons {
            for b in &cons {
                ensure(cons.contains(&meet(a, b)), format!("{name}: congruences not closed under ∩"))?;
                for c in &cons {
                    let lhs = meet(a, &join(b, c));
                    let rhs = join(&meet(a, b), &meet(a, c));
                    ensure(lhs == rhs, format!("{name}: Con is not distributive"))?;
                }
            }
        }
    }
    Ok("Con of chain 3, chain 4, 2^2, M3, N5 distributive by brute force".into())
}

fn oracle_duality() -> Result<String, String> {
    let a = Arc::new(FiniteLattice::chain(3));
    let b = Arc::new(FiniteLattice::boolean(2));
    let mut checked = 0;
    // Every monotone map from the 3-chain fixing 0 preserves all joins.
    for m1 in 0..4 {
        for m2 in 0..4 {
            if !b.leq(m1, m2) {
                continue;
            }
            let map = vec![0, m1, m2];
            let f = CompleteJoinHom::new(a.clone(), b.clone(), map.clone()).map_err(|e| e.to_string())?;
            let g = f.upper_adjoint();
            for y in 0..b.len() {
                // g(y) = ⋁{x : f(x) ≤ y}
                let want = (0..a.len()).filter(|&x| b.leq(map[x], y)).max().unwrap();
                ensure(g.map()[y] == want, format!("upper adjoint of {map:?} at {y}"))?;
            }
            checked += 1;
        }
    }
    ensure(checked == 9, format!("{checked} maps"))?;
    Ok("upper adjoints of 9 join homs 3-chain → 2^2 match ⋁{x : f(x) ≤ y}".into())
}

fn oracle_free() -> Result<String, String> {
    let p = FinitePartialLattice::from_poset(FinitePoset::antichain(3)).map_err(|e| e.to_string())?;
    let (x, y, z) = (Term::Gen(0), Term::Gen(1), Term::Gen(2));
    let dist_lhs = Term::meet(x.clone(), Term::join(y.clone(), z.clone()));
    let dist_rhs = Term::join(Term::meet(x.clone(), y.clone()), Term::meet(x.clone(), z.clone()));
    // In M3 with x, y, z the atoms: x ∧ (y ∨ z) = x but (x ∧ y) ∨ (x ∧ z) = 0.
    let m3 = FiniteLattice::m3();
    ensure(m3.meet(1, m3.join(2, 3)) == 1 && m3.join(m3.meet(1, 2), m3.meet(1, 3)) == 0, "M3 arithmetic")?;
    let leq = |s: &Term, t: &Term| fl_leq(&p, s, t).map_err(|e| e.to_string());
    ensure(!leq(&dist_lhs, &dist_rhs)?, "free order proves distributivity")?;
    ensure(leq(&dist_rhs, &dist_lhs)?, "free order misses the distributive inequality")?;
    ensure(!leq(&Term::meet(x.clone(), y.clone()), &z)?, "x ∧ y ≤ z")?;
    ensure(leq(&Term::meet(x.clone(), y.clone()), &Term::join(x, z))?, "x ∧ y ≤ x ∨ z")?;
    Ok("distributive law refuted in M3 and by the free order".into())
}

fn oracle_pushout() -> Result<String, String> {
    let one = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(1)));
    let two = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(2)));
    let sq = TruncatedSquare::new(one, two.clone(), two, vec![0], vec![0]).map_err(|e| e.to_string())?;
    let po = pushout(&sq).map_err(|e| e.to_string())?;
    let t = FinitePartialLattice::from_lattice(FiniteLattice::chain(3));
    let rep = universal_property_check(&sq, &po, &t).map_err(|e| e.to_string())?;
    // Homs 2 → 3 are monotone pairs; with a shared image of 0 the count is
    // Σ_v (3 − v)² = 9 + 4 + 1.
    let hand: usize = (0..3).map(|v| (3 - v) * (3 - v)).sum();
    ensure(rep.commuting_pairs == hand && rep.homs_from_r == hand, format!("{rep:?} vs {hand}"))?;
    Ok(format!("2 ⊔_1 2 into the 3-chain: {hand} mediating homs"))
}

fn oracle_claims() -> Result<String, String> {
    let one = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(1)));
    let two = Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::chain(2)));
    let sq = TruncatedSquare::new(one, two.clone(), two, vec![0], vec![0]).map_err(|e| e.to_string())?;
    let po = pushout(&sq).map_err(|e| e.to_string())?;
    let r = &po.r;
    let n = r.len();
    // Congruences of R by brute force against its defined operations.
    let extra: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !r.leq(x, y)).collect();
    let mut cons: Vec<Vec<bool>> = Vec::new();
    for mask in 0u32..1 << extra.len() {
        let rel = |x: usize, y: usize| {
            r.leq(x, y) || extra.iter().enumerate().any(|(b, &e)| mask >> b & 1 == 1 && e == (x, y))
        };
        let transitive = (0..n).all(|x| (0..n).all(|y| !rel(x, y) || (0..n).all(|z| !rel(y, z) || rel(x, z))));
        let joins = r.join_rules().iter().all(|(xs, a)| (0..n).all(|t| !xs.iter().all(|&x| rel(x, t)) || rel(*a, t)));
        let meets = r.meet_rules().iter().all(|(ys, b)| (0..n).all(|s| !ys.iter().all(|&y| rel(s, y)) || rel(s, *b)));
        if transitive && joins && meets {
            cons.push((0..n * n).map(|i| rel(i / n, i % n)).collect());
        }
    }
    // No joins or meets beyond the trivial ones, so every quasi-order
    // containing ≤ counts: 7 on the three-element V.
    ensure(cons.len() == 7, format!("Con R has {} elements, expected 7", cons.len()))?;
    // Con 2 = {≤, full}; C = Con 2 × Con 2 over Con 1 has 4 elements.
    // ψ(a, b) is the least congruence of R collapsing the collapsed sides.
    let mut psis = Vec::new();
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let needs = |c: &Vec<bool>| (!a || c[po.u[1] * n + po.u[0]]) && (!b || c[po.v[1] * n + po.v[0]]);
        let above: Vec<&Vec<bool>> = cons.iter().filter(|c| needs(c)).collect();
        let least = above
            .iter()
            .find(|c| above.iter().all(|d| c.iter().zip(d.iter()).all(|(x, y)| !x || *y)))
            .ok_or("no least congruence above a pair")?;
        // φ∘ψ = id: restricting back recovers (a, b).
        ensure(least[po.u[1] * n + po.u[0]] == a && least[po.v[1] * n + po.v[0]] == b, "φ∘ψ ≠ id")?;
        psis.push((*least).clone());
    }
    ensure((0..4).all(|i| (i + 1..4).all(|j| psis[i] != psis[j])), "ψ is not injective")?;
    ensure(psis[3].iter().all(|x| *x), "ψ(1, 1) is not the full relation")?;
    Ok("on 2 ⊔_1 2: Con R has 7 elements, ψ embeds C (4 elements) with φ∘ψ = id and ψ(1,1) = 1".into())
}

fn oracle_extension() -> Result<String, String> {
    let b2 = FiniteLattice::boolean(2);
    let b = FiniteSemilattice::from_lattice(&b2);
    let s = FiniteLattice::chain(3);
    // A = {0, {0,1}} is cofinal in 2^2; f sends the top to the middle of S.
    let (a, f) = (vec![0, 3], vec![0, 1]);
    let g = meet_formula(&b, &a, &f, &s);
    let hand: Vec<usize> = (0..4)
        .map(|x| a.iter().zip(&f).filter(|&(&y, _)| b2.leq(x, y)).map(|(_, &v)| v).min().unwrap())
        .collect();
    ensure(g == hand && g == vec![0, 1, 1, 1], format!("g = {g:?}, by hand {hand:?}"))?;
    ensure((0..4).all(|x| (0..4).all(|y| g[b2.join(x, y)] == s.join(g[x], g[y]))), "g does not preserve ∨")?;
    Ok("meet formula on 2^2 into the 3-chain matches the hand computation".into())
}

fn oracle_measure() -> Result<String, String> {
    let sets = [
        IntervalSet::range(2, 7),
        IntervalSet::from(5),
        IntervalSet::range(0, 3).union(&IntervalSet::from(9)),
        IntervalSet::empty(),
        IntervalSet::omega(),
    ];
    for x in &sets {
        for y in &sets {
            for n in 0..20 {
                let (a, b) = (x.contains(n), y.contains(n));
                ensure(x.union(y).contains(n) == (a || b), "union")?;
                ensure(x.intersection(y).contains(n) == (a && b), "intersection")?;
                ensure(x.difference(y).contains(n) == (a && !b), "difference")?;
            }
            ensure(x.leq(y) == (0..20).all(|n| !x.contains(n) || y.contains(n)), "inclusion")?;
        }
        ensure((0..20).all(|n| x.complement().contains(n) != x.contains(n)), "complement")?;
    }
    Ok("interval-set operations agree pointwise on 0..20".into())
}

/// ⌊√v⌋ by bisection.
fn isqrt(v: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid.checked_mul(mid).is_some_and(|m| m <= v) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn oracle_obstruction() -> Result<String, String> {
    // a_k = ⌊√2·2^k⌋/2^k, b_k = a_k + 2^-k; q = m/256 on [0, 3].
    let mut worst = 0;
    for m in 0u128..=3 * 256 {
        let k = (1u32..=40)
            .find(|&k| {
                let s = if k == 0 { 0 } else { isqrt(2u128 << (2 * k)) };
                // a_k ≤ q ⇔ s·256 ≤ m·2^k, q ≤ b_k ⇔ m·2^k ≤ (s+1)·256
                let (lhs, mid, rhs) = (s * 256, m << k, (s + 1) * 256);
                !(lhs <= mid && mid <= rhs)
            })
            .ok_or(format!("{m}/256 interpolates up to k = 40"))?;
        worst = worst.max(k);
    }
    ensure(worst <= 64, format!("latest failure at {worst}"))?;
    Ok(format!("every m/256 in [0, 3] fails by k = {worst}"))
}

fn oracle_cube() -> Result<String, String> {
    // Simple lattices: brute force over 2, 2^2, M3, N5.
    let simple: Vec<bool> = [FiniteLattice::chain(2), FiniteLattice::boolean(2), FiniteLattice::m3(), FiniteLattice::n5()]
        .iter()
        .map(|l| brute_congruences(l).len() == 2)
        .collect();
    ensure(simple == vec![true, false, true, false], format!("simplicity {simple:?}"))?;
    Ok("2 and M3 simple, 2^2 and N5 not".into())
}

fn criteria() -> Vec<Criterion> {
    let c = |id, title, suite, secs, oracle| Criterion { id, title, suite, limit: Duration::from_secs(secs), oracle };
    vec![
        c(1, "congruence closure equals brute-force filtering", "closure-oracle", 60, oracle_closure as Check),
        c(2, "Con of every lattice up to size 7 is distributive", "con-distributive", 300, oracle_distributive),
        c(3, "duality laws for complete homs", "duality", 120, oracle_duality),
        c(4, "free lattice over a partial lattice", "free-lattice", 600, oracle_free),
        c(5, "pushout universal property", "pushout", 600, oracle_pushout),
        c(6, "congruence pairs and the mediating hom", "claims", 600, oracle_claims),
        c(7, "extension by the meet formula", "extension", 300, oracle_extension),
        c(8, "interval algebra and measure axioms", "measure-axioms", 120, oracle_measure),
        c(9, "interpolation obstructions", "obstruction", 60, oracle_obstruction),
        c(10, "no lifting of the truncated cube", "cube", 600, oracle_cube),
    ]
}

fn main() -> ExitCode {
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for cr in criteria() {
        if !only.is_empty() && !only.iter().any(|o| cr.title.contains(o.as_str()) || cr.suite == o) {
            continue;
        }
        let start = Instant::now();
        let oracle = (cr.oracle)();
        let suite = run_suite(cr.suite, 42, Scale::Full);
        let elapsed = start.elapsed();
        let verdict = match (&suite, &oracle) {
            (Ok(o), Ok(_)) if o.verdict == Verdict::Verified && elapsed <= cr.limit => Ok(()),
            (Ok(o), Ok(_)) if o.verdict != Verdict::Verified => Err(format!("suite verdict {:?}", o.verdict)),
            (Ok(_), Ok(_)) => Err(format!("over the {} s limit", cr.limit.as_secs())),
            (Err(e), _) => Err(format!("suite: {e}")),
            (_, Err(e)) => Err(format!("oracle: {e}")),
        };
        let details = suite.as_ref().map(|o| o.details.to_string()).unwrap_or_default();
        match verdict {
            Ok(()) => println!(
                "criterion {:>2} PASS {:>8.2} s / {:>3} s  {}: {}; {}",
                cr.id,
                elapsed.as_secs_f64(),
                cr.limit.as_secs(),
                cr.title,
                oracle.unwrap_or_default(),
                details
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL {:>8.2} s / {:>3} s  {}: {why}; {}",
                    cr.id,
                    elapsed.as_secs_f64(),
                    cr.limit.as_secs(),
                    cr.title,
                    details
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
