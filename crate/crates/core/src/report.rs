//! Command reports, refutation witnesses and the witness re-validator.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bits::BitRelation;
use crate::error::{invalid, Error, Result};
use crate::format::{to_lattice, to_partial, ChainPairSpec, Document, Structure};
use crate::omega::OmegaViolation;
use crate::order::lattice::FiniteLattice;
use crate::partial::conlat::ConBound;
use crate::partial::congruence::is_congruence;
use crate::partial::hom::{hom_violation, PartialLatticeHom};
use crate::partial::lattice::FinitePartialLattice;
use crate::partial::conlat::ConLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    Error,
}

/// A self-contained counterexample. Structures are embedded as documents
/// in the input format; elements are named by label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `x∧(y∨z) ≠ (x∧y)∨(x∧z)`.
    Distributivity { lattice: Value, elements: [String; 3] },
    /// `o ≤ a ≤ i` and `a` has no complement in `[o, i]`.
    RelativeComplement { lattice: Value, elements: [String; 3] },
    /// `a∨(x∧y) ≠ (a∨x)∧(a∨y)`.
    Mid { lattice: Value, elements: [String; 3] },
    /// A congruence `a` of the source of `f` with `(Res f)(Con f)(a) ≠ a`.
    Cep { source: Value, target: Value, map: Vec<String>, congruence: Vec<(String, String)> },
    /// `X ≤ Y` in the poset and nothing lies between.
    Interpolation { poset: Value, xs: Vec<String>, ys: Vec<String> },
    /// A measure axiom fails for the chain pair at the given triples.
    MeasureAxiom { chain_pair: Value, violation: OmegaViolation },
    /// A hom `w: M3 → L` into a simple lattice, with `w(a) = w(c)`, whose
    /// `Con w` isolates zero.
    CubeLifting { lattice: Value, w: Vec<String> },
    /// A failure reported by an internal self-check, not independently
    /// re-checkable.
    Message { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub timing_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// What a command produced before it is wrapped into a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub verdict: Verdict,
    pub details: Value,
    pub witnesses: Vec<Witness>,
}

impl Outcome {
    pub fn verified(details: Value) -> Self {
        Outcome { verdict: Verdict::Verified, details, witnesses: Vec::new() }
    }

    pub fn refuted(details: Value, witness: Witness) -> Self {
        Outcome { verdict: Verdict::Refuted, details, witnesses: vec![witness] }
    }
}

/// SHA-256 over the length-prefixed parts.
pub fn inputs_digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn from_result(
        command: impl Into<String>,
        inputs_digest: String,
        seed: Option<u64>,
        timing_ms: u64,
        result: Result<Outcome>,
    ) -> Report {
        let (verdict, witnesses, details, error) = match result {
            Ok(o) => (o.verdict, o.witnesses, o.details, None),
            Err(Error::Refuted(m)) => {
                (Verdict::Refuted, vec![Witness::Message { text: m.clone() }], Value::Null, Some(m))
            }
            Err(e) => {
                let class = match e {
                    Error::Resource(_) => "resource",
                    Error::Precondition(_) => "precondition",
                    _ => "invalid",
                };
                (Verdict::Error, Vec::new(), json!({ "class": class }), Some(e.to_string()))
            }
        };
        Report { command: command.into(), inputs_digest, verdict, witnesses, details, error, timing_ms, seed }
    }

    /// 0 verified, 1 refuted, 2 invalid input or failed precondition,
    /// 3 resource bound.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Verified => 0,
            Verdict::Refuted => 1,
            Verdict::Error => {
                if self.details.get("class").and_then(Value::as_str) == Some("resource") {
                    3
                } else {
                    2
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Error => "error",
        };
        let _ = writeln!(out, "{}: {verdict}", self.command);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  {e}");
        }
        render_value(&mut out, &self.details, 1);
        for w in &self.witnesses {
            let _ = writeln!(out, "  witness: {}", describe(w));
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "  seed: {s}");
        }
        let _ = writeln!(out, "  digest: {}", &self.inputs_digest);
        let _ = writeln!(out, "  time: {} ms", self.timing_ms);
        out
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, depth + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for i in items {
                            let _ = writeln!(out, "{pad}  - {i}");
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", plain(x));
                    }
                }
            }
        }
        Value::Null => {}
        other => {
            let _ = writeln!(out, "{pad}{}", plain(other));
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn describe(w: &Witness) -> String {
    match w {
        Witness::Distributivity { elements: [x, y, z], .. } => {
            format!("{x}∧({y}∨{z}) ≠ ({x}∧{y})∨({x}∧{z})")
        }
        Witness::RelativeComplement { elements: [o, a, i], .. } => {
            format!("{a} has no complement in [{o}, {i}]")
        }
        Witness::Mid { elements: [a, x, y], .. } => format!("{a}∨({x}∧{y}) ≠ ({a}∨{x})∧({a}∨{y})"),
        Witness::Cep { congruence, .. } => {
            let pairs: Vec<String> = congruence.iter().map(|(x, y)| format!("{x}≤{y}")).collect();
            format!("congruence generated by {{{}}} does not extend", pairs.join(", "))
        }
        Witness::Interpolation { xs, ys, .. } => {
            format!("nothing between {{{}}} and {{{}}}", xs.join(", "), ys.join(", "))
        }
        Witness::MeasureAxiom { violation, .. } => violation.to_string(),
        Witness::CubeLifting { w, .. } => format!("lifting w = [{}]", w.join(", ")),
        Witness::Message { text } => text.clone(),
    }
}

fn load(v: &Value) -> Result<Structure> {
    let d = Document::parse(&v.to_string(), ConBound::default())?;
    d.main().map(|(_, s)| s.clone())
}

fn elems<const N: usize>(l: &FiniteLattice, names: &[String; N]) -> Result<[usize; N]> {
    let mut out = [0; N];
    for (o, n) in out.iter_mut().zip(names) {
        *o = l.poset().index_of(n).ok_or_else(|| Error::Invalid(format!("unknown element {n:?}")))?;
    }
    Ok(out)
}

fn indices(p: &FinitePartialLattice, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| p.poset().index_of(n).ok_or_else(|| Error::Invalid(format!("unknown element {n:?}"))))
        .collect()
}

fn confirm(holds: bool, what: &str) -> Result<String> {
    if holds {
        Ok(what.to_string())
    } else {
        invalid(format!("witness does not re-validate: {what}"))
    }
}

/// Recomputes a witness from scratch. `Ok` carries a one-line description
/// of what was confirmed; a witness that does not hold is `Invalid`.
pub fn verify_witness(w: &Witness) -> Result<String> {
    match w {
        Witness::Distributivity { lattice, elements } => {
            let l = to_lattice(&load(lattice)?)?;
            let [x, y, z] = elems(&l, elements)?;
            confirm(l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)), &describe(w))
        }
        Witness::RelativeComplement { lattice, elements } => {
            let l = to_lattice(&load(lattice)?)?;
            let [o, a, i] = elems(&l, elements)?;
            let ordered = l.leq(o, a) && l.leq(a, i);
            let none = !(0..l.len()).any(|x| l.meet(a, x) == o && l.join(a, x) == i);
            confirm(ordered && none, &describe(w))
        }
        Witness::Mid { lattice, elements } => {
            let l = to_lattice(&load(lattice)?)?;
            let [a, x, y] = elems(&l, elements)?;
            confirm(l.join(a, l.meet(x, y)) != l.meet(l.join(a, x), l.join(a, y)), &describe(w))
        }
        Witness::Cep { source, target, map, congruence } => {
            let s = to_partial(&load(source)?)?;
            let t = to_partial(&load(target)?)?;
            let m = indices(&t, map)?;
            if let Some(why) = hom_violation(&s, &t, &m) {
                return invalid(format!("map is not a homomorphism: {why}"));
            }
            let pairs: Vec<(String, String)> = congruence.clone();
            let mut rel = BitRelation::from_fn(s.len(), |x, y| s.leq(x, y));
            for (x, y) in &pairs {
                let (x, y) = (indices(&s, &[x.clone()])?[0], indices(&s, &[y.clone()])?[0]);
                rel.set(x, y);
            }
            if !is_congruence(&s, &rel) {
                return invalid("listed pairs are not a congruence");
            }
            let f = PartialLatticeHom::new(s.clone(), t.clone(), m)?;
            confirm(f.res_f(&f.con_f(&rel)) != rel, &describe(w))
        }
        Witness::Interpolation { poset, xs, ys } => {
            let p = to_partial(&load(poset)?)?;
            let (x, y) = (indices(&p, xs)?, indices(&p, ys)?);
            let below = x.iter().all(|&a| y.iter().all(|&b| p.leq(a, b)));
            let gap = !(0..p.len()).any(|z| x.iter().all(|&a| p.leq(a, z)) && y.iter().all(|&b| p.leq(z, b)));
            confirm(!x.is_empty() && !y.is_empty() && below && gap, &describe(w))
        }
        Witness::MeasureAxiom { chain_pair, violation } => {
            let holds = match load(chain_pair)? {
                Structure::ChainPair(ChainPairSpec::Finite(cp)) => violation.recheck(&cp)?,
                Structure::ChainPair(ChainPairSpec::Dyadic(cp)) => violation.recheck(&cp)?,
                other => return invalid(format!("expected a chain pair, found a {}", other.kind())),
            };
            confirm(holds, &describe(w))
        }
        Witness::CubeLifting { lattice, w: map } => {
            let l = to_partial(&load(lattice)?)?;
            let m3 = std::sync::Arc::new(FinitePartialLattice::from_lattice(FiniteLattice::m3()));
            let wm = indices(&l, map)?;
            let h = PartialLatticeHom::new(m3, l.clone(), wm.clone())?;
            let con = ConLattice::new(&l, ConBound::default())?;
            let simple = con.len() == 2;
            let forced = wm[1] == wm[3];
            let isolating = h.con_f(&BitRelation::full(5)) != *con.relation(con.zero());
            confirm(simple && forced && isolating, &describe(w))
        }
        Witness::Message { text } => invalid(format!("message witness cannot be re-validated: {text}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::lattice_json;

    #[test]
    fn m3_witnesses_revalidate() {
        let l = FiniteLattice::m3();
        let doc = lattice_json(&l);
        let (x, y, z) = l.distributivity_witness().unwrap();
        let name = |i: usize| l.label(i).to_string();
        let w = Witness::Distributivity { lattice: doc.clone(), elements: [name(x), name(y), name(z)] };
        assert!(verify_witness(&w).is_ok());
        let bogus = Witness::Distributivity { lattice: doc.clone(), elements: [name(0), name(1), name(2)] };
        assert!(matches!(verify_witness(&bogus), Err(Error::Invalid(_))));
        let n5 = FiniteLattice::n5();
        let (o, a, i) = n5.relative_complement_witness().unwrap();
        let rc = Witness::RelativeComplement {
            lattice: lattice_json(&n5),
            elements: [n5.label(o).into(), n5.label(a).into(), n5.label(i).into()],
        };
        assert!(verify_witness(&rc).is_ok());
    }

    #[test]
    fn exit_codes() {
        let r = |res| Report::from_result("t", String::new(), None, 0, res);
        assert_eq!(r(Ok(Outcome::verified(Value::Null))).exit_code(), 0);
        let refuted = r(Err(Error::Refuted("x".into())));
        assert_eq!(refuted.exit_code(), 1);
        assert!(!refuted.witnesses.is_empty());
        assert_eq!(r(Err(Error::Invalid("x".into()))).exit_code(), 2);
        assert_eq!(r(Err(Error::Precondition("x".into()))).exit_code(), 2);
        assert_eq!(r(Err(Error::Resource("x".into()))).exit_code(), 3);
    }

    #[test]
    fn report_json_round_trip() {
        let rep = Report::from_result(
            "check distributive",
            inputs_digest([b"a".as_slice(), b"b".as_slice()]),
            Some(7),
            3,
            Ok(Outcome::refuted(json!({"n": 5}), Witness::Message { text: "m".into() })),
        );
        let back: Report = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
        assert_ne!(inputs_digest([b"ab".as_slice()]), inputs_digest([b"a".as_slice(), b"b".as_slice()]));
    }
}
