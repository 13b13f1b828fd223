//! JSON documents holding named structures.
//!
//! A document is either one structure (`{"kind": ..., ...}`) or
//! `{"structures": {"name": {...}, ...}}`. Elements are strings, orders are
//! pair arrays (closed transitively on load), partial operations are
//! `{"args": [...], "value": ...}` records. Structures refer to each other
//! by name; the names `chain:N`, `boolean:K`, `antichain:N`, `m3` and `n5`
//! are built in.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::amalgam::{MeasuredPartialLattice, TruncatedSquare};
use crate::error::{invalid, Error, Result};
use crate::omega::chain::{dyadic_witness, DyadicMax, OmegaChainPair, Sequence};
use crate::omega::{IntervalSet, Triple};
use crate::order::lattice::FiniteLattice;
use crate::order::poset::FinitePoset;
use crate::order::semilattice::FiniteSemilattice;
use crate::partial::conlat::ConBound;
use crate::partial::hom::hom_violation;
use crate::partial::lattice::FinitePartialLattice;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpRecord {
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValueRecord {
    pub pair: (String, String),
    pub value: String,
}

/// A structure as written in a file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RawStructure {
    Poset {
        elements: Vec<String>,
        #[serde(default)]
        leq: Vec<(String, String)>,
    },
    Lattice {
        elements: Vec<String>,
        #[serde(default)]
        leq: Vec<(String, String)>,
    },
    Semilattice {
        elements: Vec<String>,
        #[serde(default)]
        leq: Vec<(String, String)>,
    },
    PartialLattice {
        elements: Vec<String>,
        #[serde(default)]
        leq: Vec<(String, String)>,
        #[serde(default)]
        joins: Vec<OpRecord>,
        #[serde(default)]
        meets: Vec<OpRecord>,
    },
    Hom {
        source: String,
        target: String,
        map: BTreeMap<String, String>,
    },
    Square {
        k: String,
        p: String,
        q: String,
        f: BTreeMap<String, String>,
        g: BTreeMap<String, String>,
    },
    Measured {
        lattice: String,
        semilattice: String,
        values: Vec<ValueRecord>,
    },
    ChainPair {
        #[serde(default)]
        semilattice: Option<String>,
        #[serde(default)]
        a: Vec<String>,
        #[serde(default)]
        b: Vec<String>,
        #[serde(default)]
        dyadic: Option<u64>,
    },
    Triple {
        value: [IntervalSet; 3],
    },
}

/// A homomorphism between two partial lattices of the document.
#[derive(Clone, Debug)]
pub struct HomSpec {
    pub source: Arc<FinitePartialLattice>,
    pub target: Arc<FinitePartialLattice>,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum ChainPairSpec {
    Finite(OmegaChainPair<FiniteSemilattice>),
    Dyadic(OmegaChainPair<DyadicMax>),
}

#[derive(Clone, Debug)]
pub enum Structure {
    Poset(FinitePoset),
    Lattice(Arc<FiniteLattice>),
    Semilattice(Arc<FiniteSemilattice>),
    PartialLattice(Arc<FinitePartialLattice>),
    Hom(HomSpec),
    Square(TruncatedSquare),
    Measured(MeasuredPartialLattice),
    ChainPair(ChainPairSpec),
    Triple(Triple),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Poset(_) => "poset",
            Structure::Lattice(_) => "lattice",
            Structure::Semilattice(_) => "semilattice",
            Structure::PartialLattice(_) => "partial_lattice",
            Structure::Hom(_) => "hom",
            Structure::Square(_) => "square",
            Structure::Measured(_) => "measured",
            Structure::ChainPair(_) => "chain_pair",
            Structure::Triple(_) => "triple",
        }
    }

    /// Number of elements of the carrier, where there is one.
    pub fn size(&self) -> Option<usize> {
        match self {
            Structure::Poset(p) => Some(p.len()),
            Structure::Lattice(l) => Some(l.len()),
            Structure::Semilattice(s) => Some(s.len()),
            Structure::PartialLattice(p) => Some(p.len()),
            Structure::Hom(h) => Some(h.source.len()),
            Structure::Square(sq) => Some(sq.k.len()),
            Structure::Measured(m) => Some(m.lattice().len()),
            Structure::ChainPair(_) | Structure::Triple(_) => None,
        }
    }
}

fn builtin_lattice(name: &str) -> Option<FiniteLattice> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    match name {
        "m3" => Some(FiniteLattice::m3()),
        "n5" => Some(FiniteLattice::n5()),
        _ => {
            if let Some(n) = num("chain:").filter(|&n| (1..=64).contains(&n)) {
                Some(FiniteLattice::chain(n))
            } else {
                num("boolean:").filter(|&k| k <= 6).map(|k| FiniteLattice::boolean(k as u32))
            }
        }
    }
}

fn builtin_poset(name: &str) -> Option<FinitePoset> {
    name.strip_prefix("antichain:")
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| (1..=64).contains(&n))
        .map(FinitePoset::antichain)
}

/// A loaded document with its structures resolved.
#[derive(Debug)]
pub struct Document {
    raw: BTreeMap<String, RawStructure>,
    resolved: BTreeMap<String, Structure>,
    bound: ConBound,
}

fn index_map(labels: &[String]) -> HashMap<&str, usize> {
    labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
}

fn resolve_label(idx: &HashMap<&str, usize>, label: &str, what: &str) -> Result<usize> {
    idx.get(label).copied().ok_or_else(|| Error::Invalid(format!("unknown element {label:?} in {what}")))
}

fn poset_from(elements: &[String], leq: &[(String, String)]) -> Result<FinitePoset> {
    let idx = index_map(elements);
    let pairs = leq
        .iter()
        .map(|(a, b)| Ok((resolve_label(&idx, a, "leq")?, resolve_label(&idx, b, "leq")?)))
        .collect::<Result<Vec<_>>>()?;
    FinitePoset::new(elements.to_vec(), &pairs)
}

fn ops_from(p: &FinitePoset, ops: &[OpRecord], what: &str) -> Result<Vec<(Vec<usize>, usize)>> {
    let idx = index_map(p.labels());
    ops.iter()
        .map(|r| {
            let args = r.args.iter().map(|a| resolve_label(&idx, a, what)).collect::<Result<Vec<_>>>()?;
            Ok((args, resolve_label(&idx, &r.value, what)?))
        })
        .collect()
}

fn map_from(
    source: &FinitePartialLattice,
    target: &FinitePartialLattice,
    map: &BTreeMap<String, String>,
) -> Result<Vec<usize>> {
    let tidx = index_map(target.poset().labels());
    (0..source.len())
        .map(|x| {
            let l = source.label(x);
            let v = map.get(l).ok_or_else(|| Error::Invalid(format!("map has no image for {l:?}")))?;
            resolve_label(&tidx, v, "map")
        })
        .collect()
}

impl RawStructure {
    /// Names of the structures this one refers to.
    pub fn refs(&self) -> Vec<&str> {
        match self {
            RawStructure::Hom { source, target, .. } => vec![source, target],
            RawStructure::Square { k, p, q, .. } => vec![k, p, q],
            RawStructure::Measured { lattice, semilattice, .. } => vec![lattice, semilattice],
            RawStructure::ChainPair { semilattice: Some(s), .. } => vec![s],
            _ => Vec::new(),
        }
    }
}

fn raw_structures(text: &str) -> Result<BTreeMap<String, RawStructure>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))?;
    if let Some(s) = v.get("structures") {
        serde_json::from_value(s.clone()).map_err(|e| Error::Invalid(format!("structures: {e}")))
    } else {
        let one: RawStructure = serde_json::from_value(v).map_err(|e| Error::Invalid(format!("structure: {e}")))?;
        Ok(BTreeMap::from([("main".to_string(), one)]))
    }
}

/// Schema and table check of every structure in a document. Partial
/// lattices get the full list of offending join/meet entries; other
/// structures report the first error met while resolving them.
pub fn validate_text(text: &str, bound: ConBound) -> Result<Value> {
    let raw = raw_structures(text)?;
    let mut problems = Vec::new();
    for (name, r) in &raw {
        if let RawStructure::PartialLattice { elements, leq, joins, meets } = r {
            let Ok(p) = poset_from(elements, leq) else { continue };
            let (Ok(j), Ok(m)) = (ops_from(&p, joins, "joins"), ops_from(&p, meets, "meets")) else { continue };
            for v in crate::partial::lattice::validate(&p, &j, &m).violations {
                problems.push(json!({ "structure": name, "op": v.op, "args": v.args, "value": v.value, "reason": v.reason }));
            }
        }
    }
    let listing = match Document::parse(text, bound) {
        Ok(d) => d
            .resolved
            .iter()
            .map(|(n, s)| json!({ "name": n, "kind": s.kind(), "size": s.size() }))
            .collect::<Vec<_>>(),
        Err(e) => {
            if problems.is_empty() {
                return Err(e);
            }
            Vec::new()
        }
    };
    if !problems.is_empty() {
        return invalid(format!(
            "{} invalid table entries: {}",
            problems.len(),
            serde_json::to_string(&problems).expect("json")
        ));
    }
    Ok(json!({ "structures": listing }))
}

impl Document {
    /// The named structure with everything it depends on, as a standalone
    /// document whose `main` is that structure.
    pub fn isolate(&self, name: &str) -> Result<Value> {
        let Some(root) = self.raw.get(name) else {
            return match self.lookup(name)? {
                Structure::Lattice(l) => Ok(lattice_json(&l)),
                Structure::Poset(p) => Ok(json!({ "kind": "poset", "elements": p.labels(), "leq": pairs_json(&p) })),
                other => invalid(format!("cannot isolate a built-in {}", other.kind())),
            };
        };
        let mut out = serde_json::Map::new();
        let mut stack: Vec<&str> = root.refs();
        while let Some(n) = stack.pop() {
            if n == "main" && name != "main" {
                return invalid("a dependency is itself called \"main\"");
            }
            if out.contains_key(n) {
                continue;
            }
            match self.raw.get(n) {
                Some(r) => {
                    out.insert(n.to_string(), serde_json::to_value(r).expect("json"));
                    stack.extend(r.refs());
                }
                None => {
                    if n != name {
                        out.insert(n.to_string(), self.isolate(n)?);
                    }
                }
            }
        }
        out.insert("main".to_string(), serde_json::to_value(root).expect("json"));
        Ok(json!({ "structures": out }))
    }

    pub fn parse(text: &str, bound: ConBound) -> Result<Self> {
        let raw = raw_structures(text)?;
        let mut doc = Document { raw, resolved: BTreeMap::new(), bound };
        let names: Vec<String> = doc.raw.keys().cloned().collect();
        for name in names {
            doc.resolve(&name, 0)?;
        }
        Ok(doc)
    }

    pub fn raw_structure(&self, name: &str) -> Result<RawStructure> {
        self.raw.get(name).cloned().ok_or_else(|| Error::Invalid(format!("no structure named {name:?} in the file")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.resolved.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&Structure> {
        self.resolved.get(name)
    }

    /// The only structure, or the one called `main`.
    pub fn main(&self) -> Result<(&str, &Structure)> {
        if let Some((k, s)) = self.resolved.get_key_value("main") {
            return Ok((k, s));
        }
        if self.resolved.len() == 1 {
            let (k, s) = self.resolved.iter().next().expect("one entry");
            return Ok((k, s));
        }
        invalid("document holds several structures; name one")
    }

    pub fn pick(&self, name: Option<&str>) -> Result<(String, Structure)> {
        match name {
            Some(n) => self.lookup(n).map(|s| (n.to_string(), s)),
            None => self.main().map(|(k, s)| (k.to_string(), s.clone())),
        }
    }

    /// A named or built-in structure.
    pub fn lookup(&self, name: &str) -> Result<Structure> {
        if let Some(s) = self.resolved.get(name) {
            return Ok(s.clone());
        }
        if let Some(l) = builtin_lattice(name) {
            return Ok(Structure::Lattice(Arc::new(l)));
        }
        if let Some(p) = builtin_poset(name) {
            return Ok(Structure::Poset(p));
        }
        invalid(format!("no structure named {name:?}"))
    }

    fn resolve(&mut self, name: &str, depth: usize) -> Result<Structure> {
        if let Some(s) = self.resolved.get(name) {
            return Ok(s.clone());
        }
        let Some(raw) = self.raw.get(name).cloned() else {
            return self.lookup(name);
        };
        if depth > self.raw.len() {
            return invalid(format!("reference cycle through {name:?}"));
        }
        let ctx = |e: Error| match e {
            Error::Invalid(m) => Error::Invalid(format!("{name}: {m}")),
            other => other,
        };
        let s = self.build(raw, depth).map_err(ctx)?;
        self.resolved.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn partial_ref(&mut self, name: &str, depth: usize) -> Result<Arc<FinitePartialLattice>> {
        to_partial(&self.resolve(name, depth + 1)?)
    }

    fn semilattice_ref(&mut self, name: &str, depth: usize) -> Result<Arc<FiniteSemilattice>> {
        to_semilattice(&self.resolve(name, depth + 1)?)
    }

    fn build(&mut self, raw: RawStructure, depth: usize) -> Result<Structure> {
        Ok(match raw {
            RawStructure::Poset { elements, leq } => Structure::Poset(poset_from(&elements, &leq)?),
            RawStructure::Lattice { elements, leq } => {
                Structure::Lattice(Arc::new(FiniteLattice::from_poset(poset_from(&elements, &leq)?)?))
            }
            RawStructure::Semilattice { elements, leq } => {
                let l = FiniteLattice::from_poset(poset_from(&elements, &leq)?)
                    .map_err(|e| Error::Invalid(format!("not a finite ⟨∨,0⟩-semilattice: {e}")))?;
                Structure::Semilattice(Arc::new(FiniteSemilattice::from_lattice(&l)))
            }
            RawStructure::PartialLattice { elements, leq, joins, meets } => {
                let p = poset_from(&elements, &leq)?;
                let j = ops_from(&p, &joins, "joins")?;
                let m = ops_from(&p, &meets, "meets")?;
                Structure::PartialLattice(Arc::new(FinitePartialLattice::new(p, j, m)?))
            }
            RawStructure::Hom { source, target, map } => {
                let s = self.partial_ref(&source, depth)?;
                let t = self.partial_ref(&target, depth)?;
                let m = map_from(&s, &t, &map)?;
                if let Some(why) = hom_violation(&s, &t, &m) {
                    return invalid(format!("not a homomorphism: {why}"));
                }
                Structure::Hom(HomSpec { source: s, target: t, map: m })
            }
            RawStructure::Square { k, p, q, f, g } => {
                let k = self.partial_ref(&k, depth)?;
                let p = self.partial_ref(&p, depth)?;
                let q = self.partial_ref(&q, depth)?;
                let fm = map_from(&k, &p, &f)?;
                let gm = map_from(&k, &q, &g)?;
                Structure::Square(TruncatedSquare::new(k, p, q, fm, gm)?)
            }
            RawStructure::Measured { lattice, semilattice, values } => {
                let p = self.partial_ref(&lattice, depth)?;
                let s = self.semilattice_ref(&semilattice, depth)?;
                let pidx = index_map(p.poset().labels());
                let sidx = index_map(s.poset().labels());
                let vals = values
                    .iter()
                    .map(|r| {
                        let x = resolve_label(&pidx, &r.pair.0, "values")?;
                        let y = resolve_label(&pidx, &r.pair.1, "values")?;
                        Ok(((x, y), resolve_label(&sidx, &r.value, "values")?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Structure::Measured(MeasuredPartialLattice::from_principal_values(p, s, &vals, self.bound)?)
            }
            RawStructure::ChainPair { semilattice, a, b, dyadic } => match (dyadic, semilattice) {
                (Some(n), None) => Structure::ChainPair(ChainPairSpec::Dyadic(dyadic_witness(n))),
                (None, Some(sname)) => {
                    let s = self.semilattice_ref(&sname, depth)?;
                    let sidx = index_map(s.poset().labels());
                    let av = a.iter().map(|x| resolve_label(&sidx, x, "a")).collect::<Result<Vec<_>>>()?;
                    let bv = b.iter().map(|x| resolve_label(&sidx, x, "b")).collect::<Result<Vec<_>>>()?;
                    let h = (av.len().max(bv.len()) + 1) as u64;
                    let cp = OmegaChainPair::new(
                        (*s).clone(),
                        Sequence::constant_tail(av),
                        Sequence::constant_tail(bv),
                        h,
                    )?;
                    Structure::ChainPair(ChainPairSpec::Finite(cp))
                }
                _ => return invalid("a chain pair needs either \"dyadic\" or \"semilattice\""),
            },
            RawStructure::Triple { value } => Structure::Triple(Triple(value)),
        })
    }
}

pub fn to_partial(s: &Structure) -> Result<Arc<FinitePartialLattice>> {
    match s {
        Structure::PartialLattice(p) => Ok(p.clone()),
        Structure::Lattice(l) => Ok(Arc::new(FinitePartialLattice::from_lattice((**l).clone()))),
        Structure::Poset(p) => Ok(Arc::new(FinitePartialLattice::from_poset(p.clone())?)),
        other => invalid(format!("expected a partial lattice, found a {}", other.kind())),
    }
}

pub fn to_lattice(s: &Structure) -> Result<Arc<FiniteLattice>> {
    match s {
        Structure::Lattice(l) => Ok(l.clone()),
        Structure::Semilattice(s) => Ok(Arc::new(s.to_lattice())),
        Structure::PartialLattice(p) => match p.as_lattice() {
            Some(l) => Ok(Arc::new(l.clone())),
            None => Ok(Arc::new(FiniteLattice::from_poset(p.poset().clone())?)),
        },
        Structure::Poset(p) => Ok(Arc::new(FiniteLattice::from_poset(p.clone())?)),
        other => invalid(format!("expected a lattice, found a {}", other.kind())),
    }
}

pub fn to_semilattice(s: &Structure) -> Result<Arc<FiniteSemilattice>> {
    match s {
        Structure::Semilattice(s) => Ok(s.clone()),
        other => Ok(Arc::new(FiniteSemilattice::from_lattice(&*to_lattice(other)?))),
    }
}

fn pairs_json(p: &FinitePoset) -> Vec<(String, String)> {
    p.covers().into_iter().map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string())).collect()
}

fn ops_json(p: &FinitePoset, ops: &[(Vec<usize>, usize)]) -> Vec<OpRecord> {
    ops.iter()
        .map(|(args, v)| OpRecord { args: args.iter().map(|&a| p.label(a).to_string()).collect(), value: p.label(*v).to_string() })
        .collect()
}

/// Serializes a partial lattice (lattices are written as `lattice`).
pub fn partial_lattice_json(p: &FinitePartialLattice) -> Value {
    let poset = p.poset();
    if p.is_total() {
        return json!({ "kind": "lattice", "elements": poset.labels(), "leq": pairs_json(poset) });
    }
    json!({
        "kind": "partial_lattice",
        "elements": poset.labels(),
        "leq": pairs_json(poset),
        "joins": ops_json(poset, &p.explicit_joins()),
        "meets": ops_json(poset, &p.explicit_meets()),
    })
}

pub fn lattice_json(l: &FiniteLattice) -> Value {
    json!({ "kind": "lattice", "elements": l.poset().labels(), "leq": pairs_json(l.poset()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
      "structures": {
        "K": {"kind": "lattice", "elements": ["0", "1"], "leq": [["0", "1"]]},
        "P": {"kind": "partial_lattice", "elements": ["0", "a", "b", "1"],
              "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
              "joins": [{"args": ["a", "b"], "value": "1"}]},
        "f": {"kind": "hom", "source": "K", "target": "P", "map": {"0": "0", "1": "1"}},
        "sq": {"kind": "square", "k": "K", "p": "P", "q": "chain:3", "f": {"0": "0", "1": "1"}, "g": {"0": "0", "1": "2"}},
        "mu": {"kind": "measured", "lattice": "K", "semilattice": "chain:2", "values": [{"pair": ["1", "0"], "value": "1"}]},
        "cp": {"kind": "chain_pair", "dyadic": 8},
        "t": {"kind": "triple", "value": [[[0, null]], [[0, 3]], []]}
      }
    }"#;

    #[test]
    fn loads_all_kinds() {
        let d = Document::parse(DOC, ConBound::default()).unwrap();
        let kinds: Vec<&str> = d.names().map(|n| d.get(n).unwrap().kind()).collect();
        assert_eq!(kinds, ["lattice", "partial_lattice", "chain_pair", "hom", "measured", "square", "triple"]);
        let Structure::PartialLattice(p) = d.get("P").unwrap() else { panic!() };
        assert_eq!(p.defined_join(&[1, 2]), Some(3));
        assert_eq!(p.defined_meet(&[1, 2]), None);
    }

    #[test]
    fn errors_name_the_structure() {
        let bad = r#"{"structures": {"L": {"kind": "lattice", "elements": ["a", "b"], "leq": [["a", "c"]]}}}"#;
        let err = Document::parse(bad, ConBound::default()).unwrap_err();
        assert!(err.to_string().contains("L:") && err.to_string().contains("\"c\""));
        let not_lattice = r#"{"kind": "lattice", "elements": ["a", "b"]}"#;
        assert!(Document::parse(not_lattice, ConBound::default()).is_err());
        let cyc = r#"{"structures": {"h": {"kind": "hom", "source": "h", "target": "h", "map": {}}}}"#;
        assert!(Document::parse(cyc, ConBound::default()).is_err());
    }

    #[test]
    fn isolate_is_self_contained() {
        let d = Document::parse(DOC, ConBound::default()).unwrap();
        let v = d.isolate("sq").unwrap();
        let back = Document::parse(&v.to_string(), ConBound::default()).unwrap();
        assert_eq!(back.main().unwrap().1.kind(), "square");
        // K, P, the built-in chain:3 and main.
        assert_eq!(back.names().count(), 4);
        assert_eq!(d.isolate("m3").unwrap()["kind"], "lattice");
    }

    #[test]
    fn validate_lists_bad_entries() {
        let bad = r#"{"kind": "partial_lattice", "elements": ["0", "a", "b", "1"],
            "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
            "joins": [{"args": ["a", "b"], "value": "a"}, {"args": ["0", "b"], "value": "1"}]}"#;
        let err = validate_text(bad, ConBound::default()).unwrap_err();
        assert!(err.to_string().starts_with("invalid input: 2 invalid"), "{err}");
        let ok = validate_text(DOC, ConBound::default()).unwrap();
        assert_eq!(ok["structures"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn partial_lattice_round_trip() {
        let d = Document::parse(DOC, ConBound::default()).unwrap();
        let Structure::PartialLattice(p) = d.get("P").unwrap() else { panic!() };
        let text = partial_lattice_json(p).to_string();
        let back = Document::parse(&text, ConBound::default()).unwrap();
        let q = to_partial(back.main().unwrap().1).unwrap();
        assert_eq!(q.as_ref(), p.as_ref());
    }
}
