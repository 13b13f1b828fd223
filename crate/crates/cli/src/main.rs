use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latwb_core::amalgam::{mediating_gamma, pushout, CongruencePairLattice};
use latwb_core::format::{
    lattice_json, partial_lattice_json, to_lattice, to_partial, to_semilattice, validate_text, ChainPairSpec,
    Document, Structure,
};
use latwb_core::free::{fl_enumerate, fl_eq, fl_leq, Term};
use latwb_core::omega::{
    cube_verify, obstruction_extract_1d, obstruction_extract_2d, sample_measure_axioms, window_lift,
    OmegaChainPair, ValueSemilattice,
};
use latwb_core::order::galois::{CompleteJoinHom, CompleteMeetHom};
use latwb_core::order::interpolation::interpolation_check;
use latwb_core::partial::congruence::{congruence_closure, quotient, theta, theta_plus, Congruence};
use latwb_core::partial::conlat::{ConBound, ConLattice};
use latwb_core::partial::hom::{cep_check, PartialLatticeHom};
use latwb_core::partial::lattice::FinitePartialLattice;
use latwb_core::report::{inputs_digest, verify_witness, Outcome, Report, Verdict, Witness};
use latwb_core::suite::{run_suite, Scale};
use latwb_core::{amalgam::extend::extend_hom_cofinal, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "latwb", version, about = "Finite lattice and partial-lattice workbench")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Largest carrier enumerated (congruence lattices, cube search).
    #[arg(long, global = true)]
    max_size: Option<usize>,
    /// Largest number of congruences enumerated.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    file: PathBuf,
    /// Structure to use when the document holds several.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a document and check every structure in it.
    Validate { file: PathBuf },
    /// List the congruences of a partial lattice.
    Con(Input),
    /// The semilattice of compact congruences and its join-irreducibles.
    Conc(Input),
    /// Quotient by the congruence generated by `x<=y` pairs.
    Quotient {
        #[command(flatten)]
        input: Input,
        /// Comma-separated pairs such as `a<=b,c<=0`.
        #[arg(long)]
        pairs: String,
    },
    /// The congruence generated by x ≤ y (or by x ≡ y with --symmetric).
    Theta {
        #[command(flatten)]
        input: Input,
        x: String,
        y: String,
        #[arg(long)]
        symmetric: bool,
    },
    /// Pushout of an embedding square.
    Pushout(Input),
    /// The mediating hom γ for a square and measures on its sides.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        square: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Order dual of a lattice, or Galois dual of a complete hom.
    Dual(Input),
    #[command(subcommand)]
    Check(Check),
    /// Extend a ⟨∨,0⟩-hom from a cofinal A ⊆ B into a distributive S.
    ExtendHom {
        file: PathBuf,
        #[arg(long)]
        b: String,
        #[arg(long)]
        s: String,
        /// Elements of A, comma-separated.
        #[arg(long)]
        a: String,
        /// Their images in S, in the same order.
        #[arg(long)]
        f: String,
    },
    #[command(subcommand)]
    Free(Free),
    #[command(subcommand)]
    Verify(Verify),
    /// Run a named suite.
    Suite {
        name: String,
        #[arg(long, default_value = "full")]
        scale: String,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    Distributive(Input),
    Relcomp(Input),
    Cobrouwerian(Input),
    /// Congruence extension property of a hom.
    Cep(Input),
    /// Is there an element between X and Y?
    Interpolation {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        xs: String,
        #[arg(long)]
        ys: String,
    },
}

#[derive(Subcommand, Debug)]
enum Free {
    /// Decide s ≤ t in the free lattice over a partial lattice.
    Leq {
        #[command(flatten)]
        input: Input,
        /// Prefix term such as `(join a (meet b c))`.
        s: String,
        t: String,
    },
    Eq {
        #[command(flatten)]
        input: Input,
        s: String,
        t: String,
    },
    Enum {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// No simple lattice lifts the top of the truncated cube over M3.
    Cube,
    /// Sample the measure axioms for a chain pair.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Extract c from the window lift of a chain pair and replay a_ξ ≤ c ≤ b_η.
    #[command(name = "obstruction-1d")]
    Obstruction1d(Obstruction),
    #[command(name = "obstruction-2d")]
    Obstruction2d(Obstruction),
    /// Re-validate the witnesses of a report (or a single witness).
    Witness { file: PathBuf },
}

#[derive(Args, Debug)]
struct Obstruction {
    #[command(flatten)]
    input: Input,
    /// Window length n; indices 0..n are sampled.
    #[arg(long, default_value_t = 8)]
    window: u64,
    /// Tail value of the lift; defaults to a_n.
    #[arg(long)]
    c: Option<String>,
    #[arg(long, default_value_t = 64)]
    horizon: u64,
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Validate { .. } => "validate".into(),
            Command::Con(_) => "con".into(),
            Command::Conc(_) => "conc".into(),
            Command::Quotient { .. } => "quotient".into(),
            Command::Theta { .. } => "theta".into(),
            Command::Pushout(_) => "pushout".into(),
            Command::Gamma { .. } => "gamma".into(),
            Command::Dual(_) => "dual".into(),
            Command::Check(c) => format!(
                "check {}",
                match c {
                    Check::Distributive(_) => "distributive",
                    Check::Relcomp(_) => "relcomp",
                    Check::Cobrouwerian(_) => "cobrouwerian",
                    Check::Cep(_) => "cep",
                    Check::Interpolation { .. } => "interpolation",
                }
            ),
            Command::ExtendHom { .. } => "extend-hom".into(),
            Command::Free(f) => format!(
                "free {}",
                match f {
                    Free::Leq { .. } => "leq",
                    Free::Eq { .. } => "eq",
                    Free::Enum { .. } => "enum",
                }
            ),
            Command::Verify(v) => format!(
                "verify {}",
                match v {
                    Verify::Cube => "cube",
                    Verify::Measure { .. } => "measure",
                    Verify::Obstruction1d(_) => "obstruction-1d",
                    Verify::Obstruction2d(_) => "obstruction-2d",
                    Verify::Witness { .. } => "witness",
                }
            ),
            Command::Suite { name, .. } => format!("suite {name}"),
        }
    }

    fn file(&self) -> Option<&Path> {
        fn input(i: &Input) -> Option<&Path> {
            Some(i.file.as_path())
        }
        match self {
            Command::Validate { file } | Command::Gamma { file, .. } | Command::ExtendHom { file, .. } => {
                Some(file)
            }
            Command::Con(i) | Command::Conc(i) | Command::Pushout(i) | Command::Dual(i) => input(i),
            Command::Quotient { input: i, .. } | Command::Theta { input: i, .. } => input(i),
            Command::Check(
                Check::Distributive(i)
                | Check::Relcomp(i)
                | Check::Cobrouwerian(i)
                | Check::Cep(i)
                | Check::Interpolation { input: i, .. },
            ) => input(i),
            Command::Free(Free::Leq { input: i, .. } | Free::Eq { input: i, .. } | Free::Enum { input: i, .. }) => {
                input(i)
            }
            Command::Verify(Verify::Measure { input: i, .. }) => input(i),
            Command::Verify(Verify::Obstruction1d(o) | Verify::Obstruction2d(o)) => input(&o.input),
            Command::Verify(Verify::Witness { file }) => Some(file),
            Command::Verify(Verify::Cube) | Command::Suite { .. } => None,
        }
    }

    fn uses_seed(&self) -> bool {
        matches!(self, Command::Verify(Verify::Measure { .. }) | Command::Suite { .. })
    }
}

struct Ctx {
    seed: u64,
    bound: ConBound,
    max_size: Option<usize>,
    text: String,
}

impl Ctx {
    fn doc(&self) -> Result<Document> {
        Document::parse(&self.text, self.bound)
    }
}

fn list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn elem(p: &FinitePartialLattice, label: &str) -> Result<usize> {
    p.poset().index_of(label).ok_or_else(|| Error::Invalid(format!("unknown element {label:?}")))
}

fn elems(p: &FinitePartialLattice, labels: &[String]) -> Result<Vec<usize>> {
    labels.iter().map(|l| elem(p, l)).collect()
}

fn pair_list(p: &FinitePartialLattice, c: &Congruence) -> Vec<String> {
    c.relation().pairs().filter(|&(x, y)| !p.leq(x, y)).map(|(x, y)| format!("{}≤{}", p.label(x), p.label(y))).collect()
}

fn classes(p: &FinitePartialLattice, c: &Congruence) -> Vec<Vec<String>> {
    c.classes().into_iter().map(|cl| cl.into_iter().map(|x| p.label(x).to_string()).collect()).collect()
}

fn congruence_json(p: &FinitePartialLattice, c: &Congruence) -> Value {
    json!({ "added": pair_list(p, c), "classes": classes(p, c) })
}

fn partial(doc: &Document, name: Option<&str>) -> Result<(String, Arc<FinitePartialLattice>)> {
    let (n, s) = doc.pick(name)?;
    Ok((n, to_partial(&s)?))
}

fn cmd_con(ctx: &Ctx, input: &Input) -> Result<Outcome> {
    let (_, p) = partial(&ctx.doc()?, input.name.as_deref())?;
    let con = ConLattice::new(&p, ctx.bound)?;
    let list: Vec<Value> = (0..con.len()).map(|i| congruence_json(&p, &con.congruence(i))).collect();
    let distributive = con.lattice().ok().map(|l| l.is_distributive());
    Ok(Outcome::verified(json!({ "count": con.len(), "distributive": distributive, "congruences": list })))
}

fn cmd_conc(ctx: &Ctx, input: &Input) -> Result<Outcome> {
    let (_, p) = partial(&ctx.doc()?, input.name.as_deref())?;
    let con = ConLattice::new(&p, ctx.bound)?;
    let n = p.len();
    let mut principal: Vec<usize> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| con.theta_plus(x, y)).collect();
    principal.sort_unstable();
    principal.dedup();
    // Join-irreducible: not the join of the elements strictly below it.
    let ji: Vec<usize> = (0..con.len())
        .filter(|&c| c != con.zero() && con.join_all((0..con.len()).filter(|&d| d != c && con.leq(d, c))) != c)
        .collect();
    let ji_json: Vec<Value> = ji.iter().map(|&c| congruence_json(&p, &con.congruence(c))).collect();
    Ok(Outcome::verified(json!({
        "count": con.len(),
        "principal": principal.len(),
        "join_irreducible": ji_json,
    })))
}

fn parse_pairs(p: &FinitePartialLattice, s: &str) -> Result<Vec<(usize, usize)>> {
    list(s)
        .iter()
        .map(|item| {
            let (a, b) = item
                .split_once("<=")
                .ok_or_else(|| Error::Invalid(format!("pair {item:?} is not of the form x<=y")))?;
            Ok((elem(p, a.trim())?, elem(p, b.trim())?))
        })
        .collect()
}

fn cmd_quotient(ctx: &Ctx, input: &Input, pairs: &str) -> Result<Outcome> {
    let (_, p) = partial(&ctx.doc()?, input.name.as_deref())?;
    let seeds = parse_pairs(&p, pairs)?;
    let c = congruence_closure(&p, &seeds);
    let q = quotient(&p, &c)?;
    let proj: serde_json::Map<String, Value> = (0..p.len())
        .map(|x| (p.label(x).to_string(), Value::from(q.lattice.label(q.projection[x]))))
        .collect();
    Ok(Outcome::verified(json!({
        "congruence": congruence_json(&p, &c),
        "quotient": partial_lattice_json(&q.lattice),
        "projection": proj,
    })))
}

fn cmd_theta(ctx: &Ctx, input: &Input, x: &str, y: &str, symmetric: bool) -> Result<Outcome> {
    let (_, p) = partial(&ctx.doc()?, input.name.as_deref())?;
    let (a, b) = (elem(&p, x)?, elem(&p, y)?);
    let c = if symmetric { theta(&p, a, b) } else { theta_plus(&p, a, b) };
    Ok(Outcome::verified(congruence_json(&p, &c)))
}

fn cmd_pushout(ctx: &Ctx, input: &Input) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let Structure::Square(sq) = doc.pick(input.name.as_deref())?.1 else {
        return Err(Error::Invalid("pushout needs a square".into()));
    };
    let po = pushout(&sq)?;
    let map = |src: &FinitePartialLattice, m: &[usize]| -> serde_json::Map<String, Value> {
        (0..src.len()).map(|x| (src.label(x).to_string(), Value::from(po.r.label(m[x])))).collect()
    };
    Ok(Outcome::verified(json!({
        "size": po.r.len(),
        "pushout": partial_lattice_json(&po.r),
        "u": map(&sq.p, &po.u),
        "v": map(&sq.q, &po.v),
    })))
}

fn cmd_gamma(ctx: &Ctx, square: &str, mu: &str, nu: &str) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let Structure::Square(sq) = doc.lookup(square)? else {
        return Err(Error::Invalid(format!("{square} is not a square")));
    };
    let (Structure::Measured(m), Structure::Measured(n)) = (doc.lookup(mu)?, doc.lookup(nu)?) else {
        return Err(Error::Invalid("--mu and --nu must name measured structures".into()));
    };
    if **m.lattice() != *sq.p || **n.lattice() != *sq.q {
        return Err(Error::Invalid("the measures do not live on the sides of the square".into()));
    }
    let con_k = Arc::new(ConLattice::new(&sq.k, ctx.bound)?);
    let cpl = CongruencePairLattice::from_parts(&sq, con_k, m.con().clone(), n.con().clone())?;
    let g = mediating_gamma(&sq, &cpl, &m, &n)?;
    let s = m.codomain();
    let values: Vec<Value> = (0..cpl.len())
        .map(|c| {
            let (a, b) = cpl.pair(c);
            json!({
                "p": congruence_json(&sq.p, &cpl.con_p.congruence(a)),
                "q": congruence_json(&sq.q, &cpl.con_q.congruence(b)),
                "gamma": s.label(g.values[c]),
            })
        })
        .collect();
    Ok(Outcome::verified(json!({ "c_size": cpl.len(), "gamma": values })))
}

fn cmd_dual(ctx: &Ctx, input: &Input) -> Result<Outcome> {
    let doc = ctx.doc()?;
    match doc.pick(input.name.as_deref())?.1 {
        Structure::Hom(h) => {
            let (Some(a), Some(b)) = (h.source.as_lattice(), h.target.as_lattice()) else {
                return Err(Error::Invalid("Galois duals need a hom between lattices".into()));
            };
            let (a, b) = (Arc::new(a.clone()), Arc::new(b.clone()));
            let labels = |l: &Arc<latwb_core::order::lattice::FiniteLattice>, src: &Arc<latwb_core::order::lattice::FiniteLattice>, m: &[usize]| {
                (0..src.len()).map(|x| (src.label(x).to_string(), Value::from(l.label(m[x])))).collect::<serde_json::Map<_, _>>()
            };
            if let Ok(f) = CompleteJoinHom::new(a.clone(), b.clone(), h.map.clone()) {
                let g = f.upper_adjoint();
                return Ok(Outcome::verified(json!({ "given": "complete join hom", "upper_adjoint": labels(&a, &b, g.map()) })));
            }
            match CompleteMeetHom::new(a.clone(), b.clone(), h.map.clone()) {
                Ok(g) => {
                    let f = g.lower_adjoint();
                    Ok(Outcome::verified(json!({ "given": "complete meet hom", "lower_adjoint": labels(&a, &b, f.map()) })))
                }
                Err(e) => Err(Error::Precondition(format!("the map preserves neither all joins nor all meets: {e}"))),
            }
        }
        other => {
            let p = to_partial(&other)?;
            Ok(Outcome::verified(json!({ "dual": partial_lattice_json(&p.dual()) })))
        }
    }
}

fn cmd_lattice_check(ctx: &Ctx, input: &Input, which: &str) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let (name, s) = doc.pick(input.name.as_deref())?;
    let l = to_lattice(&s)?;
    let found = match which {
        "distributive" => l.distributivity_witness(),
        "relcomp" => l.relative_complement_witness(),
        _ => l.mid_witness(),
    };
    let details = json!({ "structure": name, "size": l.len(), "holds": found.is_none() });
    let Some((x, y, z)) = found else {
        return Ok(Outcome::verified(details));
    };
    let elements = [l.label(x).to_string(), l.label(y).to_string(), l.label(z).to_string()];
    let lattice = lattice_json(&l);
    let w = match which {
        "distributive" => Witness::Distributivity { lattice, elements },
        "relcomp" => Witness::RelativeComplement { lattice, elements },
        _ => Witness::Mid { lattice, elements },
    };
    Ok(Outcome::refuted(details, w))
}

fn cmd_cep(ctx: &Ctx, input: &Input) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let (name, s) = doc.pick(input.name.as_deref())?;
    let Structure::Hom(h) = s else {
        return Err(Error::Invalid("cep needs a hom".into()));
    };
    let f = PartialLatticeHom::new(h.source.clone(), h.target.clone(), h.map.clone())?;
    let con_p = ConLattice::new(&h.source, ctx.bound)?;
    let details = json!({ "structure": name, "congruences": con_p.len() });
    let Some(i) = cep_check(&f, &con_p) else {
        return Ok(Outcome::verified(details));
    };
    let src = &h.source;
    let congruence: Vec<(String, String)> = con_p
        .relation(i)
        .pairs()
        .filter(|&(x, y)| !src.leq(x, y))
        .map(|(x, y)| (src.label(x).to_string(), src.label(y).to_string()))
        .collect();
    let raw = doc.raw_structure(&name)?;
    let (source, target) = match raw {
        latwb_core::format::RawStructure::Hom { source, target, .. } => (doc.isolate(&source)?, doc.isolate(&target)?),
        _ => unreachable!("picked a hom"),
    };
    let map = h.map.iter().map(|&v| h.target.label(v).to_string()).collect();
    Ok(Outcome::refuted(details, Witness::Cep { source, target, map, congruence }))
}

fn cmd_interpolation(ctx: &Ctx, input: &Input, xs: &str, ys: &str) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let (name, s) = doc.pick(input.name.as_deref())?;
    let p = to_partial(&s)?;
    let (x, y) = (elems(&p, &list(xs))?, elems(&p, &list(ys))?);
    match interpolation_check(p.poset(), &x, &y)? {
        Some(z) => Ok(Outcome::verified(json!({ "interpolant": p.label(z) }))),
        None => Ok(Outcome::refuted(
            json!({ "interpolant": null }),
            Witness::Interpolation { poset: doc.isolate(&name)?, xs: list(xs), ys: list(ys) },
        )),
    }
}

fn cmd_extend(ctx: &Ctx, b: &str, s: &str, a: &str, f: &str) -> Result<Outcome> {
    let doc = ctx.doc()?;
    let b = to_semilattice(&doc.lookup(b)?)?;
    let s = to_lattice(&doc.lookup(s)?)?;
    let idx = |labels: Vec<String>, look: &dyn Fn(&str) -> Option<usize>| -> Result<Vec<usize>> {
        labels.iter().map(|l| look(l).ok_or_else(|| Error::Invalid(format!("unknown element {l:?}")))).collect()
    };
    let av = idx(list(a), &|l| b.poset().index_of(l))?;
    let fv = idx(list(f), &|l| s.poset().index_of(l))?;
    let g = extend_hom_cofinal(&b, &av, &fv, &s)?;
    let map: serde_json::Map<String, Value> =
        (0..b.len()).map(|x| (b.label(x).to_string(), Value::from(s.label(g[x])))).collect();
    Ok(Outcome::verified(json!({ "g": map })))
}

fn cmd_free(ctx: &Ctx, f: &Free) -> Result<Outcome> {
    let doc = ctx.doc()?;
    match f {
        Free::Leq { input, s, t } | Free::Eq { input, s, t } => {
            let (_, p) = partial(&doc, input.name.as_deref())?;
            let labels = p.poset().labels();
            let (s1, t1) = (Term::parse(s, labels)?, Term::parse(t, labels)?);
            let (key, v) = match f {
                Free::Leq { .. } => ("leq", fl_leq(&p, &s1, &t1)?),
                _ => ("eq", fl_eq(&p, &s1, &t1)?),
            };
            Ok(Outcome::verified(json!({ "s": s1.render(labels), "t": t1.render(labels), key: v })))
        }
        Free::Enum { input, depth } => {
            let (_, p) = partial(&doc, input.name.as_deref())?;
            let e = fl_enumerate(&p, *depth)?;
            let labels = p.poset().labels();
            let classes: Vec<String> = e.classes.iter().map(|t| t.render(labels)).collect();
            Ok(Outcome::verified(json!({
                "classes": classes,
                "count": e.classes.len(),
                "counts_by_depth": e.counts,
                "complete": e.complete,
            })))
        }
    }
}

fn measure_on<S: ValueSemilattice>(cp: &OmegaChainPair<S>, ctx: &Ctx, samples: usize, doc: &Document, name: &str) -> Result<Outcome> {
    let rep = sample_measure_axioms(cp, ctx.seed, samples, 16);
    let details = json!({
        "samples": rep.samples,
        "join_instances": rep.join_instances,
        "meet_instances": rep.meet_instances,
    });
    match rep.violation {
        None => Ok(Outcome::verified(details)),
        Some(violation) => Ok(Outcome::refuted(details, Witness::MeasureAxiom { chain_pair: doc.isolate(name)?, violation })),
    }
}

fn chain_pair(doc: &Document, input: &Input) -> Result<(String, ChainPairSpec)> {
    match doc.pick(input.name.as_deref())? {
        (n, Structure::ChainPair(cp)) => Ok((n, cp)),
        (_, other) => Err(Error::Invalid(format!("expected a chain pair, found a {}", other.kind()))),
    }
}

fn obstruct<S: ValueSemilattice>(
    cp: &OmegaChainPair<S>,
    o: &Obstruction,
    c: S::Elem,
    two_d: bool,
) -> Result<Outcome> {
    let idx: Vec<u64> = (0..o.window).collect();
    let lift = window_lift(cp, o.window, c)?;
    let f = |t: &latwb_core::omega::Triple| Some(lift.trace(t));
    let ex = if two_d {
        let g = |t: &latwb_core::omega::Triple| Some(lift.trace(&t.swap()));
        obstruction_extract_2d(cp, &lift, &f, &g, &idx, &idx, o.horizon)?
    } else {
        obstruction_extract_1d(cp, &lift, &f, &idx, &idx, o.horizon)?
    };
    Ok(Outcome::verified(serde_json::to_value(&ex.report).expect("report serializes")))
}

fn cmd_obstruction(ctx: &Ctx, o: &Obstruction, two_d: bool) -> Result<Outcome> {
    let doc = ctx.doc()?;
    match chain_pair(&doc, &o.input)?.1 {
        ChainPairSpec::Finite(cp) => {
            let c = match &o.c {
                Some(l) => cp.s.poset().index_of(l).ok_or_else(|| Error::Invalid(format!("unknown element {l:?}")))?,
                None => cp.a(o.window),
            };
            obstruct(&cp, o, c, two_d)
        }
        ChainPairSpec::Dyadic(cp) => {
            let c = match &o.c {
                Some(q) => q.parse().map_err(|_| Error::Invalid(format!("{q:?} is not a rational p/q")))?,
                None => cp.a(o.window),
            };
            obstruct(&cp, o, c, two_d)
        }
    }
}

fn cmd_witness(text: &str) -> Result<Outcome> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))?;
    let ws: Vec<Witness> = if v.get("witnesses").is_some() {
        serde_json::from_value(v["witnesses"].clone()).map_err(|e| Error::Invalid(format!("witnesses: {e}")))?
    } else {
        vec![serde_json::from_value(v).map_err(|e| Error::Invalid(format!("witness: {e}")))?]
    };
    if ws.is_empty() {
        return Err(Error::Invalid("no witnesses to check".into()));
    }
    let confirmed = ws.iter().map(verify_witness).collect::<Result<Vec<String>>>()?;
    Ok(Outcome::verified(json!({ "confirmed": confirmed })))
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Command::Validate { .. } => validate_text(&ctx.text, ctx.bound).map(Outcome::verified),
        Command::Con(i) => cmd_con(ctx, i),
        Command::Conc(i) => cmd_conc(ctx, i),
        Command::Quotient { input, pairs } => cmd_quotient(ctx, input, pairs),
        Command::Theta { input, x, y, symmetric } => cmd_theta(ctx, input, x, y, *symmetric),
        Command::Pushout(i) => cmd_pushout(ctx, i),
        Command::Gamma { square, mu, nu, .. } => cmd_gamma(ctx, square, mu, nu),
        Command::Dual(i) => cmd_dual(ctx, i),
        Command::Check(Check::Distributive(i)) => cmd_lattice_check(ctx, i, "distributive"),
        Command::Check(Check::Relcomp(i)) => cmd_lattice_check(ctx, i, "relcomp"),
        Command::Check(Check::Cobrouwerian(i)) => cmd_lattice_check(ctx, i, "cobrouwerian"),
        Command::Check(Check::Cep(i)) => cmd_cep(ctx, i),
        Command::Check(Check::Interpolation { input, xs, ys }) => cmd_interpolation(ctx, input, xs, ys),
        Command::ExtendHom { b, s, a, f, .. } => cmd_extend(ctx, b, s, a, f),
        Command::Free(f) => cmd_free(ctx, f),
        Command::Verify(Verify::Cube) => {
            let rep = cube_verify(ctx.max_size.unwrap_or(7))?;
            if rep.liftings > 0 || rep.forced_chain_verified != rep.commuting_triples {
                return Err(Error::Refuted(format!("{} liftings found", rep.liftings)));
            }
            Ok(Outcome::verified(serde_json::to_value(&rep).expect("cube report serializes")))
        }
        Command::Verify(Verify::Measure { input, samples }) => {
            let doc = ctx.doc()?;
            let (name, cp) = chain_pair(&doc, input)?;
            match cp {
                ChainPairSpec::Finite(cp) => measure_on(&cp, ctx, *samples, &doc, &name),
                ChainPairSpec::Dyadic(cp) => measure_on(&cp, ctx, *samples, &doc, &name),
            }
        }
        Command::Verify(Verify::Obstruction1d(o)) => cmd_obstruction(ctx, o, false),
        Command::Verify(Verify::Obstruction2d(o)) => cmd_obstruction(ctx, o, true),
        Command::Verify(Verify::Witness { .. }) => cmd_witness(&ctx.text),
        Command::Suite { name, scale } => run_suite(name, ctx.seed, scale.parse::<Scale>()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut bound = ConBound::default();
    if let Some(n) = cli.max_size {
        bound.max_elements = n;
    }
    if let Some(n) = cli.bound {
        bound.max_congruences = n;
    }
    let name = cli.command.name();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let text = match cli.command.file() {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
        None => Ok(String::new()),
    };
    // The digest covers the command line without output options, and the
    // input file's contents.
    let mut parts: Vec<String> = Vec::new();
    let mut skip = false;
    for a in &argv {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--format" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--format=") {
            continue;
        }
        parts.push(a.clone());
    }
    let result = text.and_then(|text| {
        parts.push(text.clone());
        let ctx = Ctx { seed: cli.seed, bound, max_size: cli.max_size, text };
        dispatch(&cli.command, &ctx)
    });
    let digest = inputs_digest(parts.iter().map(|p| p.as_bytes()));
    let seed = cli.command.uses_seed().then_some(cli.seed);
    let report = Report::from_result(name, digest, seed, start.elapsed().as_millis() as u64, result);
    let rendered = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.verdict == Verdict::Error {
        if let Some(e) = &report.error {
            eprintln!("{e}");
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
