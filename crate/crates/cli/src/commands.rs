//! Subcommands. Each reads documents, calls one library operation and
//! returns a report document with a status.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use dgres_core::complexes::{homology, ChainComplex};
use dgres_core::cotensor::{ls_hom_complex, ls_residual, KCochain, LocalSystem};
use dgres_core::dgcat::{fixture, is_quasi_equivalence, DgCategory, DgFunctor, EssentialVerdict, Fixture, Verdict};
use dgres_core::field::parse_field_spec;
use dgres_core::mc::{hom_complex_mc, iota, mc_residual, strictify, MCObject, McError};
use dgres_core::pushout::{free_adjoin, AdjunctionData, PushoutError};
use dgres_core::{Field, FieldSpec, Rationals};
use serde_json::{json, Value};

use crate::codec::{self, rejected, DecodeError};
use crate::format::{self, Document, FormatError, Kind};

#[derive(Debug, Parser)]
#[command(name = "dgres", version, about = "Exact computations with finite dg-categories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Field of the documents: `q` or `fp:<p>`
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the laws or equations a document must satisfy
    Validate { input: PathBuf },
    /// Homology of hom complexes
    Homology {
        input: PathBuf,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i32, i32)>,
    },
    /// Hom complexes of the simplicial resolution
    Resolve {
        input: PathBuf,
        /// Second MC object; defaults to the first
        second: Option<PathBuf>,
        /// Level, for a dg-category input
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i32, i32)>,
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Hom complexes of local systems
    Cotensor {
        input: PathBuf,
        second: Option<PathBuf>,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i32, i32)>,
    },
    /// Replace an MC object by an equivalent strict one
    Strictify { input: PathBuf },
    /// Freely attach a morphism with prescribed boundary
    Adjoin {
        input: PathBuf,
        /// Maximal number of attached letters in a word
        #[arg(long)]
        truncate: Option<usize>,
    },
    /// Decide whether a functor is a quasi-equivalence
    Qequiv { input: PathBuf },
    /// Emit a standard category: unit_k, sphere or disk
    Fixtures {
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        n: i32,
    },
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected <lo>:<hi>, got {s:?}"))?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty window {s:?}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Verified,
    Refuted,
    Inconclusive,
    InvalidInput,
}

impl Status {
    pub fn code(&self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Refuted => 1,
            Status::Inconclusive => 2,
            Status::InvalidInput => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
            Status::InvalidInput => "invalid-input",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Homology { .. } => "homology",
            Command::Resolve { .. } => "resolve",
            Command::Cotensor { .. } => "cotensor",
            Command::Strictify { .. } => "strictify",
            Command::Adjoin { .. } => "adjoin",
            Command::Qequiv { .. } => "qequiv",
            Command::Fixtures { .. } => "fixtures",
        }
    }

    fn inputs(&self) -> Vec<&PathBuf> {
        match self {
            Command::Validate { input }
            | Command::Homology { input, .. }
            | Command::Strictify { input }
            | Command::Adjoin { input, .. }
            | Command::Qequiv { input } => vec![input],
            Command::Resolve { input, second, .. } | Command::Cotensor { input, second, .. } => {
                std::iter::once(input).chain(second).collect()
            }
            Command::Fixtures { .. } => vec![],
        }
    }
}

/// A failed command: the status it ends with and the report fields.
struct Failure {
    status: Status,
    error: Value,
}

impl Failure {
    fn invalid(kind: &str, message: impl Into<String>) -> Self {
        Failure { status: Status::InvalidInput, error: json!({"kind": kind, "message": message.into()}) }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let error = match &e {
            FormatError::Parse { line, column, message } => {
                json!({"kind": "parse", "line": line, "column": column, "message": message})
            }
            FormatError::VersionMismatch { .. } => json!({"kind": "version-mismatch", "message": e.to_string()}),
            FormatError::WrongKind { .. } => json!({"kind": "wrong-kind", "message": e.to_string()}),
            FormatError::Invalid { path, message } => json!({"kind": "invalid", "path": path, "message": message}),
        };
        Failure { status: Status::InvalidInput, error }
    }
}

impl From<DecodeError> for Failure {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Format(f) => f.into(),
            DecodeError::Rejected { kind, message } => Failure {
                status: Status::InvalidInput,
                error: json!({"kind": "rejected", "reason": kind, "message": message}),
            },
        }
    }
}

fn reject<E: std::fmt::Debug + std::fmt::Display>(e: E) -> Failure {
    rejected(e).into()
}

struct Input {
    text: String,
    doc: Document,
}

/// Runs a command. Never panics on malformed input; every failure becomes a
/// report with status `invalid-input`.
pub fn run(cli: &Cli) -> Outcome {
    let command = cli.command.name();
    let (field, result) = match execute(cli) {
        Ok((field, status, payload)) => (field, Ok((status, payload))),
        Err((field, failure)) => (field, Err(failure)),
    };
    let (status, mut payload) = match result {
        Ok(r) => r,
        Err(f) => (f.status, json!({"error": f.error})),
    };
    if let Command::Fixtures { .. } = cli.command {
        if status == Status::Verified {
            let doc = Document::new(&field, Kind::DgCategory, payload);
            return Outcome { status, text: format::print(&doc) };
        }
    }
    payload["command"] = json!(command);
    payload["status"] = json!(status.name());
    Outcome { status, text: format::print(&Document::new(&field, Kind::Report, payload)) }
}

type Executed = Result<(String, Status, Value), (String, Failure)>;

fn execute(cli: &Cli) -> Executed {
    let requested = cli.field.clone();
    let unknown = || requested.clone().unwrap_or_else(|| "none".into());
    if let Command::Fixtures { name, n } = &cli.command {
        let spec = requested.clone().unwrap_or_else(|| "q".into());
        let field = parse_field_spec(&spec).map_err(|e| (unknown(), Failure::invalid("field", e.to_string())))?;
        let which: Fixture = name.parse().map_err(|e: dgres_core::dgcat::DgCatError| (field.spec(), reject(e)))?;
        let payload = dispatch!(field, |k| emit_fixture(k, which, *n)).map_err(|f| (field.spec(), f))?;
        return Ok((field.spec(), Status::Verified, payload));
    }
    let mut inputs = Vec::new();
    for path in cli.command.inputs() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| (unknown(), Failure::invalid("io", format!("{}: {e}", path.display()))))?;
        let doc = format::parse(&text).map_err(|e| (unknown(), e.into()))?;
        inputs.push(Input { text, doc });
    }
    let spec = inputs[0].doc.field.clone();
    for other in inputs.iter().map(|i| &i.doc.field).chain(requested.as_ref()) {
        if *other != spec {
            let msg = format!("documents over {spec:?} and {other:?}");
            return Err((unknown(), Failure::invalid("field-mismatch", msg)));
        }
    }
    let field = parse_field_spec(&spec).map_err(|e| (spec.clone(), Failure::invalid("field", e.to_string())))?;
    let result = dispatch!(field, |k| execute_in(k, &cli.command, &inputs));
    match result {
        Ok((status, payload)) => Ok((field.spec(), status, payload)),
        Err(f) => Err((field.spec(), f)),
    }
}

macro_rules! dispatch {
    ($spec:expr, |$k:ident| $body:expr) => {
        match $spec {
            FieldSpec::Prime(p) => {
                let $k = &p;
                $body
            }
            FieldSpec::Rationals => {
                let $k = &Rationals;
                $body
            }
        }
    };
}
use dispatch;

fn emit_fixture<F: Field>(k: &F, which: Fixture, n: i32) -> Result<Value, Failure> {
    let cat = fixture(k, which, n).map_err(reject)?;
    Ok(serde_json::to_value(codec::encode_category(&cat)).expect("payloads serialize"))
}

fn execute_in<F: Field>(k: &F, command: &Command, inputs: &[Input]) -> Result<(Status, Value), Failure> {
    let first = &inputs[0];
    match command {
        Command::Validate { .. } => validate(k, first),
        Command::Homology { window, .. } => homology_report(k, first, *window),
        Command::Resolve { n, window, source, target, .. } => {
            resolve(k, inputs, *n, *window, source.as_deref(), target.as_deref())
        }
        Command::Cotensor { window, .. } => cotensor(k, inputs, *window),
        Command::Strictify { .. } => strictify_report(k, first),
        Command::Adjoin { truncate, .. } => adjoin(k, first, *truncate),
        Command::Qequiv { .. } => qequiv(k, first),
        Command::Fixtures { .. } => unreachable!("handled before reading inputs"),
    }
}

fn ranks(c: &ChainComplex<impl Field>) -> Value {
    json!({
        "dims": c.dims(),
        "ranks": homology(c).nonzero_ranks(),
    })
}

fn build<F: Field>(b: dgres_core::dgcat::DgCategoryBuilder<F>) -> Result<Arc<DgCategory<F>>, Failure> {
    b.build().map(Arc::new).map_err(reject)
}

fn load_mc<F: Field>(k: &F, input: &Input) -> Result<MCObject<F>, Failure> {
    let doc: codec::McDoc = format::parse_payload(&input.text, Kind::McObject)?;
    let (b, parts) = codec::decode_mc(k, &doc)?;
    let cat = build(b)?;
    let eta = parts.cochain(&cat)?;
    MCObject::new(cat, eta).map_err(reject)
}

fn load_local_system<F: Field>(k: &F, input: &Input) -> Result<LocalSystem<F>, Failure> {
    let doc: codec::LocalSystemDoc = format::parse_payload(&input.text, Kind::LocalSystem)?;
    let (b, parts) = codec::decode_local_system(k, &doc)?;
    LocalSystem::new(build(b)?, parts.space, parts.objects, parts.components).map_err(reject)
}

/// Semantic failures refute; malformed documents stay invalid input.
fn refuted(error: DecodeError) -> Result<(Status, Value), Failure> {
    match error {
        DecodeError::Rejected { kind, message } => {
            Ok((Status::Refuted, json!({"violation": {"reason": kind, "message": message}})))
        }
        DecodeError::Format(f) => Err(f.into()),
    }
}

macro_rules! or_refute {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return refuted(e.into()),
        }
    };
}

fn validate<F: Field>(k: &F, input: &Input) -> Result<(Status, Value), Failure> {
    let text = &input.text;
    match input.doc.kind {
        Kind::DgCategory => {
            let doc: codec::CategoryDoc = format::parse_payload(text, Kind::DgCategory)?;
            let b = or_refute!(codec::decode_category(k, &doc, "payload"));
            let cat = or_refute!(b.build().map_err(rejected));
            Ok((Status::Verified, json!({"objects": cat.object_count()})))
        }
        Kind::McObject => {
            let doc: codec::McDoc = format::parse_payload(text, Kind::McObject)?;
            let (b, parts) = or_refute!(codec::decode_mc(k, &doc));
            let cat = or_refute!(b.build().map(Arc::new).map_err(rejected));
            let eta = parts.cochain(&cat)?;
            let residual = mc_residual(&cat, &eta).map_err(reject)?;
            if !residual.is_zero() {
                let loc: BTreeMap<_, _> = residual
                    .components()
                    .iter()
                    .map(|(i, v)| (i.to_string(), v.iter().map(|x| k.format(x)).collect::<Vec<_>>()))
                    .collect();
                return Ok((Status::Refuted, json!({"residual": loc})));
            }
            match MCObject::new(cat, eta) {
                Ok(x) => Ok((Status::Verified, json!({"residual": {}, "strict": x.is_strict()}))),
                Err(e) => refuted(rejected(e)),
            }
        }
        Kind::LocalSystem => {
            let doc: codec::LocalSystemDoc = format::parse_payload(text, Kind::LocalSystem)?;
            let (b, parts) = or_refute!(codec::decode_local_system(k, &doc));
            let cat = or_refute!(b.build().map(Arc::new).map_err(rejected));
            let mut eta = KCochain::zero(-1, parts.objects.clone(), parts.objects.clone());
            for (c, v) in parts.components.clone() {
                eta.set(k, c, v);
            }
            let residual = or_refute!(ls_residual(&cat, &parts.space, &eta).map_err(rejected));
            if !residual.is_zero() {
                let loc: Vec<_> = residual
                    .components()
                    .iter()
                    .map(|(&(dim, c), v)| {
                        json!({
                            "dim": dim,
                            "cell": parts.space.names()[dim][c],
                            "value": v.iter().map(|x| k.format(x)).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                return Ok((Status::Refuted, json!({"residual": loc})));
            }
            match LocalSystem::new(cat, parts.space, parts.objects, parts.components) {
                Ok(_) => Ok((Status::Verified, json!({"residual": []}))),
                Err(e) => refuted(rejected(e)),
            }
        }
        Kind::SimplicialSet => {
            let doc: codec::SSetDoc = format::parse_payload(text, Kind::SimplicialSet)?;
            let k = or_refute!(codec::decode_sset(&doc, "payload"));
            Ok((Status::Verified, json!({"cells": k.counts()})))
        }
        Kind::Functor => {
            let doc: codec::FunctorDoc = format::parse_payload(text, Kind::Functor)?;
            let s = or_refute!(codec::decode_category(k, &doc.source, "payload.source"));
            let t = or_refute!(codec::decode_category(k, &doc.target, "payload.target"));
            let s = or_refute!(s.build().map(Arc::new).map_err(rejected));
            let t = or_refute!(t.build().map(Arc::new).map_err(rejected));
            let parts = codec::decode_functor_maps(&doc, &s, &t)?;
            or_refute!(DgFunctor::new(s, t, parts.object_map, parts.components).map_err(rejected));
            Ok((Status::Verified, json!({})))
        }
        Kind::AdjunctionData => {
            let doc: codec::AdjunctionDoc = format::parse_payload(text, Kind::AdjunctionData)?;
            let (b, parts) = or_refute!(codec::decode_adjunction(k, &doc));
            let cat = or_refute!(b.build().map(Arc::new).map_err(rejected));
            let data = or_refute!(AdjunctionData::new(cat, parts.x, parts.y, doc.n, parts.g, doc.truncation)
                .map_err(rejected));
            Ok((Status::Verified, json!({"exact": data.is_exact()})))
        }
        Kind::Report => Err(FormatError::WrongKind { expected: "non-report", found: "report" }.into()),
    }
}

fn homology_report<F: Field>(k: &F, input: &Input, window: Option<(i32, i32)>) -> Result<(Status, Value), Failure> {
    let payload = match input.doc.kind {
        Kind::DgCategory => {
            let doc: codec::CategoryDoc = format::parse_payload(&input.text, Kind::DgCategory)?;
            let cat = build(codec::decode_category(k, &doc, "payload")?)?;
            json!({"homs": hom_table(&cat)})
        }
        Kind::McObject => {
            let x = load_mc(k, input)?;
            let h = hom_complex_mc(&x, &x, window).map_err(reject)?;
            json!({"endomorphisms": ranks(&h.complex), "window": h.window})
        }
        Kind::LocalSystem => {
            let x = load_local_system(k, input)?;
            let h = ls_hom_complex(x.category(), &x, &x, window).map_err(reject)?;
            json!({"endomorphisms": ranks(&h.complex), "window": h.window})
        }
        other => return Err(FormatError::WrongKind { expected: "dg-category", found: other.name() }.into()),
    };
    Ok((Status::Verified, payload))
}

fn hom_table<F: Field>(cat: &DgCategory<F>) -> Vec<Value> {
    let names = cat.objects();
    let n = cat.object_count();
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut entry = ranks(cat.hom(x, y));
            entry["source"] = json!(names[x]);
            entry["target"] = json!(names[y]);
            out.push(entry);
        }
    }
    out
}

fn resolve<F: Field>(
    k: &F,
    inputs: &[Input],
    n: Option<usize>,
    window: Option<(i32, i32)>,
    source: Option<&str>,
    target: Option<&str>,
) -> Result<(Status, Value), Failure> {
    let first = &inputs[0];
    if first.doc.kind == Kind::DgCategory {
        if inputs.len() > 1 {
            return Err(Failure::invalid("usage", "a dg-category input takes no second document"));
        }
        let n = n.ok_or_else(|| Failure::invalid("usage", "--n is required for a dg-category input"))?;
        let doc: codec::CategoryDoc = format::parse_payload(&first.text, Kind::DgCategory)?;
        let cat = build(codec::decode_category(k, &doc, "payload")?)?;
        let pick = |name: Option<&str>| -> Result<Vec<usize>, Failure> {
            match name {
                Some(o) => Ok(vec![cat.object_id(o).map_err(reject)?]),
                None => Ok((0..cat.object_count()).collect()),
            }
        };
        let mut pairs = Vec::new();
        for e in pick(source)? {
            for f in pick(target)? {
                let h = hom_complex_mc(&iota(&cat, e, n), &iota(&cat, f, n), window).map_err(reject)?;
                let mut entry = ranks(&h.complex);
                entry["source"] = json!(cat.objects()[e]);
                entry["target"] = json!(cat.objects()[f]);
                entry["base_ranks"] = json!(cat.hom_homology(e, f).nonzero_ranks());
                entry["window"] = json!(h.window);
                pairs.push(entry);
            }
        }
        return Ok((Status::Verified, json!({"n": n, "pairs": pairs})));
    }
    if source.is_some() || target.is_some() {
        return Err(Failure::invalid("usage", "--source/--target apply to dg-category inputs"));
    }
    let x = load_mc(k, first)?;
    let y = match inputs.get(1) {
        Some(i) => load_mc(k, i)?,
        None => x.clone(),
    };
    if let Some(n) = n {
        if n != x.n() {
            return Err(Failure::invalid("usage", format!("--n {n} but the objects live at level {}", x.n())));
        }
    }
    let h = hom_complex_mc(&x, &y, window).map_err(reject)?;
    let mut entry = ranks(&h.complex);
    entry["n"] = json!(x.n());
    entry["window"] = json!(h.window);
    Ok((Status::Verified, entry))
}

fn cotensor<F: Field>(k: &F, inputs: &[Input], window: Option<(i32, i32)>) -> Result<(Status, Value), Failure> {
    let x = load_local_system(k, &inputs[0])?;
    let y = match inputs.get(1) {
        Some(i) => load_local_system(k, i)?,
        None => x.clone(),
    };
    let h = ls_hom_complex(x.category(), &x, &y, window).map_err(reject)?;
    let mut entry = ranks(&h.complex);
    entry["window"] = json!(h.window);
    entry["cells"] = json!(x.space().counts());
    Ok((Status::Verified, entry))
}

fn strictify_report<F: Field>(k: &F, input: &Input) -> Result<(Status, Value), Failure> {
    let x = load_mc(k, input)?;
    match strictify(&x) {
        Ok(s) => {
            let steps: Vec<bool> = s.steps.iter().map(|st| st.verify()).collect();
            let ok = steps.iter().all(|&b| b) && s.target.is_strict();
            let strict = codec::encode_mc(s.target.category(), s.target.eta());
            let status = if ok { Status::Verified } else { Status::Refuted };
            Ok((status, json!({"steps": steps, "strict": strict})))
        }
        Err(e @ McError::RequiresStrictInverses(..)) => {
            let reason = rejected(e).to_string();
            Ok((Status::Inconclusive, json!({"reason": reason})))
        }
        Err(e) => Err(reject(e)),
    }
}

fn adjoin<F: Field>(k: &F, input: &Input, truncate: Option<usize>) -> Result<(Status, Value), Failure> {
    let doc: codec::AdjunctionDoc = format::parse_payload(&input.text, Kind::AdjunctionData)?;
    let (b, parts) = codec::decode_adjunction(k, &doc)?;
    let cat = build(b)?;
    let n = truncate.unwrap_or(doc.truncation);
    let data = AdjunctionData::new(cat, parts.x, parts.y, doc.n, parts.g, n).map_err(reject)?;
    match free_adjoin(&data) {
        Ok(t) => {
            let c = &t.category;
            let mut homs = hom_table(c);
            let m = c.object_count();
            for (i, entry) in homs.iter_mut().enumerate() {
                let counts: Vec<_> = t
                    .word_counts(i / m, i % m)
                    .into_iter()
                    .map(|((letters, degree), count)| json!({"attached": letters, "degree": degree, "count": count}))
                    .collect();
                entry["words"] = json!(counts);
            }
            let category = codec::encode_category(c);
            Ok((Status::Verified, json!({"exact": t.exact, "truncation": n, "homs": homs, "category": category})))
        }
        Err(e @ PushoutError::TruncationUnsound { .. }) => {
            let reason = rejected(e).to_string();
            Ok((Status::Inconclusive, json!({"reason": reason, "truncation": n})))
        }
        Err(e) => Err(reject(e)),
    }
}

fn qequiv<F: Field>(k: &F, input: &Input) -> Result<(Status, Value), Failure> {
    let doc: codec::FunctorDoc = format::parse_payload(&input.text, Kind::Functor)?;
    let s = build(codec::decode_category(k, &doc.source, "payload.source")?)?;
    let t = build(codec::decode_category(k, &doc.target, "payload.target")?)?;
    let parts = codec::decode_functor_maps(&doc, &s, &t)?;
    let f = DgFunctor::new(s.clone(), t.clone(), parts.object_map, parts.components).map_err(reject)?;
    let report = is_quasi_equivalence(&f);
    let ff: Vec<_> = report
        .fully_faithful
        .iter()
        .map(|((x, y), ok)| json!({"source": s.objects()[*x], "target": s.objects()[*y], "quasi_iso": ok}))
        .collect();
    let essential: Vec<_> = report
        .essential
        .iter()
        .map(|e| match e {
            EssentialVerdict::Witnessed { target, source, .. } => {
                json!({"object": t.objects()[*target], "witness": s.objects()[*source]})
            }
            EssentialVerdict::NotFound { target } => json!({"object": t.objects()[*target], "witness": null}),
        })
        .collect();
    let (status, verdict) = match report.verdict {
        Verdict::Yes => (Status::Verified, "yes"),
        Verdict::No => (Status::Refuted, "no"),
        Verdict::Inconclusive => (Status::Inconclusive, "inconclusive"),
    };
    Ok((status, json!({"verdict": verdict, "fully_faithful": ff, "essentially_surjective": essential})))
}
