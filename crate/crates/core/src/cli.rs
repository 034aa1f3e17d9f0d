//! Command-line front end: argument parsing, dispatch and rendering.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 semantic error,
//! 3 unsupported query.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{CatalogError, CharNumbers4, ManifoldDescriptor};
use crate::classify::{classify4, ClassifyError, Condition};
use crate::expr::{parse_manifold_expr, ParseError};
use crate::obstruction::{
    existence_threshold, obstruction_report, transversality_check, NRange, ObstructionError,
    ObstructionReport, QueryKind,
};
use crate::ring::{GradedElement, RingError};

#[derive(Debug, Parser)]
#[command(
    name = "totally-real",
    version,
    about = "Decide totally real immersions and independent maps M^n -> C^N from characteristic classes"
)]
pub struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Tri,
    Indep,
}

impl From<KindArg> for QueryKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Tri => QueryKind::TotallyReal,
            KindArg::Indep => QueryKind::Independent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coeff {
    Z,
    Z2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total characteristic classes of a manifold.
    Classes {
        expr: String,
        #[arg(long, value_enum, default_value = "z2")]
        coeff: Coeff,
    },
    /// Certified existence / non-existence ranges of N.
    Obstruct {
        #[arg(value_enum)]
        kind: KindArg,
        expr: String,
    },
    /// Seven-condition classification of a 4-manifold.
    Classify4 { expr: String },
    /// Generic existence threshold for dimension n.
    Threshold {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        dim: u32,
    },
    /// Codimension of the degenerate jet stratum against dim M.
    CheckTransversality {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        target: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classes { .. } => "classes",
            Command::Obstruct { .. } => "obstruct",
            Command::Classify4 { .. } => "classify4",
            Command::Threshold { .. } => "threshold",
            Command::CheckTransversality { .. } => "check-transversality",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Semantic(String),
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Semantic(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Semantic(_) => "semantic",
            CliError::Unsupported(_) => "unsupported",
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Unsupported { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::Semantic(e.to_string()),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Catalog(c) => c.into(),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<ObstructionError> for CliError {
    fn from(e: ObstructionError) -> Self {
        match e {
            ObstructionError::Catalog(c) => c.into(),
            ObstructionError::Classify(c) => c.into(),
            ObstructionError::UndefinedThreshold { .. }
            | ObstructionError::NoDecisionRoute { .. } => CliError::Unsupported(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_query(&cli.command, cli.json),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 1,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            }
        }
    }
}

pub fn run_query(command: &Command, json: bool) -> Outcome {
    let rendered = if json {
        query_json(command).map(|v| v.to_string() + "\n")
    } else {
        query_text(command)
    };
    match rendered {
        Ok(stdout) => Outcome {
            stdout,
            stderr: String::new(),
            code: 0,
        },
        Err(e) => {
            let code = e.exit_code();
            if json {
                let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
                if let CliError::Parse(p) = &e {
                    err["offset"] = json!(p.offset);
                }
                Outcome {
                    stdout: json!({ "query": command.name(), "error": err }).to_string() + "\n",
                    stderr: String::new(),
                    code,
                }
            } else {
                let msg = match &e {
                    CliError::Parse(p) => p.render(),
                    other => format!("error: {other}"),
                };
                Outcome {
                    stdout: String::new(),
                    stderr: msg + "\n",
                    code,
                }
            }
        }
    }
}

fn manifold(expr: &str) -> Result<ManifoldDescriptor, CliError> {
    Ok(parse_manifold_expr(expr)?.elaborate()?)
}

fn envelope(query: &str, m: &ManifoldDescriptor, result: Value, trace: &[String]) -> Value {
    json!({
        "query": query,
        "manifold": m.canonical_name(),
        "dimension": m.dimension(),
        "orientable": m.orientable(),
        "closed": m.closed(),
        "result": result,
        "trace": trace,
    })
}

fn components(
    u: &GradedElement,
    prefix: &str,
    step: u32,
) -> Result<Vec<(String, String)>, CliError> {
    let top = u.ring().truncation();
    let mut out = Vec::new();
    let mut i = 1;
    while i * step <= top {
        out.push((format!("{prefix}{i}"), u.component(i * step)?.to_string()));
        i += 1;
    }
    Ok(out)
}

/// Pontryagin classes `p_i = (-1)^i c_{2i}(C⊗TM)`.
fn pontryagin(c: &GradedElement) -> Result<Vec<(String, String)>, CliError> {
    let top = c.ring().truncation();
    let mut out = Vec::new();
    let mut i = 1;
    while 4 * i <= top {
        let ci = c.component(4 * i)?;
        let pi = if i % 2 == 1 { ci.neg() } else { ci };
        out.push((format!("p{i}"), pi.to_string()));
        i += 1;
    }
    Ok(out)
}

fn char_numbers_json(n: &Option<CharNumbers4>) -> Value {
    match n {
        None => Value::Null,
        Some(n) => json!({
            "w2_sq": u8::from(n.w2_sq),
            "dual_w2_sq": u8::from(n.dual_w2_sq),
            "p1": n.p1_number.as_ref().map(|p| p.to_i64().map_or_else(|| json!(p.to_string()), |v| json!(v))),
        }),
    }
}

fn range_json<R>(r: &Option<(NRange, R)>, reason: impl Fn(&R) -> &'static str) -> Value {
    match r {
        None => Value::Null,
        Some((range, why)) => json!({ "min": range.min, "max": range.max, "reason": reason(why) }),
    }
}

fn obstruction_json(r: &ObstructionReport) -> Value {
    json!({
        "kind": r.kind.as_str(),
        "impossible": range_json(&r.impossible, |w| w.as_str()),
        "exists": range_json(&r.exists, |w| w.as_str()),
        "unknown": r.unknown.map(|u| json!({ "min": u.min, "max": u.max })),
        "witness": r.witness.as_ref().map(|w| json!({
            "class": w.class,
            "top_degree": w.top_degree,
            "min_rank": w.min_rank,
        })),
    })
}

fn to_object(pairs: Vec<(String, String)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect(),
    )
}

fn query_json(command: &Command) -> Result<Value, CliError> {
    match command {
        Command::Classes { expr, coeff } => {
            let m = manifold(expr)?;
            let result = match coeff {
                Coeff::Z2 => {
                    let w = m.sw_total()?;
                    let dual = m.dual_sw_total()?;
                    json!({
                        "coeff": "z2",
                        "w": w.to_string(),
                        "w_dual": dual.to_string(),
                        "w_components": to_object(components(w, "w", 1)?),
                        "w_dual_components": to_object(components(&dual, "w̄", 1)?),
                        "char_numbers": char_numbers_json(&m.char_numbers4()?),
                    })
                }
                Coeff::Z => {
                    let c = m.chern_complexified()?;
                    json!({
                        "coeff": "z",
                        "c": c.to_string(),
                        "c_dual": c.invert_unit()?.to_string(),
                        "chern": to_object(components(c, "c", 2)?),
                        "pontryagin": to_object(pontryagin(c)?),
                    })
                }
            };
            Ok(envelope("classes", &m, result, &[]))
        }
        Command::Obstruct { kind, expr } => {
            let m = manifold(expr)?;
            let r = obstruction_report(&m, (*kind).into())?;
            Ok(envelope("obstruct", &m, obstruction_json(&r), &r.trace))
        }
        Command::Classify4 { expr } => {
            let m = manifold(expr)?;
            let r = classify4(&m)?;
            let conditions: Vec<Value> = Condition::ALL
                .iter()
                .map(|&c| {
                    let t = r.get(c);
                    json!({
                        "index": c.index(),
                        "name": c.description(),
                        "value": t.value.as_str(),
                        "reason": t.reason,
                    })
                })
                .collect();
            let result = json!({
                "conditions": conditions,
                "char_numbers": char_numbers_json(&m.char_numbers4()?),
            });
            Ok(envelope("classify4", &m, result, &r.trace))
        }
        Command::Threshold { kind, dim } => {
            let kind: QueryKind = (*kind).into();
            let t = existence_threshold(*dim, kind)?;
            Ok(json!({
                "query": "threshold",
                "manifold": Value::Null,
                "dimension": dim,
                "orientable": Value::Null,
                "closed": Value::Null,
                "result": { "kind": kind.as_str(), "threshold": t },
                "trace": [threshold_line(kind, *dim, t)],
            }))
        }
        Command::CheckTransversality { dim, target, kind } => {
            let kind: QueryKind = (*kind).into();
            let c = transversality_check(*dim, *target, kind)?;
            Ok(json!({
                "query": "check-transversality",
                "manifold": Value::Null,
                "dimension": dim,
                "orientable": Value::Null,
                "closed": Value::Null,
                "result": {
                    "kind": kind.as_str(),
                    "target": target,
                    "applies": c.applies,
                    "dim_m": c.dim_m,
                    "codim_sigma": c.codim_sigma,
                },
                "trace": [format!("dim M = {} {} codim Σ = {}", c.dim_m, if c.applies { "<" } else { "≥" }, c.codim_sigma)],
            }))
        }
    }
}

fn threshold_line(kind: QueryKind, n: u32, t: u32) -> String {
    match kind {
        QueryKind::TotallyReal => format!("totally real embeddings exist for N ≥ ⌊3·{n}/2⌋ = {t}"),
        QueryKind::Independent => format!("independent maps exist for N ≤ ⌊({n}+1)/2⌋ = {t}"),
    }
}

fn header(m: &ManifoldDescriptor) -> String {
    format!(
        "{} (dim {}, {}, {})",
        m.canonical_name(),
        m.dimension(),
        if m.orientable() {
            "orientable"
        } else {
            "non-orientable"
        },
        if m.closed() { "closed" } else { "open" },
    )
}

fn range_text<R>(r: &Option<(NRange, R)>, reason: impl Fn(&R) -> &'static str) -> String {
    match r {
        None => "none".into(),
        Some((range, why)) => format!("{range} ({})", reason(why)),
    }
}

fn query_text(command: &Command) -> Result<String, CliError> {
    let mut out = String::new();
    match command {
        Command::Classes { expr, coeff } => {
            let m = manifold(expr)?;
            writeln!(out, "{}", header(&m)).unwrap();
            match coeff {
                Coeff::Z2 => {
                    let w = m.sw_total()?;
                    let dual = m.dual_sw_total()?;
                    writeln!(out, "w  = {w}").unwrap();
                    writeln!(out, "w̄  = {dual}").unwrap();
                    for ((k, v), (dk, dv)) in components(w, "w", 1)?
                        .into_iter()
                        .zip(components(&dual, "w̄", 1)?)
                    {
                        writeln!(out, "  {k} = {v}    {dk} = {dv}").unwrap();
                    }
                    if let Some(n) = m.char_numbers4()? {
                        writeln!(out, "<w2^2, [M]> = {}", u8::from(n.w2_sq)).unwrap();
                        writeln!(out, "<w̄2^2, [M]> = {}", u8::from(n.dual_w2_sq)).unwrap();
                        if let Some(p) = n.p1_number {
                            writeln!(out, "<p1, [M]> = {p}").unwrap();
                        }
                    }
                }
                Coeff::Z => {
                    let c = m.chern_complexified()?;
                    writeln!(out, "c(C⊗TM)    = {c}").unwrap();
                    writeln!(out, "c(C⊗TM)^-1 = {}", c.invert_unit()?).unwrap();
                    for (k, v) in components(c, "c", 2)?.into_iter().chain(pontryagin(c)?) {
                        writeln!(out, "  {k} = {v}").unwrap();
                    }
                }
            }
        }
        Command::Obstruct { kind, expr } => {
            let m = manifold(expr)?;
            let r = obstruction_report(&m, (*kind).into())?;
            writeln!(out, "{} maps {} -> C^N", r.kind, header(&m)).unwrap();
            writeln!(
                out,
                "  impossible: {}",
                range_text(&r.impossible, |w| w.as_str())
            )
            .unwrap();
            writeln!(
                out,
                "  exists:     {}",
                range_text(&r.exists, |w| w.as_str())
            )
            .unwrap();
            match r.unknown {
                Some(u) => writeln!(out, "  unknown:    {u}").unwrap(),
                None => writeln!(out, "  unknown:    none").unwrap(),
            }
            if let Some(w) = &r.witness {
                let label = match r.kind {
                    QueryKind::TotallyReal => "c(Q)",
                    QueryKind::Independent => "c(B)",
                };
                writeln!(
                    out,
                    "  witness:    {label} = {} (top degree {}, rank ≥ {})",
                    w.class, w.top_degree, w.min_rank
                )
                .unwrap();
            }
            write_trace(&mut out, &r.trace);
        }
        Command::Classify4 { expr } => {
            let m = manifold(expr)?;
            let r = classify4(&m)?;
            writeln!(out, "{}", header(&m)).unwrap();
            for c in Condition::ALL {
                let t = r.get(c);
                writeln!(
                    out,
                    "  ({}) {:<7} {}: {}",
                    c.index(),
                    t.value.as_str(),
                    c.description(),
                    t.reason
                )
                .unwrap();
            }
            write_trace(&mut out, &r.trace);
        }
        Command::Threshold { kind, dim } => {
            let kind: QueryKind = (*kind).into();
            let t = existence_threshold(*dim, kind)?;
            writeln!(out, "{}", threshold_line(kind, *dim, t)).unwrap();
        }
        Command::CheckTransversality { dim, target, kind } => {
            let c = transversality_check(*dim, *target, (*kind).into())?;
            writeln!(
                out,
                "dim M = {}, codim Σ = {}: transversality {}",
                c.dim_m,
                c.codim_sigma,
                if c.applies {
                    "applies"
                } else {
                    "does not apply"
                }
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn write_trace(out: &mut String, trace: &[String]) {
    if !trace.is_empty() {
        out.push_str("trace:\n");
        for line in trace {
            writeln!(out, "  {line}").unwrap();
        }
    }
}
