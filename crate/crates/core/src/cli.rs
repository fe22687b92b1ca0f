//! The `dcr` command line: `compute`, `irrelevant`, `reduce`, `generate`.
//!
//! Results are JSON documents with a fixed set of keys; keys that do not
//! apply to a command are `null`. Exit codes: 0 success, 2 parse or
//! argument error, 3 resource limit, 1 anything else.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::{BigRational, One};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{Mode, Poly, Prob};
use crate::composition::{cancela_petingi, replace_all};
use crate::error::{DcrError, Result};
use crate::factorization::{ip5m, FactorConfig, PivotPolicy};
use crate::generators;
use crate::graph::Instance;
use crate::instance_file::{parse_reliability, write_instance, InstanceFile, Reliability};
use crate::irrelevance::{oracle_scan, scan, Condition, IrrelevanceCertificate};
use crate::oracle::{
    dcr_bruteforce, dcr_inclusion_exclusion, enumerate_minpaths, monte_carlo_estimate, OracleConfig,
    DEFAULT_SEED, PRNG_NAME,
};
use crate::reductions::{reduce, trace_to_json};

#[derive(Debug, Parser)]
#[command(name = "dcr", version, about = "Diameter-constrained two-terminal network reliability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the reliability of an instance file.
    Compute(ComputeArgs),
    /// Test every link for irrelevance.
    Irrelevant(IrrelevantArgs),
    /// Apply irrelevance pruning and the 5P reductions.
    Reduce(ReduceArgs),
    /// Print an instance file for a graph family.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Ip5m,
    Oracle,
    InclExcl,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Rational,
    Poly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
            ModeArg::Poly => Mode::Poly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    C1,
    C2,
    C3,
    Off,
}

impl Level {
    fn condition(self) -> Option<Condition> {
        match self {
            Level::C1 => Some(Condition::C1),
            Level::C2 => Some(Condition::C2),
            Level::C3 => Some(Condition::C3),
            Level::Off => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PivotArg {
    Random,
    First,
    Maxdeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CondArg {
    C1,
    C2,
    C3,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    Grid,
    CancelaPetingi,
    Replacement,
    Figred,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Instance file, or `-` for standard input.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,
    /// Arithmetic; defaults to poly for symbolic files, rational otherwise,
    /// float for Monte Carlo.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Irrelevance pruning inside ip5m [default: c3].
    #[arg(long, value_enum)]
    pub irrelevance: Option<Level>,
    #[arg(long, value_enum, default_value = "random")]
    pub pivot: PivotArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Include the root reduction trace.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IrrelevantArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "c3")]
    pub condition: CondArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub input: PathBuf,
    /// Pruning applied before the reductions.
    #[arg(long, value_enum, default_value = "c3")]
    pub irrelevance: Level,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Node count for path, cycle and complete.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Diameter; defaults to the family's own (usually |V| - 1).
    #[arg(long)]
    pub d: Option<usize>,
    /// Link reliability token.
    #[arg(long, default_value = "p")]
    pub p: String,
    /// Bipartite graph for cancela-petingi: `cycle:N` or `complete:AxB`.
    #[arg(long)]
    pub bipartite: Option<String>,
    /// Outer and inner graphs for replacement, e.g. `cycle:3`, `grid:2x2`.
    #[arg(long)]
    pub outer: Option<String>,
    #[arg(long)]
    pub inner: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// The JSON written by `compute`, `irrelevant` and `reduce`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ResultDocument {
    pub command: String,
    pub input_digest: String,
    pub method: Option<String>,
    pub mode: Option<String>,
    pub value: Option<Value>,
    pub multiplier: Option<Value>,
    pub stats: Option<Value>,
    pub certificates: Option<Value>,
    pub reduced_instance: Option<String>,
    pub trace: Option<Value>,
    pub prng: Option<Value>,
}

impl ResultDocument {
    fn new(command: &str, file: &InstanceFile) -> Self {
        ResultDocument {
            command: command.into(),
            input_digest: file.digest(),
            ..Default::default()
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

pub fn exit_code(err: &DcrError) -> i32 {
    match err {
        DcrError::Parse { .. } | DcrError::InvalidArgument(_) => 2,
        DcrError::ResourceLimit { .. } => 3,
        DcrError::Io(_) | DcrError::Internal(_) => 1,
    }
}

fn read_input(path: &PathBuf) -> Result<InstanceFile> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    InstanceFile::parse(&text)
}

/// Dispatches a generic computation on the arithmetic mode.
macro_rules! with_mode {
    ($mode:expr, $f:ident ( $($arg:expr),* )) => {
        match $mode {
            Mode::Float => $f::<f64>($($arg),*),
            Mode::Rational => $f::<BigRational>($($arg),*),
            Mode::Poly => $f::<Poly>($($arg),*),
        }
    };
}

/// Runs one command, returning the text destined for stdout or `--output`.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Compute(a) => cmd_compute(a).map(|d| d.to_json_string()),
        Command::Irrelevant(a) => cmd_irrelevant(a).map(|d| d.to_json_string()),
        Command::Reduce(a) => cmd_reduce(a).map(|d| d.to_json_string()),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Compute(a) => a.output.as_ref(),
        Command::Irrelevant(a) => a.output.as_ref(),
        Command::Reduce(a) => a.output.as_ref(),
        Command::Generate(a) => a.output.as_ref(),
    }
}

/// Parses `args`, runs the command, reports errors on stderr and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|text| match output_path(&cli) {
        Some(path) => std::fs::write(path, text).map_err(DcrError::from),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush().map_err(DcrError::from)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dcr: {e}");
            if let DcrError::ResourceLimit {
                partial: Some(stats),
                ..
            } = &e
            {
                eprintln!(
                    "partial stats: {}",
                    serde_json::to_string(stats).expect("plain data")
                );
            }
            exit_code(&e)
        }
    }
}

pub fn cmd_compute(a: &ComputeArgs) -> Result<ResultDocument> {
    let file = read_input(&a.input)?;
    let mode = match (a.mode, a.method) {
        (Some(m), Method::Mc) if m != ModeArg::Float => {
            return Err(DcrError::invalid("Monte Carlo requires float mode"));
        }
        (Some(m), _) => m.into(),
        (None, Method::Mc) => Mode::Float,
        (None, _) => file.natural_mode(),
    };
    let mut doc = ResultDocument::new("compute", &file);
    doc.method = Some(method_name(a.method).into());
    doc.mode = Some(mode.name().into());
    if a.method == Method::Mc {
        let inst: Instance<f64> = file.to_instance()?;
        let est = monte_carlo_estimate(&inst, a.samples, a.seed)?;
        doc.value = Some(est.estimate.to_json());
        doc.stats = Some(json!({ "samples": est.samples, "stderr": est.stderr }));
        doc.prng = Some(json!({ "name": PRNG_NAME, "seed": a.seed }));
        return Ok(doc);
    }
    with_mode!(mode, compute_in(&file, a, &mut doc))?;
    Ok(doc)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Ip5m => "ip5m",
        Method::Oracle => "oracle",
        Method::InclExcl => "incl-excl",
        Method::Mc => "mc",
    }
}

fn compute_in<P: Prob>(file: &InstanceFile, a: &ComputeArgs, doc: &mut ResultDocument) -> Result<()> {
    let inst: Instance<P> = file.to_instance()?;
    match a.method {
        Method::Auto | Method::Ip5m => {
            let level = a.irrelevance.unwrap_or(Level::C3).condition();
            let pivot = match a.pivot {
                PivotArg::Random => PivotPolicy::Random(a.seed),
                PivotArg::First => PivotPolicy::FirstNonPerfect,
                PivotArg::Maxdeg => PivotPolicy::MaxDegreeEndpoint,
            };
            let cfg = FactorConfig::default().with_pivot(pivot).with_irrelevance(level);
            let (r, stats) = ip5m(&inst, &cfg)?;
            doc.value = Some(r.to_json());
            doc.stats = Some(serde_json::to_value(&stats).expect("plain data"));
            if a.trace {
                doc.trace = Some(trace_to_json(&reduce(&inst, level).trace));
            }
            if let PivotPolicy::Random(seed) = pivot {
                doc.prng = Some(json!({ "name": PRNG_NAME, "seed": seed }));
            }
        }
        Method::Oracle => {
            let r = dcr_bruteforce(&inst, &OracleConfig::from_env())?;
            doc.value = Some(r.to_json());
            doc.stats = Some(json!({ "links": inst.graph().link_count() }));
        }
        Method::InclExcl => {
            let r = dcr_inclusion_exclusion(&inst, &OracleConfig::from_env())?;
            doc.value = Some(r.to_json());
            doc.stats = Some(json!({ "minpaths": enumerate_minpaths(&inst).len() }));
        }
        Method::Mc => unreachable!("handled in float mode"),
    }
    Ok(())
}

fn cert_entry(link: &crate::graph::Link<Poly>, cert: Option<&IrrelevanceCertificate>, negative: &str) -> Value {
    json!({
        "link": link.id,
        "endpoints": [link.a, link.b],
        "status": if cert.is_some() { "irrelevant" } else { negative },
        "certificate": cert,
    })
}

pub fn cmd_irrelevant(a: &IrrelevantArgs) -> Result<ResultDocument> {
    let file = read_input(&a.input)?;
    let inst: Instance<Poly> = file.to_instance()?;
    let (name, certs, negative) = match a.condition {
        CondArg::C1 => ("c1", scan(&inst, Condition::C1), "unknown"),
        CondArg::C2 => ("c2", scan(&inst, Condition::C2), "unknown"),
        CondArg::C3 => ("c3", scan(&inst, Condition::C3), "unknown"),
        CondArg::Oracle => ("oracle", oracle_scan(&inst), "relevant"),
    };
    let entries: Vec<Value> = inst
        .graph()
        .links()
        .map(|l| cert_entry(l, certs.iter().find(|c| c.link == l.id), negative))
        .collect();
    let mut doc = ResultDocument::new("irrelevant", &file);
    doc.method = Some(name.into());
    doc.stats = Some(json!({
        "links": inst.graph().link_count(),
        "irrelevant": certs.len(),
    }));
    doc.certificates = Some(Value::Array(entries));
    Ok(doc)
}

pub fn cmd_reduce(a: &ReduceArgs) -> Result<ResultDocument> {
    let file = read_input(&a.input)?;
    let mode = a.mode.map(Mode::from).unwrap_or_else(|| file.natural_mode());
    let mut doc = ResultDocument::new("reduce", &file);
    doc.method = Some("5p".into());
    doc.mode = Some(mode.name().into());
    with_mode!(mode, reduce_in(&file, a.irrelevance, &mut doc))?;
    Ok(doc)
}

fn reduce_in<P: Prob>(file: &InstanceFile, level: Level, doc: &mut ResultDocument) -> Result<()> {
    let inst: Instance<P> = file.to_instance()?;
    let form = reduce(&inst, level.condition());
    let g = form.instance.graph();
    doc.multiplier = Some(form.multiplier.to_json());
    doc.stats = Some(json!({
        "steps": form.trace.len(),
        "nodes": g.node_count(),
        "links": g.link_count(),
        "diameter": form.instance.diameter(),
    }));
    doc.reduced_instance = Some(write_instance(&form.instance)?);
    doc.trace = Some(trace_to_json(&form.trace));
    Ok(())
}

fn need(v: Option<usize>, flag: &str) -> Result<usize> {
    v.ok_or_else(|| DcrError::invalid(format!("this family needs --{flag}")))
}

fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let bad = || DcrError::invalid(format!("expected AxB, got `{s}`"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

fn parse_count(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| DcrError::invalid(format!("expected a count, got `{s}`")))
}

/// `path:N`, `cycle:N`, `complete:N`, `grid:RxC` or `figred`.
fn family_spec(spec: &str, p: &Poly) -> Result<Instance<Poly>> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "path" => generators::path(parse_count(arg)?, p.clone()),
        "cycle" => generators::cycle(parse_count(arg)?, p.clone()),
        "complete" => generators::complete(parse_count(arg)?, p.clone()),
        "grid" => {
            let (r, c) = parse_dims(arg)?;
            generators::grid(r, c, p.clone())
        }
        "figred" => Ok(generators::figred(p.clone())),
        _ => Err(DcrError::invalid(format!("unknown graph `{spec}`"))),
    }
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<String> {
    let p = match parse_reliability(&a.p) {
        Some(Reliability::Exact(r)) if r < BigRational::from_integer(0.into()) || r > num::one() => {
            return Err(DcrError::invalid(format!("reliability {r} outside [0, 1]")));
        }
        Some(rel) => rel.to_poly(),
        None => return Err(DcrError::invalid(format!("bad reliability `{}`", a.p))),
    };
    let inst = match a.family {
        Family::Path => generators::path(need(a.n, "n")?, p)?,
        Family::Cycle => generators::cycle(need(a.n, "n")?, p)?,
        Family::Complete => generators::complete(need(a.n, "n")?, p)?,
        Family::Grid => generators::grid(need(a.rows, "rows")?, need(a.cols, "cols")?, p)?,
        Family::Figred => generators::figred(p),
        Family::CancelaPetingi => {
            let spec = a
                .bipartite
                .as_deref()
                .ok_or_else(|| DcrError::invalid("cancela-petingi needs --bipartite"))?;
            let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
            let (b, part_a) = match name {
                "cycle" => generators::even_cycle(parse_count(arg)?, Poly::one())?,
                "complete" => {
                    let (x, y) = parse_dims(arg)?;
                    generators::complete_bipartite(x, y, Poly::one())
                }
                _ => return Err(DcrError::invalid(format!("unknown bipartite graph `{spec}`"))),
            };
            let d = a
                .d
                .ok_or_else(|| DcrError::invalid("cancela-petingi needs --d"))?;
            cancela_petingi(&b, &part_a, d)?
        }
        Family::Replacement => {
            let outer = family_spec(
                a.outer.as_deref().ok_or_else(|| DcrError::invalid("replacement needs --outer"))?,
                &p,
            )?;
            let inner = family_spec(
                a.inner.as_deref().ok_or_else(|| DcrError::invalid("replacement needs --inner"))?,
                &p,
            )?;
            let g = replace_all(outer.graph(), inner.graph(), inner.source(), inner.target())?;
            let d = g.node_count().saturating_sub(1).max(1);
            Instance::new(g, outer.source(), outer.target(), d)?
        }
    };
    let inst = match a.d {
        Some(d) if a.family != Family::CancelaPetingi => inst.with_diameter(d)?,
        _ => inst,
    };
    let text = write_instance(&inst)?;
    // Re-parse so that generated files always satisfy the format rules.
    InstanceFile::parse(&text)?;
    Ok(text)
}
