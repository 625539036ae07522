//! The `setmc` command line: `check`, `gen-peterson` and `bench`.

mod peterson;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use peterson::generate_peterson;

use crate::counterexample::{
    concretize, default_unroll_limit, narrow, Concretized, ConcreteRun, NarrowError, Trace,
    TraceKind,
};
use crate::cycledetect::{ndfs, owcty, SearchError, SearchLimits, Stats, Verdict, DEFAULT_MAX_STORE_BYTES};
use crate::explore::{Edge, ExploreError, ExploreOptions, Product};
use crate::ltl::{Property, PropertyError};
use crate::model::{parse_global_expr, parse_model, ApDecl, Model, ModelError};
use crate::multistate::{MultiState, DEFAULT_EVAL_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sym,
    Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ndfs,
    Owcty,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sym => "sym",
            Mode::Exp => "exp",
        }
    }
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ndfs => "ndfs",
            Algorithm::Owcty => "owcty",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("property: {0}")]
    Property(String),
    #[error("explore: {0}")]
    Explore(#[from] ExploreError),
    #[error("cycledetect: {0}")]
    Search(String),
    #[error("counterexample: {0}")]
    Counterexample(#[from] NarrowError),
    #[error("output: {0}")]
    Output(String),
    #[error("gen-peterson: {0}")]
    Generate(String),
}

impl From<PropertyError> for CliError {
    fn from(e: PropertyError) -> Self {
        CliError::Property(e.to_string())
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Where the property comes from: a named `#property` block, a formula,
/// and extra AP bindings (`name=expr` or `name: expr`), later bindings overriding earlier
/// ones of the same name.
#[derive(Debug, Clone, Default)]
pub struct PropertySource {
    pub property: Option<String>,
    pub ltl: Option<String>,
    pub aps: Vec<String>,
}

/// Resolves the property against a model. Without `--property`, a formula
/// may use the APs of every property block; without a formula, the model
/// must contain exactly one property block or one must be named.
pub fn resolve_property(model: &Model, src: &PropertySource) -> Result<Property, CliError> {
    let block = match &src.property {
        Some(name) => Some(
            model
                .property(name)
                .ok_or_else(|| CliError::Property(format!("no property block named `{name}`")))?,
        ),
        None if src.ltl.is_none() => match model.properties.as_slice() {
            [only] => Some(only),
            [] => return Err(CliError::Property("model has no property block and no --ltl was given".into())),
            _ => {
                return Err(CliError::Property(
                    "model has several property blocks; choose one with --property".into(),
                ))
            }
        },
        None => None,
    };
    let mut aps: Vec<ApDecl> = Vec::new();
    let mut bind = |decl: ApDecl| match aps.iter_mut().find(|a| a.name == decl.name) {
        Some(a) => *a = decl,
        None => aps.push(decl),
    };
    match block {
        Some(b) => b.aps.iter().cloned().for_each(&mut bind),
        None => model
            .properties
            .iter()
            .flat_map(|b| b.aps.iter().cloned())
            .for_each(&mut bind),
    }
    for a in &src.aps {
        // Expressions never contain `:`, so `name: expr` is unambiguous.
        let (name, text) = a
            .split_once(':')
            .or_else(|| a.split_once('='))
            .filter(|(n, _)| !n.trim().is_empty())
            .ok_or_else(|| CliError::Property(format!("AP binding `{a}` is not of the form name=expr")))?;
        let expr = parse_global_expr(model, text)?;
        bind(ApDecl {
            name: name.trim().to_string(),
            expr,
        });
    }
    let text = match (&src.ltl, block) {
        (Some(t), _) => t.clone(),
        (None, Some(b)) => b.ltl.clone(),
        (None, None) => unreachable!("a block is chosen when no formula is given"),
    };
    Ok(Property::bind(&text, &aps)?)
}

pub fn check_product(
    product: &Product,
    mode: Mode,
    algorithm: Algorithm,
    limits: SearchLimits,
) -> Result<Verdict<MultiState, Edge>, SearchError<ExploreError>> {
    match (mode, algorithm) {
        (Mode::Sym, Algorithm::Ndfs) => ndfs(&product.sym(), limits),
        (Mode::Sym, Algorithm::Owcty) => owcty(&product.sym(), limits),
        (Mode::Exp, Algorithm::Ndfs) => ndfs(&product.exp(), limits),
        (Mode::Exp, Algorithm::Owcty) => owcty(&product.exp(), limits),
    }
}

/// Narrows a witness and tries to concretize it; the trace is concrete
/// when that succeeds and narrowed otherwise.
pub fn explain(
    product: &Product,
    witness: &crate::cycledetect::Lasso<MultiState, Edge>,
) -> Result<(Trace, Option<ConcreteRun>), CliError> {
    let narrowed = narrow(product, witness)?;
    match concretize(product, &narrowed, default_unroll_limit(product))? {
        Concretized::Concrete(run) => {
            let l = &run.lasso;
            let trace = Trace::new(product, TraceKind::Concrete, &l.states, &l.edges, l.loop_start);
            Ok((trace, Some(run)))
        }
        Concretized::SymbolicOnly { .. } => {
            let trace = Trace::new(
                product,
                TraceKind::Narrowed,
                &narrowed.states,
                &narrowed.edges,
                narrowed.loop_start,
            );
            Ok((trace, None))
        }
    }
}

/// One row of the statistics CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub model: String,
    pub r: Option<u32>,
    pub mode: Mode,
    pub algorithm: Algorithm,
    pub states: u64,
    pub transitions: u64,
    pub iterations: u64,
    pub wall_time_s: f64,
    pub peak_store_bytes: u64,
    /// `holds`, `violated` or `error`.
    pub verdict: String,
    pub detail: String,
}

pub const STATS_HEADER: [&str; 11] = [
    "model",
    "r",
    "mode",
    "algorithm",
    "states",
    "transitions",
    "iterations",
    "wall_time_s",
    "peak_store_bytes",
    "verdict",
    "detail",
];

impl StatsRow {
    fn new(model: &str, r: Option<u32>, mode: Mode, algorithm: Algorithm, stats: Stats) -> StatsRow {
        StatsRow {
            model: model.to_string(),
            r,
            mode,
            algorithm,
            states: stats.states,
            transitions: stats.transitions,
            iterations: stats.iterations,
            wall_time_s: stats.wall_time.as_secs_f64(),
            peak_store_bytes: stats.peak_store_bytes,
            verdict: String::new(),
            detail: String::new(),
        }
    }

    /// Row for a finished or failed search.
    pub fn from_result<S, E: std::fmt::Display>(
        model: &str,
        r: Option<u32>,
        mode: Mode,
        algorithm: Algorithm,
        result: &Result<Verdict<S, Edge>, SearchError<E>>,
    ) -> StatsRow {
        match result {
            Ok(v) => StatsRow {
                verdict: if v.holds { "holds" } else { "violated" }.into(),
                ..StatsRow::new(model, r, mode, algorithm, v.stats)
            },
            Err(SearchError::Timeout { stats }) => StatsRow {
                verdict: "error".into(),
                detail: "timeout".into(),
                ..StatsRow::new(model, r, mode, algorithm, *stats)
            },
            Err(SearchError::StoreBudget { stats, .. }) => StatsRow {
                verdict: "error".into(),
                detail: "store-budget".into(),
                ..StatsRow::new(model, r, mode, algorithm, *stats)
            },
            Err(SearchError::System(e)) => StatsRow {
                verdict: "error".into(),
                detail: e.to_string(),
                ..StatsRow::new(model, r, mode, algorithm, Stats::default())
            },
        }
    }
}

pub fn write_stats<W: Write>(out: W, rows: &[StatsRow]) -> Result<(), CliError> {
    let out_err = |e: csv::Error| CliError::Output(e.to_string());
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(STATS_HEADER).map_err(out_err)?;
    for row in rows {
        w.serialize(row).map_err(out_err)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(io_err(path))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: PathBuf,
    pub property: PropertySource,
    pub mode: Mode,
    pub algorithm: Algorithm,
    pub trace: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub max_store_bytes: u64,
    pub max_evals: u64,
    pub self_loop_deadlocks: bool,
    pub timeout: Option<Duration>,
}

impl RunConfig {
    pub fn new(model: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            model: model.into(),
            property: PropertySource::default(),
            mode: Mode::Sym,
            algorithm: Algorithm::Ndfs,
            trace: None,
            stats: None,
            max_store_bytes: DEFAULT_MAX_STORE_BYTES,
            max_evals: DEFAULT_EVAL_CAP,
            self_loop_deadlocks: false,
            timeout: None,
        }
    }
}

/// Verdict of a `check` run. `holds` is `None` when the search failed.
#[derive(Debug)]
pub struct CheckOutcome {
    pub holds: Option<bool>,
    pub row: StatsRow,
    pub trace: Option<Trace>,
    /// Parser warnings about the model.
    pub warnings: Vec<String>,
}

impl CheckOutcome {
    pub fn exit_code(&self) -> i32 {
        match self.holds {
            Some(true) => 0,
            Some(false) => 1,
            None => 2,
        }
    }
}

pub fn load_product(cfg: &RunConfig) -> Result<Product, CliError> {
    let text = fs::read_to_string(&cfg.model).map_err(io_err(&cfg.model))?;
    let model = parse_model(&text)?;
    let mut src = cfg.property.clone();
    if let Some(path) = src.ltl.as_deref().and_then(|l| l.strip_prefix('@')) {
        let path = PathBuf::from(path);
        src.ltl = Some(fs::read_to_string(&path).map_err(io_err(&path))?);
    }
    let property = resolve_property(&model, &src)?;
    let options = ExploreOptions {
        eval_cap: cfg.max_evals,
        self_loop_deadlocks: cfg.self_loop_deadlocks,
    };
    Ok(Product::new(model, property, options))
}

/// Runs a check and writes the requested trace and stats files. Search
/// failures (timeout, store budget, model errors during exploration) are
/// reported in the outcome rather than as `Err`.
pub fn run_check(cfg: &RunConfig) -> Result<(CheckOutcome, Option<String>), CliError> {
    let product = load_product(cfg)?;
    let limits = SearchLimits {
        max_store_bytes: cfg.max_store_bytes,
        deadline: cfg.timeout.map(|t| Instant::now() + t),
    };
    let result = check_product(&product, cfg.mode, cfg.algorithm, limits);
    let row = StatsRow::from_result(&product.model.name, None, cfg.mode, cfg.algorithm, &result);
    if let Some(path) = &cfg.stats {
        let mut buf = Vec::new();
        write_stats(&mut buf, std::slice::from_ref(&row))?;
        write_file(path, &buf)?;
    }
    let (holds, trace, failure) = match result {
        Ok(v) => {
            let trace = match &v.witness {
                Some(w) => Some(explain(&product, w)?.0),
                None => None,
            };
            (Some(v.holds), trace, None)
        }
        Err(SearchError::System(e)) => (None, None, Some(CliError::Explore(e).to_string())),
        Err(e) => (None, None, Some(CliError::Search(e.to_string()).to_string())),
    };
    if let (Some(path), Some(t)) = (&cfg.trace, &trace) {
        let bytes = if path.extension().is_some_and(|e| e == "json") {
            serde_json::to_vec_pretty(t).map_err(|e| CliError::Output(e.to_string()))?
        } else {
            t.to_text().into_bytes()
        };
        write_file(path, &bytes)?;
    }
    let warnings = product.model.warnings.clone();
    Ok((
        CheckOutcome {
            holds,
            row,
            trace,
            warnings,
        },
        failure,
    ))
}

/// Runs Peterson(r) for every `r` and mode, one row each, sequentially.
pub fn run_bench(
    rs: &[u32],
    modes: &[Mode],
    algorithm: Algorithm,
    timeout: Duration,
    mut progress: impl FnMut(&StatsRow),
) -> Result<Vec<StatsRow>, CliError> {
    let mut rows = Vec::new();
    for &r in rs {
        let text = generate_peterson(r).map_err(CliError::Generate)?;
        let model = parse_model(&text)?;
        let property = resolve_property(&model, &PropertySource::default())?;
        let product = Product::new(model, property, ExploreOptions::default());
        for &mode in modes {
            let limits = SearchLimits::with_timeout(timeout);
            let result = check_product(&product, mode, algorithm, limits);
            let row = StatsRow::from_result(&product.model.name, Some(r), mode, algorithm, &result);
            progress(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Parser, Debug)]
#[command(name = "setmc", version, about = "LTL model checking with set-reduced input data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a model against an LTL property.
    Check {
        model: PathBuf,
        /// Formula, or `@file` to read it from a file.
        #[arg(long)]
        ltl: Option<String>,
        /// Name of a `#property` block in the model.
        #[arg(long)]
        property: Option<String>,
        /// Extra AP binding `name=expr` or `name: expr`; may be repeated.
        #[arg(long = "ap")]
        aps: Vec<String>,
        #[arg(long, value_enum, default_value = "sym")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "ndfs")]
        algorithm: Algorithm,
        /// Counterexample output; JSON when the name ends in `.json`.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_STORE_BYTES)]
        max_store_bytes: u64,
        /// Largest initial set of input evaluations.
        #[arg(long, default_value_t = DEFAULT_EVAL_CAP)]
        max_evals: u64,
        #[arg(long)]
        self_loop_deadlocks: bool,
        /// Seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Write a Peterson benchmark model.
    GenPeterson {
        #[arg(long)]
        r: u32,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check Peterson(r) for several r and write a CSV of statistics.
    Bench {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        r: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "sym,exp")]
        modes: Vec<Mode>,
        #[arg(long, value_enum, default_value = "ndfs")]
        algorithm: Algorithm,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Seconds per run.
        #[arg(long, default_value_t = 300.0)]
        timeout: f64,
    },
}

fn seconds(s: f64) -> Result<Duration, CliError> {
    Duration::try_from_secs_f64(s).map_err(|e| CliError::Output(format!("bad timeout {s}: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let stdout_err = |e: std::io::Error| CliError::Output(e.to_string());
    match command {
        Command::Check {
            model,
            ltl,
            property,
            aps,
            mode,
            algorithm,
            trace,
            stats,
            max_store_bytes,
            max_evals,
            self_loop_deadlocks,
            timeout,
        } => {
            let cfg = RunConfig {
                model,
                property: PropertySource { property, ltl, aps },
                mode,
                algorithm,
                trace,
                stats,
                max_store_bytes,
                max_evals,
                self_loop_deadlocks,
                timeout: timeout.map(seconds).transpose()?,
            };
            let (outcome, failure) = run_check(&cfg)?;
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let row = &outcome.row;
            let verdict = match outcome.holds {
                Some(true) => "holds",
                Some(false) => "violated",
                None => "error",
            };
            writeln!(
                out,
                "{verdict}\nstates: {}\ntransitions: {}\niterations: {}\ntime: {:.3}s",
                row.states, row.transitions, row.iterations, row.wall_time_s
            )
            .map_err(stdout_err)?;
            if let Some(t) = &outcome.trace {
                writeln!(out, "counterexample: {} trace of {} states", kind_name(t.kind), t.lines.len())
                    .map_err(stdout_err)?;
            }
            if let Some(f) = failure {
                return Err(CliError::Search(f));
            }
            Ok(outcome.exit_code())
        }
        Command::GenPeterson { r, output } => {
            let text = generate_peterson(r).map_err(CliError::Generate)?;
            write_file(&output, text.as_bytes())?;
            Ok(0)
        }
        Command::Bench {
            r,
            modes,
            algorithm,
            output,
            timeout,
        } => {
            let timeout = seconds(timeout)?;
            let rows = run_bench(&r, &modes, algorithm, timeout, |row| {
                let _ = writeln!(
                    out,
                    "r={} {} {}: {} states, {:.3}s, {}",
                    row.r.unwrap_or(0),
                    row.mode.name(),
                    row.algorithm.name(),
                    row.states,
                    row.wall_time_s,
                    row.verdict
                );
            })?;
            let file = fs::File::create(&output).map_err(io_err(&output))?;
            write_stats(file, &rows)?;
            Ok(0)
        }
    }
}

fn kind_name(kind: TraceKind) -> &'static str {
    match kind {
        TraceKind::Concrete => "concrete",
        TraceKind::Narrowed => "narrowed",
        TraceKind::Raw => "raw",
    }
}

/// Entry point shared by the binary and tests: parses `args` (including the
/// program name) and returns the exit status.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
