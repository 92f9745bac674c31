//! Command-line driver.
//!
//! Every command computes its full output first and only then writes it,
//! so a failing command leaves no partial files behind. Exit codes: 0 on
//! success, 1 on validation or domain errors (and failed checks), 2 on I/O
//! errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::{compare_bounds, identity, BoundReport, BoundRequest};
use crate::error::Error;
use crate::grouping::{build_graph, disjoint_partition, CorrelationGraph, Metric, Partition};
use crate::region::{enumerate_inequalities, slack_against, two_node_boundary, RateVector};
use crate::source::JointSource;
use crate::{io, oracle, report};

/// Tolerance for oracle/engine agreement in `verify`.
pub const AGREEMENT_TOL: f64 = 1e-12;
/// Tolerance for the Markov and group-independence checks in `verify`.
pub const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "swbounds",
    version,
    about = "Slepian-Wolf rate regions and structured total-rate bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the 2^N - 1 region inequalities (plus boundary CSV when N = 2)
    Region(RunConfig),
    /// Evaluate total-rate bounds term by term
    Bounds(RunConfig),
    /// Build the correlation graph and its disjoint groups
    Graph(RunConfig),
    /// Tabulate bound totals and penalties, sorted by total
    Compare(RunConfig),
    /// Turn a samples CSV into a model file
    Ingest(RunConfig),
    /// Run oracle agreement, Markov and group-independence checks
    Verify(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

/// Flags shared by every command. Node numbers are 1-based.
#[derive(Debug, Clone, Default, Args)]
pub struct RunConfig {
    /// Model file (TOML with n_vars, alphabet_sizes, pmf)
    #[arg(long, conflicts_with = "samples")]
    pub model: Option<PathBuf>,
    /// Samples CSV, one observation per line
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Alphabet sizes for --samples, e.g. 2,2,3
    #[arg(long)]
    pub alphabet_sizes: Option<String>,
    /// Additive smoothing for --samples
    #[arg(long, default_value_t = 0.0)]
    pub smoothing: f64,
    /// Skip one header line in the samples CSV
    #[arg(long)]
    pub skip_header: bool,
    /// Correlation threshold; pairs with metric >= tau are strong
    #[arg(long)]
    pub tau: Option<f64>,
    /// Pairwise metric: mutual_information or normalized_mi
    #[arg(long)]
    pub metric: Option<String>,
    /// Node ordering, e.g. 3,1,2
    #[arg(long)]
    pub ordering: Option<String>,
    /// Partition file, one comma-separated group per line
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Bound configs: full, markov, mixed, adjacency, disjoint, disjoint-markov, all
    #[arg(long)]
    pub config: Option<String>,
    /// Mixed bound: last fully conditioned position
    #[arg(long)]
    pub k: Option<usize>,
    /// Mixed bound: Markov segment length
    #[arg(long)]
    pub r: Option<usize>,
    /// Rate vector to test against the region, e.g. 1.0,0.9
    #[arg(long)]
    pub rates: Option<String>,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random oracle queries in verify
    #[arg(long, default_value_t = 200)]
    pub queries: usize,
    /// Checks for verify: oracle, markov, independence
    #[arg(long)]
    pub checks: Option<String>,
    /// Output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Boundary CSV path for two-source regions
    #[arg(long)]
    pub boundary_out: Option<PathBuf>,
    /// Partition output path for graph
    #[arg(long)]
    pub partition_out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Everything a command wants written, plus its verdict.
#[derive(Debug, Default)]
pub struct RunOutput {
    /// `(None, text)` goes to stdout.
    pub writes: Vec<(Option<PathBuf>, String)>,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    pub ok: bool,
}

impl RunOutput {
    fn new() -> Self {
        RunOutput {
            ok: true,
            ..Default::default()
        }
    }

    fn emit(&mut self, path: Option<PathBuf>, text: String) {
        self.writes.push((path, text));
    }

    /// Performs all writes. Stdout sections are separated by a blank line.
    pub fn flush(&self) -> CliResult<()> {
        let mut stdout = Vec::new();
        for (path, text) in &self.writes {
            match path {
                Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
                    path: p.clone(),
                    source,
                })?,
                None => stdout.push(text.as_str()),
            }
        }
        if !stdout.is_empty() {
            print!("{}", stdout.join("\n"));
        }
        for note in &self.notes {
            eprintln!("{note}");
        }
        Ok(())
    }
}

/// Parses arguments, runs the command, writes outputs and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command).and_then(|out| out.flush().map(|_| out.ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: &Command) -> CliResult<RunOutput> {
    match command {
        Command::Region(c) => cmd_region(c),
        Command::Bounds(c) => cmd_bounds(c),
        Command::Graph(c) => cmd_graph(c),
        Command::Compare(c) => cmd_compare(c),
        Command::Ingest(c) => cmd_ingest(c),
        Command::Verify(c) => cmd_verify(c),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn with_path<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_samples(config: &RunConfig, path: &Path) -> CliResult<(JointSource, usize)> {
    let sizes = config
        .alphabet_sizes
        .as_deref()
        .ok_or_else(|| CliError::Usage("--samples needs --alphabet-sizes".into()))?;
    let sizes = io::parse_list(sizes)?;
    let text = read(path)?;
    let rows = with_path(path, io::parse_samples(&text, config.skip_header))?;
    let source = with_path(path, JointSource::from_samples(&rows, sizes, config.smoothing))?;
    Ok((source, rows.len()))
}

fn load_source(config: &RunConfig) -> CliResult<JointSource> {
    match (&config.model, &config.samples) {
        (Some(path), None) => with_path(path, io::parse_model(&read(path)?)),
        (None, Some(path)) => load_samples(config, path).map(|(s, _)| s),
        _ => Err(CliError::Usage(
            "exactly one of --model or --samples is required".into(),
        )),
    }
}

fn ordering(config: &RunConfig, n: usize) -> CliResult<Vec<usize>> {
    match &config.ordering {
        Some(text) => Ok(io::parse_one_based(text)?),
        None => Ok(identity(n)),
    }
}

fn metric(config: &RunConfig) -> CliResult<Metric> {
    Ok(config
        .metric
        .as_deref()
        .map(str::parse)
        .transpose()?
        .unwrap_or_default())
}

fn graph(config: &RunConfig, source: &JointSource) -> CliResult<Option<CorrelationGraph>> {
    config
        .tau
        .map(|tau| Ok(build_graph(source, tau, metric(config)?)?))
        .transpose()
}

fn partition(
    config: &RunConfig,
    source: &JointSource,
    graph: Option<&CorrelationGraph>,
) -> CliResult<Option<Partition>> {
    if let Some(path) = &config.partition {
        let text = read(path)?;
        return with_path(path, io::parse_partition(&text, source.n_vars())).map(Some);
    }
    Ok(graph.map(disjoint_partition))
}

/// `out` with its extension replaced by `suffix`.
fn sibling(out: &Path, suffix: &str) -> PathBuf {
    out.with_extension(suffix)
}

const ALL_CONFIGS: [&str; 6] = [
    "full",
    "markov",
    "mixed",
    "adjacency",
    "disjoint",
    "disjoint-markov",
];

fn requests(
    config: &RunConfig,
    source: &JointSource,
    defaults: &[&str],
) -> CliResult<Vec<BoundRequest>> {
    let names: Vec<String> = match &config.config {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().to_string())
            .flat_map(|s| {
                if s == "all" {
                    ALL_CONFIGS.iter().map(|c| c.to_string()).collect()
                } else {
                    vec![s]
                }
            })
            .collect(),
        None => defaults.iter().map(|s| s.to_string()).collect(),
    };
    let ordering = ordering(config, source.n_vars())?;
    let graph = graph(config, source)?;
    let partition = partition(config, source, graph.as_ref())?;
    let need_partition = || {
        partition
            .clone()
            .ok_or_else(|| CliError::Usage("disjoint bounds need --partition or --tau".into()))
    };
    names
        .iter()
        .map(|name| {
            Ok(match name.as_str() {
                "full" => BoundRequest::Full {
                    ordering: ordering.clone(),
                },
                "markov" => BoundRequest::Markov {
                    ordering: ordering.clone(),
                },
                "mixed" => BoundRequest::Mixed {
                    ordering: ordering.clone(),
                    k: config
                        .k
                        .ok_or_else(|| CliError::Usage("mixed bound needs --k".into()))?,
                    r: config.r.unwrap_or(0),
                },
                "adjacency" => BoundRequest::Adjacency {
                    graph: graph
                        .clone()
                        .ok_or_else(|| CliError::Usage("adjacency bound needs --tau".into()))?,
                    ordering: ordering.clone(),
                },
                "disjoint" => BoundRequest::Disjoint {
                    partition: need_partition()?,
                },
                "disjoint-markov" => BoundRequest::DisjointMarkov {
                    partition: need_partition()?,
                },
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown config `{other}` (expected one of {} or all)",
                        ALL_CONFIGS.join(", ")
                    )))
                }
            })
        })
        .collect()
}

pub fn cmd_region(config: &RunConfig) -> CliResult<RunOutput> {
    let source = load_source(config)?;
    let n = source.n_vars();
    let inequalities = enumerate_inequalities(&source)?;
    let slacks = match &config.rates {
        Some(text) => {
            let rates = text
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("`{}` is not a rate", t.trim())))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Some(slack_against(&inequalities, n, &RateVector::new(rates)?)?)
        }
        None => None,
    };
    let mut out = RunOutput::new();
    let body = match config.format.unwrap_or(Format::Text) {
        Format::Text => report::region_text(n, &inequalities, slacks.as_ref()),
        Format::Csv => report::region_csv(&inequalities, slacks.as_ref()),
    };
    out.emit(config.out.clone(), body);
    if n == 2 {
        let boundary = report::boundary_csv(&two_node_boundary(&source)?);
        let dest = config
            .boundary_out
            .clone()
            .or_else(|| config.out.as_deref().map(|o| sibling(o, "boundary.csv")));
        out.emit(dest, boundary);
    }
    if let Some(adm) = &slacks {
        out.ok = adm.admissible;
    }
    Ok(out)
}

fn check_dominance(out: &mut RunOutput, reports: &[BoundReport]) {
    for r in reports.iter().filter(|r| !r.dominates()) {
        out.ok = false;
        out.notes.push(format!(
            "dominance check failed: {} total {} is below the joint entropy {}",
            r.config_name, r.total, r.joint_entropy
        ));
    }
}

pub fn cmd_bounds(config: &RunConfig) -> CliResult<RunOutput> {
    let source = load_source(config)?;
    let reports = requests(config, &source, &["full"])?
        .iter()
        .map(|r| r.evaluate(&source))
        .collect::<crate::Result<Vec<_>>>()?;
    let mut out = RunOutput::new();
    let body = match config.format.unwrap_or(Format::Text) {
        Format::Text => reports
            .iter()
            .map(report::bound_text)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Csv => report::bounds_csv(&reports),
    };
    out.emit(config.out.clone(), body);
    check_dominance(&mut out, &reports);
    Ok(out)
}

pub fn cmd_compare(config: &RunConfig) -> CliResult<RunOutput> {
    let source = load_source(config)?;
    let mut defaults = vec!["full", "markov"];
    if config.k.is_some() {
        defaults.push("mixed");
    }
    if config.tau.is_some() {
        defaults.push("adjacency");
    }
    if config.tau.is_some() || config.partition.is_some() {
        defaults.extend(["disjoint", "disjoint-markov"]);
    }
    let comparison = compare_bounds(&source, &requests(config, &source, &defaults)?)?;
    let mut out = RunOutput::new();
    let body = match config.format.unwrap_or(Format::Csv) {
        Format::Csv => report::comparison_csv(&comparison),
        Format::Text => report::comparison_text(&comparison),
    };
    out.emit(config.out.clone(), body);
    check_dominance(&mut out, &comparison.reports);
    Ok(out)
}

pub fn cmd_graph(config: &RunConfig) -> CliResult<RunOutput> {
    let source = load_source(config)?;
    let graph = graph(config, &source)?.ok_or_else(|| CliError::Usage("graph needs --tau".into()))?;
    let partition = disjoint_partition(&graph);
    let mut out = RunOutput::new();
    match config.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            out.emit(config.out.clone(), report::adjacency_csv(&graph));
            let dest = config
                .partition_out
                .clone()
                .or_else(|| config.out.as_deref().map(|o| sibling(o, "partition")));
            out.emit(dest, io::render_partition(&partition));
        }
        Format::Text => out.emit(config.out.clone(), report::graph_text(&graph, &partition)),
    }
    out.notes.push(format!("k = {}", partition.k()));
    Ok(out)
}

pub fn cmd_ingest(config: &RunConfig) -> CliResult<RunOutput> {
    let path = config
        .samples
        .as_deref()
        .ok_or_else(|| CliError::Usage("ingest needs --samples".into()))?;
    if config.model.is_some() {
        return Err(CliError::Usage("ingest takes --samples, not --model".into()));
    }
    let (source, rows) = load_samples(config, path)?;
    let comment = format!("ingested from {rows} rows, smoothing {}", config.smoothing);
    let mut out = RunOutput::new();
    out.emit(config.out.clone(), io::render_model(&source, Some(&comment)));
    Ok(out)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn cmd_verify(config: &RunConfig) -> CliResult<RunOutput> {
    let source = load_source(config)?;
    let n = source.n_vars();
    let graph = graph(config, &source)?;
    let partition = partition(config, &source, graph.as_ref())?;
    let checks: Vec<String> = match &config.checks {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            let mut c = vec!["oracle".to_string(), "markov".to_string()];
            if partition.is_some() {
                c.push("independence".into());
            }
            c
        }
    };
    let mut out = RunOutput::new();
    let mut text = format!("verification: N={n}, seed {}\n", config.seed);
    for check in &checks {
        let line = match check.as_str() {
            "oracle" => {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                let mut worst: f64 = 0.0;
                for _ in 0..config.queries {
                    let (t, g) = oracle::random_query(&mut rng, n);
                    worst = worst.max(oracle::compare_with_engine(&source, &t, &g)?.abs_diff);
                }
                let ok = worst <= AGREEMENT_TOL;
                out.ok &= ok;
                format!(
                    "oracle agreement: {}  {} queries, max abs diff {worst:.6e}, tol {AGREEMENT_TOL:e}",
                    verdict(ok),
                    config.queries
                )
            }
            "markov" => {
                let ord = ordering(config, n)?;
                let c = oracle::verify_markov_property(&source, &ord, STRUCTURE_TOL)?;
                out.ok &= c.holds;
                format!(
                    "markov property [{}]: {}  max deviation {:.6e}, tol {STRUCTURE_TOL:e}",
                    ord.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","),
                    verdict(c.holds),
                    c.max_deviation
                )
            }
            "independence" => {
                let p = partition.as_ref().ok_or_else(|| {
                    CliError::Usage("independence check needs --partition or --tau".into())
                })?;
                let c = oracle::verify_group_independence(&source, p, STRUCTURE_TOL)?;
                out.ok &= c.holds;
                format!(
                    "group independence [{}]: {}  deviation {:.6e}, tol {STRUCTURE_TOL:e}",
                    io::render_partition(p).trim_end().replace('\n', " | "),
                    verdict(c.holds),
                    c.deviation
                )
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown check `{other}` (expected oracle, markov, independence)"
                )))
            }
        };
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str(&format!("result: {}\n", verdict(out.ok)));
    out.emit(config.out.clone(), text);
    Ok(out)
}
