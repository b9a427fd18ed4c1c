//! Command-line front end shared by the `causalgen` binary and the tests.
//!
//! Every output file starts with one header line recording the tool
//! version, the seed and a hash of the resolved configuration, followed by
//! one JSON object per line.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::cbn::BernoulliCbn;
use crate::corr2cause::{self, BuildConfig, PerturbMode, SplitPolicy};
use crate::engine::expr::data_value;
use crate::engine::{self, GraphId, Polarity, Query, QueryKind};
use crate::{cladder, dag};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CAUSALGEN_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Generation(#[from] crate::Error),
    #[error("malformed input: {0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Parser)]
#[command(name = "causalgen", version, about = "Synthetic causal-reasoning benchmark generator")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for unset flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Repeat for more progress output on standard error.
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write every DAG on N unlabeled nodes, one per isomorphism class.
    EnumerateGraphs {
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a dataset.
    Gen {
        #[command(subcommand)]
        target: GenTarget,
    },
    /// Rewrite correlation-to-causation records without changing labels.
    Perturb {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print summary statistics of a generated file.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Causal inference engine.
    Ci {
        #[command(subcommand)]
        action: CiAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenTarget {
    /// Correlation-to-causation records, written as train/dev/test files.
    Corr2cause {
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        split: Option<SplitArg>,
    },
    /// Ladder-of-causation questions.
    Cladder {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CiAction {
    /// Read `{graph, cpds, query}` JSON and print the estimand, the data it
    /// needs, its value and the answer.
    Eval {
        /// Input file; standard input when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Paraphrase,
    Refactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitArg {
    Published,
    Rule,
}

/// Defaults read from a `key = value` file. Blank lines and lines starting
/// with `#` are ignored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &["seed", "nodes", "max-nodes", "size", "out-dir", "mode", "split"];

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<ConfigFile> {
        let mut values = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", k + 1)))?;
            let key = key.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key {key:?}", k + 1)));
            }
            values.insert(key, value.trim().trim_matches('"').to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> CliResult<ConfigFile> {
        ConfigFile::parse(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Usage(format!("config {key}: invalid value {v:?}"))))
            .transpose()
    }

    fn get_enum<T: ValueEnum>(&self, key: &str) -> CliResult<Option<T>> {
        self.values
            .get(key)
            .map(|v| T::from_str(v, true).map_err(|_| CliError::Usage(format!("config {key}: invalid value {v:?}"))))
            .transpose()
    }
}

struct Ctx {
    config: ConfigFile,
    env_out: Option<PathBuf>,
}

impl Ctx {
    fn value<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: Option<T>) -> CliResult<T> {
        match flag {
            Some(v) => Ok(v),
            None => self
                .config
                .get(key)?
                .or(default)
                .ok_or_else(|| CliError::Usage(format!("--{key} is required"))),
        }
    }

    /// Flag, then `out-dir` from the config file, then the environment.
    fn out_path(&self, flag: Option<PathBuf>, default_name: &str) -> CliResult<PathBuf> {
        if let Some(p) = flag {
            return Ok(p);
        }
        let dir = self.config.values.get("out-dir").map(PathBuf::from).or_else(|| self.env_out.clone());
        dir.map(|d| d.join(default_name)).ok_or_else(|| {
            CliError::Usage(format!("--out is required (or set {OUT_DIR_ENV} or out-dir in --config)"))
        })
    }
}

#[derive(Debug, Serialize)]
struct Header<'a> {
    causalgen: &'static str,
    kind: &'a str,
    seed: Option<u64>,
    config_hash: String,
    config: &'a Value,
}

fn header_line(kind: &str, seed: Option<u64>, config: &Value) -> String {
    let hash = hex::encode(Sha256::digest(format!("{kind}\n{config}").as_bytes()));
    let h = Header { causalgen: env!("CARGO_PKG_VERSION"), kind, seed, config_hash: hash, config };
    serde_json::to_string(&h).expect("header serializes")
}

fn is_header(v: &Value) -> bool {
    v.get("config_hash").is_some() && v.get("causalgen").is_some()
}

fn prepare_output(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(io_err(dir)),
        _ => Ok(()),
    }
}

fn write_jsonl<T: Serialize>(path: &Path, header: &str, items: &[T]) -> CliResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut write = || -> io::Result<()> {
        writeln!(w, "{header}")?;
        for item in items {
            serde_json::to_writer(&mut w, item)?;
            w.write_all(b"\n")?;
        }
        w.flush()
    };
    write().map_err(io_err(path))
}

/// Parses a JSONL file, dropping header lines.
fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<(Option<Value>, Vec<T>)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut header = None;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line)
            .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), k + 1)))?;
        if is_header(&v) {
            header.get_or_insert(v);
            continue;
        }
        out.push(
            serde_json::from_value(v).map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), k + 1)))?,
        );
    }
    Ok((header, out))
}

#[derive(Debug, Serialize)]
struct GraphLine {
    n: usize,
    index: usize,
    canonical: String,
    edges: Vec<[usize; 2]>,
}

fn enumerate_graphs(ctx: &Ctx, nodes: Option<usize>, out: Option<PathBuf>) -> CliResult<()> {
    let n: usize = ctx.value(nodes, "nodes", None)?;
    if !(1..=corr2cause::MAX_NODES).contains(&n) {
        return Err(CliError::Usage(format!("--nodes must lie in 1..={}", corr2cause::MAX_NODES)));
    }
    let path = ctx.out_path(out, &format!("dags_n{n}.jsonl"))?;
    prepare_output(&path)?;
    log::info!("enumerating DAGs on {n} nodes");
    let lines: Vec<GraphLine> = dag::enumerate_dags(n)
        .into_iter()
        .enumerate()
        .map(|(index, e)| GraphLine {
            n,
            index,
            canonical: e.canonical,
            edges: e.dag.edges().iter().map(|&(a, b)| [a, b]).collect(),
        })
        .collect();
    log::info!("{} graphs", lines.len());
    let config = serde_json::json!({ "nodes": n });
    write_jsonl(&path, &header_line("dags", None, &config), &lines)
}

fn gen_corr2cause(
    ctx: &Ctx,
    max_nodes: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    split: Option<SplitArg>,
) -> CliResult<()> {
    let max_n: usize = ctx.value(max_nodes, "max-nodes", Some(corr2cause::MAX_NODES))?;
    if !(corr2cause::MIN_NODES..=corr2cause::MAX_NODES).contains(&max_n) {
        return Err(CliError::Usage(format!(
            "--max-nodes must lie in {}..={}",
            corr2cause::MIN_NODES,
            corr2cause::MAX_NODES
        )));
    }
    let seed: u64 = ctx.value(seed, "seed", Some(0))?;
    let split = match split {
        Some(s) => s,
        None => ctx.config.get_enum("split")?.unwrap_or(SplitArg::Published),
    };
    let dir = ctx.out_path(out, "corr2cause")?;
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let policy = match split {
        SplitArg::Published => SplitPolicy::Published,
        SplitArg::Rule => SplitPolicy::Rule,
    };
    log::info!("building correlation-to-causation records for n = 2..={max_n}");
    let records = corr2cause::build_dataset(&BuildConfig { max_n, seed, split: policy })?;
    let config = serde_json::json!({ "max_nodes": max_n, "split": split });
    for s in corr2cause::Split::ALL {
        let part: Vec<&corr2cause::Record> = records.iter().filter(|r| r.split == s).collect();
        let path = dir.join(format!("{}.jsonl", s.as_str()));
        log::info!("{}: {} records", path.display(), part.len());
        write_jsonl(&path, &header_line(&format!("corr2cause/{}", s.as_str()), Some(seed), &config), &part)?;
    }
    Ok(())
}

fn gen_cladder(ctx: &Ctx, size: Option<usize>, seed: Option<u64>, out: Option<PathBuf>) -> CliResult<()> {
    let size: usize = ctx.value(size, "size", Some(10_112))?;
    if size < 2 {
        return Err(CliError::Usage("--size must be at least 2".into()));
    }
    let seed: u64 = ctx.value(seed, "seed", Some(0))?;
    let path = ctx.out_path(out, "cladder.jsonl")?;
    prepare_output(&path)?;
    log::info!("generating {size} ladder questions");
    let records = cladder::assemble_dataset(size, seed)?;
    let config = serde_json::json!({ "size": records.len() });
    write_jsonl(&path, &header_line("cladder", Some(seed), &config), &records)
}

fn perturb(ctx: &Ctx, mode: Option<ModeArg>, input: &Path, out: Option<PathBuf>) -> CliResult<()> {
    let mode = match mode {
        Some(m) => m,
        None => ctx
            .config
            .get_enum("mode")?
            .ok_or_else(|| CliError::Usage("--mode is required".into()))?,
    };
    let (header, records) = read_jsonl::<corr2cause::Record>(input)?;
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("records");
    let mode_name = match mode {
        ModeArg::Paraphrase => "paraphrase",
        ModeArg::Refactor => "refactor",
    };
    let path = ctx.out_path(out, &format!("{stem}.{mode_name}.jsonl"))?;
    prepare_output(&path)?;
    let pm = match mode {
        ModeArg::Paraphrase => PerturbMode::Paraphrase,
        ModeArg::Refactor => PerturbMode::Refactor,
    };
    let perturbed =
        records.iter().map(|r| corr2cause::perturb(r, pm)).collect::<crate::Result<Vec<_>>>()?;
    let seed = header.as_ref().and_then(|h| h.get("seed")).and_then(Value::as_u64);
    let source = header.as_ref().and_then(|h| h.get("config_hash")).cloned().unwrap_or(Value::Null);
    let config = serde_json::json!({ "mode": mode, "source_config_hash": source });
    write_jsonl(&path, &header_line("corr2cause/perturbed", seed, &config), &perturbed)
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", content = "stats", rename_all = "snake_case")]
enum StatsReport {
    Corr2cause(corr2cause::DatasetStats),
    Cladder(cladder::CladderStats),
}

fn stats(input: &Path, stdout: &mut dyn Write) -> CliResult<()> {
    let (_, values) = read_jsonl::<Value>(input)?;
    let report = if values.first().is_some_and(|v| v.get("question").is_some()) {
        let recs = values
            .into_iter()
            .map(serde_json::from_value)
            .collect::<Result<Vec<cladder::Record>, _>>()
            .map_err(|e| CliError::Input(e.to_string()))?;
        StatsReport::Cladder(cladder::dataset_stats(&recs))
    } else {
        let recs = values
            .into_iter()
            .map(serde_json::from_value)
            .collect::<Result<Vec<corr2cause::Record>, _>>()
            .map_err(|e| CliError::Input(e.to_string()))?;
        StatsReport::Corr2cause(corr2cause::dataset_stats(&recs))
    };
    let text = serde_json::to_string_pretty(&report).expect("stats serialize");
    writeln!(stdout, "{text}").map_err(io_err(Path::new("<stdout>")))
}

/// Input of `ci eval`. The adjustment candidate is named by its symbol.
#[derive(Debug, Deserialize)]
pub struct EvalRequest {
    pub graph: GraphId,
    pub cpds: Vec<Vec<f64>>,
    pub query: QueryRequest,
}

#[derive(Debug, Deserialize)]
pub struct QueryRequest {
    pub kind: QueryKind,
    #[serde(default)]
    pub polarity: Polarity,
    #[serde(default = "yes")]
    pub collider_value: bool,
    #[serde(default)]
    pub adjustment: Option<String>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Serialize)]
pub struct DataItem {
    pub term: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct EvalResponse {
    pub estimand: String,
    pub data: Vec<DataItem>,
    pub value: f64,
    /// `None` when the value is too close to the decision boundary.
    pub answer: Option<engine::Answer>,
}

pub fn evaluate_request(req: &EvalRequest) -> crate::Result<EvalResponse> {
    let g = req.graph.graph();
    let adjustment = match &req.query.adjustment {
        Some(name) => Some(g.dag.index_of(name).ok_or_else(|| crate::Error::UnknownVariable(name.clone()))?),
        None => None,
    };
    let query = Query {
        kind: req.query.kind,
        polarity: req.query.polarity,
        collider_value: req.query.collider_value,
        adjustment,
    };
    let cbn = BernoulliCbn::new(g.dag.clone(), req.cpds.clone())?;
    let estimand = engine::derive_estimand(req.graph, &query)?;
    let data = estimand
        .required_data()
        .iter()
        .map(|t| Ok(DataItem { term: t.render(g.dag.names()), value: data_value(&cbn, t)? }))
        .collect::<crate::Result<Vec<_>>>()?;
    let value = estimand.evaluate(&cbn)?;
    let answer = match engine::answer(&query, value) {
        Ok(a) => Some(a),
        Err(crate::Error::Ambiguous(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(EvalResponse { estimand: estimand.render(g.dag.names()), data, value, answer })
}

fn ci_eval(input: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    let text = match input {
        Some(p) => fs::read_to_string(p).map_err(io_err(p))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err(Path::new("<stdin>")))?;
            s
        }
    };
    let req: EvalRequest = serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
    let resp = evaluate_request(&req)?;
    let out = serde_json::to_string(&resp).expect("response serializes");
    writeln!(stdout, "{out}").map_err(io_err(Path::new("<stdout>")))
}

/// Runs a parsed command line. Data goes to files or `stdout`; progress
/// goes to the log.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let ctx = Ctx { config, env_out: std::env::var_os(OUT_DIR_ENV).map(PathBuf::from) };
    match cli.command {
        Command::EnumerateGraphs { nodes, out } => enumerate_graphs(&ctx, nodes, out),
        Command::Gen { target: GenTarget::Corr2cause { max_nodes, seed, out, split } } => {
            gen_corr2cause(&ctx, max_nodes, seed, out, split)
        }
        Command::Gen { target: GenTarget::Cladder { size, seed, out } } => gen_cladder(&ctx, size, seed, out),
        Command::Perturb { mode, input, out } => perturb(&ctx, mode, &input, out),
        Command::Stats { input } => stats(&input, stdout),
        Command::Ci { action: CiAction::Eval { input } } => ci_eval(input.as_deref(), stdout),
    }
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).parse_default_env().try_init();
    match run(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
