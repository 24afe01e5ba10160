//! Command-line front end: argument model, result records and the growth scan.
//!
//! The binary only parses arguments and calls [`execute`]; everything else
//! lives here so it can be driven from tests and examples.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ideal_norms::{
    delta_estimate, delta_estimate_seeded, doubling_residual, mu_estimate, rho_estimate, Certificate,
    IdealNormEstimate, OptimizerConfig,
};
use crate::norms::{system_norm_with_doubling, GridFunction, VectorTuple};
use crate::seed::derive_seed;
use crate::spaces::{LinearOperator, NormedSpace, Scalar};
use crate::systems::{QuadratureGrid, System, TrigSystem};
use crate::verify::{
    check_constant_chain, check_duality_and_injectivity, check_identities, check_tuple_inequalities, summarize,
    CheckResult, Summary, UNIVERSALITY_NOTE,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "UMDNORMS_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::ChecksFailed(k) => write!(f, "{k} checks failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Inclusive range `lo..hi`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("bad size `{v}`"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(NRange { lo, hi })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorSource {
    Identity,
    /// CSV of matrix rows.
    Matrix(PathBuf),
}

impl FromStr for OperatorSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "" => Err("empty operator".into()),
            "identity" => Ok(OperatorSource::Identity),
            path => Ok(OperatorSource::Matrix(PathBuf::from(path))),
        }
    }
}

impl fmt::Display for OperatorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorSource::Identity => write!(f, "identity"),
            OperatorSource::Matrix(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Jsonl,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Tuple,
    Chain,
    Duality,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Tuple => "tuple",
            Suite::Chain => "chain",
            Suite::Duality => "duality",
            Suite::All => "all",
        })
    }
}

fn parse_space(s: &str) -> Result<NormedSpace, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_system(s: &str) -> Result<System, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Parser, Clone, Debug, PartialEq)]
#[command(name = "umdnorms", version, about = "System norms and ideal norms of operators on finite-dimensional spaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq)]
pub enum Command {
    /// System norm of a tuple.
    Norm(NormArgs),
    /// Lower bound for rho(T|to, from).
    Rho(EstimateArgs),
    /// Lower bound for delta(T|to, from).
    Delta(EstimateArgs),
    /// Lower bound for mu_n(T).
    Mu(MuArgs),
    /// Run the check suite.
    Verify(VerifyArgs),
    /// Scan the five ideal norms over a range of n.
    Growth(GrowthArgs),
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub gradient_tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl OptimizerArgs {
    pub fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            seed: self.seed,
        }
    }

    fn push_args(&self, out: &mut Vec<String>) {
        push(out, "--restarts", self.restarts);
        push(out, "--max-iterations", self.max_iterations);
        push(out, "--gradient-tolerance", self.gradient_tolerance);
        push(out, "--seed", self.seed);
    }
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct NormArgs {
    #[arg(long, value_parser = parse_space)]
    pub space: NormedSpace,
    #[arg(long, value_parser = parse_system)]
    pub system: System,
    /// Inline `[[..],[..]]` or a CSV file with one vector per row.
    #[arg(long)]
    pub tuple: String,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Accepted for a uniform interface; the norm involves no randomness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_system)]
    pub from: System,
    #[arg(long, value_parser = parse_system)]
    pub to: System,
    /// Domain of the operator.
    #[arg(long, value_parser = parse_space)]
    pub space: NormedSpace,
    /// Codomain; defaults to the domain.
    #[arg(long, value_parser = parse_space)]
    pub codomain: Option<NormedSpace>,
    #[arg(long, default_value = "identity")]
    pub operator: OperatorSource,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub emit_certificate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct MuArgs {
    #[arg(short = 'n', long = "n")]
    pub n: usize,
    #[arg(long, value_parser = parse_space)]
    pub space: NormedSpace,
    #[arg(long, value_parser = parse_space)]
    pub codomain: Option<NormedSpace>,
    #[arg(long, default_value = "identity")]
    pub operator: OperatorSource,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    #[arg(long)]
    pub emit_certificate: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest tuple length in the per-tuple suite.
    #[arg(long, default_value_t = 16)]
    pub n_max: usize,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iterations: usize,
    #[arg(long, value_parser = parse_space, value_delimiter = ',', default_value = "l1:2,l1:3,linf:2,linf:3")]
    pub chain_spaces: Vec<NormedSpace>,
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,12")]
    pub chain_n: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct GrowthArgs {
    #[arg(long, value_parser = parse_space)]
    pub space: NormedSpace,
    #[arg(short = 'n', long = "n")]
    pub n: NRange,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
    /// Also start delta at n from the certificate found at n - 1.
    #[arg(long)]
    pub warm_start: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn push(out: &mut Vec<String>, flag: &str, value: impl fmt::Display) {
    out.push(flag.to_string());
    out.push(value.to_string());
}

fn push_opt(out: &mut Vec<String>, flag: &str, value: &Option<impl fmt::Display>) {
    if let Some(v) = value {
        push(out, flag, v);
    }
}

fn push_path(out: &mut Vec<String>, flag: &str, value: &Option<PathBuf>) {
    if let Some(v) = value {
        push(out, flag, v.display());
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Canonical argument list; parsing it gives back an equal config.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec!["umdnorms".to_string()];
        match &self.command {
            Command::Norm(c) => {
                a.push("norm".into());
                push(&mut a, "--space", &c.space);
                push(&mut a, "--system", &c.system);
                push(&mut a, "--tuple", &c.tuple);
                push_opt(&mut a, "--grid", &c.grid);
                push(&mut a, "--seed", c.seed);
                push_path(&mut a, "--out", &c.out);
            }
            Command::Rho(c) | Command::Delta(c) => {
                a.push(if matches!(self.command, Command::Rho(_)) { "rho" } else { "delta" }.into());
                push(&mut a, "--from", &c.from);
                push(&mut a, "--to", &c.to);
                push(&mut a, "--space", &c.space);
                push_opt(&mut a, "--codomain", &c.codomain);
                push(&mut a, "--operator", &c.operator);
                push_opt(&mut a, "--grid", &c.grid);
                c.optimizer.push_args(&mut a);
                if c.emit_certificate {
                    a.push("--emit-certificate".into());
                }
                push_path(&mut a, "--out", &c.out);
            }
            Command::Mu(c) => {
                a.push("mu".into());
                push(&mut a, "--n", c.n);
                push(&mut a, "--space", &c.space);
                push_opt(&mut a, "--codomain", &c.codomain);
                push(&mut a, "--operator", &c.operator);
                push_opt(&mut a, "--grid", &c.grid);
                c.optimizer.push_args(&mut a);
                if c.emit_certificate {
                    a.push("--emit-certificate".into());
                }
                push_path(&mut a, "--out", &c.out);
            }
            Command::Verify(c) => {
                a.push("verify".into());
                push(&mut a, "--suite", c.suite);
                push(&mut a, "--trials", c.trials);
                push(&mut a, "--seed", c.seed);
                push(&mut a, "--n-max", c.n_max);
                push(&mut a, "--restarts", c.restarts);
                push(&mut a, "--max-iterations", c.max_iterations);
                push(&mut a, "--chain-spaces", join(&c.chain_spaces));
                push(&mut a, "--chain-n", join(&c.chain_n));
                push_path(&mut a, "--out", &c.out);
            }
            Command::Growth(c) => {
                a.push("growth".into());
                push(&mut a, "--space", &c.space);
                push(&mut a, "--n", c.n);
                push_opt(&mut a, "--grid", &c.grid);
                c.optimizer.push_args(&mut a);
                if c.warm_start {
                    a.push("--warm-start".into());
                }
                push(&mut a, "--format", c.format);
                push_path(&mut a, "--out", &c.out);
            }
        }
        a
    }
}

/// Output of the `norm` subcommand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub system: System,
    pub n: usize,
    pub space: NormedSpace,
    pub value: f64,
    pub doubling_residual: f64,
}

/// Output of the `rho` and `delta` subcommands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub norm: String,
    pub from: System,
    pub to: System,
    pub n: usize,
    pub space: NormedSpace,
    pub operator: String,
    pub value: f64,
    pub exact: bool,
    pub restarts: usize,
    pub seed: u64,
    pub doubling_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<NormedSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// Output of the `mu` subcommand; `value` is the larger branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuRecord {
    pub norm: String,
    pub n: usize,
    pub space: NormedSpace,
    pub operator: String,
    pub value: f64,
    pub rho_cs: f64,
    pub rho_sc: f64,
    pub exact: bool,
    pub restarts: usize,
    pub seed: u64,
    pub doubling_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codomain: Option<NormedSpace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

/// One row of a growth scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRecord {
    pub n: usize,
    pub space: NormedSpace,
    pub delta_ee: f64,
    pub rho_sc: f64,
    pub rho_cs: f64,
    pub mu: f64,
    pub restarts: usize,
    pub seed: u64,
    pub doubling_residual: f64,
}

/// Closing line of a growth file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSummary {
    pub rows: usize,
    pub n_first: usize,
    pub n_last: usize,
    pub delta_ee_first: f64,
    pub delta_ee_max: f64,
    pub mu_max: f64,
    pub max_doubling_residual: f64,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a GrowthSummary,
}

impl GrowthSummary {
    pub fn of(records: &[GrowthRecord]) -> Option<Self> {
        let first = records.first()?;
        let last = records.last()?;
        Some(GrowthSummary {
            rows: records.len(),
            n_first: first.n,
            n_last: last.n,
            delta_ee_first: first.delta_ee,
            delta_ee_max: records.iter().map(|r| r.delta_ee).fold(f64::MIN, f64::max),
            mu_max: records.iter().map(|r| r.mu).fold(f64::MIN, f64::max),
            max_doubling_residual: records.iter().map(|r| r.doubling_residual).fold(0.0, f64::max),
        })
    }

    fn csv_line(&self) -> String {
        format!(
            "# summary rows={} n={}..{} delta_ee_first={} delta_ee_max={} mu_max={} max_doubling_residual={}",
            self.rows,
            self.n_first,
            self.n_last,
            self.delta_ee_first,
            self.delta_ee_max,
            self.mu_max,
            self.max_doubling_residual
        )
    }
}

/// One line of a verify report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportLine {
    Header {
        suite: String,
        seed: u64,
        trials: usize,
        note: String,
    },
    Check(CheckResult),
    Summary(Summary),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConfig {
    pub space: NormedSpace,
    pub n: NRange,
    pub optimizer: OptimizerConfig,
    pub grid: Option<usize>,
    pub warm_start: bool,
}

/// The identity on `space` at every `n` in the range.
///
/// Row `n` uses the seed `derive_seed(optimizer.seed, n)` and the grid
/// `QuadratureGrid::default_for(n)` unless one is given, so it can be
/// reproduced alone with `--n n..n`. With warm starts the δ search at `n`
/// also starts from the certificate found at `n - 1`, which ties each row
/// to the rows before it.
pub fn growth_scan(
    cfg: &GrowthConfig,
    mut on_record: impl FnMut(&GrowthRecord) -> CliResult<()>,
) -> CliResult<Vec<GrowthRecord>> {
    let fixed = cfg.grid.map(QuadratureGrid::new).transpose()?;
    let t = LinearOperator::identity(&cfg.space);
    let mut records = Vec::new();
    let mut previous: Option<GridFunction> = None;
    for n in cfg.n.lo..=cfg.n.hi {
        let grid = fixed.unwrap_or_else(|| QuadratureGrid::default_for(n));
        let opt = OptimizerConfig {
            seed: derive_seed(cfg.optimizer.seed, n as u64),
            ..cfg.optimizer.clone()
        };
        let c: System = TrigSystem::cosine(n).into();
        let s: System = TrigSystem::sine(n).into();
        let e: System = TrigSystem::exponential(n).into();
        let rho_sc = rho_estimate(&t, &s, &c, grid, &opt)?;
        let rho_cs = rho_estimate(&t, &c, &s, grid, &opt)?;
        let rho_ee = rho_estimate(&t, &e, &e, grid, &opt)?;
        let warm: Vec<GridFunction> = match previous.take() {
            Some(f) if cfg.warm_start => vec![f.interpolate(grid)?],
            _ => Vec::new(),
        };
        let delta = delta_estimate_seeded(&t, &e, &e, grid, &opt, &rho_ee, &warm)?;
        let residual = doubling_residual(&delta, &t, &e, &e, grid)?;
        previous = delta.function().cloned();
        let record = GrowthRecord {
            n,
            space: cfg.space.clone(),
            delta_ee: delta.value,
            rho_sc: rho_sc.value,
            rho_cs: rho_cs.value,
            mu: rho_sc.value.max(rho_cs.value),
            restarts: cfg.optimizer.restarts,
            seed: cfg.optimizer.seed,
            doubling_residual: residual,
        };
        on_record(&record)?;
        records.push(record);
    }
    Ok(records)
}

/// Parses `3`, `-1.5`, `2i`, `-i`, `1+2i`, `0.5-1e-3i`.
pub fn parse_complex(s: &str) -> Result<Scalar, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let bad = || format!("bad complex literal `{s}`");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Scalar::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Scalar::new(re, im))
}

/// Literal accepted by [`parse_complex`].
pub fn format_complex(z: Scalar) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn read_rows(path: &Path) -> CliResult<Vec<Vec<Scalar>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(c, v)| parse_complex(v).map_err(|m| CliError::Usage(format!("row {}, column {}: {m}", r + 1, c + 1))))
            .collect::<CliResult<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn inline_rows(s: &str) -> CliResult<Vec<Vec<Scalar>>> {
    let value: serde_json::Value =
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("inline tuple: {e}")))?;
    let bad = || CliError::Usage("inline tuple must be an array of arrays".into());
    value
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|v| match v {
                    serde_json::Value::Number(x) => x.as_f64().map(|re| Scalar::new(re, 0.0)).ok_or_else(bad),
                    serde_json::Value::String(lit) => parse_complex(lit).map_err(CliError::Usage),
                    _ => Err(bad()),
                })
                .collect()
        })
        .collect()
}

/// A tuple given inline (`[[1, 0], ["0+1i", 2]]`) or as a CSV file.
pub fn load_tuple(space: &NormedSpace, source: &str) -> CliResult<VectorTuple> {
    let rows = if source.trim_start().starts_with('[') {
        inline_rows(source)?
    } else {
        read_rows(Path::new(source))?
    };
    Ok(VectorTuple::new(space.clone(), rows)?)
}

/// Reads a matrix CSV (one row per line) between the given spaces.
pub fn load_operator(source: &OperatorSource, domain: &NormedSpace, codomain: &NormedSpace) -> CliResult<LinearOperator> {
    match source {
        OperatorSource::Identity => {
            if !codomain.same_norm(domain) || codomain.dim() != domain.dim() {
                return Err(CliError::Usage("the identity needs equal domain and codomain".into()));
            }
            Ok(LinearOperator::identity(domain))
        }
        OperatorSource::Matrix(path) => {
            let rows = read_rows(path)?;
            let cols = rows.first().map_or(0, |r| r.len());
            if rows.iter().any(|r| r.len() != cols) {
                return Err(CliError::Usage(format!("{}: ragged matrix", path.display())));
            }
            let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
            Ok(LinearOperator::new(domain.clone(), codomain.clone(), m)?)
        }
    }
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?)),
        None => Box::new(stdout),
    })
}

fn write_json<T: Serialize>(value: &T, path: &Option<PathBuf>, stdout: &mut dyn Write) -> CliResult<()> {
    let mut w = open_output(path, stdout)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn grid_for(grid: Option<usize>, max_frequency: usize) -> CliResult<QuadratureGrid> {
    Ok(match grid {
        Some(n) => QuadratureGrid::new(n)?,
        None => QuadratureGrid::default_for(max_frequency),
    })
}

/// Caps the global thread pool at `UMDNORMS_THREADS` when it is set.
pub fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
        // a pool that already exists keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs one command, writing to `--out` or else to `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match &cfg.command {
        Command::Norm(c) => run_norm(c, stdout),
        Command::Rho(c) => run_estimate("rho", c, stdout),
        Command::Delta(c) => run_estimate("delta", c, stdout),
        Command::Mu(c) => run_mu(c, stdout),
        Command::Verify(c) => run_verify(c, stdout),
        Command::Growth(c) => run_growth(c, stdout),
    }
}

fn run_norm(c: &NormArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let xs = load_tuple(&c.space, &c.tuple)?;
    let grid = grid_for(c.grid, c.system.max_frequency())?;
    let (value, residual) = system_norm_with_doubling(&xs, &c.system, grid)?;
    let record = NormRecord {
        system: c.system.clone(),
        n: c.system.size(),
        space: c.space.clone(),
        value,
        doubling_residual: residual,
    };
    write_json(&record, &c.out, stdout)
}

fn run_estimate(norm: &str, c: &EstimateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let codomain = c.codomain.clone().unwrap_or_else(|| c.space.clone());
    let t = load_operator(&c.operator, &c.space, &codomain)?;
    let grid = grid_for(c.grid, c.from.max_frequency().max(c.to.max_frequency()))?;
    let opt = c.optimizer.config();
    let est = if norm == "rho" {
        rho_estimate(&t, &c.to, &c.from, grid, &opt)?
    } else {
        delta_estimate(&t, &c.to, &c.from, grid, &opt)?
    };
    let residual = doubling_residual(&est, &t, &c.to, &c.from, grid)?;
    let record = EstimateRecord {
        norm: norm.to_string(),
        from: c.from.clone(),
        to: c.to.clone(),
        n: c.from.size(),
        space: c.space.clone(),
        operator: c.operator.to_string(),
        value: est.value,
        exact: est.exact,
        restarts: opt.restarts,
        seed: opt.seed,
        doubling_residual: residual,
        codomain: c.codomain.clone(),
        certificate: c.emit_certificate.then(|| est.certificate.clone()),
    };
    write_json(&record, &c.out, stdout)
}

fn run_mu(c: &MuArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let codomain = c.codomain.clone().unwrap_or_else(|| c.space.clone());
    let t = load_operator(&c.operator, &c.space, &codomain)?;
    let grid = grid_for(c.grid, c.n)?;
    let opt = c.optimizer.config();
    let mu = mu_estimate(&t, c.n, grid, &opt)?;
    let best: &IdealNormEstimate = mu.best();
    let (to, from): (System, System) = if std::ptr::eq(best, &mu.cos_sin) {
        (TrigSystem::cosine(c.n).into(), TrigSystem::sine(c.n).into())
    } else {
        (TrigSystem::sine(c.n).into(), TrigSystem::cosine(c.n).into())
    };
    let residual = doubling_residual(best, &t, &to, &from, grid)?;
    let record = MuRecord {
        norm: "mu".into(),
        n: c.n,
        space: c.space.clone(),
        operator: c.operator.to_string(),
        value: mu.value(),
        rho_cs: mu.cos_sin.value,
        rho_sc: mu.sin_cos.value,
        exact: mu.cos_sin.exact && mu.sin_cos.exact,
        restarts: opt.restarts,
        seed: opt.seed,
        doubling_residual: residual,
        codomain: c.codomain.clone(),
        certificate: c.emit_certificate.then(|| best.certificate.clone()),
    };
    write_json(&record, &c.out, stdout)
}

/// Spaces of the per-tuple suite: ℓ₁, ℓ₂, ℓ∞ in dimensions 1 to 6.
pub fn tuple_suite_spaces() -> Vec<NormedSpace> {
    let mut spaces = Vec::new();
    for dim in 1..=6 {
        spaces.push(NormedSpace::l1(dim));
        spaces.push(NormedSpace::l2(dim));
        spaces.push(NormedSpace::linf(dim));
    }
    spaces
}

/// Runs the selected suites in a fixed order.
pub fn verify_results(c: &VerifyArgs) -> CliResult<Vec<CheckResult>> {
    let opt = OptimizerConfig {
        restarts: c.restarts,
        max_iterations: c.max_iterations,
        seed: c.seed,
        ..OptimizerConfig::default()
    };
    let want = |s: Suite| c.suite == Suite::All || c.suite == s;
    let mut results = Vec::new();
    if want(Suite::Identities) {
        results.extend(check_identities(c.trials, c.seed));
    }
    if want(Suite::Tuple) {
        results.extend(check_tuple_inequalities(c.trials, &tuple_suite_spaces(), c.n_max, c.seed));
    }
    if want(Suite::Chain) {
        results.extend(check_constant_chain(&c.chain_spaces, &c.chain_n, &opt)?);
    }
    if want(Suite::Duality) {
        results.extend(check_duality_and_injectivity(&opt)?);
    }
    Ok(results)
}

fn run_verify(c: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let results = verify_results(c)?;
    let summary = summarize(&results);
    let mut w = open_output(&c.out, stdout)?;
    let header = ReportLine::Header {
        suite: c.suite.to_string(),
        seed: c.seed,
        trials: c.trials,
        note: UNIVERSALITY_NOTE.to_string(),
    };
    serde_json::to_writer(&mut w, &header)?;
    writeln!(w)?;
    for r in results {
        serde_json::to_writer(&mut w, &ReportLine::Check(r))?;
        writeln!(w)?;
    }
    serde_json::to_writer(&mut w, &ReportLine::Summary(summary))?;
    writeln!(w)?;
    w.flush()?;
    if summary.failed > 0 {
        return Err(CliError::ChecksFailed(summary.failed));
    }
    Ok(())
}

fn run_growth(c: &GrowthArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = GrowthConfig {
        space: c.space.clone(),
        n: c.n,
        optimizer: c.optimizer.config(),
        grid: c.grid,
        warm_start: c.warm_start,
    };
    let mut w = open_output(&c.out, stdout)?;
    let records = match c.format {
        Format::Csv => {
            let mut csv_out = csv::Writer::from_writer(&mut w);
            let records = growth_scan(&cfg, |r| {
                csv_out.serialize(r)?;
                csv_out.flush()?;
                Ok(())
            })?;
            drop(csv_out);
            if let Some(s) = GrowthSummary::of(&records) {
                writeln!(w, "{}", s.csv_line())?;
            }
            records
        }
        Format::Json | Format::Jsonl => {
            let records = growth_scan(&cfg, |r| {
                serde_json::to_writer(&mut w, r)?;
                writeln!(w)?;
                w.flush()?;
                Ok(())
            })?;
            if let Some(s) = GrowthSummary::of(&records) {
                serde_json::to_writer(&mut w, &SummaryLine { summary: &s })?;
                writeln!(w)?;
            }
            records
        }
    };
    w.flush()?;
    debug_assert!(records.windows(2).all(|p| p[0].n < p[1].n));
    Ok(())
}

/// Reads a growth file written in CSV or JSONL, skipping the summary line.
pub fn read_growth(path: &Path) -> CliResult<Vec<GrowthRecord>> {
    let text = std::fs::read_to_string(path)?;
    if text.starts_with('{') {
        let mut out = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let v: serde_json::Value = serde_json::from_str(line)?;
            if v.get("summary").is_none() {
                out.push(serde_json::from_value(v)?);
            }
        }
        return Ok(out);
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    Ok(reader.deserialize().collect::<Result<Vec<GrowthRecord>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("3").unwrap(), Scalar::new(3.0, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Scalar::new(0.0, -2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Scalar::new(1.0, 2.0));
        assert_eq!(parse_complex(" 0.5 - 1e-3i").unwrap(), Scalar::new(0.5, -1e-3));
        assert_eq!(parse_complex("1e-2+i").unwrap(), Scalar::new(1e-2, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Scalar::new(0.0, -1.0));
        assert!(parse_complex("1+2j").is_err());
        for z in [Scalar::new(1.5, -2.0), Scalar::new(-3.0, 0.0), Scalar::new(0.0, 4.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn n_range() {
        assert_eq!("1..32".parse::<NRange>().unwrap(), NRange { lo: 1, hi: 32 });
        assert_eq!("5".parse::<NRange>().unwrap(), NRange { lo: 5, hi: 5 });
        assert!("3..2".parse::<NRange>().is_err());
        assert!("0..2".parse::<NRange>().is_err());
    }

    #[test]
    fn inline_tuple() {
        let xs = load_tuple(&NormedSpace::l1(2), r#"[[1, "2-i"], [0, 3]]"#).unwrap();
        assert_eq!(xs.get(0)[1], Scalar::new(2.0, -1.0));
        assert!(load_tuple(&NormedSpace::l1(2), "[[1]]").is_err());
    }

    #[test]
    fn args_round_trip() {
        for line in [
            "umdnorms norm --space l1:1 --system S:1 --tuple [[2]]",
            "umdnorms rho --from C:8 --to S:8 --space l2:4",
            "umdnorms delta --from E:4 --to E:4 --space l1:2 --grid 32 --restarts 64 --seed 3 --emit-certificate",
            "umdnorms mu -n 6 --space linf:3 --seed 9",
            "umdnorms verify --suite tuple --trials 10 --out r.jsonl",
            "umdnorms growth --space l2:4 --n 1..32 --format jsonl --warm-start",
        ] {
            let cfg = RunConfig::try_parse_from(line.split(' ')).unwrap();
            let again = RunConfig::try_parse_from(cfg.to_args()).unwrap();
            assert_eq!(cfg, again, "{line}");
        }
    }

    #[test]
    fn exit_codes() {
        let e: CliError = Error::Aliasing { frequency: 4, nodes: 8 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = Error::SizeMismatch("x".into()).into();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::ChecksFailed(1).exit_code(), 1);
    }
}
