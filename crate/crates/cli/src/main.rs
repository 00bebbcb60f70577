//! `corrules`: mine correction rules from a scored, labeled table and
//! turn them into correction models.

mod commands;
mod formats;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "corrules", version, about = "Correction rule mining for binary classifiers")]
struct Cli {
    /// Worker threads (0 = one per core). Output does not depend on it.
    #[arg(long, global = true, env = "CORRULES_WORKERS", default_value_t = 0)]
    workers: usize,

    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discretize a CSV table into a dataset file (fitting or reusing a vocabulary).
    Prepare(PrepareArgs),
    /// Enumerate acceptable correction rules.
    Mine(MineArgs),
    /// Keep rules whose confidence on a validation dataset reaches a threshold.
    Validate(ValidateArgs),
    /// Keep rules whose confidence on old data stays below a threshold.
    DriftFilter(DriftFilterArgs),
    /// Greedily build a rule list or rule set from candidate rules.
    Build(BuildArgs),
    /// Write corrected scores of a dataset.
    Apply(ApplyArgs),
    /// Classification metrics of a dataset, optionally after a correction model.
    Evaluate(EvaluateArgs),
    /// Pick representative rules by k-modes clustering of hit vectors.
    Summarize(SummarizeArgs),
    /// Generate evaluation splits or synthetic data.
    GenScenario(GenScenarioArgs),
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("`{s}` is not a positive integer")),
    }
}

fn delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be a single ASCII character, got `{s}`")),
    }
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Input table (header row required).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = ",", value_parser = delimiter)]
    delimiter: u8,
    #[arg(long)]
    label_col: String,
    /// Columns to treat as categorical even when numeric.
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    /// Columns that must parse as numbers.
    #[arg(long, value_delimiter = ',')]
    numeric: Vec<String>,
    /// Columns to drop.
    #[arg(long, value_delimiter = ',')]
    ignore: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    Identity,
    Tanh,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("vocab_source").required(true).args(["vocab", "write_vocab"]))]
struct PrepareArgs {
    #[command(flatten)]
    table: TableArgs,
    #[arg(long)]
    score_col: String,
    /// Encode with an existing vocabulary.
    #[arg(long)]
    vocab: Option<PathBuf>,
    /// Fit a vocabulary on this table and write it here.
    #[arg(long)]
    write_vocab: Option<PathBuf>,
    /// Quantile bins per numeric attribute (when fitting).
    #[arg(long, default_value_t = 4, value_parser = positive)]
    bins: usize,
    /// Also emit `attr != value` items (when fitting).
    #[arg(long)]
    not_equal: bool,
    /// Score mapping into (-1, 1) (when fitting).
    #[arg(long, value_enum, default_value = "identity")]
    transform: TransformArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    vocab: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionsArg {
    Both,
    #[value(alias = "+", alias = "pos")]
    Positive,
    #[value(alias = "-", alias = "neg")]
    Negative,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[command(flatten)]
    input: DataArgs,
    /// Maximum itemset length K.
    #[arg(short = 'K', long, default_value_t = 5, value_parser = positive)]
    max_len: usize,
    /// Support threshold θ.
    #[arg(long, default_value_t = 0.05, value_parser = unit_interval)]
    min_support: f64,
    /// Confidence threshold λ.
    #[arg(long, default_value_t = 0.9, value_parser = unit_interval)]
    min_confidence: f64,
    /// Minimal rules only.
    #[arg(long)]
    minimal: bool,
    #[arg(long, value_enum, default_value = "both")]
    directions: DirectionsArg,
    /// Disable lattice pruning (same output, slower).
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    out: PathBuf,
    /// Statistics sidecar; defaults to `<out>.stats.json`.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    rules: PathBuf,
    #[command(flatten)]
    input: DataArgs,
    #[arg(long, default_value_t = 0.7, value_parser = unit_interval)]
    lambda_valid: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DriftFilterArgs {
    #[arg(long)]
    rules: PathBuf,
    /// Old data the rules are compared against.
    #[command(flatten)]
    input: DataArgs,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    lambda_drift: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Crl,
    Crs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Accuracy,
    F1,
    LogLoss,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long)]
    rules: PathBuf,
    #[command(flatten)]
    input: DataArgs,
    #[arg(long, value_enum, default_value = "crs")]
    kind: KindArg,
    #[arg(long, value_enum, default_value = "accuracy")]
    objective: ObjectiveArg,
    /// Upper bound M on the number of rules.
    #[arg(long, value_parser = positive)]
    max_rules: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    /// Model file, or a rules file used as a model of `--kind`.
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[command(flatten)]
    input: DataArgs,
    /// CSV with columns row, score, corrected, label.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: DataArgs,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Metrics JSON; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    #[arg(long)]
    rules: PathBuf,
    /// Reference dataset for hit vectors.
    #[command(flatten)]
    input: DataArgs,
    /// Clusters per direction.
    #[arg(short = 'k', long, default_value_t = 50, value_parser = positive)]
    clusters: usize,
    #[arg(long, default_value_t = 100, value_parser = positive)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioKind {
    Lack,
    Drift,
    Planted,
}

#[derive(Debug, Args)]
struct GenScenarioArgs {
    #[arg(long, value_enum)]
    kind: ScenarioKind,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Input table (lack, drift).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = ",", value_parser = delimiter)]
    delimiter: u8,
    #[arg(long)]
    label_col: Option<String>,
    /// Score column carried through to the split files (lack, drift).
    #[arg(long)]
    score_col: Option<String>,
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    numeric: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    ignore: Vec<String>,

    /// TRN size (lack).
    #[arg(long, default_value_t = 100)]
    trn: usize,
    /// MNG size (lack).
    #[arg(long, default_value_t = 500)]
    mng: usize,
    /// Share of the remainder going to AUG (lack).
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    aug_frac: f64,

    /// Number of shifted regions (drift).
    #[arg(long, default_value_t = 10, value_parser = positive)]
    regions: usize,
    /// Tree depth for region candidates (drift).
    #[arg(long, default_value_t = 5, value_parser = positive)]
    depth: usize,
    /// TRN inclusion weight of shifted instances (drift).
    #[arg(long, default_value_t = 0.05, value_parser = unit_interval)]
    rho: f64,

    #[arg(long, default_value_t = 20, value_parser = positive)]
    n_items: usize,
    #[arg(long, default_value_t = 2000, value_parser = positive)]
    n_instances: usize,
    /// Planted item ids, comma separated (planted).
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    planted: Vec<u32>,
    #[arg(long, default_value_t = 0.9, value_parser = unit_interval)]
    flip_rate: f64,
    #[arg(long, default_value_t = 0.05, value_parser = unit_interval)]
    noise: f64,
    /// Share of planted instances held out as TST (planted).
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    holdout_frac: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    if cli.workers > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
