use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::FileConfig;

/// Hypothesis tests for group structure in network data.
#[derive(Debug, Parser)]
#[command(name = "netstruct", version)]
struct Cli {
    /// TOML file of option values keyed by flag name; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// More logging (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximum-likelihood fits of the Erdős–Rényi and two-group block models.
    Fit(FitArgs),
    /// Test for group structure against a null model.
    Test(TestArgs),
    /// Power comparison: ROC curves of statistics under a null and an alternate.
    Roc(RocArgs),
    /// Draw a graph from a model and write it as a dataset.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Default)]
pub struct DataArgs {
    /// Built-in dataset (zachary, example1) or an edge-list file.
    #[arg(long, conflicts_with = "edges")]
    pub dataset: Option<String>,
    /// Edge-list file.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
    /// Covariate file, one `node label` pair per line.
    #[arg(long, value_name = "FILE")]
    pub covariates: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Largest graph fitted by exhaustive search.
    #[arg(long)]
    pub exact_limit: Option<usize>,
    /// Report file; defaults to stdout.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct TestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// chi2, degvar, lr, lr-spectral or lr-fd-spectral.
    #[arg(long, short)]
    pub statistic: Option<String>,
    /// Null model: er or fixed-degree.
    #[arg(long)]
    pub null: Option<String>,
    /// Edge probability of an Erdős–Rényi null (default: the MLE).
    #[arg(long)]
    pub null_p: Option<f64>,
    #[arg(long, short = 'r')]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report file; defaults to stdout.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// json or csv.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct RocArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated statistics.
    #[arg(long)]
    pub statistics: Option<String>,
    /// Skip the known-labels upper bound.
    #[arg(long)]
    pub no_bound: bool,
    /// Null model: er or fixed-degree.
    #[arg(long)]
    pub null: Option<String>,
    #[arg(long)]
    pub null_p: Option<f64>,
    /// Alternate model: er, sbm, fixed-degree or fixed-degree-sbm.
    #[arg(long)]
    pub alt: Option<String>,
    #[arg(long)]
    pub alt_p: Option<f64>,
    #[arg(long)]
    pub alt_p00: Option<f64>,
    #[arg(long)]
    pub alt_p01: Option<f64>,
    #[arg(long)]
    pub alt_p11: Option<f64>,
    /// Draws used to calibrate the fixed-degree block alternate.
    #[arg(long)]
    pub calibration: Option<usize>,
    /// Replicates per arm.
    #[arg(long, short = 'r')]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for the curve files.
    #[arg(long, short, value_name = "DIR")]
    pub output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct SimulateArgs {
    /// er, sbm or fixed-degree.
    #[arg(long, short)]
    pub model: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated group sizes for sbm.
    #[arg(long)]
    pub groups: Option<String>,
    #[arg(long)]
    pub p00: Option<f64>,
    #[arg(long)]
    pub p01: Option<f64>,
    #[arg(long)]
    pub p11: Option<f64>,
    /// Comma-separated degree sequence.
    #[arg(long, conflicts_with = "degrees_from")]
    pub degrees: Option<String>,
    /// Take the degree sequence of a built-in dataset or edge-list file.
    #[arg(long)]
    pub degrees_from: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Base name of the written files.
    #[arg(long)]
    pub name: Option<String>,
    /// Directory for the dataset files.
    #[arg(long, short, value_name = "DIR")]
    pub output: Option<PathBuf>,
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Fit(args) => commands::fit(args, &file),
        Command::Test(args) => commands::test(args, &file),
        Command::Roc(args) => commands::roc(args, &file),
        Command::Simulate(args) => commands::simulate(args, &file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
