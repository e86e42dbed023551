//! Command line front end for `rdslab`: degree draws, graph construction,
//! single samples, inclusion estimates, estimator bias and the full
//! two-builder experiment.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiment;
pub mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Builder, DegreeSourceSpec, ExperimentConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "rdslab", version, about = "Respondent driven sampling simulation lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a graphical degree sequence from a pool of observed degrees.
    Degrees(DegreesArgs),
    /// Build a simple graph realizing a degree sequence.
    Graph(GraphArgs),
    /// Draw one sample from a graph and write its recruitment trace.
    Sample(SampleArgs),
    /// Estimate per-node inclusion probabilities by repeated sampling.
    Inclusion(InclusionArgs),
    /// Compare estimators of a population mean over repeated samples.
    Estimate(EstimateArgs),
    /// Run the full pipeline for every builder and plot inclusion against degree.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct DegreesArgs {
    /// File of observed degrees, one per line. Omit for a synthetic pool.
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long, default_value_t = rdslab::degseq::SYNTHETIC_POOL_SIZE)]
    pub pool_size: usize,
    #[arg(long, default_value_t = rdslab::degseq::SYNTHETIC_MEAN)]
    pub mean: f64,
    #[arg(long, default_value_t = rdslab::degseq::SYNTHETIC_CAP)]
    pub cap: u32,
    #[arg(long, default_value_t = 5000)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Degree sequence file, one value per line in non-increasing order.
    #[arg(long)]
    pub degrees: PathBuf,
    #[arg(long, value_enum)]
    pub builder: Builder,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = rdslab::graphgen::DEFAULT_MAX_RETRIES)]
    pub max_retries: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Edge list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Comma separated recruitment probabilities for 0, 1, 2, ... recruits.
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InclusionArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `bernoulli:q` or `logistic:a,b`.
    #[arg(long, default_value = "bernoulli:0.5")]
    pub outcome: String,
    /// Inclusion CSV files used as Horvitz-Thompson weights.
    #[arg(long)]
    pub inclusion: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON config; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Degree pool file instead of the synthetic pool.
    #[arg(long)]
    pub degree_source: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub sample_size: Option<usize>,
    #[arg(long)]
    pub reps: Option<u64>,
    #[arg(long)]
    pub probs: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub builders: Option<Vec<Builder>>,
    #[arg(long)]
    pub max_retries: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Multiply node count, sample size and replications by this factor.
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Degrees(a) => commands::degrees(a),
        Command::Graph(a) => commands::graph(a),
        Command::Sample(a) => commands::sample(a),
        Command::Inclusion(a) => commands::inclusion(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Experiment(a) => experiment::run(a),
    }
}
