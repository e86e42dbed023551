//! Experiment configuration: defaults, JSON file, then command-line flags,
//! later layers winning.

use std::fs;
use std::path::{Path, PathBuf};

use rdslab::degseq::{SYNTHETIC_CAP, SYNTHETIC_MEAN, SYNTHETIC_POOL_SIZE};
use rdslab::sampler::{RecruitmentDistribution, OBSERVED_RECRUITMENT};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "RDSLAB_OUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "rdslab-out";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSourceSpec {
    File(PathBuf),
    Synthetic { pool_size: usize, mean: f64, cap: u32 },
}

impl Default for DegreeSourceSpec {
    fn default() -> Self {
        DegreeSourceSpec::Synthetic {
            pool_size: SYNTHETIC_POOL_SIZE,
            mean: SYNTHETIC_MEAN,
            cap: SYNTHETIC_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Builder {
    Raman,
    Bks,
}

impl Builder {
    pub fn name(self) -> &'static str {
        match self {
            Builder::Raman => "raman",
            Builder::Bks => "bks",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub degree_source: DegreeSourceSpec,
    pub nodes: usize,
    pub sample_size: usize,
    pub replications: u64,
    pub probs: Vec<f64>,
    pub master_seed: u64,
    pub builders: Vec<Builder>,
    pub max_retries: usize,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            degree_source: DegreeSourceSpec::default(),
            nodes: 5000,
            sample_size: 373,
            replications: 10_000,
            probs: OBSERVED_RECRUITMENT.to_vec(),
            master_seed: 1,
            builders: vec![Builder::Raman, Builder::Bks],
            max_retries: rdslab::graphgen::DEFAULT_MAX_RETRIES,
            output_dir: default_output_dir(),
        }
    }
}

pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

/// Same fields as [`ExperimentConfig`], all optional, as read from a file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub degree_source: Option<DegreeSourceSpec>,
    pub nodes: Option<usize>,
    pub sample_size: Option<usize>,
    pub replications: Option<u64>,
    pub probs: Option<Vec<f64>>,
    pub master_seed: Option<u64>,
    pub builders: Option<Vec<Builder>>,
    pub max_retries: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

impl PartialConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(self, base: &mut ExperimentConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { base.$field = v; })*
            };
        }
        take!(degree_source, nodes, sample_size, replications, probs, master_seed, builders, max_retries, output_dir);
    }
}

impl ExperimentConfig {
    /// Shrinks node count, sample size and replications by `factor`,
    /// keeping each at least 1.
    pub fn scale(&mut self, factor: f64) -> Result<(), CliError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(CliError::Config(format!("scale {factor} must be positive")));
        }
        let shrink = |x: f64| ((x * factor).round() as u64).max(1);
        self.nodes = shrink(self.nodes as f64) as usize;
        self.sample_size = shrink(self.sample_size as f64) as usize;
        self.replications = shrink(self.replications as f64);
        Ok(())
    }

    pub fn validate(&self) -> Result<RecruitmentDistribution, CliError> {
        if self.nodes == 0 {
            return Err(CliError::Config("nodes must be at least 1".into()));
        }
        if self.sample_size == 0 || self.sample_size > self.nodes {
            return Err(CliError::Config(format!(
                "sample size {} must be in 1..={}",
                self.sample_size, self.nodes
            )));
        }
        if self.replications == 0 {
            return Err(CliError::Config("replications must be at least 1".into()));
        }
        if self.builders.is_empty() {
            return Err(CliError::Config("no graph builders selected".into()));
        }
        if let DegreeSourceSpec::Synthetic { pool_size, mean, cap } = &self.degree_source {
            if *pool_size == 0 || mean.is_nan() || *mean <= 0.0 || *cap == 0 {
                return Err(CliError::Config("synthetic source needs pool_size, mean and cap > 0".into()));
            }
        }
        RecruitmentDistribution::new(self.probs.clone()).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses `0.5,0.3,0.2` into probabilities.
pub fn parse_probs(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad probability {t:?}")))
        })
        .collect()
}
