//! Monte Carlo inclusion probabilities.
//!
//! Replication `r` draws from `Stream::substream(master_seed, r)`, so the
//! tallies depend only on the inputs and the master seed. Counts are
//! integers and their reduction is exact, which makes the result identical
//! for any worker count or scheduling.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::graphgen::Graph;
use crate::rng::Stream;
use crate::sampler::{draw_sample, RecruitmentDistribution, SampleError};

#[derive(Debug, Error, PartialEq)]
pub enum InclusionError {
    #[error("replication count must be at least 1")]
    NoReplications,
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("could not start a pool with {0} workers")]
    Workers(usize),
    #[error("log-log fit needs two usable nodes, found {usable}")]
    TooFewPoints { usable: usize },
    #[error("log-log fit is degenerate: every usable node has the same degree")]
    NoDegreeVariation,
    #[error("estimate covers {estimate} nodes but {degrees} degrees were given")]
    LengthMismatch { estimate: usize, degrees: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionEstimate {
    counts: Vec<u64>,
    replications: u64,
    sample_size: usize,
}

impl InclusionEstimate {
    pub fn from_counts(counts: Vec<u64>, replications: u64, sample_size: usize) -> Self {
        InclusionEstimate {
            counts,
            replications,
            sample_size,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    pub fn node_count(&self) -> usize {
        self.counts.len()
    }

    pub fn pi_hat(&self, node: usize) -> f64 {
        self.counts[node] as f64 / self.replications as f64
    }

    pub fn pi_hats(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.pi_hat(i)).collect()
    }

    /// Binomial standard error `sqrt(pi (1 - pi) / R)`.
    pub fn stderr(&self, node: usize) -> f64 {
        let p = self.pi_hat(node);
        (p * (1.0 - p) / self.replications as f64).sqrt()
    }

    /// `sum(counts) == n * R`, i.e. the estimates add up to `n` exactly.
    pub fn counting_identity_holds(&self) -> bool {
        self.counts.iter().sum::<u64>() == self.sample_size as u64 * self.replications
    }

    /// CSV with header `node,degree,count,pi_hat,stderr`.
    pub fn write_csv<W: Write>(&self, degrees: &[u32], mut out: W) -> io::Result<()> {
        writeln!(out, "node,degree,count,pi_hat,stderr")?;
        for (node, (&count, &degree)) in self.counts.iter().zip(degrees).enumerate() {
            writeln!(
                out,
                "{node},{degree},{count},{},{}",
                self.pi_hat(node),
                self.stderr(node)
            )?;
        }
        Ok(())
    }
}

/// Runs `replications` independent samples of size `n` and tallies how often
/// each node appears, on the ambient rayon pool.
pub fn estimate_inclusion(
    g: &Graph,
    n: usize,
    p: &RecruitmentDistribution,
    replications: u64,
    master_seed: u64,
) -> Result<InclusionEstimate, InclusionError> {
    if replications == 0 {
        return Err(InclusionError::NoReplications);
    }
    let population = g.node_count();
    let counts = (0..replications)
        .into_par_iter()
        .try_fold(
            || vec![0u64; population],
            |mut acc, r| {
                let mut rng = Stream::substream(master_seed, r);
                let sample = draw_sample(g, n, p, &mut rng)?;
                for node in sample.nodes() {
                    acc[node as usize] += 1;
                }
                Ok::<_, SampleError>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; population],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    Ok(InclusionEstimate {
        counts,
        replications,
        sample_size: n,
    })
}

/// [`estimate_inclusion`] on a dedicated pool of `workers` threads
/// (0 = rayon's default).
pub fn estimate_inclusion_with_workers(
    g: &Graph,
    n: usize,
    p: &RecruitmentDistribution,
    replications: u64,
    master_seed: u64,
    workers: usize,
) -> Result<InclusionEstimate, InclusionError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|_| InclusionError::Workers(workers))?;
    pool.install(|| estimate_inclusion(g, n, p, replications, master_seed))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub used: usize,
    /// Nodes left out because their estimate or degree is zero.
    pub excluded: usize,
}

/// Least-squares fit of `ln(pi_hat)` on `ln(degree)`. Nodes with a zero
/// estimate or zero degree are excluded, never imputed.
pub fn loglog_slope(est: &InclusionEstimate, degrees: &[u32]) -> Result<LogLogFit, InclusionError> {
    if est.node_count() != degrees.len() {
        return Err(InclusionError::LengthMismatch {
            estimate: est.node_count(),
            degrees: degrees.len(),
        });
    }
    let points: Vec<(f64, f64)> = (0..degrees.len())
        .filter(|&i| est.counts()[i] > 0 && degrees[i] > 0)
        .map(|i| ((degrees[i] as f64).ln(), est.pi_hat(i).ln()))
        .collect();
    let excluded = degrees.len() - points.len();
    let fit = ols(&points)?;
    Ok(LogLogFit {
        excluded,
        ..fit
    })
}

fn ols(points: &[(f64, f64)]) -> Result<LogLogFit, InclusionError> {
    if points.len() < 2 {
        return Err(InclusionError::TooFewPoints { usable: points.len() });
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 {
        return Err(InclusionError::NoDegreeVariation);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok(LogLogFit {
        slope,
        intercept,
        r2,
        used: points.len(),
        excluded: 0,
    })
}
