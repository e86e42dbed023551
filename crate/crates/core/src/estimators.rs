//! Population-mean estimators over sampled traces, and a harness measuring
//! their bias against a known population mean.
//!
//! Estimators only see the trace, the outcomes and the supplied weights.
//! They never look at the graph.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::graphgen::Graph;
use crate::rng::Stream;
use crate::sampler::{draw_sample, RdsSample, RecruitmentDistribution, SampleError};

#[derive(Debug, Error, PartialEq)]
pub enum EstimatorError {
    #[error("node {node} has no usable inclusion probability (got {value})")]
    MissingProbability { node: u32, value: f64 },
    #[error("node {node} reports degree 0 and cannot be degree-weighted")]
    ZeroDegree { node: u32 },
    #[error("sample is empty")]
    EmptySample,
    #[error("bernoulli success probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("{what} has {got} entries, population has {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("replication count must be at least 1")]
    NoReplications,
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// Study variable over the whole population with its true mean.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeAssignment {
    y: Vec<f64>,
    mu: f64,
}

impl OutcomeAssignment {
    pub fn new(y: Vec<f64>) -> Self {
        let mu = if y.is_empty() {
            0.0
        } else {
            y.iter().sum::<f64>() / y.len() as f64
        };
        OutcomeAssignment { y, mu }
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn value(&self, node: u32) -> f64 {
        self.y[node as usize]
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// How synthetic outcomes relate to the network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutcomeModel {
    /// `y_i ~ Bernoulli(q)`, independent of everything.
    Bernoulli { q: f64 },
    /// `y_i ~ Bernoulli(logistic(a + b ln d_i))`; isolated nodes use `logistic(a)`.
    DegreeLogistic { a: f64, b: f64 },
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Draws one binary outcome per node, in node order.
pub fn synth_outcomes(
    g: &Graph,
    model: OutcomeModel,
    rng: &mut Stream,
) -> Result<OutcomeAssignment, EstimatorError> {
    let probability = |node: u32| match model {
        OutcomeModel::Bernoulli { q } => q,
        OutcomeModel::DegreeLogistic { a, b } => match g.degree(node) {
            0 => logistic(a),
            d => logistic(a + b * (d as f64).ln()),
        },
    };
    if let OutcomeModel::Bernoulli { q } = model {
        if !(0.0..=1.0).contains(&q) {
            return Err(EstimatorError::BadProbability(q));
        }
    }
    let y = (0..g.node_count() as u32)
        .map(|node| if rng.bernoulli(probability(node)) { 1.0 } else { 0.0 })
        .collect();
    Ok(OutcomeAssignment::new(y))
}

/// Per-node inclusion probabilities handed to the Horvitz-Thompson
/// estimator: Monte Carlo estimates, exact values, or proxies.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightOracle {
    pub label: String,
    pi: Vec<f64>,
}

impl WeightOracle {
    pub fn new(label: impl Into<String>, pi: Vec<f64>) -> Self {
        WeightOracle {
            label: label.into(),
            pi,
        }
    }

    /// Degree-proportional proxy, the assumption behind RDS II.
    pub fn degrees(g: &Graph) -> Self {
        WeightOracle::new("degree", g.degrees().into_iter().map(f64::from).collect())
    }

    pub fn uniform(population: usize) -> Self {
        WeightOracle::new("uniform", vec![1.0; population])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.pi
    }

    pub fn scaled(&self, factor: f64) -> Self {
        WeightOracle::new(self.label.clone(), self.pi.iter().map(|p| p * factor).collect())
    }
}

/// `sum(y_i / pi_i) / sum(1 / pi_i)` over the sampled nodes.
pub fn horvitz_thompson(
    sample: &RdsSample,
    y: &OutcomeAssignment,
    w: &WeightOracle,
) -> Result<f64, EstimatorError> {
    if sample.is_empty() {
        return Err(EstimatorError::EmptySample);
    }
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for node in sample.nodes() {
        let pi = w.pi.get(node as usize).copied().unwrap_or(f64::NAN);
        if !(pi > 0.0 && pi.is_finite()) {
            return Err(EstimatorError::MissingProbability { node, value: pi });
        }
        numerator += y.value(node) / pi;
        denominator += 1.0 / pi;
    }
    Ok(numerator / denominator)
}

/// Horvitz-Thompson with each node's reported degree standing in for its
/// inclusion probability.
pub fn rds_two(sample: &RdsSample, y: &OutcomeAssignment) -> Result<f64, EstimatorError> {
    if sample.is_empty() {
        return Err(EstimatorError::EmptySample);
    }
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for r in sample.records() {
        if r.degree == 0 {
            return Err(EstimatorError::ZeroDegree { node: r.node });
        }
        let pi = r.degree as f64;
        numerator += y.value(r.node) / pi;
        denominator += 1.0 / pi;
    }
    Ok(numerator / denominator)
}

pub fn naive_mean(sample: &RdsSample, y: &OutcomeAssignment) -> Result<f64, EstimatorError> {
    if sample.is_empty() {
        return Err(EstimatorError::EmptySample);
    }
    Ok(sample.nodes().map(|v| y.value(v)).sum::<f64>() / sample.len() as f64)
}

/// Summary of one estimator over the replications of a bias run.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasRow {
    pub estimator: String,
    pub oracle: String,
    pub mean: f64,
    pub bias: f64,
    /// Monte Carlo standard error of `mean`.
    pub stderr: f64,
    pub rmse: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasReport {
    pub mu: f64,
    pub replications: u64,
    pub rows: Vec<BiasRow>,
}

impl BiasReport {
    pub fn row(&self, estimator: &str, oracle: &str) -> Option<&BiasRow> {
        self.rows
            .iter()
            .find(|r| r.estimator == estimator && r.oracle == oracle)
    }

    /// CSV with header `estimator,oracle,mean,bias,stderr,rmse`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "estimator,oracle,mean,bias,stderr,rmse")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.estimator, r.oracle, r.mean, r.bias, r.stderr, r.rmse
            )?;
        }
        Ok(())
    }
}

fn summarize(estimator: &str, oracle: &str, values: &[f64], mu: f64) -> BiasRow {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    let mse = values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / m;
    BiasRow {
        estimator: estimator.to_string(),
        oracle: oracle.to_string(),
        mean,
        bias: mean - mu,
        stderr: (var / m).sqrt(),
        rmse: mse.sqrt(),
    }
}

/// Draws `replications` samples (replication `r` on
/// `Stream::substream(master_seed, r)`) and reports, for the naive mean,
/// RDS II and Horvitz-Thompson under each oracle, the average estimate, its
/// bias against the true mean, Monte Carlo standard error and RMSE.
///
/// Per-replication estimates are collected in replication order before
/// being summed, so the report does not depend on scheduling.
pub fn bias_report(
    g: &Graph,
    n: usize,
    p: &RecruitmentDistribution,
    y: &OutcomeAssignment,
    oracles: &[WeightOracle],
    replications: u64,
    master_seed: u64,
) -> Result<BiasReport, EstimatorError> {
    if replications == 0 {
        return Err(EstimatorError::NoReplications);
    }
    let population = g.node_count();
    if y.len() != population {
        return Err(EstimatorError::LengthMismatch {
            what: "outcome vector",
            got: y.len(),
            expected: population,
        });
    }
    for o in oracles {
        if o.pi.len() != population {
            return Err(EstimatorError::LengthMismatch {
                what: "weight oracle",
                got: o.pi.len(),
                expected: population,
            });
        }
    }
    let per_rep: Vec<Vec<f64>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = Stream::substream(master_seed, r);
            let sample = draw_sample(g, n, p, &mut rng)?;
            let mut row = Vec::with_capacity(2 + oracles.len());
            row.push(naive_mean(&sample, y)?);
            row.push(rds_two(&sample, y)?);
            for o in oracles {
                row.push(horvitz_thompson(&sample, y, o)?);
            }
            Ok(row)
        })
        .collect::<Result<_, EstimatorError>>()?;

    let column = |k: usize| per_rep.iter().map(|row| row[k]).collect::<Vec<f64>>();
    let mu = y.mean();
    let mut rows = vec![
        summarize("naive_mean", "none", &column(0), mu),
        summarize("rds_ii", "degree", &column(1), mu),
    ];
    for (k, o) in oracles.iter().enumerate() {
        rows.push(summarize("horvitz_thompson", &o.label, &column(2 + k), mu));
    }
    Ok(BiasReport {
        mu,
        replications,
        rows,
    })
}
