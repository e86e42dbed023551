//! One realization of the chain-referral sampling process.
//!
//! The process keeps a set of active recruiters (sampled nodes still holding
//! coupons). While the sample is short of `n`:
//!
//! * if nobody is active, a seed is drawn uniformly from all nodes not yet
//!   sampled and becomes active;
//! * otherwise a recruiter is drawn uniformly from the active set and leaves
//!   it; it draws `s ~ p` and recruits `min(s, available)` of its neighbours
//!   not yet in the sample, chosen uniformly without replacement. The
//!   recruits become active.
//!
//! A batch that would overshoot `n` is cut at the quota.

use std::io::{self, Write};

use thiserror::Error;

use crate::graphgen::Graph;
use crate::rng::Stream;

/// Recruitment shares observed in a real study: fraction of respondents
/// that recruited 0, 1, ..., 6 peers.
pub const OBSERVED_RECRUITMENT: [f64; 7] = [0.5898, 0.1555, 0.1019, 0.0965, 0.0349, 0.0134, 0.008];

const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("recruitment probabilities are empty")]
    EmptyDistribution,
    #[error("recruitment probability p_{index} = {value} is negative or not finite")]
    BadProbability { index: usize, value: f64 },
    #[error("recruitment probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("sample size {n} outside 1..={population}")]
    BadSampleSize { n: usize, population: usize },
}

/// Distribution of the number of peers a respondent attempts to recruit.
#[derive(Clone, Debug, PartialEq)]
pub struct RecruitmentDistribution {
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RecruitmentDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, SampleError> {
        if probs.is_empty() {
            return Err(SampleError::EmptyDistribution);
        }
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(SampleError::BadProbability { index, value });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(SampleError::NotNormalized { sum });
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(RecruitmentDistribution { probs, cumulative })
    }

    pub fn observed() -> Self {
        RecruitmentDistribution::new(OBSERVED_RECRUITMENT.to_vec()).expect("table sums to 1")
    }

    /// Nobody ever recruits: the sample is a sequence of uniform seeds.
    pub fn no_recruitment() -> Self {
        RecruitmentDistribution::new(vec![1.0]).unwrap()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Inverse-CDF draw from one uniform.
    pub fn draw(&self, rng: &mut Stream) -> usize {
        let u = rng.uniform();
        match self.cumulative.iter().position(|&c| u < c) {
            Some(k) => k,
            // rounding left the total a hair under 1
            None => self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0),
        }
    }
}

/// One sampled respondent. `order` is its position in the trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Record {
    pub node: u32,
    pub degree: u32,
    pub recruiter: Option<u32>,
    pub wave: u32,
}

impl Record {
    pub fn is_seed(&self) -> bool {
        self.recruiter.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdsSample {
    population: usize,
    records: Vec<Record>,
}

impl RdsSample {
    pub fn from_records(population: usize, records: Vec<Record>) -> Self {
        RdsSample { population, records }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn population(&self) -> usize {
        self.population
    }

    pub fn nodes(&self) -> impl Iterator<Item = u32> + '_ {
        self.records.iter().map(|r| r.node)
    }

    pub fn seed_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_seed()).count()
    }

    /// CSV with header `order,node,degree,recruiter,wave`; seeds leave the
    /// recruiter column empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "order,node,degree,recruiter,wave")?;
        for (order, r) in self.records.iter().enumerate() {
            let recruiter = r.recruiter.map(|x| x.to_string()).unwrap_or_default();
            writeln!(out, "{order},{},{},{recruiter},{}", r.node, r.degree, r.wave)?;
        }
        Ok(())
    }
}

/// Indicator vector over the population: 1 where the node was sampled.
pub fn sample_membership(sample: &RdsSample) -> Vec<u8> {
    let mut member = vec![0u8; sample.population];
    for node in sample.nodes() {
        member[node as usize] = 1;
    }
    member
}

/// Nodes not yet sampled, with O(1) uniform draw and removal.
struct Unsampled {
    pool: Vec<u32>,
    slot: Vec<u32>,
}

impl Unsampled {
    fn new(n: usize) -> Self {
        Unsampled {
            pool: (0..n as u32).collect(),
            slot: (0..n as u32).collect(),
        }
    }

    fn remove(&mut self, node: u32) {
        let at = self.slot[node as usize] as usize;
        let last = *self.pool.last().unwrap();
        self.pool.swap_remove(at);
        if last != node {
            self.slot[last as usize] = at as u32;
        }
    }

    fn draw(&mut self, rng: &mut Stream) -> u32 {
        let node = self.pool[rng.index(self.pool.len())];
        self.remove(node);
        node
    }
}

/// Runs the sampling process until `n` nodes are in the sample.
///
/// Random draws happen in a fixed order: seed index, or recruiter index,
/// recruitment count, then a partial Fisher-Yates shuffle of the available
/// neighbours (in adjacency order) over `min(s, available)` positions.
/// The recruiter is swap-removed from the active list before its recruits
/// are appended.
pub fn draw_sample(
    g: &Graph,
    n: usize,
    p: &RecruitmentDistribution,
    rng: &mut Stream,
) -> Result<RdsSample, SampleError> {
    let population = g.node_count();
    if n == 0 || n > population {
        return Err(SampleError::BadSampleSize { n, population });
    }
    let mut in_sample = vec![false; population];
    let mut unsampled = Unsampled::new(population);
    let mut records: Vec<Record> = Vec::with_capacity(n);
    // (node, wave)
    let mut active: Vec<(u32, u32)> = Vec::new();
    let mut available: Vec<u32> = Vec::new();

    while records.len() < n {
        if active.is_empty() {
            let seed = unsampled.draw(rng);
            in_sample[seed as usize] = true;
            records.push(Record {
                node: seed,
                degree: g.degree(seed),
                recruiter: None,
                wave: 0,
            });
            active.push((seed, 0));
            continue;
        }
        let (recruiter, wave) = active.swap_remove(rng.index(active.len()));
        available.clear();
        available.extend(g.neighbors(recruiter).iter().copied().filter(|&v| !in_sample[v as usize]));
        let wanted = p.draw(rng);
        let batch = rng.partial_shuffle(&mut available, wanted);
        let quota = n - records.len();
        for &node in batch.iter().take(quota) {
            in_sample[node as usize] = true;
            unsampled.remove(node);
            records.push(Record {
                node,
                degree: g.degree(node),
                recruiter: Some(recruiter),
                wave: wave + 1,
            });
            active.push((node, wave + 1));
        }
    }
    Ok(RdsSample { population, records })
}

/// Replays a trace against `g` and reports the first rule it breaks:
/// duplicate node, recruiter not yet sampled or not adjacent, wrong degree
/// or wave, or a recruiter whose recruits are not one contiguous batch.
pub fn check_trace(sample: &RdsSample, g: &Graph) -> Result<(), String> {
    let mut position: Vec<Option<usize>> = vec![None; g.node_count()];
    let mut finished = vec![false; g.node_count()];
    let mut current: Option<u32> = None;
    for (order, r) in sample.records().iter().enumerate() {
        let node = r.node as usize;
        if node >= g.node_count() {
            return Err(format!("row {order}: node {node} outside the graph"));
        }
        if position[node].is_some() {
            return Err(format!("row {order}: node {node} sampled twice"));
        }
        if r.degree != g.degree(r.node) {
            return Err(format!("row {order}: reported degree {} != {}", r.degree, g.degree(r.node)));
        }
        match r.recruiter {
            None => {
                if r.wave != 0 {
                    return Err(format!("row {order}: seed with wave {}", r.wave));
                }
                if let Some(prev) = current.take() {
                    finished[prev as usize] = true;
                }
            }
            Some(rec) => {
                let Some(at) = position.get(rec as usize).copied().flatten() else {
                    return Err(format!("row {order}: recruiter {rec} not sampled earlier"));
                };
                if !g.has_edge(rec, r.node) {
                    return Err(format!("row {order}: recruiter {rec} not adjacent to {node}"));
                }
                if r.wave != sample.records()[at].wave + 1 {
                    return Err(format!("row {order}: wave {} does not follow recruiter", r.wave));
                }
                if current != Some(rec) {
                    if finished[rec as usize] {
                        return Err(format!("row {order}: recruiter {rec} recruits in two batches"));
                    }
                    if let Some(prev) = current {
                        finished[prev as usize] = true;
                    }
                    current = Some(rec);
                }
            }
        }
        position[node] = Some(order);
    }
    Ok(())
}
