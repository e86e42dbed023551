use std::collections::HashSet;

use log::warn;

use super::{Graph, GraphError};
use crate::degseq::{check_graphical, DegreeSequence};
use crate::rng::Stream;

pub const DEFAULT_MAX_RETRIES: usize = 100;

/// Consecutive rejected proposals before the eligible pairs are enumerated
/// exactly (which also detects a stuck state).
const REJECTION_LIMIT: usize = 256;

/// Fenwick tree over non-negative integer weights, for O(log N) sampling of
/// an index with probability proportional to its weight.
struct WeightTree {
    tree: Vec<u64>,
    total: u64,
    top_bit: usize,
}

impl WeightTree {
    fn new(weights: &[u32]) -> Self {
        let n = weights.len();
        let mut tree = vec![0u64; n + 1];
        for (i, &w) in weights.iter().enumerate() {
            tree[i + 1] += w as u64;
            let parent = (i + 1) + ((i + 1) & (i + 1).wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i + 1];
            }
        }
        let total = weights.iter().map(|&w| w as u64).sum();
        let top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        WeightTree { tree, total, top_bit }
    }

    fn decrement(&mut self, index: usize) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
        self.total -= 1;
    }

    /// Smallest index whose cumulative weight exceeds `target`.
    fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top_bit;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }

    fn sample(&self, rng: &mut Stream) -> usize {
        self.find(rng.below(self.total))
    }
}

/// Randomized realization of `seq` by sequential weighted edge insertion.
///
/// Each step adds one edge between an eligible pair `{i, j}` (distinct,
/// non-adjacent, both with positive residual) chosen with probability
/// proportional to `R_i R_j (1 - D_i D_j / (2 sum D))`. A run that reaches a
/// state with residual degree left but no eligible pair is discarded and
/// restarted from the empty graph, at most `max_retries` times.
pub fn build_bks(seq: &DegreeSequence, rng: &mut Stream, max_retries: usize) -> Result<Graph, GraphError> {
    build_bks_counted(seq, rng, max_retries).map(|(g, _)| g)
}

/// Like [`build_bks`], also returning the number of attempts used.
pub fn build_bks_counted(
    seq: &DegreeSequence,
    rng: &mut Stream,
    max_retries: usize,
) -> Result<(Graph, usize), GraphError> {
    check_graphical(seq).map_err(GraphError::NotGraphical)?;
    let d = seq.degrees();
    let total = seq.total();
    if total == 0 {
        return Ok((Graph::empty(d.len()), 1));
    }
    // Largest product over distinct nodes; the sequence is sorted.
    let worst = d[0] as f64 * d[1] as f64;
    let scale = 2.0 * total as f64;
    if worst > scale {
        return Err(GraphError::AcceptanceOutOfRange {
            max_product: d[0] as u64 * d[1] as u64,
            twice_total: 2 * total,
        });
    }
    if worst > 0.5 * scale {
        warn!(
            "maximum degree {} is large relative to the degree total {}; edge weights are far from uniform",
            d[0], total
        );
    }

    for attempt in 1..=max_retries + 1 {
        if let Some(edges) = attempt_once(d, scale, rng) {
            return Ok((Graph::from_edges(d.len(), edges), attempt));
        }
    }
    Err(GraphError::RetriesExhausted {
        attempts: max_retries + 1,
    })
}

fn edge_key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

fn attempt_once(d: &[u32], scale: f64, rng: &mut Stream) -> Option<Vec<(u32, u32)>> {
    let mut residual = d.to_vec();
    let mut weights = WeightTree::new(&residual);
    let mut present: HashSet<u64> = HashSet::new();
    let mut edges = Vec::with_capacity((weights.total / 2) as usize);
    let factor = |i: usize, j: usize| 1.0 - d[i] as f64 * d[j] as f64 / scale;

    while weights.total > 0 {
        let mut rejected = 0;
        let (i, j) = loop {
            if rejected >= REJECTION_LIMIT {
                break exact_pick(d, &residual, &present, scale, rng)?;
            }
            let i = weights.sample(rng);
            let j = weights.sample(rng);
            if i == j || present.contains(&edge_key(i as u32, j as u32)) {
                rejected += 1;
                continue;
            }
            if rng.uniform() < factor(i, j) {
                break (i, j);
            }
            rejected += 1;
        };
        present.insert(edge_key(i as u32, j as u32));
        edges.push((i.min(j) as u32, i.max(j) as u32));
        residual[i] -= 1;
        residual[j] -= 1;
        weights.decrement(i);
        weights.decrement(j);
    }
    Some(edges)
}

/// Draws one eligible pair from the exact weighted enumeration, or `None`
/// when no eligible pair exists.
fn exact_pick(
    d: &[u32],
    residual: &[u32],
    present: &HashSet<u64>,
    scale: f64,
    rng: &mut Stream,
) -> Option<(usize, usize)> {
    let live: Vec<usize> = (0..residual.len()).filter(|&i| residual[i] > 0).collect();
    let mut pairs = Vec::new();
    let mut total = 0.0;
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            if present.contains(&edge_key(i as u32, j as u32)) {
                continue;
            }
            let w = residual[i] as f64 * residual[j] as f64 * (1.0 - d[i] as f64 * d[j] as f64 / scale);
            if w > 0.0 {
                total += w;
                pairs.push((i, j, total));
            }
        }
    }
    if pairs.is_empty() {
        return None;
    }
    let target = rng.uniform() * total;
    let idx = pairs.partition_point(|&(_, _, cum)| cum <= target).min(pairs.len() - 1);
    Some((pairs[idx].0, pairs[idx].1))
}
