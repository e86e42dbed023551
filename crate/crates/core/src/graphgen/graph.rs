use std::fmt;

/// Immutable simple undirected graph on nodes `0..N`.
///
/// Each adjacency list is sorted and duplicate-free, so membership tests are
/// binary searches and iteration order is canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edges: usize,
}

/// A violated structural invariant, found by [`Graph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SelfLoop(u32),
    Duplicate(u32, u32),
    Asymmetric(u32, u32),
    OutOfRange(u32, u32),
    Unsorted(u32),
}

impl Graph {
    pub fn empty(nodes: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); nodes],
            edges: 0,
        }
    }

    /// Builds from an edge list. The caller guarantees a simple graph; this
    /// is checked in debug builds.
    pub fn from_edges(nodes: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); nodes];
        let mut count = 0;
        for (u, v) in edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            count += 1;
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = Graph {
            adjacency,
            edges: count,
        };
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }

    /// Wraps raw adjacency lists (sorted on the way in).
    pub(crate) fn from_adjacency(mut adjacency: Vec<Vec<u32>>) -> Self {
        let mut half = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            half += list.len();
        }
        Graph {
            adjacency,
            edges: half / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn degree(&self, node: u32) -> u32 {
        self.adjacency[node as usize].len() as u32
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.adjacency.iter().map(|a| a.len() as u32).collect()
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        &self.adjacency[node as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    /// Each edge once as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Checks symmetry, absence of self-loops and duplicates.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.adjacency.len() as u32;
        for (u, list) in self.adjacency.iter().enumerate() {
            let u = u as u32;
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(Violation::Duplicate(u, w[0]));
                }
                if w[0] > w[1] {
                    return Err(Violation::Unsorted(u));
                }
            }
            for &v in list {
                if v >= n {
                    return Err(Violation::OutOfRange(u, v));
                }
                if v == u {
                    return Err(Violation::SelfLoop(u));
                }
                if !self.has_edge(v, u) {
                    return Err(Violation::Asymmetric(u, v));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.node_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. `None` when there are no edges or every endpoint has the same
/// degree, since the correlation is then undefined.
pub fn degree_assortativity(g: &Graph) -> Option<f64> {
    if g.edge_count() == 0 {
        return None;
    }
    // Over both orientations the two marginals coincide, so one mean and
    // one variance serve both coordinates.
    let mut count = 0.0;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut sum_prod = 0.0;
    for (u, v) in g.edges() {
        let du = g.degree(u) as f64;
        let dv = g.degree(v) as f64;
        count += 2.0;
        sum += du + dv;
        sum_sq += du * du + dv * dv;
        sum_prod += 2.0 * du * dv;
    }
    let mean = sum / count;
    let var = sum_sq / count - mean * mean;
    if var <= 1e-12 * mean * mean.max(1.0) {
        return None;
    }
    let cov = sum_prod / count - mean * mean;
    Some((cov / var).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n as usize, edges)
    }

    #[test]
    fn basic_accessors() {
        let g = Graph::from_edges(4, [(0, 1), (2, 0), (1, 2)]);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degrees(), vec![2, 2, 2, 0]);
        assert!(g.has_edge(2, 0) && !g.has_edge(0, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.validate(), Ok(()));
    }

    #[test]
    fn validator_catches_broken_adjacency() {
        let g = Graph::from_adjacency(vec![vec![1], vec![]]);
        assert_eq!(g.validate(), Err(Violation::Asymmetric(0, 1)));
        let g = Graph::from_adjacency(vec![vec![0]]);
        assert_eq!(g.validate(), Err(Violation::SelfLoop(0)));
        let g = Graph::from_adjacency(vec![vec![1, 1], vec![0, 0]]);
        assert_eq!(g.validate(), Err(Violation::Duplicate(0, 1)));
        let g = Graph::from_adjacency(vec![vec![5]]);
        assert_eq!(g.validate(), Err(Violation::OutOfRange(0, 5)));
    }

    #[test]
    fn assortativity_of_regular_graphs_is_undefined() {
        assert_eq!(degree_assortativity(&complete(4)), None);
        assert_eq!(degree_assortativity(&Graph::from_edges(4, [(0, 1), (2, 3)])), None);
        assert_eq!(degree_assortativity(&Graph::empty(3)), None);
    }

    #[test]
    fn star_is_perfectly_disassortative() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let r = degree_assortativity(&g).unwrap();
        assert!((r + 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn assortativity_matches_direct_pearson() {
        // path 0-1-2-3 plus pendant 4 on 1
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (u, v) in g.edges() {
            xs.extend([g.degree(u) as f64, g.degree(v) as f64]);
            ys.extend([g.degree(v) as f64, g.degree(u) as f64]);
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let expected = cov / (vx * vy).sqrt();
        let r = degree_assortativity(&g).unwrap();
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
    }
}
