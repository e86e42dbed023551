use super::{Graph, GraphError};
use crate::degseq::{check_graphical, DegreeSequence};

/// Deterministic realization of `seq` by repeated max-residual joining.
///
/// While residual degree remains, the node with the largest residual `k` is
/// joined to the `k` nodes with the next largest residuals, after which its
/// own residual is zero. Ties go to the lower node id. High-degree nodes end
/// up linked to each other, which makes the result strongly assortative.
pub fn build_raman(seq: &DegreeSequence) -> Result<Graph, GraphError> {
    check_graphical(seq).map_err(GraphError::NotGraphical)?;
    let n = seq.len();
    let mut residual: Vec<u32> = seq.degrees().to_vec();
    let mut adjacency: Vec<Vec<u32>> = seq
        .degrees()
        .iter()
        .map(|&d| Vec::with_capacity(d as usize))
        .collect();

    let mut order: Vec<u32> = (0..n as u32).filter(|&i| residual[i as usize] > 0).collect();
    while !order.is_empty() {
        // Stable order: residual descending, then id ascending.
        order.sort_by(|&a, &b| {
            residual[b as usize]
                .cmp(&residual[a as usize])
                .then(a.cmp(&b))
        });
        let pivot = order[0];
        let k = residual[pivot as usize] as usize;
        if order.len() <= k {
            return Err(GraphError::Construction(format!(
                "node {pivot} needs {k} partners but only {} nodes have residual degree",
                order.len() - 1
            )));
        }
        for &target in &order[1..=k] {
            adjacency[pivot as usize].push(target);
            adjacency[target as usize].push(pivot);
            residual[target as usize] -= 1;
        }
        residual[pivot as usize] = 0;
        order.retain(|&i| residual[i as usize] > 0);
    }
    Ok(Graph::from_adjacency(adjacency))
}
