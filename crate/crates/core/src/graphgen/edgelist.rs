//! Plain-text edge lists.
//!
//! ```text
//! # nodes=3
//! 0 1
//! 0 2
//! 1 2
//! ```
//!
//! Writers emit every edge once with `u < v`, rows sorted. Readers accept
//! either endpoint order and other `#` comment lines. Without a `nodes=`
//! header the node count is one past the largest id seen.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::Graph;

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u32 },
    #[error("line {line}: duplicate edge {u} {v}")]
    Duplicate { line: usize, u: u32, v: u32 },
    #[error("line {line}: node {node} out of range for {nodes} nodes")]
    OutOfRange { line: usize, node: u32, nodes: usize },
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes={}\n", g.node_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, u32, u32)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        if let Some(comment) = row.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("nodes=") {
                let n = value.trim().parse().map_err(|_| EdgeListError::Malformed {
                    line,
                    message: format!("bad node count {value:?}"),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let mut fields = row.split_whitespace();
        let mut endpoint = || -> Result<u32, EdgeListError> {
            let tok = fields.next().ok_or_else(|| EdgeListError::Malformed {
                line,
                message: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| EdgeListError::Malformed {
                line,
                message: format!("bad node id {tok:?}"),
            })
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if fields.next().is_some() {
            return Err(EdgeListError::Malformed {
                line,
                message: "expected two node ids".into(),
            });
        }
        if u == v {
            return Err(EdgeListError::SelfLoop { line, node: u });
        }
        edges.push((line, u, v));
    }

    let nodes = declared.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(_, u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0)
    });
    let mut seen = HashSet::with_capacity(edges.len());
    for &(line, u, v) in &edges {
        for node in [u, v] {
            if node as usize >= nodes {
                return Err(EdgeListError::OutOfRange { line, node, nodes });
            }
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(EdgeListError::Duplicate { line, u, v });
        }
    }
    Ok(Graph::from_edges(nodes, edges.into_iter().map(|(_, u, v)| (u, v))))
}

pub fn write_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<(), EdgeListError> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(g)).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, EdgeListError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| EdgeListError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_edge_list(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_canonical_form() {
        let g = Graph::from_edges(3, [(1, 2), (0, 2), (1, 0)]);
        assert_eq!(format_edge_list(&g), "# nodes=3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn header_keeps_isolated_nodes() {
        let g = parse_edge_list("# nodes=5\n0 1\n").unwrap();
        assert_eq!(g.node_count(), 5);
        let g = parse_edge_list("0 1\n3 1\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert!(g.has_edge(1, 3));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_edge_list("# nodes=3\n0 1\n2 2\n"),
            Err(EdgeListError::SelfLoop { line: 3, node: 2 })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n1 0\n"),
            Err(EdgeListError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("# nodes=3\n0 3\n"),
            Err(EdgeListError::OutOfRange { line: 2, node: 3, nodes: 3 })
        ));
        assert!(matches!(
            parse_edge_list("0 a\n"),
            Err(EdgeListError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1 2\n"),
            Err(EdgeListError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (4, 0)]);
        write_edge_list(&g, &path).unwrap();
        assert_eq!(read_edge_list(&path).unwrap(), g);
    }
}
