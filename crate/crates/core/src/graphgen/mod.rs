//! Graph type, the two constructions realizing a degree sequence, and
//! edge-list serialization.

mod bks;
mod edgelist;
mod graph;
mod raman;

use thiserror::Error;

use crate::degseq::GraphicalityFailure;

pub use bks::{build_bks, build_bks_counted, DEFAULT_MAX_RETRIES};
pub use edgelist::{format_edge_list, parse_edge_list, read_edge_list, write_edge_list, EdgeListError};
pub use graph::{degree_assortativity, Graph, Violation};
pub use raman::build_raman;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("degree sequence is not graphical: {0}")]
    NotGraphical(GraphicalityFailure),
    #[error("edge insertion gave up after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error(
        "edge weight factor would be negative: largest degree product {max_product} exceeds twice the degree total {twice_total}"
    )]
    AcceptanceOutOfRange { max_product: u64, twice_total: u64 },
    #[error("construction failed: {0}")]
    Construction(String),
}
