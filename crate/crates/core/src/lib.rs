//! Simulation toolkit for respondent driven sampling on synthetic networks.
//!
//! The pipeline runs from an empirical degree pool to a degree sequence,
//! realizes that sequence as two structurally different graphs, draws
//! chain-referral samples from each, estimates per-node inclusion
//! probabilities by replication, and evaluates population-mean estimators
//! that depend on those probabilities.

pub mod degseq;
pub mod estimators;
pub mod graphgen;
pub mod inclusion;
pub mod rng;
pub mod sampler;

pub use degseq::{is_graphical, resample_degrees, DegreeSequence, DegreeSource};
pub use graphgen::{build_bks, build_raman, degree_assortativity, Graph};
pub use inclusion::{estimate_inclusion, InclusionEstimate};
pub use rng::Stream;
pub use sampler::{draw_sample, RdsSample, RecruitmentDistribution};
