//! Indirect sampling of a target graph through an auxiliary graph and a
//! bipartite affiliation graph.
//!
//! The crate provides the network containers, seeded synthetic generators,
//! the vertex-sampling and random-walk samplers with their estimators, a
//! simulated geo-query API with a zoom-in venue sampler, plain-text ingest,
//! and an experiment harness that aggregates replications into NRMSE tables.

pub mod error;
pub mod estimators;
pub mod geo;
pub mod graph;
pub mod harness;
pub mod ingest;
pub mod labels;
pub mod rng;
pub mod samplers;
pub mod sum;
pub mod synth;

pub use error::{Error, Result};
pub use estimators::{
    nrmse, vsa_estimate_n, vsa_theta_known_n, vsa_theta_unknown_n, walk_theta, EstimateReport,
    Method,
};
pub use graph::{BipartiteGraph, Graph, HybridNetwork, NodeId, Side};
pub use labels::{
    ground_truth_theta, ground_truth_theta_over, ConstantLabeler, DegreeKind, DegreeLabeler, Label,
    LabelDistribution, Labeler, TableLabeler,
};
