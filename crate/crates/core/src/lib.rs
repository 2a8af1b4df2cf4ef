//! Planar network-design toolkit: safe-cover decompositions of embedded
//! planar multigraphs, PTAS pipelines for k-edge/vertex-connected spanning
//! subgraphs and connectivity augmentation, snug-path structure machinery,
//! instance generators, and independent brute-force oracles.

pub mod cap;
pub mod cli;
pub mod contraction;
pub mod cost;
pub mod cover;
pub mod cuts;
pub mod ecss;
pub mod graph;
pub mod hardness;
pub mod instances;
pub mod oracle;
pub mod report;
pub mod snug;
pub mod snugdp;
pub mod treedec;
