//! Mining duplicated code patterns from logic-flow graphs.
//!
//! Flows are ingested into labeled graphs, pairs of graphs are reduced to a
//! maximum common sub-graph with a MaxSAT solver, and a priority-driven miner
//! folds the heaviest shared structure into patterns with their occurrences.
//! The [`pipeline`] module ties the stages together; [`commands`] backs the
//! `flowdup` binary.

pub mod commands;
pub mod dot;
pub mod fixtures;
pub mod flow;
pub mod generator;
pub mod graph;
pub mod mcs;
pub mod miner;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod sat;
pub mod weight;
