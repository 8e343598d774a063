//! Exact combinatorics for the random-current expansion of small ferromagnetic
//! Ising models: currents and the switching identity, multigraph partitions
//! and their signed counts, exact Ursell functions, a truncated power-series
//! oracle, and Lee-Yang zeros in a weighted field.

pub mod corpus;
pub mod error;
pub mod format;
pub mod graph;
pub mod ising;
pub mod lee_yang;
pub mod partition;
pub mod rational;
pub mod report;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
pub use graph::{BaseGraph, Current, Edge, EdgeId, MultiGraph, VertexId, VertexSet};
pub use partition::{
    enumerate_partitions, r_current, r_graph, EvenSetPartition, GraphPartition, RestrictionMode,
    RestrictionSet, SpecialFamily, SpecialGraphSpec,
};
pub use rational::Rational;
