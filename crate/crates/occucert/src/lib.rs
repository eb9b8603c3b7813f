//! Exact occupancy-fraction certificates for the hard-core model on small
//! graphs.
//!
//! The crate computes, in exact rational arithmetic where possible:
//! independent-set statistics of the hard-core model, per-vertex occupancy
//! lower bounds with dual certificates, spectral diagnostics of the
//! correction series behind those bounds, free-energy lower bounds, and
//! exact fractional colorings produced by a demand-driven scheduling
//! process. A brute-force LP solver and exhaustive small-graph scans back
//! every floating-point claim with an independent check.

pub mod campaign;
pub mod coloring;
pub mod families;
pub mod graph;
pub mod hardcore;
pub mod linalg;
pub mod occupancy;
pub mod rat;
pub mod report;
pub mod special;
pub mod tol;

pub use graph::{Graph, GraphError};
pub use hardcore::{Fugacity, HardcoreError};
pub use rat::Rat;
