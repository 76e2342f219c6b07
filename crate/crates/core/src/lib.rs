//! Parameterized solvers for partial covering problems on graphs: partial
//! vertex cover, partial dominating set and weighted partial
//! `(k, r, t)`-center.

pub mod center;
pub mod center_dp;
pub mod cli;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod pvc;
pub mod treewidth;

pub use graph::{Graph, GraphError, Vertex, VertexSet, Weights};
