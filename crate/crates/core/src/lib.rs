//! Structure and algorithms for even-hole-free graphs with no star cutset.

pub mod cliques;
pub mod coloring;
pub mod detect;
pub mod generators;
pub mod gf2;
pub mod graph;
pub mod oracle;
pub mod rankdec;
pub mod twojoin;

pub use graph::{Graph, GraphError, VertexSet};
