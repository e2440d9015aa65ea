//! Decomposition trees for P4-tidy and (q,q-4)-graphs, and exact restricted
//! chromatic numbers computed along them.

pub mod decomposition;
pub mod engine;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod selftest;
pub mod validators;

pub use decomposition::{build_tree, compute_q, is_p4_tidy, is_qq4, DecompositionTree, Mode, QValue};
pub use engine::{solve, ChromaticResult, EngineError};
pub use graph::{Graph, GraphError, VertexSet};
pub use io::{parse_graph, GraphFormat, ParseError};
pub use validators::{Coloring, ColoringFamily};
