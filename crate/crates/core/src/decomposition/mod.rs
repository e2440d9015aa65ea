//! Class recognition and decomposition trees.
//!
//! A graph in one of the supported classes is broken down, top to bottom,
//! into disjoint unions, joins, (quasi-)spiders with a recursively
//! decomposed head, separable p-components hanging off the rest of the
//! graph, and small leaves. The same procedure doubles as the recognizer:
//! a graph is accepted exactly when the decomposition succeeds.

mod classes;
mod modules;
mod pconn;
mod spider;
mod tree;

use thiserror::Error;

pub use classes::{compute_q, is_p4_tidy, is_qq4, is_qq4_exhaustive, QValue, EXHAUSTIVE_Q_MAX_VERTICES};
pub use modules::{characteristic_graph, homogeneous_sets, is_module, maximal_strong_modules, CharacteristicGraph};
pub use pconn::{crossing_p4s_respect, is_p_connected, p_components, separable_bipartition};
pub use spider::{
    are_twins, recognize_quasi_spider, recognize_spider, spider_graph, PairKind, Replacement, Side, SpiderPartition,
    Thickness,
};
pub use tree::{
    build_tree, DecompositionTree, LeafReason, Mode, NodeKind, Rejection, SeparableComponent, TreeNode,
    LEAF_PROFILE_MAX_VERTICES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("graph is not p-connected")]
    NotPConnected,
    #[error("{0}")]
    Rejected(Rejection),
    #[error("a component of {size} vertices exceeds the exhaustive budget of {limit}")]
    Budget { size: usize, limit: usize },
}
