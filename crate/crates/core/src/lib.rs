//! Decision procedures for independence models of directed acyclic graphs.
//!
//! A DAG `G` induces the set `I(G)` of d-separation statements `⟨A, B|C⟩`.
//! This crate decides whether two DAGs induce the same model (equivalence),
//! whether one model contains another (inclusion), and builds explicit
//! sequences of covered arrow reversals and legal arrow additions that
//! transform one graph into another.
//!
//! Graphs are small (at most 64 nodes); node sets are bitmasks indexed by
//! the sorted order of node names.

pub mod dag;
pub mod equivalence;
pub mod error;
pub mod inclusion;
pub mod nodeset;
pub mod oracle;
pub mod separation;
pub mod sweep;
pub mod text;
pub mod transform;

pub use dag::{node_list, Dag, Immorality, NodeId, Skeleton};
pub use equivalence::{
    apply_reversal, class_with_paths, equivalence_class, equivalent, is_legal_reversal,
    reversal_sequence, ReversalOp,
};
pub use error::{Error, Result};
pub use inclusion::{
    check_conditions, conditions_hold, includes, inclusion_witness, same_size_inclusion, Condition,
    ConditionReport, ConditionSet, Violation,
};
pub use nodeset::{NodeSet, MAX_NODES};
pub use separation::{d_connected, d_separated, is_active_path, DisjointTriplet, Path};
pub use transform::{
    apply_add, is_legal_add, meek_search, meek_search_complete, one_edge_sequence,
    simple_shape_search, MeekOutcome, OpKind, SimpleShape, TransformOp, TransformSequence,
};
