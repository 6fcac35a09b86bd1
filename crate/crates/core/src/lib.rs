//! Finite truncations of the high-dimensional Ellentuck spaces E_k.
//!
//! * [`wellorder`]: the well-order ≺ on non-decreasing sequences, with rank maps.
//! * [`space`]: nodes of Ŵ_k, finite approximations, the top member W_k, validation.
//! * [`constructions`]: building members inside basic sets, fusion, dense embedding, thinning.
//! * [`ramsey`]: pigeonhole search, canonical relations, fronts and inner maps.

pub mod constructions;
pub mod error;
pub mod ramsey;
pub mod search;
pub mod space;
pub mod wellorder;

pub use error::{Error, Result};
pub use ramsey::{canonize_1ext, canonize_arn, pigeonhole, Coloring, FrontFamily, InnerMap, ProjVector, Relation};
pub use search::{Budget, NodePool, DEFAULT_BUDGET};
pub use space::{
    basic_set_contains, build_w, classify_n, depth_of, extension_nodes, from_dot, le_fin, one_extensions, project,
    r_approx, tail_after, to_dot, wk_node, Condition, Depth, FiniteApprox, LevelClass, MemberTrunc, Slot, TreeNode,
    Violation,
};
pub use wellorder::{cmp_prec, enumerate_k, enumerate_le_k, rank_of, seq_at_rank, LeK, NdSeq, Rank};
