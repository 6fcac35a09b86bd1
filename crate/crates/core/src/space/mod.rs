//! The spaces E_k at truncation scale: nodes, approximations, members and
//! the operations relating them.

mod approx;
mod dot;
mod layout;
mod node;

pub use approx::{
    basic_set_contains, build_w, depth_of, extension_nodes, le_fin, one_extensions, r_approx, tail_after, ApproxJson,
    Condition, Depth, FiniteApprox, MemberTrunc, Slot, Violation,
};
pub use dot::{from_dot, to_dot};
pub use layout::{classify_n, layout, Layout, LevelClass};
pub use node::{wk_node, TreeNode};

/// `π_l(node)`.
pub fn project(node: &TreeNode, l: usize) -> crate::Result<TreeNode> {
    node.project(l)
}
