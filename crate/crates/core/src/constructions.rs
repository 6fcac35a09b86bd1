//! Constructions of members: inside basic sets, by fusion, inside node sets,
//! and by thinning toward prescribed 1-extensions.
//!
//! Every "choose any node such that" step takes the admissible node with the
//! smallest maximum, so outputs are deterministic.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{extend_search, for_each_extension, Budget, NodePool};
use crate::space::{
    build_w, depth_of, layout, le_fin, one_extensions, wk_node, Depth, FiniteApprox, MemberTrunc, Slot, TreeNode,
};
use crate::wellorder::{enumerate_k, NdSeq};

fn require_valid(a: &FiniteApprox) -> Result<()> {
    a.validate().map_err(Error::Invalid)
}

fn finite_depth(x: &MemberTrunc, a: &FiniteApprox) -> Result<usize> {
    match depth_of(x, a)? {
        Depth::Finite(d) => Ok(d),
        Depth::Infinite => Err(Error::Precondition(format!("{a} does not lie in the member"))),
    }
}

fn greedy(mut c: FiniteApprox, pool: &NodePool, target: usize) -> Result<FiniteApprox> {
    while c.len() < target {
        let next = pool.extensions(&c).first().map(|n| (*n).clone());
        match next {
            Some(n) => c.push(n),
            None => return Err(Error::Exhausted { step: c.len() }),
        }
    }
    Ok(c)
}

/// A `c ∈ r_target[a, A]`, greedily chosen.
pub fn construct_in_basic_set(a: &FiniteApprox, member: &MemberTrunc, target: usize) -> Result<FiniteApprox> {
    require_valid(a)?;
    finite_depth(member, a)?;
    if target < a.len() {
        return Err(Error::Precondition(format!("target {target} is shorter than |a| = {}", a.len())));
    }
    greedy(a.clone(), &NodePool::of(member), target)
}

/// Output of [`fuse_a3b`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fusion {
    pub member: MemberTrunc,
    /// `depth_B(a)`; the first `depth` nodes are `r_depth(B)`.
    pub depth: usize,
    /// For each later position, whether its node was drawn from `B` rather than `A`.
    pub from_b: Vec<bool>,
}

/// Can an extension of `a` ever reach a node whose first `prefix.len()`
/// indices are `prefix`? Only if the part of the prefix outside `π(a)` uses
/// indices beyond `max(a)`.
fn reachable_from(a: &FiniteApprox, prefix: &[u64]) -> bool {
    let known = (0..=prefix.len())
        .rev()
        .find(|&q| q == 0 || a.nodes().iter().any(|n| n.len() >= q && n.prefix(q) == &prefix[..q]))
        .unwrap_or(0);
    known == prefix.len() || a.max_index().is_none_or(|m| prefix[known] > m)
}

/// Builds `A' ∈ [depth_B(a), B]` with `[a, A'] ⊆ [a, A]`.
///
/// Starting from `r_d(B)`, a slot is filled from `A` unless its forced prefix
/// can only be reached through nodes of `r_d(B)` lying outside `a`; those
/// slots are filled from `B`.
pub fn fuse_a3b(a: &FiniteApprox, am: &MemberTrunc, bm: &MemberTrunc, target: usize) -> Result<Fusion> {
    require_valid(a)?;
    if !le_fin(&am.approx, &bm.approx) {
        return Err(Error::Precondition("A is not contained in B".into()));
    }
    let d = finite_depth(bm, a)?;
    if !le_fin(a, &am.approx) {
        return Err(Error::Exhausted { step: a.len() });
    }
    if target < d {
        return Err(Error::Precondition(format!("target {target} is below the depth {d}")));
    }
    let pool_a = NodePool::of(am);
    let pool_b = NodePool::of(bm);
    let mut c = bm.approx.restrict(d)?;
    let mut from_b = Vec::new();
    while c.len() < target {
        let slot = Slot::of(&c);
        let use_b = slot.level >= 1 && !reachable_from(a, &slot.prefix);
        let pool = if use_b { &pool_b } else { &pool_a };
        let next = pool.admitted(&slot).first().map(|n| (*n).clone());
        match next {
            Some(n) => c.push(n),
            None => return Err(Error::Exhausted { step: c.len() }),
        }
        from_b.push(use_b);
    }
    Ok(Fusion { member: MemberTrunc { approx: c, complete: false }, depth: d, from_b })
}

/// Enumerates every extension of `a` inside `fused` and returns the first one
/// using a node outside `A`, or `None` if all of them stay inside `A`.
pub fn certify_fusion(
    a: &FiniteApprox,
    am: &MemberTrunc,
    fused: &MemberTrunc,
    budget: &mut Budget,
) -> Result<Option<FiniteApprox>> {
    let inside: HashSet<&TreeNode> = am.nodes().iter().collect();
    let pool = NodePool::of(fused);
    let mut bad = None;
    for_each_extension(a, &pool, fused.len(), budget, |b| {
        let last = b.nodes().last().expect("extensions are nonempty");
        if inside.contains(last) {
            true
        } else {
            bad = Some(b.clone());
            false
        }
    })?;
    Ok(bad)
}

/// Availability of nodes, standing in for a possibly infinite set of nodes.
pub trait NodeOracle {
    fn k(&self) -> usize;
    fn admits(&self, node: &TreeNode) -> bool;
    /// No node with a larger maximum is ever admitted.
    fn horizon(&self) -> u64;
}

/// An explicit finite node set.
#[derive(Clone, Debug, Default)]
pub struct NodeSet {
    k: usize,
    nodes: HashSet<TreeNode>,
}

impl NodeSet {
    pub fn new(k: usize, nodes: impl IntoIterator<Item = TreeNode>) -> Self {
        NodeSet { k, nodes: nodes.into_iter().collect() }
    }
}

impl NodeOracle for NodeSet {
    fn k(&self) -> usize {
        self.k
    }

    fn admits(&self, node: &TreeNode) -> bool {
        self.nodes.contains(node)
    }

    fn horizon(&self) -> u64 {
        self.nodes.iter().filter_map(TreeNode::max_index).max().unwrap_or(0)
    }
}

/// A predicate on nodes up to a fixed horizon.
pub struct FnOracle<F> {
    k: usize,
    horizon: u64,
    f: F,
}

impl<F: Fn(&TreeNode) -> bool> FnOracle<F> {
    pub fn new(k: usize, horizon: u64, f: F) -> Self {
        FnOracle { k, horizon, f }
    }
}

impl<F: Fn(&TreeNode) -> bool> NodeOracle for FnOracle<F> {
    fn k(&self) -> usize {
        self.k
    }

    fn admits(&self, node: &TreeNode) -> bool {
        node.max_index().is_some_and(|m| m <= self.horizon) && (self.f)(node)
    }

    fn horizon(&self) -> u64 {
        self.horizon
    }
}

/// Full-length nodes of Ŵ_k with maximum at most `horizon`, by increasing maximum.
pub fn nodes_up_to(k: usize, horizon: u64) -> Vec<TreeNode> {
    let mut n = 64;
    loop {
        let w = build_w(k, n);
        if w.nodes().last().and_then(TreeNode::max_index).is_some_and(|m| m > horizon) {
            return w.nodes().iter().take_while(|x| x.max_index() <= Some(horizon)).cloned().collect();
        }
        n *= 2;
    }
}

/// A greedy approximation all of whose nodes the oracle admits.
pub fn dense_embed(oracle: &dyn NodeOracle, target: usize) -> Result<FiniteApprox> {
    let k = oracle.k();
    let nodes: Vec<TreeNode> = nodes_up_to(k, oracle.horizon()).into_iter().filter(|n| oracle.admits(n)).collect();
    greedy(FiniteApprox::empty(k), &NodePool::new(k, &nodes), target)
}

/// An order-preserving identification of a node set with an initial part of
/// (ω^{↓(k−l)}, ≺).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcopy {
    pub k: usize,
    pub level: usize,
    /// The common length-`l` node prefix.
    pub stem: Vec<u64>,
    /// Source nodes in ≺ order with their images.
    pub pairs: Vec<(TreeNode, NdSeq)>,
}

impl Subcopy {
    /// `θ(node)` as a node of Ŵ_{k−l}.
    pub fn image(&self, node: &TreeNode) -> Option<TreeNode> {
        let (_, t) = self.pairs.iter().find(|(n, _)| n == node)?;
        wk_node(self.k - self.level, t).ok()
    }

    pub fn preimage(&self, image: &TreeNode) -> Option<&TreeNode> {
        self.pairs.iter().find(|(_, t)| t == image.seq()).map(|(n, _)| n)
    }
}

/// Checks that the full-length nodes `u` share a length-`l` prefix and that
/// their prefix tree below it is an initial copy of the tree of ω^{↓≤(k−l)},
/// respecting lexicographic order level by level.
pub fn subcopy_check(u: &[TreeNode], k: usize, l: usize) -> Option<Subcopy> {
    if l > k || u.iter().any(|n| n.len() != k) {
        return None;
    }
    let mut nodes: Vec<TreeNode> = u.to_vec();
    nodes.sort();
    nodes.dedup();
    let stem = nodes.first().map(|n| n.prefix(l).to_vec()).unwrap_or_default();
    let stem_seq = nodes.first().map(|n| n.seq().prefix(l)).unwrap_or_default();
    if nodes.iter().any(|n| !stem_seq.is_prefix_of(n.seq())) {
        return None;
    }
    let d = k - l;
    let targets: Vec<NdSeq> = if d == 0 {
        if nodes.len() > 1 {
            return None;
        }
        vec![NdSeq::empty(); nodes.len()]
    } else {
        enumerate_k(d, nodes.len())
    };
    for q in 1..=d {
        let mut pairs: Vec<(&[u64], &[u64])> =
            nodes.iter().zip(&targets).map(|(n, t)| (&n.seq().entries()[..l + q], &t.entries()[..q])).collect();
        pairs.sort();
        pairs.dedup();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 || w[0].1 >= w[1].1 {
                return None;
            }
        }
    }
    Some(Subcopy { k, level: l, stem, pairs: nodes.into_iter().zip(targets).collect() })
}

/// Output of [`thin_to_subcopy`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thinned {
    pub member: MemberTrunc,
    /// `r_{|a|+1}[a, Y]`, each of which lies in `V`.
    pub certificate: Vec<FiniteApprox>,
}

/// Finds `Y ∈ [a, X]` of length `target` with `r_{|a|+1}[a, Y] ⊆ V`.
///
/// The supply rule for each later position is the one from the thinning
/// argument: a node that would be a 1-extension of `a` must come from the new
/// nodes of `V`; other positions draw from `X` freely. Backtracks when the
/// greedy choice runs dry.
pub fn thin_to_subcopy(
    a: &FiniteApprox,
    x: &MemberTrunc,
    v: &[FiniteApprox],
    target: usize,
    budget: &mut Budget,
) -> Result<Thinned> {
    require_valid(a)?;
    finite_depth(x, a)?;
    let allowed: HashSet<&TreeNode> = v
        .iter()
        .filter(|b| b.len() == a.len() + 1 && a.is_initial_segment_of(b))
        .map(|b| &b.nodes()[a.len()])
        .collect();
    let slot_a = Slot::of(a);
    let pool = NodePool::of(x);
    let mut deepest = 0;
    let found = extend_search(a, &pool, target, budget, &mut deepest, |_, node| {
        !slot_a.admits(node) || allowed.contains(node)
    })?;
    let y = found.ok_or(Error::Exhausted { step: deepest })?;
    let member = MemberTrunc { approx: y, complete: false };
    let certificate = one_extensions(a, &member);
    debug_assert!(certificate.iter().all(|b| v.contains(b)));
    Ok(Thinned { member, certificate })
}

/// The level of `N^k_l` containing `|a|`.
pub fn level_of(a: &FiniteApprox) -> usize {
    layout(a.k(), a.len()).level(a.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::r_approx;

    fn ap(k: usize, nodes: &[&[u64]]) -> FiniteApprox {
        FiniteApprox::from_indices(k, nodes.iter().map(|n| n.to_vec()).collect()).unwrap()
    }

    #[test]
    fn greedy_on_top_member() {
        let w = build_w(2, 15);
        let r2 = r_approx(&w, 2).unwrap();
        assert_eq!(construct_in_basic_set(&r2, &w, 4).unwrap(), r_approx(&w, 4).unwrap());
        assert_eq!(construct_in_basic_set(&r2, &w, 2).unwrap(), r2);
    }

    #[test]
    fn greedy_from_figure_node() {
        let w = build_w(2, 40);
        let c = construct_in_basic_set(&ap(2, &[&[3, 6]]), &w, 3).unwrap();
        assert_eq!(c.to_string(), "[{3,6},{3,10},{12,13}]");
        assert!(c.is_valid());
    }

    #[test]
    fn degenerate_fusion() {
        let w = build_w(2, 40);
        let a = r_approx(&w, 1).unwrap();
        let f = fuse_a3b(&a, &w, &w, 10).unwrap();
        assert_eq!(f.member.approx, r_approx(&w, 10).unwrap());
        assert_eq!(f.depth, 1);
    }

    #[test]
    fn fusion_without_supply() {
        let w = build_w(2, 40);
        let a = ap(2, &[&[0, 1]]);
        let small = MemberTrunc::new(ap(2, &[&[3, 4]]), false).unwrap();
        assert!(matches!(fuse_a3b(&a, &small, &w, 3), Err(Error::Exhausted { .. })));
    }

    #[test]
    fn embedding() {
        let all = NodeSet::new(2, build_w(2, 60).nodes().to_vec());
        assert_eq!(dense_embed(&all, 10).unwrap(), r_approx(&build_w(2, 60), 10).unwrap());
        let even = FnOracle::new(2, 400, |n: &TreeNode| n.max_index().is_some_and(|m| m % 2 == 0));
        let e = dense_embed(&even, 8).unwrap();
        assert!(e.is_valid());
        assert!(e.nodes().iter().all(|n| n.max_index().unwrap() % 2 == 0));
        let block = FnOracle::new(2, 400, |n: &TreeNode| n.prefix(1) == [0]);
        assert_eq!(dense_embed(&block, 5), Err(Error::Exhausted { step: 2 }));
    }

    #[test]
    fn subcopies() {
        let w = build_w(2, 15);
        let six = w.nodes()[..6].to_vec();
        let s = subcopy_check(&six, 2, 0).unwrap();
        assert!(s.pairs.iter().all(|(n, t)| n.seq() == t));
        let block: Vec<TreeNode> = w.nodes().iter().filter(|n| n.prefix(1) == [0]).cloned().collect();
        assert_eq!(block.len(), 5);
        let s = subcopy_check(&block, 2, 1).unwrap();
        assert_eq!(s.stem, vec![0]);
        let two = vec![w.nodes()[0].clone(), w.nodes()[2].clone()];
        assert!(subcopy_check(&two, 2, 1).is_none());
    }

    #[test]
    fn thinning() {
        let w = build_w(2, 200);
        let a = FiniteApprox::empty(2);
        let all = one_extensions(&a, &w);
        let t = thin_to_subcopy(&a, &w, &all, 8, &mut Budget::default()).unwrap();
        assert_eq!(t.member.approx, r_approx(&w, 8).unwrap());
        let even: Vec<FiniteApprox> =
            all.iter().filter(|b| b.nodes()[0].max_index().unwrap() % 2 == 0).cloned().collect();
        let t = thin_to_subcopy(&a, &w, &even, 8, &mut Budget::default()).unwrap();
        assert!(t.member.len() >= 8 && t.member.approx.is_valid());
        assert!(t.certificate.iter().all(|b| even.contains(b)));
        assert!(matches!(thin_to_subcopy(&a, &w, &[], 3, &mut Budget::default()), Err(Error::Exhausted { .. })));
    }
}
