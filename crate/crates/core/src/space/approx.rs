use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::layout::layout;
use super::node::{wk_node, TreeNode};
use crate::error::{Error, Result};
use crate::wellorder::NdSeq;

/// The three clauses of the tree definition, numbered as usual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// Every node is a full-length node of Ŵ_k.
    NodeShape,
    /// Maxima strictly increase along the ≺ order of positions.
    MaxIncrease,
    /// Node prefixes are shared exactly when position prefixes are.
    PrefixConsistency,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::NodeShape => "(i)",
            Condition::MaxIncrease => "(ii)",
            Condition::PrefixConsistency => "(iii)",
        })
    }
}

/// First failing condition of an approximation and the position `⃗j` where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub at: NdSeq,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.condition, self.at)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxJson {
    pub k: usize,
    pub nodes: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complete: bool,
}

/// An ordered list of nodes, the `p`-th standing at position `⃗i_p`.
///
/// Construction only decodes nodes; [`FiniteApprox::validate`] checks the tree
/// conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ApproxJson", into = "ApproxJson")]
pub struct FiniteApprox {
    k: usize,
    nodes: Vec<TreeNode>,
}

impl TryFrom<ApproxJson> for FiniteApprox {
    type Error = Error;

    fn try_from(raw: ApproxJson) -> Result<Self> {
        FiniteApprox::from_indices(raw.k, raw.nodes)
    }
}

impl From<FiniteApprox> for ApproxJson {
    fn from(a: FiniteApprox) -> Self {
        ApproxJson { k: a.k, nodes: a.index_lists(), complete: false }
    }
}

impl FiniteApprox {
    pub fn new(k: usize, nodes: Vec<TreeNode>) -> Self {
        FiniteApprox { k, nodes }
    }

    pub fn empty(k: usize) -> Self {
        FiniteApprox { k, nodes: Vec::new() }
    }

    pub fn from_indices(k: usize, nodes: Vec<Vec<u64>>) -> Result<Self> {
        let nodes = nodes.into_iter().map(|n| TreeNode::decode(k, n)).collect::<Result<_>>()?;
        Ok(FiniteApprox { k, nodes })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_lists(&self) -> Vec<Vec<u64>> {
        self.nodes.iter().map(|n| n.indices().to_vec()).collect()
    }

    /// Largest index used by any node.
    pub fn max_index(&self) -> Option<u64> {
        self.nodes.iter().filter_map(TreeNode::max_index).max()
    }

    pub fn contains(&self, node: &TreeNode) -> bool {
        self.nodes.contains(node)
    }

    /// `r_n`: the first `n` nodes.
    pub fn restrict(&self, n: usize) -> Result<FiniteApprox> {
        if n > self.len() {
            return Err(Error::TruncationExhausted { needed: n, available: self.len() });
        }
        Ok(FiniteApprox { k: self.k, nodes: self.nodes[..n].to_vec() })
    }

    /// `self` followed by one more node.
    pub fn extended(&self, node: TreeNode) -> FiniteApprox {
        let mut nodes = self.nodes.clone();
        nodes.push(node);
        FiniteApprox { k: self.k, nodes }
    }

    pub(crate) fn push(&mut self, node: TreeNode) {
        self.nodes.push(node);
    }

    pub(crate) fn pop(&mut self) -> Option<TreeNode> {
        self.nodes.pop()
    }

    /// True if `self = r_{|self|}(other)`.
    pub fn is_initial_segment_of(&self, other: &FiniteApprox) -> bool {
        self.k == other.k && other.nodes.starts_with(&self.nodes)
    }

    /// Canonical compact JSON, used as a key in coloring tables.
    pub fn key(&self) -> String {
        serde_json::to_string(self).expect("approximations always serialize")
    }

    /// Checks the tree conditions, reporting the ≺-least failing position.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let k = self.k;
        let lay = layout(k, self.len());
        let mut found: Vec<(NdSeq, Condition)> = Vec::new();
        let mut by_pos: BTreeMap<NdSeq, &[u64]> = BTreeMap::new();
        for (p, node) in self.nodes.iter().enumerate() {
            let pos = lay.seq(p);
            if node.len() != k {
                found.push((pos.clone(), Condition::NodeShape));
                continue;
            }
            for l in 1..=k {
                let j = pos.prefix(l);
                let image = node.prefix(l);
                match by_pos.get(&j) {
                    Some(&seen) if seen != image => found.push((j, Condition::PrefixConsistency)),
                    Some(_) => {}
                    None => {
                        by_pos.insert(j, image);
                    }
                }
            }
        }
        let mut by_image: HashMap<&[u64], &NdSeq> = HashMap::new();
        let mut last_max: Option<u64> = None;
        for (j, image) in &by_pos {
            if by_image.insert(image, j).is_some() {
                found.push((j.clone(), Condition::PrefixConsistency));
            }
            let m = image.last().copied();
            if last_max.is_some() && m <= last_max {
                found.push((j.clone(), Condition::MaxIncrease));
            }
            last_max = last_max.max(m);
        }
        match found.into_iter().min() {
            None => Ok(()),
            Some((at, condition)) => Err(Violation { condition, at }),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

impl fmt::Display for FiniteApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A finite truncation standing in for a member of E_k.
///
/// `complete` promises that no further nodes exist, which lets
/// [`depth_of`] answer "infinite".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ApproxJson", into = "ApproxJson")]
pub struct MemberTrunc {
    pub approx: FiniteApprox,
    pub complete: bool,
}

impl TryFrom<ApproxJson> for MemberTrunc {
    type Error = Error;

    fn try_from(raw: ApproxJson) -> Result<Self> {
        let complete = raw.complete;
        let approx = FiniteApprox::try_from(raw)?;
        MemberTrunc::new(approx, complete)
    }
}

impl From<MemberTrunc> for ApproxJson {
    fn from(m: MemberTrunc) -> Self {
        ApproxJson { complete: m.complete, ..ApproxJson::from(m.approx) }
    }
}

impl MemberTrunc {
    /// Wraps a validated approximation.
    pub fn new(approx: FiniteApprox, complete: bool) -> Result<Self> {
        approx.validate().map_err(Error::Invalid)?;
        Ok(MemberTrunc { approx, complete })
    }

    pub fn k(&self) -> usize {
        self.approx.k()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        self.approx.nodes()
    }

    pub fn len(&self) -> usize {
        self.approx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.approx.is_empty()
    }
}

/// The first `n` nodes of W_k.
pub fn build_w(k: usize, n: usize) -> MemberTrunc {
    let lay = layout(k, n);
    let nodes = lay.seqs()[..n].iter().map(|s| wk_node(k, s).expect("layout sequences have length k")).collect();
    MemberTrunc { approx: FiniteApprox::new(k, nodes), complete: false }
}

/// `r_n(X)`.
pub fn r_approx(x: &MemberTrunc, n: usize) -> Result<FiniteApprox> {
    x.approx.restrict(n)
}

/// `a ≤_fin b`: every node of `a` is a node of `b`.
pub fn le_fin(a: &FiniteApprox, b: &FiniteApprox) -> bool {
    let nodes: HashSet<&TreeNode> = b.nodes().iter().collect();
    a.nodes().iter().all(|n| nodes.contains(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

/// Least `n` with `a ≤_fin r_n(X)`.
pub fn depth_of(x: &MemberTrunc, a: &FiniteApprox) -> Result<Depth> {
    let pos: HashMap<&TreeNode, usize> = x.nodes().iter().enumerate().map(|(p, n)| (n, p)).collect();
    let mut depth = 0;
    for node in a.nodes() {
        match pos.get(node) {
            Some(&p) => depth = depth.max(p + 1),
            None if x.complete => return Ok(Depth::Infinite),
            None => return Err(Error::TruncationExhausted { needed: x.len() + 1, available: x.len() }),
        }
    }
    Ok(Depth::Finite(depth))
}

/// What the next node after an approximation must look like.
///
/// For `|a| = n ∈ N^k_l` the new node must agree with `prefix` on its first `l`
/// indices and its index at position `l` must exceed every index already used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub n: usize,
    pub level: usize,
    pub prefix: Vec<u64>,
    pub floor: Option<u64>,
}

impl Slot {
    pub fn of(a: &FiniteApprox) -> Slot {
        let n = a.len();
        let lay = layout(a.k(), n);
        let level = lay.level(n);
        let prefix = match lay.witness(n) {
            Some(w) => a.nodes()[w].prefix(level).to_vec(),
            None => Vec::new(),
        };
        Slot { n, level, prefix, floor: a.max_index() }
    }

    pub fn admits(&self, node: &TreeNode) -> bool {
        let idx = node.indices();
        idx.len() > self.level && idx[..self.level] == self.prefix[..] && self.floor.is_none_or(|f| idx[self.level] > f)
    }
}

/// New nodes `x ∈ X` with `a ∪ {x}` a valid 1-extension, by increasing maximum.
pub fn extension_nodes(a: &FiniteApprox, x: &MemberTrunc) -> Vec<TreeNode> {
    let slot = Slot::of(a);
    let mut out: Vec<TreeNode> = x.nodes().iter().filter(|n| n.len() == a.k() && slot.admits(n)).cloned().collect();
    out.sort_by_key(|n| n.max_index());
    out
}

/// `r_{|a|+1}[a, X]`.
pub fn one_extensions(a: &FiniteApprox, x: &MemberTrunc) -> Vec<FiniteApprox> {
    extension_nodes(a, x).into_iter().map(|n| a.extended(n)).collect()
}

/// `X/s`: nodes of `X` whose maximum exceeds `max(s)`.
pub fn tail_after(x: &MemberTrunc, s: &FiniteApprox) -> Vec<TreeNode> {
    let floor = s.max_index();
    x.nodes().iter().filter(|n| floor.is_none_or(|f| n.max_index().is_some_and(|m| m > f))).cloned().collect()
}

/// `X ∈ [a, B]` at truncation scale.
pub fn basic_set_contains(a: &FiniteApprox, b: &MemberTrunc, x: &MemberTrunc) -> bool {
    x.approx.restrict(a.len()).is_ok_and(|r| &r == a) && le_fin(&x.approx, &b.approx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(k: usize, nodes: &[&[u64]]) -> FiniteApprox {
        FiniteApprox::from_indices(k, nodes.iter().map(|n| n.to_vec()).collect()).unwrap()
    }

    fn maxima(v: &[TreeNode]) -> Vec<String> {
        v.iter().map(|n| n.to_string()).collect()
    }

    #[test]
    fn w2_leaves() {
        let w = build_w(2, 15);
        assert_eq!(
            w.approx.to_string(),
            "[{0,1},{0,2},{3,4},{0,5},{3,6},{7,8},{0,9},{3,10},{7,11},{12,13},{0,14},{3,15},{7,16},{12,17},{18,19}]"
        );
        assert!(build_w(2, 0).is_empty());
    }

    #[test]
    fn figure_validation() {
        let r6 = ap(2, &[&[3, 6], &[3, 15], &[25, 32], &[3, 36], &[25, 40], &[42, 51]]);
        assert_eq!(r6.validate(), Ok(()));
        let r4 = ap(3, &[&[6, 7, 8], &[6, 7, 24], &[6, 26, 27], &[31, 32, 33]]);
        assert_eq!(r4.validate(), Ok(()));
        let r10 =
            ap(2, &[&[0, 1], &[0, 2], &[3, 6], &[0, 9], &[3, 10], &[12, 17], &[0, 20], &[3, 28], &[12, 23], &[33, 34]]);
        let v = r10.validate().unwrap_err();
        assert_eq!(v.to_string(), "(ii) at (2,3)");
        assert_eq!(ap(2, &[&[0, 1]]).validate(), Ok(()));
    }

    #[test]
    fn wrong_shapes_are_reported() {
        let bad = ap(2, &[&[0, 1], &[3, 4]]);
        assert_eq!(bad.validate().unwrap_err().condition, Condition::PrefixConsistency);
        let short = ap(2, &[&[0]]);
        assert_eq!(short.validate().unwrap_err().condition, Condition::NodeShape);
    }

    #[test]
    fn restriction_and_order() {
        let w = build_w(2, 15);
        assert_eq!(r_approx(&w, 3).unwrap().to_string(), "[{0,1},{0,2},{3,4}]");
        assert!(r_approx(&w, 0).unwrap().is_empty());
        assert!(matches!(r_approx(&w, 16), Err(Error::TruncationExhausted { .. })));
        let r6 = ap(2, &[&[3, 6], &[3, 15], &[25, 32], &[3, 36], &[25, 40], &[42, 51]]);
        assert_eq!(r6.restrict(2).unwrap().to_string(), "[{3,6},{3,15}]");
        assert!(le_fin(&r_approx(&w, 2).unwrap(), &r_approx(&w, 5).unwrap()));
        assert!(le_fin(&ap(2, &[&[3, 6]]), &r6));
        assert!(!le_fin(&ap(2, &[&[0, 1]]), &r6));
    }

    #[test]
    fn depth() {
        let w = build_w(2, 15);
        assert_eq!(depth_of(&w, &ap(2, &[&[3, 6]])), Ok(Depth::Finite(5)));
        assert_eq!(depth_of(&w, &r_approx(&w, 3).unwrap()), Ok(Depth::Finite(3)));
        let absent = FiniteApprox::from_indices(2, vec![vec![99, 100]]);
        // {99,100} is not a node of Ŵ_2, so use a genuine far node instead
        assert!(absent.is_err());
        let far = build_w(2, 40).nodes()[39].clone();
        let done = MemberTrunc { complete: true, ..w.clone() };
        assert_eq!(depth_of(&done, &FiniteApprox::new(2, vec![far.clone()])), Ok(Depth::Infinite));
        assert!(matches!(depth_of(&w, &FiniteApprox::new(2, vec![far])), Err(Error::TruncationExhausted { .. })));
    }

    #[test]
    fn extensions() {
        let w = build_w(2, 15);
        assert_eq!(one_extensions(&FiniteApprox::empty(2), &w).len(), 15);
        assert_eq!(maxima(&extension_nodes(&ap(2, &[&[0, 1]]), &w)), ["{0,2}", "{0,5}", "{0,9}", "{0,14}"]);
        assert_eq!(
            maxima(&extension_nodes(&ap(2, &[&[0, 1], &[0, 2]]), &w)),
            ["{3,4}", "{3,6}", "{7,8}", "{3,10}", "{7,11}", "{12,13}", "{3,15}", "{7,16}", "{12,17}", "{18,19}"]
        );
        for b in one_extensions(&ap(2, &[&[0, 1], &[0, 2]]), &w) {
            assert!(b.is_valid());
        }
    }

    #[test]
    fn tails() {
        let w = build_w(2, 15);
        assert_eq!(tail_after(&w, &ap(2, &[&[0, 1], &[0, 2]])).len(), 13);
        assert_eq!(tail_after(&w, &FiniteApprox::empty(2)).len(), 15);
        assert!(tail_after(&w, &w.approx).is_empty());
    }

    #[test]
    fn basic_sets() {
        let w = build_w(2, 60);
        let r3 = r_approx(&w, 3).unwrap();
        assert!(basic_set_contains(&r3, &w, &w));
        let r6 =
            MemberTrunc::new(ap(2, &[&[3, 6], &[3, 15], &[25, 32], &[3, 36], &[25, 40], &[42, 51]]), false).unwrap();
        assert!(!basic_set_contains(&r3, &w, &r6));
        assert!(basic_set_contains(&FiniteApprox::empty(2), &w, &r6));
    }

    #[test]
    fn json_round_trip() {
        let a = ap(2, &[&[0, 1], &[0, 2]]);
        assert_eq!(a.key(), r#"{"k":2,"nodes":[[0,1],[0,2]]}"#);
        let back: FiniteApprox = serde_json::from_str(&a.key()).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<FiniteApprox>(r#"{"k":2,"nodes":[[0,6]]}"#).is_err());
    }
}
