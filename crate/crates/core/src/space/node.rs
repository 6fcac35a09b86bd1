use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::wellorder::{rank_of, seq_at_rank, NdSeq, Rank};

/// A node of Ŵ_k: the ranks of the nonempty prefixes of one sequence.
///
/// Equality, hashing and ordering use the index tuple only.
#[derive(Clone, Debug)]
pub struct TreeNode {
    indices: Vec<u64>,
    seq: NdSeq,
}

impl TreeNode {
    /// Decodes an index tuple, rejecting tuples that are not nodes of Ŵ_k.
    pub fn decode(k: usize, indices: Vec<u64>) -> Result<TreeNode> {
        let Some(&last) = indices.last() else {
            return Ok(TreeNode { indices, seq: NdSeq::empty() });
        };
        if indices.len() > k {
            return Err(Error::MalformedNode(indices));
        }
        let seq = seq_at_rank(k, Rank(last));
        if seq.len() != indices.len() {
            return Err(Error::MalformedNode(indices));
        }
        for (p, &idx) in indices.iter().enumerate() {
            if rank_of(k, &seq.prefix(p + 1))?.0 != idx {
                return Err(Error::MalformedNode(indices));
            }
        }
        Ok(TreeNode { indices, seq })
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    /// The index sequence `⃗j` with `self = W_k(⃗j)`.
    pub fn seq(&self) -> &NdSeq {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Largest index, `None` for the empty node.
    pub fn max_index(&self) -> Option<u64> {
        self.indices.last().copied()
    }

    /// `π_l`: the length-`l` prefix.
    pub fn project(&self, l: usize) -> Result<TreeNode> {
        if l > self.len() {
            return Err(Error::LevelOutOfRange { level: l, len: self.len() });
        }
        Ok(TreeNode { indices: self.indices[..l].to_vec(), seq: self.seq.prefix(l) })
    }

    /// `π_l` as a borrowed slice, clamped to the node length.
    pub fn prefix(&self, l: usize) -> &[u64] {
        &self.indices[..l.min(self.indices.len())]
    }
}

impl PartialEq for TreeNode {
    fn eq(&self, other: &Self) -> bool {
        self.indices == other.indices
    }
}

impl Eq for TreeNode {}

impl Hash for TreeNode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.indices.hash(state);
    }
}

impl PartialOrd for TreeNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreeNode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.seq.cmp(&other.seq).then_with(|| self.indices.cmp(&other.indices))
    }
}

impl serde::Serialize for TreeNode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, e) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// `W_k(s)`, the node listing the ranks of the nonempty prefixes of `s`.
pub fn wk_node(k: usize, s: &NdSeq) -> Result<TreeNode> {
    let indices = (1..=s.len()).map(|p| rank_of(k, &s.prefix(p)).map(|r| r.0)).collect::<Result<_>>()?;
    Ok(TreeNode { indices, seq: s.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u64]) -> NdSeq {
        NdSeq::new(v.to_vec()).unwrap()
    }

    #[test]
    fn wk_examples() {
        assert_eq!(wk_node(2, &s(&[0, 0])).unwrap().indices(), &[0, 1]);
        assert_eq!(wk_node(2, &s(&[1, 2])).unwrap().indices(), &[3, 6]);
        assert_eq!(wk_node(3, &s(&[0, 1, 2])).unwrap().indices(), &[0, 4, 10]);
        assert!(wk_node(2, &s(&[])).unwrap().is_empty());
    }

    #[test]
    fn projection() {
        let n = TreeNode::decode(2, vec![3, 6]).unwrap();
        assert_eq!(n.project(1).unwrap().indices(), &[3]);
        assert!(n.project(0).unwrap().is_empty());
        assert_eq!(n.project(3), Err(Error::LevelOutOfRange { level: 3, len: 2 }));
        let m = TreeNode::decode(3, vec![0, 4, 10]).unwrap();
        assert_eq!(m.project(2).unwrap().indices(), &[0, 4]);
    }

    #[test]
    fn decoding() {
        assert_eq!(TreeNode::decode(2, vec![3, 6]).unwrap().seq(), &s(&[1, 2]));
        assert!(matches!(TreeNode::decode(2, vec![0, 6]), Err(Error::MalformedNode(_))));
        assert!(matches!(TreeNode::decode(2, vec![0, 1, 2]), Err(Error::MalformedNode(_))));
        assert!(matches!(TreeNode::decode(2, vec![1]), Err(Error::MalformedNode(_))));
    }
}
