//! Graphviz rendering of the tree induced by an approximation, and the way back.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::approx::FiniteApprox;
use super::layout::layout;
use super::node::TreeNode;
use crate::error::{Error, Result};
use crate::wellorder::NdSeq;

fn label(indices: &[u64]) -> String {
    if indices.is_empty() {
        return "∅".to_string();
    }
    let parts: Vec<String> = indices.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn parse_label(s: &str) -> Result<Vec<u64>> {
    let s = s.trim().trim_matches('"').trim();
    if s == "∅" || s == "{}" {
        return Ok(Vec::new());
    }
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Precondition(format!("bad node label {s:?}")))?;
    inner
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Precondition(format!("bad node label {s:?}"))))
        .collect()
}

/// Children keyed by parent, each child list ordered by its largest index.
fn tree(a: &FiniteApprox) -> BTreeMap<Vec<u64>, BTreeSet<(u64, Vec<u64>)>> {
    let mut children: BTreeMap<Vec<u64>, BTreeSet<(u64, Vec<u64>)>> = BTreeMap::new();
    children.entry(Vec::new()).or_default();
    for node in a.nodes() {
        let idx = node.indices();
        for l in 1..=idx.len() {
            children.entry(idx[..l - 1].to_vec()).or_default().insert((idx[l - 1], idx[..l].to_vec()));
        }
    }
    children
}

/// DOT text with root `∅`, labels `{i,j,…}` and children in ≺ order.
pub fn to_dot(a: &FiniteApprox) -> String {
    let children = tree(a);
    let mut out = format!("digraph E{} {{\n  \"∅\";\n", a.k());
    fn walk(parent: &[u64], children: &BTreeMap<Vec<u64>, BTreeSet<(u64, Vec<u64>)>>, out: &mut String) {
        for (_, child) in children.get(parent).into_iter().flatten() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", label(parent), label(child));
            walk(child, children, out);
        }
    }
    walk(&[], &children, &mut out);
    out.push_str("}\n");
    out
}

/// Rebuilds an approximation from DOT text produced by [`to_dot`].
///
/// Leaves are assigned positions from the tree shape, so the shape must be that
/// of an initial segment `⃗i_0, …, ⃗i_{n-1}`.
pub fn from_dot(text: &str) -> Result<FiniteApprox> {
    let mut children: BTreeMap<Vec<u64>, BTreeSet<(u64, Vec<u64>)>> = BTreeMap::new();
    let mut has_parent: BTreeSet<Vec<u64>> = BTreeSet::new();
    for line in text.lines() {
        let Some((lhs, rhs)) = line.split_once("->") else { continue };
        let parent = parse_label(lhs)?;
        let child = parse_label(rhs.trim().trim_end_matches(';'))?;
        if child.len() != parent.len() + 1 || !child.starts_with(&parent) {
            return Err(Error::Precondition(format!(
                "edge {} -> {} is not a prefix edge",
                label(&parent),
                label(&child)
            )));
        }
        let max = *child.last().expect("child is nonempty");
        children.entry(parent).or_default().insert((max, child.clone()));
        if !has_parent.insert(child.clone()) {
            return Err(Error::Precondition(format!("node {} has two parents", label(&child))));
        }
    }
    let mut leaves: Vec<(NdSeq, Vec<u64>)> = Vec::new();
    let mut stack: Vec<(Vec<u64>, Vec<u64>)> = vec![(Vec::new(), Vec::new())];
    while let Some((node, pos)) = stack.pop() {
        match children.get(&node) {
            Some(kids) if !kids.is_empty() => {
                let base = pos.last().copied().unwrap_or(0);
                for (i, (_, child)) in kids.iter().enumerate() {
                    let mut p = pos.clone();
                    p.push(base + i as u64);
                    stack.push((child.clone(), p));
                }
            }
            _ if node.is_empty() => {}
            _ => leaves.push((NdSeq::new(pos).expect("positions are non-decreasing"), node)),
        }
    }
    let declared = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("digraph E"))
        .and_then(|rest| rest.split_whitespace().next())
        .and_then(|k| k.parse::<usize>().ok());
    let k = match leaves.iter().map(|(_, n)| n.len()).max() {
        Some(depth) => depth,
        None => return Ok(FiniteApprox::empty(declared.unwrap_or(0))),
    };
    if leaves.iter().any(|(_, n)| n.len() != k) || declared.is_some_and(|d| d != k) {
        return Err(Error::Precondition("leaves have different depths".into()));
    }
    leaves.sort();
    let lay = layout(k, leaves.len());
    for (p, (pos, _)) in leaves.iter().enumerate() {
        if pos != lay.seq(p) {
            return Err(Error::Precondition(format!("tree shape is not an initial segment at {pos}")));
        }
    }
    let nodes = leaves.into_iter().map(|(_, n)| TreeNode::decode(k, n)).collect::<Result<Vec<_>>>()?;
    Ok(FiniteApprox::new(k, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_w;

    #[test]
    fn w2_edges() {
        let dot = to_dot(&build_w(2, 6).approx);
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).map(str::trim).collect();
        assert_eq!(
            edges,
            [
                "\"∅\" -> \"{0}\";",
                "\"{0}\" -> \"{0,1}\";",
                "\"{0}\" -> \"{0,2}\";",
                "\"{0}\" -> \"{0,5}\";",
                "\"∅\" -> \"{3}\";",
                "\"{3}\" -> \"{3,4}\";",
                "\"{3}\" -> \"{3,6}\";",
                "\"∅\" -> \"{7}\";",
                "\"{7}\" -> \"{7,8}\";",
            ]
        );
    }

    #[test]
    fn round_trip() {
        for k in 2..=4 {
            let w = build_w(k, 40).approx;
            assert_eq!(from_dot(&to_dot(&w)).unwrap(), w);
        }
    }

    #[test]
    fn rejects_gapped_shape() {
        let text = "digraph E2 {\n  \"∅\" -> \"{3}\";\n  \"{3}\" -> \"{3,4}\";\n}\n";
        assert!(from_dot(text).is_ok());
        let text = "digraph E2 {\n  \"∅\" -> \"{0}\";\n  \"{0}\" -> \"{0,1}\";\n  \"∅\" -> \"{3}\";\n  \"{3}\" -> \"{3,4}\";\n}\n";
        assert!(from_dot(text).is_err());
    }
}
