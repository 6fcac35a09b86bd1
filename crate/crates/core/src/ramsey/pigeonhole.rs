use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use super::coloring::Coloring;
use crate::constructions::{dense_embed, level_of, subcopy_check, NodeSet, Subcopy};
use crate::error::{Error, Result};
use crate::search::{extend_search, Budget, NodePool};
use crate::space::{depth_of, extension_nodes, Depth, FiniteApprox, MemberTrunc, Slot, TreeNode};

/// Which search produced a homogeneous member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Subcopy reduction followed by thinning.
    Structured,
    /// Complete backtracking with color pruning.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homogeneous {
    pub member: MemberTrunc,
    pub color: u64,
    pub route: Route,
}

/// States the structured route may spend on one color before giving way.
const STRUCTURED_BUDGET: u64 = 20_000;

pub(crate) fn check_start(a: &FiniteApprox, x: &MemberTrunc, target: usize) -> Result<()> {
    a.validate().map_err(Error::Invalid)?;
    if depth_of(x, a)? == Depth::Infinite {
        return Err(Error::Precondition(format!("{a} does not lie in the member")));
    }
    if target < a.len() {
        return Err(Error::Precondition(format!("target {target} is shorter than |a| = {}", a.len())));
    }
    Ok(())
}

/// The colors of `r_{|a|+1}[a, Y]`; `None` if some extension is uncolored.
pub fn extension_colors(a: &FiniteApprox, y: &MemberTrunc, c: &Coloring) -> Option<BTreeSet<u64>> {
    extension_nodes(a, y).into_iter().map(|n| c.get(&a.extended(n))).collect()
}

/// Longest greedy approximation inside the images of `chosen` under `theta`,
/// pulled back to source nodes.
fn embedded_part(theta: &Subcopy, chosen: &HashSet<&TreeNode>) -> Vec<TreeNode> {
    let d = theta.k - theta.level;
    if d == 0 {
        return theta.pairs.iter().map(|(n, _)| n).filter(|n| chosen.contains(n)).cloned().collect();
    }
    let images: Vec<TreeNode> =
        theta.pairs.iter().filter(|(n, _)| chosen.contains(n)).filter_map(|(n, _)| theta.image(n)).collect();
    let oracle = NodeSet::new(d, images);
    // grow until the oracle runs dry
    let mut best = FiniteApprox::empty(d);
    let mut len = 1;
    while let Ok(e) = dense_embed(&oracle, len) {
        best = e;
        len += 1;
    }
    best.nodes().iter().filter_map(|img| theta.preimage(img)).cloned().collect()
}

/// Nodes of color `color` kept by the subcopy reduction: for `|a| ∈ N^k_l`
/// with `l ≥ 1` the extension nodes form one copy of E_{k−l}; for `l = 0`
/// each block of extension nodes forms a copy of E_{k−1}.
fn structured_supply(a: &FiniteApprox, ext: &[TreeNode], colors: &[u64], color: u64) -> Option<HashSet<TreeNode>> {
    let k = a.k();
    let l = level_of(a);
    let chosen: HashSet<&TreeNode> = ext.iter().zip(colors).filter(|(_, &c)| c == color).map(|(n, _)| n).collect();
    let groups: Vec<Vec<TreeNode>> = if l >= 1 {
        vec![ext.to_vec()]
    } else {
        let mut blocks: BTreeMap<u64, Vec<TreeNode>> = BTreeMap::new();
        for n in ext {
            blocks.entry(n.indices()[0]).or_default().push(n.clone());
        }
        blocks.into_values().collect()
    };
    let depth = l.max(1);
    let mut kept = HashSet::new();
    for g in groups {
        let theta = subcopy_check(&g, k, depth)?;
        kept.extend(embedded_part(&theta, &chosen));
    }
    Some(kept)
}

/// Finds `Y ∈ [a, X]` of length `target` whose 1-extensions of `a` all share one color.
///
/// Colors are tried in ascending order, first through the structured route
/// and then by complete backtracking, so a reported failure means no such `Y`
/// exists inside the truncation (or the budget ran out).
pub fn pigeonhole(
    a: &FiniteApprox,
    x: &MemberTrunc,
    c: &Coloring,
    target: usize,
    budget: &mut Budget,
) -> Result<Homogeneous> {
    check_start(a, x, target)?;
    let ext = extension_nodes(a, x);
    let ext_colors = ext.iter().map(|n| c.color(&a.extended(n.clone()))).collect::<Result<Vec<u64>>>()?;
    let mut palette: Vec<u64> = ext_colors.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if palette.is_empty() {
        palette = c.colors().into_iter().collect();
    }
    if palette.is_empty() {
        palette.push(0);
    }
    let slot = Slot::of(a);
    let pool = NodePool::of(x);
    let mut deepest = a.len();

    for &color in &palette {
        let Some(kept) = structured_supply(a, &ext, &ext_colors, color) else { continue };
        let mut local = Budget::new(STRUCTURED_BUDGET);
        let found =
            extend_search(a, &pool, target, &mut local, &mut deepest, |_, n| !slot.admits(n) || kept.contains(n));
        budget.charge(local.used())?;
        if let Ok(Some(y)) = found {
            return Ok(Homogeneous {
                member: MemberTrunc { approx: y, complete: false },
                color,
                route: Route::Structured,
            });
        }
    }

    let color_of: std::collections::HashMap<&TreeNode, u64> = ext.iter().zip(ext_colors.iter().copied()).collect();
    for &color in &palette {
        let found = extend_search(a, &pool, target, budget, &mut deepest, |_, n| {
            !slot.admits(n) || color_of.get(n) == Some(&color)
        })?;
        if let Some(y) = found {
            return Ok(Homogeneous {
                member: MemberTrunc { approx: y, complete: false },
                color,
                route: Route::Fallback,
            });
        }
    }
    Err(Error::Exhausted { step: deepest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_w, one_extensions, r_approx};

    #[test]
    fn constant_coloring_gives_restriction() {
        let w = build_w(2, 100);
        let a = FiniteApprox::empty(2);
        let c = Coloring::from_fn(one_extensions(&a, &w), |_| 1);
        let h = pigeonhole(&a, &w, &c, 8, &mut Budget::default()).unwrap();
        assert_eq!(h.member.approx, r_approx(&w, 8).unwrap());
        assert_eq!(h.color, 1);
        assert_eq!(h.route, Route::Structured);
    }

    #[test]
    fn parity_coloring() {
        let w = build_w(2, 300);
        let a = FiniteApprox::empty(2);
        let c = Coloring::from_fn(one_extensions(&a, &w), |b| b.nodes()[0].max_index().unwrap() % 2);
        let h = pigeonhole(&a, &w, &c, 8, &mut Budget::default()).unwrap();
        assert_eq!(h.member.len(), 8);
        assert!(h.member.approx.is_valid());
        assert_eq!(extension_colors(&a, &h.member, &c).unwrap().len(), 1);
    }

    #[test]
    fn split_block_at_level_one() {
        let w = build_w(2, 300);
        let a = r_approx(&w, 1).unwrap();
        let ext = one_extensions(&a, &w);
        let c = Coloring::from_fn(ext, |b| u64::from(b.nodes()[1].max_index().unwrap() % 3 == 0));
        let h = pigeonhole(&a, &w, &c, 8, &mut Budget::default()).unwrap();
        assert_eq!(extension_colors(&a, &h.member, &c).unwrap().len(), 1);
    }
}
