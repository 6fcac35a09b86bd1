use std::collections::HashMap;

use serde::Serialize;

use super::coloring::Coloring;
use super::pigeonhole::check_start;
use crate::constructions::level_of;
use crate::error::{Error, Result};
use crate::search::{Budget, NodePool};
use crate::space::{extension_nodes, FiniteApprox, MemberTrunc, Slot, TreeNode};

/// `E_l` on new nodes: related iff the length-`l` prefixes agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalRelation {
    pub level: usize,
}

impl CanonicalRelation {
    pub fn relates(&self, x: &TreeNode, y: &TreeNode) -> bool {
        x.prefix(self.level) == y.prefix(self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Canonized {
    pub member: MemberTrunc,
    pub relation: CanonicalRelation,
}

/// The levels a canonical relation on 1-extensions of an approximation of
/// length `n ∈ N^k_l` may have: `0` and `l+1, …, k`.
pub fn candidate_levels(k: usize, l: usize) -> Vec<usize> {
    std::iter::once(0).chain(l + 1..=k).collect()
}

struct Search<'a> {
    slot_s: Slot,
    pool: NodePool,
    colors: HashMap<TreeNode, u64>,
    target: usize,
    budget: &'a mut Budget,
    deepest: usize,
    ambiguous: Option<Vec<usize>>,
}

impl Search<'_> {
    fn go(
        &mut self,
        c: &mut FiniteApprox,
        chosen: &mut Vec<(TreeNode, u64)>,
        fitting: &[usize],
    ) -> Result<Option<usize>> {
        self.budget.tick()?;
        self.deepest = self.deepest.max(c.len());
        if c.len() >= self.target {
            if fitting.len() == 1 {
                return Ok(Some(fitting[0]));
            }
            self.ambiguous = Some(fitting.to_vec());
            return Ok(None);
        }
        let slot = Slot::of(c);
        let candidates: Vec<TreeNode> = self.pool.admitted(&slot).into_iter().cloned().collect();
        for node in candidates {
            let narrowed: Vec<usize>;
            let is_ext = self.slot_s.admits(&node);
            if is_ext {
                let color = self.colors[&node];
                narrowed = fitting
                    .iter()
                    .copied()
                    .filter(|&j| chosen.iter().all(|(y, cy)| (*cy == color) == (y.prefix(j) == node.prefix(j))))
                    .collect();
                if narrowed.is_empty() {
                    continue;
                }
                chosen.push((node.clone(), color));
            } else {
                narrowed = fitting.to_vec();
            }
            c.push(node);
            let res = self.go(c, chosen, &narrowed)?;
            if res.is_some() || self.ambiguous.is_some() {
                // leave the successful path in `c`
                return Ok(res);
            }
            c.pop();
            if is_ext {
                chosen.pop();
            }
        }
        Ok(None)
    }
}

/// Finds `Y ∈ [s, X]` of length `target` on whose 1-extensions of `s`
/// equality of `f` is exactly `E_j` on new nodes, for a single `j` among
/// [`candidate_levels`].
pub fn canonize_1ext(
    s: &FiniteApprox,
    x: &MemberTrunc,
    f: &Coloring,
    target: usize,
    budget: &mut Budget,
) -> Result<Canonized> {
    check_start(s, x, target)?;
    let colors = extension_nodes(s, x)
        .into_iter()
        .map(|n| f.color(&s.extended(n.clone())).map(|c| (n, c)))
        .collect::<Result<HashMap<_, _>>>()?;
    let levels = candidate_levels(s.k(), level_of(s));
    let mut search = Search {
        slot_s: Slot::of(s),
        pool: NodePool::of(x),
        colors,
        target,
        budget,
        deepest: s.len(),
        ambiguous: None,
    };
    let mut c = s.clone();
    let found = search.go(&mut c, &mut Vec::new(), &levels)?;
    match (found, search.ambiguous) {
        (Some(level), _) => {
            Ok(Canonized { member: MemberTrunc { approx: c, complete: false }, relation: CanonicalRelation { level } })
        }
        (None, Some(fits)) => Err(Error::AmbiguousAtScale(format!("levels {fits:?} all fit"))),
        (None, None) => Err(Error::Exhausted { step: search.deepest }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{build_w, one_extensions, r_approx};

    fn run(n: usize, target: usize, f: impl Fn(&TreeNode) -> u64) -> Result<Canonized> {
        let w = build_w(2, 300);
        let s = r_approx(&w, n).unwrap();
        let c = Coloring::from_fn(one_extensions(&s, &w), |b| f(b.nodes().last().unwrap()));
        canonize_1ext(&s, &w, &c, target, &mut Budget::default())
    }

    #[test]
    fn three_outcomes() {
        // |s| = 2 lies in N^2_0
        assert_eq!(run(2, 12, |n| n.max_index().unwrap()).unwrap().relation.level, 2);
        assert_eq!(run(2, 12, |_| 7).unwrap().relation.level, 0);
        assert_eq!(run(2, 12, |n| n.indices()[0]).unwrap().relation.level, 1);
    }

    #[test]
    fn level_one_is_excluded_above_diagonal() {
        // |s| = 1 lies in N^2_1, so blockwise colorings collapse to E_0
        assert_eq!(run(1, 12, |n| n.indices()[0]).unwrap().relation.level, 0);
        assert_eq!(candidate_levels(2, 1), vec![0, 2]);
    }
}
