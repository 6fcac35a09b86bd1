//! Shared machinery for the backtracking searches.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::space::{FiniteApprox, MemberTrunc, Slot, TreeNode};

/// Default cap on visited search states.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Counts visited states and stops a search once the cap is reached.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    /// Adds `n` visited states at once.
    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// The nodes of a member indexed for fast slot lookups.
#[derive(Clone, Debug)]
pub struct NodePool {
    k: usize,
    nodes: Vec<TreeNode>,
    by_prefix: Vec<HashMap<Vec<u64>, Vec<usize>>>,
}

impl NodePool {
    pub fn new(k: usize, nodes: &[TreeNode]) -> Self {
        let mut nodes: Vec<TreeNode> = nodes.iter().filter(|n| n.len() == k).cloned().collect();
        nodes.sort_by_key(|n| n.max_index());
        nodes.dedup();
        let mut by_prefix = vec![HashMap::new(); k];
        for (i, n) in nodes.iter().enumerate() {
            for (l, map) in by_prefix.iter_mut().enumerate().skip(1) {
                map.entry(n.prefix(l).to_vec()).or_insert_with(Vec::new).push(i);
            }
        }
        NodePool { k, nodes, by_prefix }
    }

    pub fn of(x: &MemberTrunc) -> Self {
        NodePool::new(x.k(), x.nodes())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Pool nodes admitted by the slot, by increasing maximum.
    pub fn admitted(&self, slot: &Slot) -> Vec<&TreeNode> {
        if slot.level == 0 {
            let start = match slot.floor {
                None => 0,
                Some(f) => self.nodes.partition_point(|n| n.max_index() <= Some(f)),
            };
            self.nodes[start..].iter().filter(|n| slot.admits(n)).collect()
        } else {
            let list = self.by_prefix[slot.level].get(&slot.prefix).map(Vec::as_slice).unwrap_or(&[]);
            list.iter().map(|&i| &self.nodes[i]).filter(|n| slot.admits(n)).collect()
        }
    }

    /// Admitted nodes for the step after `a`.
    pub fn extensions(&self, a: &FiniteApprox) -> Vec<&TreeNode> {
        self.admitted(&Slot::of(a))
    }
}

/// Depth-first search for an extension of `start` to length `target` using
/// pool nodes, trying the smallest admissible node first.
///
/// `accept(c, node)` may veto appending `node` to `c`. Returns `Ok(None)` when
/// the whole tree was explored without success; `deepest` records the longest
/// approximation reached.
pub fn extend_search<F>(
    start: &FiniteApprox,
    pool: &NodePool,
    target: usize,
    budget: &mut Budget,
    deepest: &mut usize,
    mut accept: F,
) -> Result<Option<FiniteApprox>>
where
    F: FnMut(&FiniteApprox, &TreeNode) -> bool,
{
    fn go<F>(
        c: &mut FiniteApprox,
        pool: &NodePool,
        target: usize,
        budget: &mut Budget,
        deepest: &mut usize,
        accept: &mut F,
    ) -> Result<bool>
    where
        F: FnMut(&FiniteApprox, &TreeNode) -> bool,
    {
        budget.tick()?;
        *deepest = (*deepest).max(c.len());
        if c.len() >= target {
            return Ok(true);
        }
        let floor = c.max_index();
        let above =
            pool.nodes().len() - floor.map_or(0, |f| pool.nodes().partition_point(|n| n.max_index() <= Some(f)));
        if above < target - c.len() {
            return Ok(false);
        }
        let slot = Slot::of(c);
        for node in pool.admitted(&slot) {
            if !accept(c, node) {
                continue;
            }
            c.push(node.clone());
            if go(c, pool, target, budget, deepest, accept)? {
                return Ok(true);
            }
            c.pop();
        }
        Ok(false)
    }
    let mut c = start.clone();
    if go(&mut c, pool, target, budget, deepest, &mut accept)? {
        Ok(Some(c))
    } else {
        Ok(None)
    }
}

/// Calls `visit` on every proper extension of `start` inside the pool, up to
/// length `max_len`, in depth-first order. Stops early when `visit` returns false.
pub fn for_each_extension<F>(
    start: &FiniteApprox,
    pool: &NodePool,
    max_len: usize,
    budget: &mut Budget,
    mut visit: F,
) -> Result<bool>
where
    F: FnMut(&FiniteApprox) -> bool,
{
    fn go<F>(c: &mut FiniteApprox, pool: &NodePool, max_len: usize, budget: &mut Budget, visit: &mut F) -> Result<bool>
    where
        F: FnMut(&FiniteApprox) -> bool,
    {
        if c.len() >= max_len {
            return Ok(true);
        }
        let slot = Slot::of(c);
        for node in pool.admitted(&slot) {
            budget.tick()?;
            c.push(node.clone());
            let keep_going = visit(c) && go(c, pool, max_len, budget, visit)?;
            c.pop();
            if !keep_going {
                return Ok(false);
            }
        }
        Ok(true)
    }
    let mut c = start.clone();
    go(&mut c, pool, max_len, budget, &mut visit)
}
