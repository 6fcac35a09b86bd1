use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::wellorder::{LeK, NdSeq};

/// Step `n` lies in `N^k_l`: the length-`l` prefix of the `n`-th node is forced
/// by earlier nodes while its length-`(l+1)` prefix is new.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelClass {
    pub n: usize,
    pub l: usize,
}

/// The positions `⃗i_0, ⃗i_1, …` of (ω^{↓k}, ≺) with their level data.
#[derive(Debug)]
pub struct Layout {
    pub k: usize,
    seqs: Vec<NdSeq>,
    levels: Vec<usize>,
    witnesses: Vec<Option<usize>>,
}

impl Layout {
    fn build(k: usize, n: usize) -> Layout {
        let seqs: Vec<NdSeq> = LeK::full_length(k).take(n).collect();
        let mut first: HashMap<&[u64], usize> = HashMap::new();
        let mut levels = Vec::with_capacity(n);
        let mut witnesses = Vec::with_capacity(n);
        for (p, s) in seqs.iter().enumerate() {
            let e = s.entries();
            let hit = (1..k).rev().find_map(|l| first.get(&e[..l]).map(|&w| (l, w)));
            match hit {
                Some((l, w)) => {
                    levels.push(l);
                    witnesses.push(Some(w));
                }
                None => {
                    levels.push(0);
                    witnesses.push(None);
                }
            }
            for l in 1..=k {
                first.entry(&e[..l]).or_insert(p);
            }
        }
        Layout { k, seqs, levels, witnesses }
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    /// `⃗i_n`.
    pub fn seq(&self, n: usize) -> &NdSeq {
        &self.seqs[n]
    }

    pub fn seqs(&self) -> &[NdSeq] {
        &self.seqs
    }

    /// The `l` with `n ∈ N^k_l`.
    pub fn level(&self, n: usize) -> usize {
        self.levels[n]
    }

    /// Least `p < n` with `⃗i_p↾l = ⃗i_n↾l` for `l = level(n)`; `None` when `l = 0`.
    pub fn witness(&self, n: usize) -> Option<usize> {
        self.witnesses[n]
    }
}

/// Shared layout for dimension `k` covering at least `n + 1` positions.
pub fn layout(k: usize, n: usize) -> Arc<Layout> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(l) = guard.get(&k) {
        if l.len() > n {
            return Arc::clone(l);
        }
    }
    let size = (n + 1).max(64).next_power_of_two();
    let built = Arc::new(Layout::build(k, size));
    guard.insert(k, Arc::clone(&built));
    built
}

/// The level class of step `n`.
pub fn classify_n(k: usize, n: usize) -> LevelClass {
    LevelClass { n, l: layout(k, n).level(n) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(classify_n(2, 0).l, 0);
        assert_eq!(classify_n(2, 1).l, 1);
        assert_eq!(classify_n(3, 5).l, 2);
        assert_eq!(classify_n(3, 9).l, 0);
    }

    #[test]
    fn diagonal_steps_are_level_zero() {
        let lay = layout(2, 500);
        for n in 0..500 {
            let e = lay.seq(n).entries();
            assert_eq!(lay.level(n) == 0, e[0] == e[1], "n={n}");
        }
    }
}
