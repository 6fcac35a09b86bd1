//! The well-order ≺ on non-decreasing sequences of length at most `k`.
//!
//! `()` is least. Otherwise sequences compare by their last entry, and equal
//! last entries fall back to lexicographic order with proper initial segments
//! placed below their extensions.
//!
//! Ranks are 0-based over the nonempty sequences, so `(0)` has rank 0.

use std::cmp::Ordering;
use std::fmt;

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-decreasing sequence of naturals.
///
/// `Ord` is the well-order ≺. The dimension bound `k` is not stored; operations
/// that depend on it take it as an argument.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NdSeq(Vec<u64>);

impl NdSeq {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSequence { entries, k: usize::MAX });
        }
        Ok(NdSeq(entries))
    }

    /// Checked constructor that also enforces `len ≤ k`.
    pub fn with_k(entries: Vec<u64>, k: usize) -> Result<Self> {
        if entries.len() > k {
            return Err(Error::InvalidSequence { entries, k });
        }
        if entries.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSequence { entries, k });
        }
        Ok(NdSeq(entries))
    }

    pub fn empty() -> Self {
        NdSeq(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// The length-`l` initial segment (the whole sequence if `l ≥ len`).
    pub fn prefix(&self, l: usize) -> NdSeq {
        NdSeq(self.0[..l.min(self.0.len())].to_vec())
    }

    /// True if `self` is an initial segment of `other` (not necessarily proper).
    pub fn is_prefix_of(&self, other: &NdSeq) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Length of the longest common initial segment.
    pub fn common_prefix_len(&self, other: &NdSeq) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }
}

impl From<NdSeq> for Vec<u64> {
    fn from(s: NdSeq) -> Self {
        s.0
    }
}

impl fmt::Display for NdSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Ord for NdSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_prec(self, other)
    }
}

impl PartialOrd for NdSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The comparator for ≺.
pub fn cmp_prec(a: &NdSeq, b: &NdSeq) -> Ordering {
    match (a.last(), b.last()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        // slice comparison already puts proper prefixes first
        (Some(x), Some(y)) => x.cmp(&y).then_with(|| a.0.cmp(&b.0)),
    }
}

/// A position in the ≺ order of nonempty sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rank(pub u64);

fn choose(n: u64, r: u64) -> u64 {
    if r > n {
        0
    } else {
        binomial(n, r)
    }
}

/// Number of nonempty sequences of length ≤ k whose last entry is below `y`.
fn count_below(k: usize, y: u64) -> u64 {
    (1..=k as u64).map(|len| choose(y + len - 1, len)).sum()
}

/// Members of block `y` (last entry `y`) lying in the subtree of a trie node
/// of length `q` whose last entry is `v`, the node itself included.
fn subtree(k: usize, y: u64, q: usize, v: u64) -> u64 {
    let own = u64::from(v == y);
    let below: u64 = (1..=(k - q) as u64).map(|e| choose(y - v + e - 1, e - 1)).sum();
    own + below
}

/// Rank of a nonempty sequence among all nonempty sequences of length ≤ k.
pub fn rank_of(k: usize, s: &NdSeq) -> Result<Rank> {
    let y = s.last().ok_or(Error::EmptySequence)?;
    if s.len() > k {
        return Err(Error::InvalidSequence { entries: s.0.clone(), k });
    }
    let mut r = count_below(k, y);
    let mut prev = 0;
    for (p, &e) in s.0.iter().enumerate() {
        if p > 0 && s.0[p - 1] == y {
            r += 1;
        }
        for v in prev..e {
            r += subtree(k, y, p + 1, v);
        }
        prev = e;
    }
    Ok(Rank(r))
}

/// Inverse of [`rank_of`].
pub fn seq_at_rank(k: usize, r: Rank) -> NdSeq {
    assert!(k >= 1, "dimension must be positive");
    let mut r = r.0;
    // locate the block by doubling, then bisection
    let mut hi = 1u64;
    while count_below(k, hi) <= r {
        hi *= 2;
    }
    let mut lo = 0u64;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if count_below(k, mid) <= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = lo;
    r -= count_below(k, y);

    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    loop {
        let q = out.len() + 1;
        let mut v = prev;
        loop {
            let size = subtree(k, y, q, v);
            if r < size {
                break;
            }
            r -= size;
            v += 1;
        }
        out.push(v);
        if v == y {
            if r == 0 {
                return NdSeq(out);
            }
            r -= 1;
        }
        prev = v;
    }
}

/// All nonempty sequences with last entry `y`, in ≺ order.
pub fn block(k: usize, y: u64) -> Vec<NdSeq> {
    fn walk(k: usize, y: u64, cur: &mut Vec<u64>, out: &mut Vec<NdSeq>) {
        let from = cur.last().copied().unwrap_or(0);
        for v in from..=y {
            cur.push(v);
            if v == y {
                out.push(NdSeq(cur.clone()));
            }
            if cur.len() < k {
                walk(k, y, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(k, y, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Streams (ω^{↓≤k}, ≺) starting with `()`, one block at a time.
#[derive(Clone, Debug)]
pub struct LeK {
    k: usize,
    started: bool,
    next_block: u64,
    buf: std::vec::IntoIter<NdSeq>,
    full_only: bool,
}

impl LeK {
    pub fn new(k: usize) -> Self {
        LeK { k, started: false, next_block: 0, buf: Vec::new().into_iter(), full_only: false }
    }

    /// Only the length-`k` sequences, i.e. (ω^{↓k}, ≺).
    pub fn full_length(k: usize) -> Self {
        LeK { full_only: true, ..LeK::new(k) }
    }
}

impl Iterator for LeK {
    type Item = NdSeq;

    fn next(&mut self) -> Option<NdSeq> {
        if !self.started {
            self.started = true;
            if !self.full_only || self.k == 0 {
                return Some(NdSeq::empty());
            }
        }
        if self.k == 0 {
            return None;
        }
        loop {
            if let Some(s) = self.buf.next() {
                return Some(s);
            }
            let mut b = block(self.k, self.next_block);
            if self.full_only {
                b.retain(|s| s.len() == self.k);
            }
            self.buf = b.into_iter();
            self.next_block += 1;
        }
    }
}

/// The first `count` members of (ω^{↓≤k}, ≺), `()` included.
pub fn enumerate_le_k(k: usize, count: usize) -> Vec<NdSeq> {
    LeK::new(k).take(count).collect()
}

/// The first `count` members of (ω^{↓k}, ≺).
pub fn enumerate_k(k: usize, count: usize) -> Vec<NdSeq> {
    LeK::full_length(k).take(count).collect()
}
