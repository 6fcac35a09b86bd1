//! Reading command-line arguments into library values.
//!
//! Structured arguments are either inline JSON or a path to a JSON file.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;

use ellentuck::ramsey::{ar_n, induced_relation, FrontFamily, InnerMap, ProjVector};
use ellentuck::{build_w, one_extensions, Budget, Coloring, FiniteApprox, MemberTrunc, Relation, TreeNode};

/// A bad value for a named flag; reported with exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(flag: &str, msg: impl std::fmt::Display) -> Result<T> {
    Err(Usage(format!("invalid value for --{flag}: {msg}")).into())
}

/// Inline JSON if the text starts like JSON, file contents otherwise.
pub fn text_of(flag: &str, arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    match fs::read_to_string(arg) {
        Ok(s) => Ok(s),
        Err(e) => usage(flag, format!("cannot read {arg}: {e}")),
    }
}

fn json<T: DeserializeOwned>(flag: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).or_else(|e| usage(flag, e))
}

/// An approximation given as `{"k":…,"nodes":…}` or as a bare node list.
///
/// A bare list takes its dimension from its first node, or from `k` when empty.
pub fn approx(flag: &str, arg: &str, k: Option<usize>) -> Result<FiniteApprox> {
    let text = text_of(flag, arg)?;
    let value: serde_json::Value = json(flag, &text)?;
    if value.is_array() {
        let nodes: Vec<Vec<u64>> = json(flag, &text)?;
        let dim = nodes.first().map(Vec::len).or(k);
        let Some(dim) = dim else { return usage(flag, "cannot infer k from an empty list") };
        return FiniteApprox::from_indices(dim, nodes).or_else(|e| usage(flag, e));
    }
    json(flag, &text)
}

/// A member truncation: `W<k>:<n>` for `r_n(W_k)`, or an approximation.
pub fn member(flag: &str, arg: &str) -> Result<MemberTrunc> {
    if let Some(rest) = arg.strip_prefix('W') {
        let Some((k, n)) = rest.split_once(':') else { return usage(flag, "expected W<k>:<n>") };
        let (Ok(k), Ok(n)) = (k.parse::<usize>(), n.parse::<usize>()) else {
            return usage(flag, "expected W<k>:<n>");
        };
        if k == 0 {
            return usage(flag, "k must be positive");
        }
        return Ok(build_w(k, n));
    }
    let a = approx(flag, arg, None)?;
    MemberTrunc::new(a, false).or_else(|e| usage(flag, e))
}

pub fn node(flag: &str, arg: &str, k: usize) -> Result<TreeNode> {
    let indices: Vec<u64> = json(flag, &text_of(flag, arg)?)?;
    TreeNode::decode(k, indices).or_else(|e| usage(flag, e))
}

pub fn nodes(flag: &str, arg: &str, k: usize) -> Result<Vec<TreeNode>> {
    let lists: Vec<Vec<u64>> = json(flag, &text_of(flag, arg)?)?;
    lists.into_iter().map(|l| TreeNode::decode(k, l).or_else(|e| usage(flag, e))).collect()
}

/// A coloring file, or `random:<m>` for a seeded `m`-coloring of the
/// 1-extensions of `a` inside `x`.
pub fn coloring(
    flag: &str,
    arg: &str,
    k: usize,
    a: &FiniteApprox,
    x: &MemberTrunc,
    seed: Option<u64>,
) -> Result<Coloring> {
    if let Some(m) = arg.strip_prefix("random:") {
        let Ok(m) = m.parse::<u64>() else { return usage(flag, "expected random:<colors>") };
        if m == 0 {
            return usage(flag, "at least one color is needed");
        }
        let Some(seed) = seed else { return usage("seed", "random colorings need --seed") };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok(Coloring::from_fn(one_extensions(a, x), |_| rng.gen_range(0..m)));
    }
    Coloring::from_json_str(&text_of(flag, arg)?, k).or_else(|e| usage(flag, e))
}

/// A relation file, or `vector:<l_0,…>` for the relation that vector induces on `AR_n|X`.
pub fn relation(flag: &str, arg: &str, k: usize, n: usize, x: &MemberTrunc, budget: &mut Budget) -> Result<Relation> {
    if let Some(v) = arg.strip_prefix("vector:") {
        let v = projection(flag, v)?;
        if v.len() != n {
            return usage(flag, format!("vector {v} does not have length {n}"));
        }
        let domain = ar_n(x, n, budget)?;
        return Ok(induced_relation(&v, &domain));
    }
    Coloring::from_json_str(&text_of(flag, arg)?, k).or_else(|e| usage(flag, e))
}

/// `1,2` or `(1,2)`.
pub fn projection(flag: &str, arg: &str) -> Result<ProjVector> {
    let inner = arg.trim().trim_start_matches('(').trim_end_matches(')');
    if inner.is_empty() {
        return Ok(ProjVector(Vec::new()));
    }
    inner
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| anyhow!(Usage(format!("invalid value for --{flag}: {e}")))))
        .collect::<Result<Vec<_>>>()
        .map(ProjVector)
}

pub fn family(flag: &str, arg: &str, k: usize) -> Result<FrontFamily> {
    let text = text_of(flag, arg)?;
    let values: Vec<serde_json::Value> = json(flag, &text)?;
    let members = values.into_iter().map(|v| approx(flag, &v.to_string(), Some(k))).collect::<Result<Vec<_>>>()?;
    Ok(FrontFamily::new(members))
}

pub fn inner_map(flag: &str, arg: &str) -> Result<InnerMap> {
    json(flag, &text_of(flag, arg)?)
}

/// The search budget, overridden by `ELLENTUCK_BUDGET`.
pub fn budget() -> Result<Budget> {
    match std::env::var("ELLENTUCK_BUDGET") {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(limit) => Ok(Budget::new(limit)),
            Err(_) => bail!(Usage(format!("ELLENTUCK_BUDGET must be a natural number, got {v:?}"))),
        },
        Err(_) => Ok(Budget::default()),
    }
}

pub fn read_file(flag: &str, path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("--{flag}")).or_else(|e| usage(flag, format!("{e:#}")))
}
