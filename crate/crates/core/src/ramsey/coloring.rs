use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteApprox;

/// An extensional map from approximations to color (or class) ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Coloring {
    table: HashMap<FiniteApprox, u64>,
}

/// An equivalence relation given by class ids; two approximations are
/// related iff they carry the same id.
pub type Relation = Coloring;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ColoringJson {
    Colors { colors: BTreeMap<String, u64> },
    Classes { domain: Vec<serde_json::Value>, classes: Vec<Vec<usize>> },
}

fn parse_approx(v: serde_json::Value, k: usize) -> Result<FiniteApprox> {
    let bad = |e: serde_json::Error| Error::Precondition(format!("bad approximation: {e}"));
    if v.is_array() {
        let nodes: Vec<Vec<u64>> = serde_json::from_value(v).map_err(bad)?;
        FiniteApprox::from_indices(k, nodes)
    } else {
        serde_json::from_value(v).map_err(bad)
    }
}

impl Coloring {
    pub fn new() -> Self {
        Coloring::default()
    }

    pub fn from_fn<I, F>(domain: I, mut f: F) -> Self
    where
        I: IntoIterator<Item = FiniteApprox>,
        F: FnMut(&FiniteApprox) -> u64,
    {
        Coloring {
            table: domain
                .into_iter()
                .map(|a| {
                    let c = f(&a);
                    (a, c)
                })
                .collect(),
        }
    }

    /// Class ids from an explicit partition of `domain` given by index lists.
    pub fn from_classes(domain: Vec<FiniteApprox>, classes: &[Vec<usize>]) -> Result<Self> {
        let mut table = HashMap::new();
        for (id, class) in classes.iter().enumerate() {
            for &i in class {
                let a = domain
                    .get(i)
                    .ok_or_else(|| Error::Precondition(format!("class index {i} is outside the domain")))?;
                if table.insert(a.clone(), id as u64).is_some() {
                    return Err(Error::Precondition(format!("{a} lies in two classes")));
                }
            }
        }
        if let Some(a) = domain.iter().find(|a| !table.contains_key(*a)) {
            return Err(Error::ColoringNotTotal(a.to_string()));
        }
        Ok(Coloring { table })
    }

    pub fn insert(&mut self, a: FiniteApprox, color: u64) {
        self.table.insert(a, color);
    }

    pub fn get(&self, a: &FiniteApprox) -> Option<u64> {
        self.table.get(a).copied()
    }

    /// Like [`Coloring::get`] but failing on missing entries.
    pub fn color(&self, a: &FiniteApprox) -> Result<u64> {
        self.get(a).ok_or_else(|| Error::ColoringNotTotal(a.to_string()))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn colors(&self) -> BTreeSet<u64> {
        self.table.values().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FiniteApprox, u64)> {
        self.table.iter().map(|(a, &c)| (a, c))
    }

    /// Parses `{"colors": {key: id}}` or `{"domain": [...], "classes": [[...]]}`.
    ///
    /// Keys and domain entries are either full approximation objects or bare
    /// node lists, the latter read in dimension `k`.
    pub fn from_json_str(text: &str, k: usize) -> Result<Self> {
        let parsed: ColoringJson =
            serde_json::from_str(text).map_err(|e| Error::Precondition(format!("bad coloring: {e}")))?;
        match parsed {
            ColoringJson::Colors { colors } => {
                let mut table = HashMap::new();
                for (key, c) in colors {
                    let v: serde_json::Value = serde_json::from_str(&key)
                        .map_err(|e| Error::Precondition(format!("bad coloring key {key:?}: {e}")))?;
                    table.insert(parse_approx(v, k)?, c);
                }
                Ok(Coloring { table })
            }
            ColoringJson::Classes { domain, classes } => {
                let domain = domain.into_iter().map(|v| parse_approx(v, k)).collect::<Result<Vec<_>>>()?;
                Coloring::from_classes(domain, &classes)
            }
        }
    }

    /// The `{"colors": …}` form with canonical keys, sorted.
    pub fn to_json_string(&self) -> String {
        let colors: BTreeMap<String, u64> = self.table.iter().map(|(a, &c)| (a.key(), c)).collect();
        serde_json::to_string(&ColoringJson::Colors { colors }).expect("colorings always serialize")
    }
}
