use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coloring::{Coloring, Relation};
use super::front::FrontFamily;
use crate::error::{Error, Result};
use crate::search::{extend_search, for_each_extension, Budget, NodePool};
use crate::space::{layout, FiniteApprox, MemberTrunc, Slot, TreeNode};

/// A finite set of nodes, as produced by projection vectors.
pub type NodeImage = BTreeSet<Vec<u64>>;

/// Levels `(l_0, …, l_{n−1})`, each at most `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjVector(pub Vec<usize>);

impl fmt::Display for ProjVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl ProjVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Each `l_i` is `0` or lies in `m+1..=k` where `i ∈ N^k_m`.
    pub fn is_admissible(&self, k: usize) -> bool {
        let lay = layout(k, self.len());
        self.0.iter().enumerate().all(|(i, &l)| l <= k && (l == 0 || l > lay.level(i)))
    }

    pub fn truncated(&self, n: usize) -> ProjVector {
        ProjVector(self.0[..n.min(self.len())].to_vec())
    }

    /// `(π_{l_0}(a(0)), …)`, the coordinatewise key of the induced relation.
    pub fn key(&self, a: &FiniteApprox) -> Vec<Vec<u64>> {
        a.nodes().iter().zip(&self.0).map(|(n, &l)| n.prefix(l).to_vec()).collect()
    }

    /// `π_⃗l(a) = {π_{l_i}(a(i)) : i < |a|}`.
    pub fn image(&self, a: &FiniteApprox) -> NodeImage {
        self.key(a).into_iter().collect()
    }

    /// All nonempty prefixes of the nodes of `π_⃗l(a)`.
    pub fn closure(&self, a: &FiniteApprox) -> NodeImage {
        closure_of(&self.image(a))
    }
}

/// Downward closure of a node set under prefixes, without the empty node.
pub fn closure_of(image: &NodeImage) -> NodeImage {
    image.iter().flat_map(|n| (1..=n.len()).map(move |q| n[..q].to_vec())).collect()
}

/// All admissible vectors of length `n`, in ascending lexicographic order.
pub fn admissible_vectors(k: usize, n: usize) -> Vec<ProjVector> {
    let lay = layout(k, n);
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let choices: Vec<usize> = std::iter::once(0).chain(lay.level(i) + 1..=k).collect();
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                choices.iter().map(move |&l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(ProjVector).collect()
}

/// `AR_n|X`: every valid `n`-approximation with nodes in `X`.
pub fn ar_n(x: &MemberTrunc, n: usize, budget: &mut Budget) -> Result<Vec<FiniteApprox>> {
    let pool = NodePool::of(x);
    let mut out = Vec::new();
    if n == 0 {
        return Ok(vec![FiniteApprox::empty(x.k())]);
    }
    for_each_extension(&FiniteApprox::empty(x.k()), &pool, n, budget, |b| {
        if b.len() == n {
            out.push(b.clone());
        }
        true
    })?;
    Ok(out)
}

/// The relation `a ~ b ⟺ ∀i π_{l_i}(a(i)) = π_{l_i}(b(i))` on `domain`.
pub fn induced_relation(v: &ProjVector, domain: &[FiniteApprox]) -> Relation {
    let mut ids: HashMap<Vec<Vec<u64>>, u64> = HashMap::new();
    let mut r = Coloring::new();
    for a in domain {
        let next = ids.len() as u64;
        let id = *ids.entry(v.key(a)).or_insert(next);
        r.insert(a.clone(), id);
    }
    r
}

/// Output of [`canonize_arn`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArnCanon {
    /// The lexicographically least fitting vector.
    pub vector: ProjVector,
    pub member: MemberTrunc,
    /// Every admissible vector inducing the relation on `AR_n|member`.
    pub fitting: Vec<ProjVector>,
}

#[derive(Clone, Default)]
struct Fit {
    by_key: HashMap<Vec<Vec<u64>>, u64>,
    by_class: HashMap<u64, Vec<Vec<u64>>>,
}

impl Fit {
    fn add(&mut self, key: Vec<Vec<u64>>, class: u64) -> bool {
        match (self.by_key.get(&key), self.by_class.get(&class)) {
            (Some(&c), _) if c != class => false,
            (_, Some(k)) if *k != key => false,
            (Some(_), Some(_)) => true,
            _ => {
                self.by_key.insert(key.clone(), class);
                self.by_class.insert(class, key);
                true
            }
        }
    }
}

/// `n`-approximations inside `nodes` that use `node`.
fn items_with(k: usize, nodes: &[TreeNode], node: &TreeNode, n: usize) -> Vec<FiniteApprox> {
    let pool = NodePool::new(k, nodes);
    let mut out = Vec::new();
    let _ = for_each_extension(&FiniteApprox::empty(k), &pool, n, &mut Budget::new(u64::MAX), |b| {
        if b.len() == n && b.contains(node) {
            out.push(b.clone());
        }
        true
    });
    out
}

struct ArnSearch<'a> {
    r: &'a Relation,
    n: usize,
    vectors: &'a [ProjVector],
    pool: NodePool,
    target: usize,
    budget: &'a mut Budget,
    deepest: usize,
    ambiguous: Option<Vec<ProjVector>>,
}

impl ArnSearch<'_> {
    fn go(
        &mut self,
        c: &mut FiniteApprox,
        items: &mut Vec<FiniteApprox>,
        fits: &[Option<Fit>],
    ) -> Result<Option<Vec<usize>>> {
        self.budget.tick()?;
        self.deepest = self.deepest.max(c.len());
        if c.len() >= self.target {
            let alive: Vec<usize> = (0..fits.len()).filter(|&i| fits[i].is_some()).collect();
            let first = &self.vectors[alive[0]];
            let same = alive[1..].iter().all(|&i| items.iter().all(|b| self.vectors[i].closure(b) == first.closure(b)));
            if same {
                return Ok(Some(alive));
            }
            self.ambiguous = Some(alive.iter().map(|&i| self.vectors[i].clone()).collect());
            return Ok(None);
        }
        let slot = Slot::of(c);
        let candidates: Vec<TreeNode> = self.pool.admitted(&slot).into_iter().cloned().collect();
        for node in candidates {
            c.push(node.clone());
            self.deepest = self.deepest.max(c.len());
            let fresh = items_with(c.k(), c.nodes(), &node, self.n);
            let mut next: Vec<Option<Fit>> = fits.to_vec();
            for b in &fresh {
                let class = self.r.color(b)?;
                for (i, slot) in next.iter_mut().enumerate() {
                    if let Some(fit) = slot {
                        if !fit.add(self.vectors[i].key(b), class) {
                            *slot = None;
                        }
                    }
                }
            }
            if next.iter().any(Option::is_some) {
                let before = items.len();
                items.extend(fresh);
                let res = self.go(c, items, &next)?;
                if res.is_some() || self.ambiguous.is_some() {
                    return Ok(res);
                }
                items.truncate(before);
            }
            c.pop();
        }
        Ok(None)
    }
}

/// Finds a sub-member `A` of length `target` and admissible vectors `⃗l` with
/// `a R b ⟺ ∀i π_{l_i}(a(i)) = π_{l_i}(b(i))` on `AR_n|A`.
///
/// Distinct vectors can induce the same relation (for instance when `a(i)`
/// already determines `π_l(a(j))`); all fitting vectors are returned and
/// they must agree as maps up to prefix closure, otherwise the data is
/// reported as ambiguous.
pub fn canonize_arn(
    r: &Relation,
    k: usize,
    n: usize,
    x: &MemberTrunc,
    target: usize,
    budget: &mut Budget,
) -> Result<ArnCanon> {
    if x.k() != k {
        return Err(Error::DimensionMismatch(k, x.k()));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if target > x.len() {
        return Err(Error::Exhausted { step: x.len() });
    }
    let vectors = admissible_vectors(k, n);
    let mut search =
        ArnSearch { r, n, vectors: &vectors, pool: NodePool::of(x), target, budget, deepest: 0, ambiguous: None };
    let mut c = FiniteApprox::empty(k);
    let fits = vec![Some(Fit::default()); vectors.len()];
    let found = search.go(&mut c, &mut Vec::new(), &fits)?;
    match (found, search.ambiguous) {
        (Some(alive), _) => Ok(ArnCanon {
            vector: vectors[alive[0]].clone(),
            member: MemberTrunc { approx: c, complete: false },
            fitting: alive.iter().map(|&i| vectors[i].clone()).collect(),
        }),
        (None, Some(fits)) => {
            let names: Vec<String> = fits.iter().map(ProjVector::to_string).collect();
            Err(Error::AmbiguousAtScale(format!("inequivalent vectors {} all fit", names.join(", "))))
        }
        (None, None) if search.deepest < target => Err(Error::Exhausted { step: search.deepest }),
        (None, None) => Err(Error::NotCanonicalAtScale),
    }
}

/// A map sending each approximation to a projection of itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerMap {
    /// The same vector for every approximation of matching length.
    Uniform(ProjVector),
    /// Explicit per-approximation vectors.
    Table(Vec<(FiniteApprox, ProjVector)>),
}

impl InnerMap {
    pub fn vector(&self, a: &FiniteApprox) -> Option<&ProjVector> {
        match self {
            InnerMap::Uniform(v) => (v.len() == a.len()).then_some(v),
            InnerMap::Table(t) => t.iter().find(|(b, _)| b == a).map(|(_, v)| v),
        }
    }

    /// `φ(a)` up to prefix closure.
    pub fn closure(&self, a: &FiniteApprox) -> Option<NodeImage> {
        self.vector(a).map(|v| v.closure(a))
    }
}

/// Every member of `F` is sent to `π_⃗l(a)` for a vector `⃗l ∈ (k+1)^{|a|}`.
pub fn inner_check(phi: &InnerMap, f: &FrontFamily, k: usize) -> bool {
    f.members().iter().all(|a| phi.vector(a).is_some_and(|v| v.len() == a.len() && v.0.iter().all(|&l| l <= k)))
}

/// Inner, and whenever `φ(a) = π_{(l_0,…,l_{m−1})}(r_m(b))` for `φ(b) = π_⃗l(b)`
/// and some `m ≤ |b|`, then `φ(a) = φ(b)`. Images are compared up to prefix closure.
pub fn irreducible_check(phi: &InnerMap, f: &FrontFamily, k: usize) -> bool {
    if !inner_check(phi, f, k) {
        return false;
    }
    let images: std::collections::HashSet<NodeImage> = f.members().iter().filter_map(|a| phi.closure(a)).collect();
    f.members().iter().all(|b| {
        let v = phi.vector(b).expect("inner_check passed");
        let full = v.closure(b);
        (0..=b.len()).all(|m| {
            let part = v.truncated(m).closure(&b.restrict(m).expect("m ≤ |b|"));
            !images.contains(&part) || part == full
        })
    })
}

/// First pair on which `φ`-equality and `R`-equality differ.
pub fn canonization_witness(
    phi: &InnerMap,
    r: &Relation,
    items: &[FiniteApprox],
) -> Result<Option<(FiniteApprox, FiniteApprox)>> {
    let mut by_image: HashMap<NodeImage, &FiniteApprox> = HashMap::new();
    let mut by_class: HashMap<u64, &FiniteApprox> = HashMap::new();
    for a in items {
        let image = phi.closure(a).ok_or_else(|| Error::Precondition(format!("map undefined at {a}")))?;
        let class = r.color(a)?;
        if let Some(&b) = by_image.get(&image) {
            if r.color(b)? != class {
                return Ok(Some((b.clone(), a.clone())));
            }
        }
        if let Some(&b) = by_class.get(&class) {
            if phi.closure(b) != Some(image.clone()) {
                return Ok(Some((b.clone(), a.clone())));
            }
        }
        by_image.entry(image).or_insert(a);
        by_class.entry(class).or_insert(a);
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Agreement {
    /// The maps agree at every member of `F` inside this sub-member.
    Agree { member: MemberTrunc },
    /// `R`-classes and images of one of the maps disagree on this pair.
    Disagree { a: FiniteApprox, b: FiniteApprox },
}

/// Checks that two maps canonizing `R` on `F|X` coincide below some sub-member
/// of length `target`.
#[allow(clippy::too_many_arguments)]
pub fn irreducible_agreement(
    phi: &InnerMap,
    psi: &InnerMap,
    r: &Relation,
    f: &FrontFamily,
    x: &MemberTrunc,
    target: usize,
    budget: &mut Budget,
) -> Result<Agreement> {
    let local = f.restrict_to(x);
    for map in [phi, psi] {
        if let Some((a, b)) = canonization_witness(map, r, local.members())? {
            return Ok(Agreement::Disagree { a, b });
        }
    }
    let pool = NodePool::of(x);
    let mut deepest = 0;
    let y = extend_search(&FiniteApprox::empty(x.k()), &pool, target, budget, &mut deepest, |c, node| {
        local
            .members()
            .iter()
            .filter(|t| t.contains(node))
            .all(|t| !t.nodes().iter().all(|m| m == node || c.contains(m)) || phi.closure(t) == psi.closure(t))
    })?;
    match y {
        Some(approx) => Ok(Agreement::Agree { member: MemberTrunc { approx, complete: false } }),
        None => Err(Error::Exhausted { step: deepest }),
    }
}
