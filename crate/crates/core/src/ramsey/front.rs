use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::search::{Budget, NodePool};
use crate::space::{le_fin, FiniteApprox, MemberTrunc};

/// A family of approximations of possibly mixed lengths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrontFamily {
    members: Vec<FiniteApprox>,
}

impl FrontFamily {
    pub fn new(members: Vec<FiniteApprox>) -> Self {
        FrontFamily { members }
    }

    pub fn members(&self) -> &[FiniteApprox] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: &FiniteApprox) -> bool {
        self.members.contains(a)
    }

    /// `F|X`: members whose nodes all lie in `X`.
    pub fn restrict_to(&self, x: &MemberTrunc) -> FrontFamily {
        FrontFamily { members: self.members.iter().filter(|a| le_fin(a, &x.approx)).cloned().collect() }
    }
}

/// True iff no member is a proper initial segment of another.
pub fn nash_williams_check(f: &FrontFamily) -> bool {
    let set: HashSet<&FiniteApprox> = f.members().iter().collect();
    f.members().iter().all(|b| (0..b.len()).all(|m| !set.contains(&b.restrict(m).expect("m < |b|"))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Cover {
    Covered,
    /// A maximal chain `r_0(c) ⊏ r_1(c) ⊏ … ⊏ c` inside the truncation that misses the family.
    Counterexample(Vec<FiniteApprox>),
}

/// Checks that every maximal chain of approximations inside `X` meets `F`.
///
/// This certifies coverage relative to the truncation only.
pub fn front_cover_check(f: &FrontFamily, x: &MemberTrunc, budget: &mut Budget) -> Result<Cover> {
    let set: HashSet<&FiniteApprox> = f.members().iter().collect();
    let pool = NodePool::of(x);
    fn go(c: &mut FiniteApprox, set: &HashSet<&FiniteApprox>, pool: &NodePool, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if set.contains(c) {
            return Ok(true);
        }
        let next: Vec<_> = pool.extensions(c).into_iter().cloned().collect();
        if next.is_empty() {
            return Ok(false);
        }
        for n in next {
            c.push(n);
            if !go(c, set, pool, budget)? {
                return Ok(false);
            }
            c.pop();
        }
        Ok(true)
    }
    let mut c = FiniteApprox::empty(x.k());
    if go(&mut c, &set, &pool, budget)? {
        Ok(Cover::Covered)
    } else {
        let chain = (0..=c.len()).map(|m| c.restrict(m).expect("m ≤ |c|")).collect();
        Ok(Cover::Counterexample(chain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::ar_n;
    use crate::space::{build_w, r_approx};

    #[test]
    fn nash_williams() {
        let w = build_w(2, 15);
        let pair = FrontFamily::new(vec![r_approx(&w, 2).unwrap(), r_approx(&w, 3).unwrap()]);
        assert!(!nash_williams_check(&pair));
        let uniform = FrontFamily::new(ar_n(&w, 2, &mut Budget::default()).unwrap());
        assert!(nash_williams_check(&uniform));
        let a = FiniteApprox::from_indices(2, vec![vec![0, 1], vec![0, 2]]).unwrap();
        let b = FiniteApprox::from_indices(2, vec![vec![3, 4], vec![3, 6]]).unwrap();
        assert!(nash_williams_check(&FrontFamily::new(vec![a, b])));
    }

    #[test]
    fn coverage() {
        let w = build_w(2, 15);
        let ar1 = FrontFamily::new(ar_n(&w, 1, &mut Budget::default()).unwrap());
        assert_eq!(front_cover_check(&ar1, &w, &mut Budget::default()), Ok(Cover::Covered));
        let mut ar2 = ar_n(&w, 2, &mut Budget::default()).unwrap();
        let removed = ar2.remove(3);
        let cover = front_cover_check(&FrontFamily::new(ar2), &w, &mut Budget::default()).unwrap();
        match cover {
            Cover::Counterexample(chain) => assert!(chain.contains(&removed)),
            Cover::Covered => panic!("a removed element must leave a gap"),
        }
        let none = front_cover_check(&FrontFamily::default(), &w, &mut Budget::default()).unwrap();
        assert!(matches!(none, Cover::Counterexample(_)));
    }
}
