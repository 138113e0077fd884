//! Brute-force reference implementations, straight from the definitions and
//! independent of the closure algorithms. Exponential; for small posets only.

use crate::bits::{self, bit, ones, submasks, Mask};
use crate::error::{Error, Result};
use crate::joinspec::JoinSpec;
use crate::poset::{ElemSet, Poset};

/// Largest poset the oracle accepts.
pub const ORACLE_MAX: usize = 10;

/// The ideals of one specification, found by filtering every subset.
#[derive(Debug, Clone)]
pub struct Oracle<'a> {
    poset: &'a Poset,
    members: Vec<Mask>,
    ideals: Vec<Mask>,
}

/// `⋁S` by scanning upper bounds, ignoring any cached structure.
pub fn join_by_scan(p: &Poset, s: Mask) -> Option<usize> {
    let ub: Vec<usize> = (0..p.len()).filter(|&u| ones(s).all(|x| p.leq(x, u))).collect();
    ub.iter().copied().find(|&u| ub.iter().all(|&v| p.leq(u, v)))
}

fn downset_by_scan(p: &Poset, s: Mask) -> Mask {
    (0..p.len()).filter(|&x| ones(s).any(|y| p.leq(x, y))).fold(0, |m, x| m | bit(x))
}

impl<'a> Oracle<'a> {
    pub fn new(u: &'a JoinSpec) -> Result<Oracle<'a>> {
        let p = u.poset();
        if p.len() > ORACLE_MAX {
            return Err(Error::CapExceeded { what: "oracle poset size", cap: ORACLE_MAX });
        }
        let members: Vec<Mask> = u.members().map(|s| s.bits()).collect();
        let ideals = (0..=p.full_bits())
            .filter(|&s| {
                downset_by_scan(p, s) == s
                    && members
                        .iter()
                        .all(|&t| !bits::is_subset(t, s) || join_by_scan(p, t).is_some_and(|j| s & bit(j) != 0))
            })
            .collect();
        Ok(Oracle { poset: p, members, ideals })
    }

    /// Every `U`-ideal, in increasing mask order.
    pub fn ideals(&self) -> &[Mask] {
        &self.ideals
    }

    pub fn is_ideal(&self, s: Mask) -> bool {
        self.ideals.binary_search(&s).is_ok()
    }

    /// Intersection of all ideals containing `s`.
    pub fn gamma(&self, s: Mask) -> Mask {
        self.ideals
            .iter()
            .filter(|&&c| bits::is_subset(s, c))
            .fold(self.poset.full_bits(), |acc, &c| acc & c)
    }

    pub fn in_uplus(&self, t: Mask) -> bool {
        join_by_scan(self.poset, t).is_some_and(|j| self.gamma(t) & bit(j) != 0)
    }

    /// `{⋁T : T ∈ U⁺, T ⊆ S↓}` by enumerating every `T`.
    pub fn upsilon(&self, s: Mask) -> Mask {
        self.upsilon_within(downset_by_scan(self.poset, s))
    }

    fn upsilon_within(&self, base: Mask) -> Mask {
        submasks(base)
            .filter(|&t| self.in_uplus(t))
            .filter_map(|t| join_by_scan(self.poset, t))
            .fold(0, |m, j| m | bit(j))
    }

    /// The iterated operator: start from `S↓` and repeat
    /// `X ↦ {⋁T : T ∈ U⁺, T ⊆ X}` until it stabilises.
    pub fn upsilon_iterated(&self, s: Mask) -> Mask {
        let mut cur = downset_by_scan(self.poset, s);
        loop {
            let next = self.upsilon_within(cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// `I_U` is distributive, checked on ideals as sets.
    pub fn ideals_distributive(&self) -> bool {
        let join = |a: Mask, b: Mask| self.gamma(a | b);
        self.ideals.iter().all(|&x| {
            self.ideals
                .iter()
                .all(|&y| self.ideals.iter().all(|&z| x & join(y, z) == join(x & y, x & z)))
        })
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    /// The smallest ideal containing `s`, as a set.
    pub fn smallest_ideal(&self, s: &ElemSet) -> ElemSet {
        self.poset.elem(self.gamma(s.bits()))
    }
}
