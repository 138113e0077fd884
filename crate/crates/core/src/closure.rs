//! Standard closure operators on the subsets of a poset, given either by a
//! join-specification or by an explicit family of closed sets.

use std::sync::Arc;

use crate::bits::{self, bit, Mask};
use crate::error::{Error, Result};
use crate::joinspec::JoinSpec;
use crate::poset::{ElemSet, Poset};

/// A standard closure operator `Γ` (extensive, monotone, idempotent, `Γ{p} = p↓`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureRepr {
    /// `Γ_U` for the given specification.
    Spec(JoinSpec),
    /// `Γ(S)` is the smallest member of the family containing `S`.
    Family { poset: Arc<Poset>, sets: Vec<Mask> },
}

impl From<JoinSpec> for ClosureRepr {
    fn from(spec: JoinSpec) -> Self {
        ClosureRepr::Spec(spec)
    }
}

impl ClosureRepr {
    /// Validates an explicit family: down-closed members, closed under
    /// intersection, containing `P` and every `p↓`.
    pub fn from_family(poset: Arc<Poset>, family: &[ElemSet]) -> Result<ClosureRepr> {
        let mut sets = Vec::with_capacity(family.len() + 1);
        for s in family {
            poset.check(s)?;
            sets.push(s.bits());
        }
        sets.push(poset.full_bits());
        sets.sort_unstable_by_key(|&m| bits::canon_key(m));
        sets.dedup();
        for &m in &sets {
            if !poset.is_down_bits(m) {
                return Err(Error::Precondition(format!("{} is not down-closed", poset.format_bits(m))));
            }
        }
        for p in 0..poset.len() {
            if !sets.contains(&poset.down_of(p)) {
                return Err(Error::Precondition(format!("family lacks {}↓", poset.label(p))));
            }
        }
        for (i, &a) in sets.iter().enumerate() {
            for &b in &sets[i + 1..] {
                if !sets.contains(&(a & b)) {
                    return Err(Error::Precondition(format!(
                        "family not closed under intersection: {} ∩ {}",
                        poset.format_bits(a),
                        poset.format_bits(b)
                    )));
                }
            }
        }
        Ok(ClosureRepr::Family { poset, sets })
    }

    pub fn poset(&self) -> &Poset {
        self.poset_arc()
    }

    pub fn poset_arc(&self) -> &Arc<Poset> {
        match self {
            ClosureRepr::Spec(u) => u.poset_arc(),
            ClosureRepr::Family { poset, .. } => poset,
        }
    }

    pub fn spec(&self) -> Option<&JoinSpec> {
        match self {
            ClosureRepr::Spec(u) => Some(u),
            ClosureRepr::Family { .. } => None,
        }
    }

    pub fn close(&self, s: &ElemSet) -> ElemSet {
        self.poset().assert_owned(s);
        self.poset().elem(self.close_bits(s.bits()))
    }

    pub(crate) fn close_bits(&self, s: Mask) -> Mask {
        match self {
            ClosureRepr::Spec(u) => u.gamma_bits(s),
            ClosureRepr::Family { poset, sets } => sets
                .iter()
                .filter(|&&m| bits::is_subset(s, m))
                .fold(poset.full_bits(), |acc, &m| acc & m),
        }
    }

    pub(crate) fn is_closed_bits(&self, s: Mask) -> bool {
        match self {
            ClosureRepr::Spec(u) => u.is_ideal_bits(s),
            ClosureRepr::Family { sets, .. } => sets.contains(&s),
        }
    }

    /// All closed sets in canonical order.
    pub fn closed_sets(&self) -> Result<Vec<ElemSet>> {
        Ok(self.closed_bits()?.into_iter().map(|m| self.poset().elem(m)).collect())
    }

    pub(crate) fn closed_bits(&self) -> Result<Vec<Mask>> {
        match self {
            ClosureRepr::Spec(u) => {
                let cap = u.poset().limits().max_ideals;
                let mut out = next_closure_all(u.poset().len(), |m| u.gamma_bits(m), cap)?;
                out.sort_unstable_by_key(|&m| bits::canon_key(m));
                Ok(out)
            }
            ClosureRepr::Family { sets, .. } => Ok(sets.clone()),
        }
    }

    /// `Γ_self ≤ Γ_other` pointwise, decided by comparing closed sets: every
    /// set closed for `other` must be closed for `self`.
    pub fn leq(&self, other: &ClosureRepr) -> Result<bool> {
        Ok(self.leq_witness(other)?.is_none())
    }

    /// A set closed for `other` but not for `self`, if any.
    pub fn leq_witness(&self, other: &ClosureRepr) -> Result<Option<ElemSet>> {
        same(self.poset(), other.poset())?;
        Ok(other
            .closed_bits()?
            .into_iter()
            .find(|&m| !self.is_closed_bits(m))
            .map(|m| self.poset().elem(m)))
    }

    /// `Γ_self(S) ⊆ Γ_other(S)` checked directly on every downset `S`.
    pub fn leq_pointwise(&self, other: &ClosureRepr) -> Result<bool> {
        same(self.poset(), other.poset())?;
        Ok(self
            .poset()
            .downsets_bits()?
            .into_iter()
            .all(|s| bits::is_subset(self.close_bits(s), other.close_bits(s))))
    }

    /// `U_Γ`: the subsets whose join exists and lies in their closure.
    pub fn u_gamma(&self) -> Result<JoinSpec> {
        let p = self.poset_arc();
        let mut sets = Vec::new();
        for m in crate::joinspec::all_subsets(p)? {
            if let Some(j) = p.join_bits(m) {
                if self.close_bits(m) & bit(j) != 0 {
                    sets.push(m);
                }
            }
        }
        JoinSpec::from_masks(p.clone(), sets)
    }
}

fn same(a: &Poset, b: &Poset) -> Result<()> {
    if a.id() == b.id() {
        Ok(())
    } else {
        Err(Error::OwnerMismatch)
    }
}

/// Every closed set of `close` over `n` elements, in lectic order.
pub(crate) fn next_closure_all(n: usize, close: impl Fn(Mask) -> Mask, cap: usize) -> Result<Vec<Mask>> {
    let mut out = Vec::new();
    let mut cur = close(0);
    loop {
        if out.len() == cap {
            return Err(Error::CapExceeded { what: "closed-set count", cap });
        }
        out.push(cur);
        match next_closed(n, cur, &close) {
            Some(next) => cur = next,
            None => return Ok(out),
        }
    }
}

fn next_closed(n: usize, a: Mask, close: &impl Fn(Mask) -> Mask) -> Option<Mask> {
    for i in (0..n).rev() {
        if a & bit(i) != 0 {
            continue;
        }
        let below = bit(i) - 1;
        let b = close((a & below) | bit(i));
        if (b & !a) & below == 0 {
            return Some(b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn next_closure_matches_filter() {
        let p = Arc::new(fixtures::no_union());
        let u = fixtures::no_union_u1(&p);
        let mut brute: Vec<Mask> = (0..64).filter(|&m| u.is_ideal_bits(m)).collect();
        brute.sort_unstable_by_key(|&m| bits::canon_key(m));
        assert_eq!(ClosureRepr::Spec(u).closed_bits().unwrap(), brute);
    }

    #[test]
    fn family_validation() {
        let p = Arc::new(Poset::antichain(2));
        let all: Vec<ElemSet> = p.all_downsets().unwrap();
        let fam = ClosureRepr::from_family(p.clone(), &all).unwrap();
        assert_eq!(fam.close(&p.set([0])), p.set([0]));
        assert!(ClosureRepr::from_family(p.clone(), &[p.set([0])]).is_err());
        let bp = ClosureRepr::Spec(JoinSpec::bp(p.clone()));
        assert!(fam.leq(&bp).unwrap() && bp.leq(&fam).unwrap());
    }

    #[test]
    fn u_gamma_of_spec_is_uplus() {
        let p = Arc::new(fixtures::no_union());
        let u = fixtures::no_union_u1(&p);
        assert_eq!(ClosureRepr::Spec(u.clone()).u_gamma().unwrap(), u.uplus().unwrap());
    }
}
