//! Join-specifications and the operators they induce: the ideal closure `Γ_U`,
//! the one-step operator `Υ_U`, and the maximal specification `U⁺`.

use std::fmt;
use std::sync::Arc;

use crate::bits::{self, bit, Mask};
use crate::error::{Error, Result};
use crate::poset::{ElemSet, Poset};

/// A family of subsets of a poset, each with a join, containing every singleton.
///
/// Members are kept deduplicated in canonical order (by size, then by mask), so
/// two specifications over the same poset are equal exactly when they have the
/// same members.
#[derive(Clone)]
pub struct JoinSpec {
    poset: Arc<Poset>,
    sets: Vec<Mask>,
    joins: Vec<usize>,
    /// Members that can enlarge a downset: the non-singletons.
    rules: Vec<(Mask, usize)>,
}

impl PartialEq for JoinSpec {
    fn eq(&self, other: &Self) -> bool {
        self.poset.id() == other.poset.id() && self.sets == other.sets
    }
}

impl Eq for JoinSpec {}

impl fmt::Debug for JoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JoinSpec{self}")
    }
}

impl fmt::Display for JoinSpec {
    /// Lists the non-singleton members, e.g. `B ∪ {{a,b}, {}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let extra: Vec<String> = self.extra_bits().map(|m| self.poset.format_bits(m)).collect();
        if extra.is_empty() {
            write!(f, "B")
        } else {
            write!(f, "B ∪ {{{}}}", extra.join(", "))
        }
    }
}

impl JoinSpec {
    /// Validates `sets` and adds the singletons.
    pub fn new(poset: Arc<Poset>, sets: &[ElemSet]) -> Result<JoinSpec> {
        let mut masks = Vec::with_capacity(sets.len());
        for s in sets {
            poset.check(s)?;
            masks.push(s.bits());
        }
        Self::from_masks(poset, masks)
    }

    pub(crate) fn from_masks(poset: Arc<Poset>, mut masks: Vec<Mask>) -> Result<JoinSpec> {
        masks.extend((0..poset.len()).map(bit));
        masks.sort_unstable_by_key(|&m| bits::canon_key(m));
        masks.dedup();
        let mut joins = Vec::with_capacity(masks.len());
        for &m in &masks {
            match poset.join_bits(m) {
                Some(j) => joins.push(j),
                None if m == 0 => return Err(Error::EmptyWithoutBottom),
                None => return Err(Error::NoJoin(poset.format_bits(m))),
            }
        }
        Ok(Self::assemble(poset, masks, joins))
    }

    /// Builds from masks already known to be canonical, deduplicated and joinable.
    fn assemble(poset: Arc<Poset>, sets: Vec<Mask>, joins: Vec<usize>) -> JoinSpec {
        let rules = sets
            .iter()
            .zip(&joins)
            .filter(|(m, _)| m.count_ones() != 1)
            .map(|(&m, &j)| (m, j))
            .collect();
        JoinSpec { poset, sets, joins, rules }
    }

    /// Validates sets given as label lists.
    pub fn from_labels<S: AsRef<str>>(poset: Arc<Poset>, sets: &[Vec<S>]) -> Result<JoinSpec> {
        let elems = sets.iter().map(|s| poset.set_of(s)).collect::<Result<Vec<_>>>()?;
        Self::new(poset, &elems)
    }

    /// `B_P`: the singletons only.
    pub fn bp(poset: Arc<Poset>) -> JoinSpec {
        Self::from_masks(poset, Vec::new()).expect("singletons always have joins")
    }

    /// `U_α`: every nonempty subset of size below `alpha` that has a join.
    pub fn u_alpha(poset: Arc<Poset>, alpha: usize) -> Result<JoinSpec> {
        if alpha < 2 {
            return Err(Error::Precondition("alpha must be at least 2".into()));
        }
        Self::by_join_existence(poset, |m| (m.count_ones() as usize) < alpha, false)
    }

    /// `U_∞`: every nonempty subset that has a join.
    pub fn u_infty(poset: Arc<Poset>) -> Result<JoinSpec> {
        Self::by_join_existence(poset, |_| true, false)
    }

    /// Every subset with a join, including `∅` when the poset has a bottom.
    /// This is the largest join-specification of the poset.
    pub fn u_max(poset: Arc<Poset>) -> Result<JoinSpec> {
        Self::by_join_existence(poset, |_| true, true)
    }

    fn by_join_existence(poset: Arc<Poset>, keep: impl Fn(Mask) -> bool, with_empty: bool) -> Result<JoinSpec> {
        scan_guard(&poset)?;
        let mut sets = Vec::new();
        let mut joins = Vec::new();
        for m in 0..=poset.full_bits() {
            if (m == 0 && !with_empty) || !keep(m) {
                continue;
            }
            if let Some(j) = poset.join_bits(m) {
                sets.push(m);
                joins.push(j);
            }
        }
        let mut pairs: Vec<(Mask, usize)> = sets.into_iter().zip(joins).collect();
        pairs.sort_unstable_by_key(|&(m, _)| bits::canon_key(m));
        let (sets, joins) = pairs.into_iter().unzip();
        Ok(Self::assemble(poset, sets, joins))
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn poset_arc(&self) -> &Arc<Poset> {
        &self.poset
    }

    /// All members, singletons included, in canonical order.
    pub fn members(&self) -> impl Iterator<Item = ElemSet> + '_ {
        self.sets.iter().map(|&m| self.poset.elem(m))
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub(crate) fn member_bits(&self) -> &[Mask] {
        &self.sets
    }

    /// Members paired with their joins.
    pub(crate) fn members_with_joins(&self) -> impl Iterator<Item = (Mask, usize)> + '_ {
        self.sets.iter().copied().zip(self.joins.iter().copied())
    }

    /// Non-singleton members (including `∅` when present).
    pub(crate) fn extra_bits(&self) -> impl Iterator<Item = Mask> + '_ {
        self.rules.iter().map(|&(m, _)| m)
    }

    /// Non-singleton members as sets.
    pub fn extra_members(&self) -> Vec<ElemSet> {
        self.extra_bits().map(|m| self.poset.elem(m)).collect()
    }

    pub fn contains_empty(&self) -> bool {
        self.sets.first() == Some(&0)
    }

    pub(crate) fn contains_bits(&self, m: Mask) -> bool {
        self.sets.binary_search_by_key(&bits::canon_key(m), |&x| bits::canon_key(x)).is_ok()
    }

    pub fn contains(&self, s: &ElemSet) -> bool {
        self.poset.check(s).is_ok() && self.contains_bits(s.bits())
    }

    /// `⊆` between specifications of the same poset.
    pub fn is_subset(&self, other: &JoinSpec) -> bool {
        self.same_poset(other) && self.sets.iter().all(|&m| other.contains_bits(m))
    }

    pub(crate) fn same_poset(&self, other: &JoinSpec) -> bool {
        self.poset.id() == other.poset.id()
    }

    fn require_same(&self, other: &JoinSpec) -> Result<()> {
        if self.same_poset(other) {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn union(&self, other: &JoinSpec) -> Result<JoinSpec> {
        self.require_same(other)?;
        let masks = self.sets.iter().chain(&other.sets).copied().collect();
        Self::from_masks(self.poset.clone(), masks)
    }

    pub fn intersection(&self, other: &JoinSpec) -> Result<JoinSpec> {
        self.require_same(other)?;
        let masks = self.sets.iter().copied().filter(|&m| other.contains_bits(m)).collect();
        Self::from_masks(self.poset.clone(), masks)
    }

    /// The members of `self` absent from `removed`.
    pub(crate) fn without(&self, removed: &[Mask]) -> JoinSpec {
        let (sets, joins) = self
            .sets
            .iter()
            .zip(&self.joins)
            .filter(|(m, _)| m.count_ones() == 1 || !removed.contains(m))
            .map(|(&m, &j)| (m, j))
            .unzip();
        Self::assemble(self.poset.clone(), sets, joins)
    }

    pub(crate) fn with_extra(&self, added: &[Mask]) -> Result<JoinSpec> {
        let masks = self.sets.iter().chain(added).copied().collect();
        Self::from_masks(self.poset.clone(), masks)
    }

    /// Smallest cardinal exceeding the size of every member.
    pub fn radius(&self) -> usize {
        self.sets.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0) + 1
    }

    /// Down-closed and closed under the joins of members it contains.
    pub fn is_ideal(&self, s: &ElemSet) -> Result<bool> {
        self.poset.check(s)?;
        Ok(self.is_ideal_bits(s.bits()))
    }

    pub(crate) fn is_ideal_bits(&self, s: Mask) -> bool {
        self.poset.is_down_bits(s)
            && self.rules.iter().all(|&(m, j)| !bits::is_subset(m, s) || s & bit(j) != 0)
    }

    /// The smallest `U`-ideal containing `s`.
    ///
    /// # Panics
    /// If `s` belongs to another poset.
    pub fn gamma(&self, s: &ElemSet) -> ElemSet {
        self.poset.assert_owned(s);
        self.poset.elem(self.gamma_bits(s.bits()))
    }

    pub(crate) fn gamma_bits(&self, s: Mask) -> Mask {
        let mut cur = downclose_step(&self.poset, s);
        loop {
            let mut add = 0;
            for &(m, j) in &self.rules {
                if bits::is_subset(m, cur) {
                    add |= bit(j);
                }
            }
            if bits::is_subset(add, cur) {
                return cur;
            }
            cur = downclose_step(&self.poset, cur | add);
        }
    }

    /// `⋁T` exists and lies in `Γ_U(T)`.
    pub fn in_uplus(&self, t: &ElemSet) -> bool {
        self.poset.assert_owned(t);
        self.in_uplus_bits(t.bits())
    }

    pub(crate) fn in_uplus_bits(&self, t: Mask) -> bool {
        match self.poset.join_bits(t) {
            Some(j) => self.gamma_bits(t) & bit(j) != 0,
            None => false,
        }
    }

    /// `U⁺` as an explicit specification (scans all `2^n` subsets).
    pub fn uplus(&self) -> Result<JoinSpec> {
        scan_guard(&self.poset)?;
        let mut sets = Vec::new();
        let mut joins = Vec::new();
        for m in 0..=self.poset.full_bits() {
            if let Some(j) = self.poset.join_bits(m) {
                if self.gamma_bits(m) & bit(j) != 0 {
                    sets.push(m);
                    joins.push(j);
                }
            }
        }
        let mut pairs: Vec<(Mask, usize)> = sets.into_iter().zip(joins).collect();
        pairs.sort_unstable_by_key(|&(m, _)| bits::canon_key(m));
        let (sets, joins) = pairs.into_iter().unzip();
        Ok(Self::assemble(self.poset.clone(), sets, joins))
    }

    /// `{⋁T : T ∈ U⁺, T ⊆ S↓}`, computed through `x ∈ Υ_U(S) ⟺ x ∈ Γ_U(x↓ ∩ S↓)`.
    pub fn upsilon(&self, s: &ElemSet) -> ElemSet {
        self.poset.assert_owned(s);
        self.poset.elem(self.upsilon_bits(s.bits()))
    }

    pub(crate) fn upsilon_bits(&self, s: Mask) -> Mask {
        #[cfg(feature = "mutants")]
        if crate::mutants::active() == Some(crate::mutants::Mutant::UpsilonOverU) {
            return self.upsilon_over_members(s);
        }
        let sd = self.poset.down_bits(s);
        let mut out = 0;
        for x in 0..self.poset.len() {
            if self.gamma_bits(self.poset.down_of(x) & sd) & bit(x) != 0 {
                out |= bit(x);
            }
        }
        out
    }

    #[cfg(feature = "mutants")]
    fn upsilon_over_members(&self, s: Mask) -> Mask {
        let sd = self.poset.down_bits(s);
        self.members_with_joins()
            .filter(|&(m, _)| bits::is_subset(m, sd))
            .fold(0, |acc, (_, j)| acc | bit(j))
    }
}

fn downclose_step(poset: &Poset, s: Mask) -> Mask {
    #[cfg(feature = "mutants")]
    if crate::mutants::active() == Some(crate::mutants::Mutant::GammaSkipsDownclose) {
        return s;
    }
    poset.down_bits(s)
}

/// `T ∈ B_P⁺`: `T` is nonempty and contains its maximum.
pub fn bp_plus_member(poset: &Poset, t: &ElemSet) -> Result<bool> {
    poset.check(t)?;
    Ok(poset.max_in(t.bits()).is_some())
}

pub(crate) fn scan_guard(poset: &Poset) -> Result<()> {
    let cap = poset.limits().max_scan_bits;
    if poset.len() > cap {
        return Err(Error::CapExceeded { what: "subset scan (element count)", cap });
    }
    Ok(())
}

/// Every subset of `P` as a mask.
pub(crate) fn all_subsets(poset: &Poset) -> Result<impl Iterator<Item = Mask>> {
    scan_guard(poset)?;
    Ok(0..=poset.full_bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn s(p: &Poset, names: &[&str]) -> ElemSet {
        p.set_of(names).unwrap()
    }

    #[test]
    fn construction_and_validation() {
        let p = Arc::new(fixtures::no_union());
        let u1 = fixtures::no_union_u1(&p);
        assert_eq!(u1.len(), 7);
        assert_eq!(u1.radius(), 3);
        assert_eq!(JoinSpec::new(p.clone(), &[]).unwrap(), JoinSpec::bp(p.clone()));
        assert_eq!(JoinSpec::bp(p.clone()).radius(), 2);
        let anti = Arc::new(Poset::antichain(2));
        assert_eq!(
            JoinSpec::new(anti.clone(), &[anti.full_set()]),
            Err(Error::NoJoin("{a,b}".into()))
        );
        assert_eq!(JoinSpec::new(anti.clone(), &[anti.empty_set()]), Err(Error::EmptyWithoutBottom));
    }

    #[test]
    fn u_alpha_family() {
        let p = Arc::new(fixtures::no_union());
        assert_eq!(JoinSpec::u_alpha(p.clone(), 2).unwrap(), JoinSpec::bp(p.clone()));
        let chain = Arc::new(Poset::chain(3));
        assert_eq!(JoinSpec::u_infty(chain.clone()).unwrap().len(), 7);
        assert_eq!(JoinSpec::u_max(chain).unwrap().len(), 8);
        let brute = (1u64..64).filter(|&m| p.join_bits(m).is_some()).count();
        assert_eq!(JoinSpec::u_infty(p.clone()).unwrap().len(), brute);
        assert!(JoinSpec::u_alpha(p, 1).is_err());
    }

    #[test]
    fn ideals_and_empty_set() {
        let q = Arc::new(Poset::chain(2));
        let uq = JoinSpec::u_max(q.clone()).unwrap();
        assert!(uq.contains_empty());
        assert_eq!(uq.is_ideal(&q.empty_set()), Ok(false));
        assert_eq!(uq.gamma(&q.empty_set()), q.set([0]));
        let bq = JoinSpec::bp(q.clone());
        assert_eq!(bq.is_ideal(&q.empty_set()), Ok(true));
        let p = Arc::new(fixtures::no_union());
        let u1 = fixtures::no_union_u1(&p);
        assert_eq!(u1.is_ideal(&s(&p, &["a", "b"])), Ok(false));
        assert_eq!(JoinSpec::bp(p.clone()).is_ideal(&s(&p, &["a", "b"])), Ok(true));
    }

    #[test]
    fn gamma_examples() {
        let p = Arc::new(fixtures::no_union());
        let u1 = fixtures::no_union_u1(&p);
        assert_eq!(u1.gamma(&s(&p, &["a", "b", "c"])), s(&p, &["a", "b", "c", "d"]));
        let bp = JoinSpec::bp(p.clone());
        for m in 0..64u64 {
            assert_eq!(bp.gamma_bits(m), p.down_bits(m));
        }
        let st = Arc::new(fixtures::strict());
        let meet = fixtures::strict_u1(&st).intersection(&fixtures::strict_u2(&st)).unwrap();
        assert_eq!(meet.gamma(&s(&st, &["a", "b", "c", "d", "e", "g"])), st.full_set());
    }

    #[test]
    fn uplus_examples() {
        let p = Arc::new(fixtures::no_union());
        let (u1, u2) = (fixtures::no_union_u1(&p), fixtures::no_union_u2(&p));
        let abc = s(&p, &["a", "b", "c"]);
        assert!(!u1.in_uplus(&abc));
        assert!(!u2.in_uplus(&abc));
        assert!(u1.union(&u2).unwrap().in_uplus(&abc));
        for i in 0..p.len() {
            assert!(u1.in_uplus(&p.set([i])));
        }
        let anti = Arc::new(Poset::antichain(2));
        assert_eq!(JoinSpec::bp(anti.clone()).uplus().unwrap(), JoinSpec::bp(anti));
        let chain = Arc::new(Poset::chain(3));
        assert_eq!(JoinSpec::bp(chain).uplus().unwrap().len(), 7);
    }

    #[test]
    fn upsilon_examples() {
        let p = Arc::new(fixtures::no_union());
        let u1 = fixtures::no_union_u1(&p);
        assert_eq!(u1.upsilon(&s(&p, &["a", "b"])), s(&p, &["a", "b", "d"]));
        let bp = JoinSpec::bp(p.clone());
        for m in 0..64u64 {
            assert_eq!(bp.upsilon_bits(m), p.down_bits(m));
        }
        let st = Arc::new(fixtures::strict());
        let meet = fixtures::strict_u1(&st).intersection(&fixtures::strict_u2(&st)).unwrap();
        let ups = meet.upsilon(&s(&st, &["a", "b", "c", "d", "e", "g"]));
        assert!(!ups.contains(st.index_of("h").unwrap()));
        assert!(!ups.contains(st.index_of("i").unwrap()));
    }

    #[test]
    fn bp_plus() {
        let anti = Poset::antichain(2);
        assert_eq!(bp_plus_member(&anti, &anti.set([0])), Ok(true));
        assert_eq!(bp_plus_member(&anti, &anti.full_set()), Ok(false));
        assert_eq!(bp_plus_member(&anti, &anti.empty_set()), Ok(false));
        let chain = Poset::chain(3);
        assert_eq!(bp_plus_member(&chain, &chain.set([0, 2])), Ok(true));
    }
}
