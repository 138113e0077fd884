//! Deciding whether a join-specification is frame-generating, by several
//! independent characterisations, plus checks on the canonical embedding
//! `η: P → I_U`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{self, bit, ones, submasks, Mask};
use crate::error::{Error, Result};
use crate::ideals::IdealLattice;
use crate::joinspec::{all_subsets, JoinSpec};
use crate::lattice::{is_distributive, FiniteLattice, FiniteOrder, TableLattice};
use crate::morphisms::{LatticeMap, PosetMap};
use crate::poset::ElemSet;

/// A characterisation of frame-generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// `I_U` is distributive.
    Distributive,
    /// `p↓ ∩ Γ(S) = Γ(p↓ ∩ S↓)` for `S ∈ U`, `p ≤ ⋁S`.
    PrincipalMeet,
    /// `Υ(S)` is down-closed for `S ∈ U`.
    DownClosed,
    /// `Γ(S) = Υ(S)` for every downset `S`.
    SmallestIdeal,
    /// The descent property.
    Descent,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::Distributive, Method::PrincipalMeet, Method::DownClosed, Method::SmallestIdeal, Method::Descent];

    pub fn number(self) -> u8 {
        match self {
            Method::Distributive => 1,
            Method::PrincipalMeet => 4,
            Method::DownClosed => 5,
            Method::SmallestIdeal => 7,
            Method::Descent => 10,
        }
    }

    pub fn from_number(n: u8) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.number() == n)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        s.parse::<u8>()
            .ok()
            .and_then(Method::from_number)
            .ok_or_else(|| Error::Precondition(format!("unknown method `{s}`")))
    }
}

/// A member `S ∈ U` and a point `p ≤ ⋁S` missing from `Υ(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub set: ElemSet,
    pub point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameGenReport {
    pub verdict: bool,
    pub methods: Vec<(Method, bool)>,
    pub witness: Option<Witness>,
}

/// Runs the requested methods; all must agree.
pub fn is_frame_generating(u: &JoinSpec, methods: &[Method]) -> Result<FrameGenReport> {
    if methods.is_empty() {
        return Err(Error::Precondition("no method requested".into()));
    }
    let mut results = Vec::with_capacity(methods.len());
    for &m in methods {
        results.push((m, method_verdict(u, m)?));
    }
    let verdict = results[0].1;
    if results.iter().any(|&(_, v)| v != verdict) {
        let listing: Vec<String> = results.iter().map(|(m, v)| format!("method {m}: {v}")).collect();
        return Err(Error::Invariant(format!("frame-generating methods disagree ({})", listing.join(", "))));
    }
    let witness = if verdict { None } else { failure_witness(u) };
    if !verdict && witness.is_none() {
        return Err(Error::Invariant("negative verdict without a witness".into()));
    }
    Ok(FrameGenReport { verdict, methods: results, witness })
}

/// The default test (down-closed `Υ`).
pub fn frame_generating(u: &JoinSpec) -> bool {
    failure_witness(u).is_none()
}

pub fn method_verdict(u: &JoinSpec, method: Method) -> Result<bool> {
    Ok(match method {
        Method::Distributive => is_distributive(&IdealLattice::new(u)?.to_table()?),
        Method::PrincipalMeet => principal_meet_holds(u),
        Method::DownClosed => frame_generating(u),
        Method::SmallestIdeal => smallest_ideal_holds(u)?,
        Method::Descent => descent_holds(u, false),
    })
}

/// The least `(S, p)` in `(|S|, S, p)` order with `p ≤ ⋁S` and `p ∉ Υ(S)`,
/// taken over members whose `Υ` is not down-closed.
pub fn failure_witness(u: &JoinSpec) -> Option<Witness> {
    let p = u.poset();
    for (s, j) in u.members_with_joins() {
        let ups = u.upsilon_bits(s);
        if p.is_down_bits(ups) {
            continue;
        }
        let point = ones(p.down_of(j) & !ups).next()?;
        return Some(Witness { set: p.elem(s), point });
    }
    None
}

fn principal_meet_holds(u: &JoinSpec) -> bool {
    let p = u.poset();
    u.members_with_joins().all(|(s, j)| {
        let g = u.gamma_bits(s);
        let sd = p.down_bits(s);
        ones(p.down_of(j)).all(|x| p.down_of(x) & g == u.gamma_bits(p.down_of(x) & sd))
    })
}

fn smallest_ideal_holds(u: &JoinSpec) -> Result<bool> {
    Ok(u.poset().downsets_bits()?.into_iter().all(|s| u.gamma_bits(s) == u.upsilon_bits(s)))
}

/// Largest `p↓ ∩ S↓` for which candidate subsets are searched exhaustively.
const DESCENT_SEARCH_BITS: u32 = 16;

fn descent_holds(u: &JoinSpec, literal: bool) -> bool {
    let p = u.poset();
    u.members_with_joins().all(|(s, j)| {
        if literal && !p.is_down_bits(s) {
            return true;
        }
        let sd = p.down_bits(s);
        ones(p.down_of(j)).all(|x| {
            let cand = p.down_of(x) & sd;
            if cand.count_ones() <= DESCENT_SEARCH_BITS {
                submasks(cand).any(|t| p.join_bits(t) == Some(x) && u.in_uplus_bits(t))
            } else {
                p.join_bits(cand) == Some(x) && u.in_uplus_bits(cand)
            }
        })
    })
}

/// Descent: every `p ≤ ⋁S` with `S ∈ U` is `⋁T` for some `T ∈ U⁺`, `T ⊆ S↓`.
pub fn descent_check(u: &JoinSpec) -> FrameGenReport {
    let verdict = descent_holds(u, false);
    FrameGenReport {
        verdict,
        methods: vec![(Method::Descent, verdict)],
        witness: if verdict { None } else { failure_witness(u) },
    }
}

/// Descent quantified only over down-closed members of `U`.
pub fn descent_check_downclosed_only(u: &JoinSpec) -> bool {
    descent_holds(u, true)
}

/// Strong descent: as descent, with the witness `T` drawn from `U` itself.
pub fn strong_descent_check(u: &JoinSpec) -> bool {
    let p = u.poset();
    u.members_with_joins().all(|(s, j)| {
        let sd = p.down_bits(s);
        ones(p.down_of(j)).all(|x| {
            u.members_with_joins().any(|(t, jt)| jt == x && bits::is_subset(t, sd))
        })
    })
}

/// `η` is an order embedding, preserves existing meets and `U`-joins, and is
/// join-dense.
pub fn verify_eta(u: &JoinSpec) -> Result<bool> {
    let lat = IdealLattice::new(u)?;
    let p = u.poset();
    let eta = lat.eta_all();
    for a in 0..p.len() {
        if lat.ideal_bits(eta[a]) != p.down_of(a) {
            return Ok(false);
        }
        for b in 0..p.len() {
            if p.leq(a, b) != lat.leq(eta[a], eta[b]) {
                return Ok(false);
            }
        }
    }
    for s in all_subsets(p)? {
        if let Some(m) = p.meet_bits(s) {
            let inter = ones(s).fold(p.full_bits(), |acc, x| acc & lat.ideal_bits(eta[x]));
            if inter != p.down_of(m) {
                return Ok(false);
            }
        }
    }
    for (s, j) in u.members_with_joins() {
        if lat.join_of(&ones(s).map(|x| eta[x]).collect::<Vec<_>>()) != Some(eta[j]) {
            return Ok(false);
        }
    }
    for i in 0..lat.len() {
        let below: Vec<usize> = ones(lat.ideal_bits(i)).map(|x| eta[x]).collect();
        if lat.join_of(&below) != Some(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h(C) = ⋁ e[C]`, the join-preserving extension of a `U`-embedding `e`
/// into a finite lattice (the codomain of `e`, tabulated as `target`).
pub fn universal_extension<'a>(
    ideals: &'a IdealLattice,
    target: &'a TableLattice,
    e: &PosetMap,
) -> Result<LatticeMap<'a, IdealLattice, TableLattice>> {
    let u = ideals
        .spec()
        .ok_or_else(|| Error::Precondition("ideal lattice is not spec-backed".into()))?;
    if e.dom().id() != ideals.poset().id() || e.cod().len() != target.size() {
        return Err(Error::OwnerMismatch);
    }
    if !e.is_embedding() || !e.is_u_morphism(u)? {
        return Err(Error::Precondition("map is not a U-embedding".into()));
    }
    let assign = (0..ideals.len())
        .map(|i| target.join_all(ones(ideals.ideal_bits(i)).map(|x| e.apply(x))))
        .collect();
    Ok(LatticeMap::new(ideals, target, assign))
}

/// `{p : p ≠ ⋁S for every S ∈ U⁺ not containing its join}`.
pub fn cunique_jset(u: &JoinSpec) -> Result<ElemSet> {
    let p = u.poset();
    let mut excluded: Mask = 0;
    for t in all_subsets(p)? {
        if let Some(j) = p.join_bits(t) {
            if t & bit(j) == 0 && u.gamma_bits(t) & bit(j) != 0 {
                excluded |= bit(j);
            }
        }
    }
    Ok(p.elem(p.full_bits() & !excluded))
}

/// Both sides of `Γ(⋂ S_j↓) = ⋂ Γ(S_j)`.
pub fn carrow_sides(u: &JoinSpec, family: &[ElemSet]) -> Result<(ElemSet, ElemSet)> {
    let p = u.poset();
    if family.is_empty() {
        return Err(Error::Precondition("empty family".into()));
    }
    let mut inter = p.full_bits();
    let mut rhs = p.full_bits();
    for s in family {
        p.check(s)?;
        inter &= p.down_bits(s.bits());
        rhs &= u.gamma_bits(s.bits());
    }
    Ok((p.elem(u.gamma_bits(inter)), p.elem(rhs)))
}

pub fn carrow_check(u: &JoinSpec, family: &[ElemSet]) -> Result<bool> {
    let (lhs, rhs) = carrow_sides(u, family)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures;
    use crate::lattice::{distributivity_mk, join_irreducibles};
    use crate::poset::Poset;

    #[test]
    fn strict_verdicts() {
        let p = Arc::new(fixtures::strict());
        let (u1, u2) = (fixtures::strict_u1(&p), fixtures::strict_u2(&p));
        for u in [&u1, &u2] {
            let r = is_frame_generating(u, &Method::ALL).unwrap();
            assert!(r.verdict && r.witness.is_none());
        }
        let meet = u1.intersection(&u2).unwrap();
        let r = is_frame_generating(&meet, &Method::ALL).unwrap();
        assert!(!r.verdict);
        let w = r.witness.unwrap();
        assert_eq!(w.set, p.set_of(&["a", "b", "c", "d", "e", "g"]).unwrap());
        assert_eq!(p.label(w.point), "h");
        assert!(!descent_check(&meet).verdict);
    }

    #[test]
    fn minimal_specs_generate_frames() {
        for p in [fixtures::no_union(), fixtures::strict(), fixtures::not_mod(), Poset::chain(4)] {
            let b = JoinSpec::bp(Arc::new(p));
            assert!(is_frame_generating(&b, &Method::ALL).unwrap().verdict);
            assert!(strong_descent_check(&b));
            assert!(verify_eta(&b).unwrap());
        }
    }

    #[test]
    fn not_mod_u_infty_fails() {
        let p = Arc::new(fixtures::not_mod());
        let u = JoinSpec::u_infty(p).unwrap();
        let r = is_frame_generating(&u, &Method::ALL).unwrap();
        assert!(!r.verdict && r.witness.is_some());
        assert!(!strong_descent_check(&u));
    }

    #[test]
    fn downclosed_only_descent_is_too_weak() {
        let p = Arc::new(
            Poset::from_covers(
                &["x", "e", "a", "d", "c"],
                &[("x", "e"), ("a", "c"), ("e", "c"), ("d", "c")],
            )
            .unwrap(),
        );
        let u = JoinSpec::new(p.clone(), &[p.set_of(&["a", "e"]).unwrap()]).unwrap();
        assert!(descent_check_downclosed_only(&u));
        assert!(!descent_check(&u).verdict);
        assert!(!is_frame_generating(&u, &Method::ALL).unwrap().verdict);
    }

    #[test]
    fn strong_descent_on_distributive_lattice() {
        let p = Arc::new(
            Poset::from_covers(
                &["0", "a", "b", "c", "1"],
                &[("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("c", "1")],
            )
            .unwrap(),
        );
        let u = JoinSpec::u_infty(p).unwrap();
        assert!(strong_descent_check(&u));
        assert!(frame_generating(&u));
    }

    #[test]
    fn eta_checks() {
        let p = Arc::new(fixtures::no_union());
        assert!(verify_eta(&fixtures::no_union_u1(&p)).unwrap());
        let q = Arc::new(fixtures::not_inj_q());
        assert!(verify_eta(&JoinSpec::u_infty(q).unwrap()).unwrap());
    }

    #[test]
    fn cunique_matches_join_irreducibles() {
        let p = Arc::new(fixtures::no_union());
        let u = fixtures::no_union_u1(&p);
        let lat = IdealLattice::new(&u).unwrap();
        let irr = join_irreducibles(&lat.to_table().unwrap());
        let from_lattice: Vec<usize> = (0..p.len()).filter(|&x| irr.contains(&lat.eta(x))).collect();
        assert_eq!(cunique_jset(&u).unwrap().iter().collect::<Vec<_>>(), from_lattice);
        assert!(!cunique_jset(&u).unwrap().contains(p.index_of("d").unwrap()));
    }

    #[test]
    fn carrow_on_strict() {
        let p = Arc::new(fixtures::strict());
        let u1 = fixtures::strict_u1(&p);
        let downs = p.all_downsets().unwrap();
        assert!(carrow_check(&u1, &downs[3..4]).unwrap());
        for a in &downs {
            for b in &downs {
                assert!(carrow_check(&u1, &[*a, *b]).unwrap());
            }
        }
        let meet = u1.intersection(&fixtures::strict_u2(&p)).unwrap();
        let violated = downs.iter().any(|a| downs.iter().any(|b| !carrow_check(&meet, &[*a, *b]).unwrap()));
        assert!(violated);
    }

    #[test]
    fn bounded_distributivity_of_strict_ideals() {
        let p = Arc::new(fixtures::strict());
        let u1 = fixtures::strict_u1(&p);
        let t = IdealLattice::new(&u1).unwrap().to_table().unwrap();
        assert!(distributivity_mk(&t, 3, u1.radius(), 1 << 22).unwrap());
    }
}
