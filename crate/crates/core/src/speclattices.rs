//! The lattices `JF` and `JF⁺` of frame-generating join-specifications: the
//! pruning `U⁻`, joins, meets, bounds, and the correspondence between
//! closure operators and join-completions.

use std::sync::Arc;

use crate::bits::{ones, Mask};
use crate::closure::ClosureRepr;
use crate::error::{Error, Result};
use crate::frames::frame_generating;
use crate::ideals::IdealLattice;
use crate::joinspec::JoinSpec;
use crate::lattice::{FiniteLattice, FiniteOrder, TableLattice};
use crate::morphisms::{lattice_as_poset, LatticeMap, PosetMap};
use crate::poset::Poset;

/// Members `S` of `U` whose `Υ_U(S)` is not down-closed.
pub fn problematic(u: &JoinSpec) -> Vec<Mask> {
    let p = u.poset();
    u.member_bits().iter().copied().filter(|&s| !p.is_down_bits(u.upsilon_bits(s))).collect()
}

/// The largest frame-generating specification inside `U`: repeatedly drop
/// every problematic member at once.
pub fn uminus(u: &JoinSpec) -> JoinSpec {
    let mut cur = u.clone();
    loop {
        let bad = problematic(&cur);
        if bad.is_empty() {
            return cur;
        }
        cur = cur.without(&bad);
    }
}

/// As [`uminus`], dropping the first problematic member one at a time.
pub fn uminus_sequential(u: &JoinSpec) -> JoinSpec {
    let mut cur = u.clone();
    while let Some(&first) = problematic(&cur).first() {
        cur = cur.without(&[first]);
    }
    cur
}

fn nonempty(specs: &[JoinSpec]) -> Result<&JoinSpec> {
    let first = specs.first().ok_or_else(|| Error::Precondition("no specifications given".into()))?;
    if specs.iter().any(|u| !u.same_poset(first)) {
        return Err(Error::OwnerMismatch);
    }
    Ok(first)
}

fn require_fg(specs: &[JoinSpec]) -> Result<()> {
    if specs.iter().all(frame_generating) {
        Ok(())
    } else {
        Err(Error::NotFrameGenerating)
    }
}

fn require_max(specs: &[JoinSpec]) -> Result<()> {
    for u in specs {
        if !is_maximal(u)? {
            return Err(Error::NotMaximal);
        }
    }
    Ok(())
}

fn fold(specs: &[JoinSpec], op: impl Fn(&JoinSpec, &JoinSpec) -> Result<JoinSpec>) -> Result<JoinSpec> {
    let mut acc = nonempty(specs)?.clone();
    for u in &specs[1..] {
        acc = op(&acc, u)?;
    }
    Ok(acc)
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(what.into()))
    }
}

/// Join in `JF`: the union.
pub fn jf_join(specs: &[JoinSpec]) -> Result<JoinSpec> {
    require_fg(specs)?;
    let out = fold(specs, JoinSpec::union)?;
    ensure(frame_generating(&out), "union of frame-generating specifications is not frame-generating")?;
    Ok(out)
}

/// Meet in `JF`: `(⋂ U_i)⁻`.
pub fn jf_meet(specs: &[JoinSpec]) -> Result<JoinSpec> {
    require_fg(specs)?;
    Ok(uminus(&fold(specs, JoinSpec::intersection)?))
}

/// Join in `JF⁺`: `(⋃ U_i)⁺`.
pub fn jfplus_join(specs: &[JoinSpec]) -> Result<JoinSpec> {
    require_fg(specs)?;
    require_max(specs)?;
    let out = fold(specs, JoinSpec::union)?.uplus()?;
    ensure(frame_generating(&out), "join in JF+ is not frame-generating")?;
    Ok(out)
}

/// Meet in `JF⁺`: the intersection.
pub fn jfplus_meet(specs: &[JoinSpec]) -> Result<JoinSpec> {
    require_fg(specs)?;
    require_max(specs)?;
    let out = fold(specs, JoinSpec::intersection)?;
    ensure(frame_generating(&out), "intersection in JF+ is not frame-generating")?;
    ensure(is_maximal(&out)?, "intersection in JF+ is not maximal")?;
    Ok(out)
}

/// The top of both `JF` and `JF⁺`: the pruning of all existing joins.
pub fn jf_top(p: Arc<Poset>) -> Result<JoinSpec> {
    Ok(uminus(&JoinSpec::u_max(p)?))
}

/// The bottoms `(B_P, B_P⁺)` of `JF` and `JF⁺`.
pub fn jf_bottoms(p: Arc<Poset>) -> Result<(JoinSpec, JoinSpec)> {
    let b = JoinSpec::bp(p);
    let bplus = b.uplus()?;
    Ok((b, bplus))
}

/// `U = U⁺`.
pub fn is_maximal(u: &JoinSpec) -> Result<bool> {
    let p = u.poset();
    for t in crate::joinspec::all_subsets(p)? {
        if u.in_uplus_bits(t) && !u.contains_bits(t) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `φ(C) = Γ(C)` from the closed sets of a smaller closure to those of a
/// larger one; checked to fix `P` and preserve joins.
pub fn parrow_map<'a>(
    lower: &'a IdealLattice,
    upper: &'a IdealLattice,
) -> Result<LatticeMap<'a, IdealLattice, IdealLattice>> {
    if let Some(bad) = lower.closure().leq_witness(upper.closure())? {
        return Err(Error::Precondition(format!(
            "{} is closed for the larger operator but not the smaller",
            lower.poset().format_set(&bad)
        )));
    }
    let phi = LatticeMap::from_fn(lower, upper, |i| upper.close_index(lower.ideal_bits(i)));
    ensure(phi.fixes_points(), "induced map does not fix P")?;
    ensure(phi.preserves_joins(), "induced map does not preserve joins")?;
    Ok(phi)
}

/// `e` is an order embedding into a lattice whose elements are all joins of
/// points of the image.
pub fn is_join_completion(e: &PosetMap) -> Result<bool> {
    let l = e.cod_lattice()?;
    if !e.is_embedding() {
        return Ok(false);
    }
    Ok((0..l.size()).all(|x| {
        let below = (0..e.dom().len()).map(|p| e.apply(p)).filter(|&y| l.leq(y, x));
        l.join_all(below) == x
    }))
}

/// The closure whose closed sets are `e⁻¹(x↓)` for `x` in the codomain.
pub fn closure_from_completion(e: &PosetMap) -> Result<ClosureRepr> {
    if !is_join_completion(e)? {
        return Err(Error::Precondition("map is not a join-completion".into()));
    }
    let cod = e.cod();
    let owner = e.dom_arc();
    let family: Vec<_> = (0..cod.len()).map(|x| owner.elem(e.preimage_bits(cod.down_of(x)))).collect();
    ClosureRepr::from_family(owner.clone(), &family)
}

/// The lattice of closed sets with `p ↦ p↓`, as a completion into a poset.
pub fn completion_of(lat: &IdealLattice) -> Result<PosetMap> {
    let lp = Arc::new(lattice_as_poset(lat)?);
    PosetMap::new(lat.poset_arc().clone(), lp, lat.eta_all())
}

/// Passing from a closure to its completion and back yields the same
/// closed sets.
pub fn roundtrip_check(repr: &ClosureRepr) -> Result<bool> {
    let lat = IdealLattice::from_closure(repr.clone())?;
    let back = closure_from_completion(&completion_of(&lat)?)?;
    Ok(back.closed_bits()? == repr.closed_bits()?)
}

/// Passing from a completion to its closure and back yields a lattice
/// isomorphic to the original over `P`, via `x ↦ e⁻¹(x↓)`.
pub fn completion_roundtrip_check(e: &PosetMap) -> Result<bool> {
    let repr = closure_from_completion(e)?;
    let lat = IdealLattice::from_closure(repr)?;
    let cod = e.cod();
    let iso: Vec<Option<usize>> = (0..cod.len()).map(|x| lat.index_of_bits(e.preimage_bits(cod.down_of(x)))).collect();
    let Some(iso) = iso.into_iter().collect::<Option<Vec<_>>>() else {
        return Ok(false);
    };
    let bijective = iso.len() == lat.len() && {
        let mut seen = vec![false; lat.len()];
        iso.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    };
    let order = (0..cod.len()).all(|x| (0..cod.len()).all(|y| cod.leq(x, y) == lat.leq(iso[x], iso[y])));
    let over_p = (0..e.dom().len()).all(|p| iso[e.apply(p)] == lat.eta(p));
    Ok(bijective && order && over_p)
}

/// `U_1⁺ ⊆ U_2 ⟺ U_1 ⊆ U_2` for `U_1 ∈ JF`, `U_2 ∈ JF⁺`.
pub fn reflection_check(pairs: &[(JoinSpec, JoinSpec)]) -> Result<bool> {
    for (u1, u2) in pairs {
        require_fg(std::slice::from_ref(u1))?;
        require_fg(std::slice::from_ref(u2))?;
        require_max(std::slice::from_ref(u2))?;
        if u1.uplus()?.is_subset(u2) != u1.is_subset(u2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the terminal-object check for a completion `e: P → L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalReport {
    /// `U_e = U_{Γ_e}`.
    pub u_e: JoinSpec,
    /// `W = U_e⁻`.
    pub w: JoinSpec,
    pub w_maximal: bool,
    /// Per sample: (a join-preserving map `I_U → L` fixing `P` exists, `U ⊆ W`).
    pub samples: Vec<(bool, bool)>,
}

impl TerminalReport {
    pub fn holds(&self) -> bool {
        self.w_maximal && self.samples.iter().all(|&(a, b)| a == b)
    }
}

/// For a completion `e` into a finite frame, `W = U_e⁻` is maximal and a
/// frame-generating `U` maps into `L` over `P` exactly when `U ⊆ W`.
pub fn terminal_object_check(e: &PosetMap, samples: &[JoinSpec]) -> Result<TerminalReport> {
    let l = e.cod_lattice()?;
    if !crate::lattice::is_distributive(&l) {
        return Err(Error::NotDistributive);
    }
    let u_e = closure_from_completion(e)?.u_gamma()?;
    let w = uminus(&u_e);
    let w_maximal = is_maximal(&w)?;
    let mut results = Vec::with_capacity(samples.len());
    for u in samples {
        if u.poset().id() != e.dom().id() {
            return Err(Error::OwnerMismatch);
        }
        require_fg(std::slice::from_ref(u))?;
        results.push((maps_over_p(u, e, &l)?, u.is_subset(&w)));
    }
    Ok(TerminalReport { u_e, w, w_maximal, samples: results })
}

/// Whether `C ↦ ⋁ e[C]` is a join-preserving map `I_U → L` sending `p↓` to `e(p)`;
/// any join-preserving map fixing `P` must be this one.
fn maps_over_p(u: &JoinSpec, e: &PosetMap, l: &TableLattice) -> Result<bool> {
    let lat = IdealLattice::new(u)?;
    let h = LatticeMap::from_fn(&lat, l, |i| l.join_all(ones(lat.ideal_bits(i)).map(|x| e.apply(x))));
    Ok(h.preserves_joins() && (0..u.poset().len()).all(|p| h.apply(lat.eta(p)) == e.apply(p)))
}

/// Every join-specification of `P`, when the joinable non-singleton subsets
/// number at most `max_free`.
pub fn all_joinspecs(p: Arc<Poset>, max_free: usize) -> Result<Vec<JoinSpec>> {
    let free: Vec<Mask> = JoinSpec::u_max(p.clone())?
        .member_bits()
        .iter()
        .copied()
        .filter(|m| m.count_ones() != 1)
        .collect();
    if free.len() > max_free {
        return Err(Error::CapExceeded { what: "joinable non-singleton subsets", cap: max_free });
    }
    (0u64..1 << free.len())
        .map(|pick| {
            let chosen = ones(pick).map(|i| free[i]).collect();
            JoinSpec::from_masks(p.clone(), chosen)
        })
        .collect()
}

/// Members of `U` outside `B_P` whose addition alone to `B_P` is frame-generating.
pub fn singly_safe_members(u: &JoinSpec) -> Result<Vec<Mask>> {
    let b = JoinSpec::bp(u.poset_arc().clone());
    let mut out = Vec::new();
    for m in u.extra_bits() {
        if frame_generating(&b.with_extra(&[m])?) {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn extras(u: &JoinSpec) -> Vec<String> {
        u.extra_members().iter().map(|s| u.poset().format_set(s)).collect()
    }

    #[test]
    fn strict_pruning() {
        let p = Arc::new(fixtures::strict());
        let (u1, u2) = (fixtures::strict_u1(&p), fixtures::strict_u2(&p));
        let meet = u1.intersection(&u2).unwrap();
        let pruned = uminus(&meet);
        assert_eq!(extras(&pruned), ["{a,b}", "{b,c}", "{c,d}"]);
        assert_eq!(uminus_sequential(&meet), pruned);
        assert_eq!(jf_meet(&[u1.clone(), u2.clone()]).unwrap(), pruned);
        assert_eq!(uminus(&u1), u1);
        let abc = p.set_of(&["a", "b", "c"]).unwrap();
        assert!(u1.in_uplus(&abc) && u2.in_uplus(&abc) && !meet.in_uplus(&abc));
    }

    #[test]
    fn no_union_joins() {
        let p = Arc::new(fixtures::no_union());
        let (u1, u2) = (fixtures::no_union_u1(&p), fixtures::no_union_u2(&p));
        let j = jf_join(&[u1.clone(), u2.clone()]).unwrap();
        assert!(frame_generating(&j));
        let (p1, p2) = (u1.uplus().unwrap(), u2.uplus().unwrap());
        let plus = jfplus_join(&[p1.clone(), p2.clone()]).unwrap();
        let union = p1.union(&p2).unwrap();
        assert!(union.is_subset(&plus) && union != plus);
        assert!(plus.contains(&p.set_of(&["a", "b", "c"]).unwrap()));
        assert!(!is_maximal(&union).unwrap());
        assert!(matches!(jfplus_join(&[u1, u2]), Err(Error::NotMaximal)));
    }

    #[test]
    fn tops_and_bottoms() {
        let c = Arc::new(Poset::chain(3));
        let top = jf_top(c.clone()).unwrap();
        assert_eq!(top, JoinSpec::u_max(c.clone()).unwrap());
        let (b, bplus) = jf_bottoms(c.clone()).unwrap();
        assert_eq!(b, JoinSpec::bp(c.clone()));
        assert_eq!(bplus.len(), 7);
        let nm = Arc::new(fixtures::not_mod());
        let top = jf_top(nm.clone()).unwrap();
        let uinf = JoinSpec::u_infty(nm.clone()).unwrap();
        assert!(top.is_subset(&uinf) && top != uinf);
        assert!(is_maximal(&top).unwrap());
    }

    #[test]
    fn maximality() {
        let a = Arc::new(Poset::antichain(2));
        assert!(is_maximal(&JoinSpec::bp(a)).unwrap());
        let c = Arc::new(Poset::chain(3));
        assert!(!is_maximal(&JoinSpec::bp(c)).unwrap());
        let p = Arc::new(fixtures::no_union());
        assert!(is_maximal(&fixtures::no_union_u2(&p).uplus().unwrap()).unwrap());
    }

    #[test]
    fn parrow_examples() {
        let p = Arc::new(fixtures::no_union());
        let a = IdealLattice::new(&JoinSpec::bp(p.clone())).unwrap();
        let l1 = IdealLattice::new(&fixtures::no_union_u1(&p)).unwrap();
        assert!(parrow_map(&l1, &l1).unwrap().is_identity());
        let phi = parrow_map(&a, &l1).unwrap();
        let u1 = fixtures::no_union_u1(&p);
        for i in 0..a.len() {
            assert_eq!(l1.ideal(phi.apply(i)), u1.gamma(&a.ideal(i)));
        }
        assert!(parrow_map(&l1, &a).is_err());
        let s = Arc::new(fixtures::strict());
        let meet = fixtures::strict_u1(&s).intersection(&fixtures::strict_u2(&s)).unwrap();
        let (sa, sm) = (IdealLattice::new(&JoinSpec::bp(s.clone())).unwrap(), IdealLattice::new(&meet).unwrap());
        assert!(!parrow_map(&sa, &sm).unwrap().preserves_binary_meets());
    }

    #[test]
    fn completions_round_trip() {
        let p = Arc::new(fixtures::no_union());
        let u1 = fixtures::no_union_u1(&p);
        let repr = ClosureRepr::Spec(u1.clone());
        assert!(roundtrip_check(&repr).unwrap());
        let lat = IdealLattice::new(&u1).unwrap();
        let e = completion_of(&lat).unwrap();
        assert!(completion_roundtrip_check(&e).unwrap());
        let back = closure_from_completion(&e).unwrap();
        assert_eq!(back.closed_bits().unwrap(), repr.closed_bits().unwrap());
        let a = Arc::new(Poset::antichain(2));
        let pow = Arc::new(Poset::from_covers(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]).unwrap());
        let e = PosetMap::from_pairs(a.clone(), pow, &[("a", "a"), ("b", "b")]).unwrap();
        let c = closure_from_completion(&e).unwrap();
        assert_eq!(c.closed_bits().unwrap(), a.downsets_bits().unwrap());
    }

    #[test]
    fn not_mod_completion() {
        let p = Arc::new(fixtures::not_mod());
        let l = Arc::new(fixtures::not_mod_lattice());
        let e = PosetMap::by_label(p.clone(), l).unwrap();
        assert!(is_join_completion(&e).unwrap());
        let u_phi = closure_from_completion(&e).unwrap().u_gamma().unwrap();
        assert_eq!(u_phi, JoinSpec::u_infty(p.clone()).unwrap());
        let abc = p.set_of(&["a", "b", "c"]).unwrap();
        assert!(closure_from_completion(&e).unwrap().closed_sets().unwrap().contains(&abc));
        assert_ne!(uminus(&u_phi), u_phi);
        assert!(matches!(terminal_object_check(&e, &[]), Err(Error::NotDistributive)));
    }

    #[test]
    fn reflection_examples() {
        let p = Arc::new(fixtures::no_union());
        let (u1, u2) = (fixtures::no_union_u1(&p), fixtures::no_union_u2(&p));
        let (p1, p2) = (u1.uplus().unwrap(), u2.uplus().unwrap());
        assert!(reflection_check(&[(u1.clone(), p1.clone())]).unwrap());
        assert!(!u1.is_subset(&p2));
        assert!(reflection_check(&[(u1.clone(), p2)]).unwrap());
        let (_, bplus) = jf_bottoms(p.clone()).unwrap();
        assert!(reflection_check(&[(bplus.clone(), bplus)]).unwrap());
    }

    #[test]
    fn terminal_object_on_strict() {
        let p = Arc::new(fixtures::strict());
        let u1 = fixtures::strict_u1(&p);
        let lat = IdealLattice::new(&u1).unwrap();
        let e = completion_of(&lat).unwrap();
        let samples = vec![
            JoinSpec::bp(p.clone()),
            u1.clone(),
            fixtures::strict_u2(&p),
            uminus(&u1.intersection(&fixtures::strict_u2(&p)).unwrap()),
        ];
        let report = terminal_object_check(&e, &samples).unwrap();
        assert!(report.holds());
        assert!(u1.is_subset(&report.w));
    }

    #[test]
    fn exhaustive_top_on_small_poset() {
        let p = Arc::new(Poset::from_covers(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("c", "d")]).unwrap());
        let all = all_joinspecs(p.clone(), 12).unwrap();
        let union = all
            .iter()
            .filter(|u| frame_generating(u))
            .fold(JoinSpec::bp(p.clone()), |acc, u| acc.union(u).unwrap());
        assert_eq!(jf_top(p).unwrap(), union);
    }
}
