//! Maps between posets and between finite lattices: monotonicity, embeddings,
//! `U`-morphisms, the lift `f⁺(C) = Γ_{U_Q}(f[C])`, continuity and adjoint pairs.

use std::sync::Arc;

use crate::bits::{bit, ones, Mask};
use crate::error::{Error, Result};
use crate::ideals::IdealLattice;
use crate::joinspec::JoinSpec;
use crate::lattice::{FiniteLattice, FiniteOrder, TableLattice};
use crate::poset::Poset;

/// A total function between the carriers of two posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetMap {
    dom: Arc<Poset>,
    cod: Arc<Poset>,
    assign: Vec<usize>,
}

impl PosetMap {
    pub fn new(dom: Arc<Poset>, cod: Arc<Poset>, assign: Vec<usize>) -> Result<PosetMap> {
        if assign.len() != dom.len() {
            return Err(Error::Precondition(format!(
                "map assigns {} of {} elements",
                assign.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::Precondition(format!("image index {bad} out of range")));
        }
        Ok(PosetMap { dom, cod, assign })
    }

    /// Builds a map from `(source, target)` label pairs covering the domain.
    pub fn from_pairs<S: AsRef<str>>(dom: Arc<Poset>, cod: Arc<Poset>, pairs: &[(S, S)]) -> Result<PosetMap> {
        let mut assign = vec![None; dom.len()];
        for (a, b) in pairs {
            let i = dom.index_of(a.as_ref()).ok_or_else(|| Error::UnknownLabel(a.as_ref().into()))?;
            let j = cod.index_of(b.as_ref()).ok_or_else(|| Error::UnknownLabel(b.as_ref().into()))?;
            if assign[i].is_some_and(|k| k != j) {
                return Err(Error::Precondition(format!("`{}` mapped twice", a.as_ref())));
            }
            assign[i] = Some(j);
        }
        let assign = assign
            .into_iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| Error::Precondition(format!("`{}` is unmapped", dom.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dom, cod, assign)
    }

    /// Maps elements by label; every domain label must exist in the codomain.
    pub fn by_label(dom: Arc<Poset>, cod: Arc<Poset>) -> Result<PosetMap> {
        let pairs: Vec<(String, String)> = dom.labels().iter().map(|l| (l.clone(), l.clone())).collect();
        Self::from_pairs(dom, cod, &pairs)
    }

    pub fn identity(p: Arc<Poset>) -> PosetMap {
        let assign = (0..p.len()).collect();
        PosetMap { dom: p.clone(), cod: p, assign }
    }

    pub fn dom(&self) -> &Poset {
        &self.dom
    }

    pub fn cod(&self) -> &Poset {
        &self.cod
    }

    pub fn dom_arc(&self) -> &Arc<Poset> {
        &self.dom
    }

    pub fn cod_arc(&self) -> &Arc<Poset> {
        &self.cod
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub(crate) fn image_bits(&self, s: Mask) -> Mask {
        ones(s).fold(0, |acc, x| acc | bit(self.assign[x]))
    }

    pub(crate) fn preimage_bits(&self, s: Mask) -> Mask {
        (0..self.dom.len()).filter(|&x| s & bit(self.assign[x]) != 0).fold(0, |acc, x| acc | bit(x))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PosetMap) -> Result<PosetMap> {
        if g.dom.id() != self.cod.id() {
            return Err(Error::OwnerMismatch);
        }
        let assign = self.assign.iter().map(|&y| g.assign[y]).collect();
        Ok(PosetMap { dom: self.dom.clone(), cod: g.cod.clone(), assign })
    }

    pub fn is_monotone(&self) -> bool {
        self.pairs().all(|(a, b)| !self.dom.leq(a, b) || self.cod.leq(self.assign[a], self.assign[b]))
    }

    /// `a ≤ b ⟺ f(a) ≤ f(b)`.
    pub fn is_embedding(&self) -> bool {
        self.pairs().all(|(a, b)| self.dom.leq(a, b) == self.cod.leq(self.assign[a], self.assign[b]))
    }

    pub fn is_injective(&self) -> bool {
        self.pairs().all(|(a, b)| a == b || self.assign[a] != self.assign[b])
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.dom.len();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
    }

    /// Monotone, and `f(⋁S) = ⋁ f[S]` for every `S ∈ U`.
    pub fn is_u_morphism(&self, u: &JoinSpec) -> Result<bool> {
        if u.poset().id() != self.dom.id() {
            return Err(Error::OwnerMismatch);
        }
        Ok(self.is_monotone()
            && u
                .members_with_joins()
                .all(|(s, j)| self.cod.join_bits(self.image_bits(s)) == Some(self.assign[j])))
    }

    /// The codomain's order as a lattice.
    pub fn cod_lattice(&self) -> Result<TableLattice> {
        TableLattice::from_order(self.cod.as_ref())
    }
}

/// A function between two finite lattices; its properties are always
/// recomputed from the assignment.
#[derive(Debug, Clone)]
pub struct LatticeMap<'a, A: FiniteLattice, B: FiniteLattice> {
    dom: &'a A,
    cod: &'a B,
    assign: Vec<usize>,
}

impl<'a, A: FiniteLattice, B: FiniteLattice> LatticeMap<'a, A, B> {
    /// # Panics
    /// If the assignment does not fit the lattices.
    pub fn new(dom: &'a A, cod: &'a B, assign: Vec<usize>) -> Self {
        assert_eq!(assign.len(), dom.size(), "assignment must cover the domain");
        assert!(assign.iter().all(|&y| y < cod.size()), "image out of range");
        LatticeMap { dom, cod, assign }
    }

    pub fn from_fn(dom: &'a A, cod: &'a B, f: impl Fn(usize) -> usize) -> Self {
        Self::new(dom, cod, (0..dom.size()).map(f).collect())
    }

    pub fn dom(&self) -> &'a A {
        self.dom
    }

    pub fn cod(&self) -> &'a B {
        self.cod
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assign[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.dom.size();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
    }

    pub fn is_monotone(&self) -> bool {
        self.pairs().all(|(a, b)| !self.dom.leq(a, b) || self.cod.leq(self.assign[a], self.assign[b]))
    }

    pub fn is_embedding(&self) -> bool {
        self.pairs().all(|(a, b)| self.dom.leq(a, b) == self.cod.leq(self.assign[a], self.assign[b]))
    }

    pub fn is_injective(&self) -> bool {
        self.pairs().all(|(a, b)| a == b || self.assign[a] != self.assign[b])
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &y in &self.assign {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Binary joins and the bottom; in a finite lattice this is all joins.
    pub fn preserves_joins(&self) -> bool {
        self.assign[self.dom.bottom()] == self.cod.bottom() && self.preserves_binary_joins()
    }

    pub fn preserves_binary_joins(&self) -> bool {
        self.pairs()
            .all(|(a, b)| self.assign[self.dom.join(a, b)] == self.cod.join(self.assign[a], self.assign[b]))
    }

    /// A pair `(a, b)` whose meet is not preserved.
    pub fn binary_meet_failure(&self) -> Option<(usize, usize)> {
        self.pairs()
            .find(|&(a, b)| self.assign[self.dom.meet(a, b)] != self.cod.meet(self.assign[a], self.assign[b]))
    }

    pub fn preserves_binary_meets(&self) -> bool {
        self.binary_meet_failure().is_none()
    }

    pub fn preserves_meets(&self) -> bool {
        self.assign[self.dom.top()] == self.cod.top() && self.preserves_binary_meets()
    }

    /// `g ∘ self`.
    pub fn then<C: FiniteLattice>(&self, g: &LatticeMap<'a, B, C>) -> LatticeMap<'a, A, C> {
        LatticeMap::new(self.dom, g.cod, self.assign.iter().map(|&y| g.assign[y]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.assign.iter().enumerate().all(|(i, &y)| i == y)
    }
}

impl<'a> LatticeMap<'a, IdealLattice, IdealLattice> {
    /// Sends `p↓` to `p↓` for every `p`; both lattices must share a poset.
    pub fn fixes_points(&self) -> bool {
        self.dom.poset().id() == self.cod.poset().id()
            && (0..self.dom.poset().len()).all(|p| self.assign[self.dom.eta(p)] == self.cod.eta(p))
    }

    /// Every closed set is sent to itself.
    pub fn is_inclusion(&self) -> bool {
        self.dom.poset().id() == self.cod.poset().id()
            && (0..self.dom.len()).all(|i| self.dom.ideal_bits(i) == self.cod.ideal_bits(self.assign[i]))
    }
}

/// `f⁺(C) = Γ_{U_Q}(f[C])`.
pub fn lift<'a>(
    f: &PosetMap,
    dom: &'a IdealLattice,
    cod: &'a IdealLattice,
) -> Result<LatticeMap<'a, IdealLattice, IdealLattice>> {
    check_ends(f, dom, cod)?;
    let (up, uq) = specs(dom, cod)?;
    if !f.is_u_morphism(up)? {
        return Err(Error::Precondition("map is not a U-morphism".into()));
    }
    let assign = (0..dom.len())
        .map(|i| cod.close_index(uq.gamma_bits(f.image_bits(dom.ideal_bits(i)))))
        .collect();
    Ok(LatticeMap::new(dom, cod, assign))
}

/// The preimage of every ideal of the codomain is an ideal of the domain.
pub fn continuity_check(f: &PosetMap, dom: &IdealLattice, cod: &IdealLattice) -> Result<bool> {
    check_ends(f, dom, cod)?;
    Ok((0..cod.len()).all(|i| dom.index_of_bits(f.preimage_bits(cod.ideal_bits(i))).is_some()))
}

fn check_ends(f: &PosetMap, dom: &IdealLattice, cod: &IdealLattice) -> Result<()> {
    if f.dom().id() != dom.poset().id() || f.cod().id() != cod.poset().id() {
        return Err(Error::OwnerMismatch);
    }
    Ok(())
}

fn specs<'a>(dom: &'a IdealLattice, cod: &'a IdealLattice) -> Result<(&'a JoinSpec, &'a JoinSpec)> {
    let missing = || Error::Precondition("ideal lattice is not spec-backed".into());
    Ok((dom.spec().ok_or_else(missing)?, cod.spec().ok_or_else(missing)?))
}

/// `fwd(x) ≤ y ⟺ x ≤ bwd(y)` for all `x`, `y`.
pub fn adjoint_check<A: FiniteLattice, B: FiniteLattice>(
    fwd: &LatticeMap<'_, A, B>,
    bwd: &LatticeMap<'_, B, A>,
) -> bool {
    let (a, b) = (fwd.dom(), fwd.cod());
    (0..a.size()).all(|x| (0..b.size()).all(|y| b.leq(fwd.apply(x), y) == a.leq(x, bwd.apply(y))))
}

/// For an order embedding `g: I_2 → I_1` fixing the points of a shared poset,
/// checks that `g` is the inclusion of closed sets and is right adjoint to
/// `C ↦ Γ_2(C)`. Returns `None` when `g` is not such an embedding.
pub fn induced_embedding_check(g: &LatticeMap<'_, IdealLattice, IdealLattice>) -> Option<bool> {
    if !g.is_embedding() || !g.fixes_points() {
        return None;
    }
    let (l2, l1) = (g.dom(), g.cod());
    let f = LatticeMap::from_fn(l1, l2, |i| l2.close_index(l1.ideal_bits(i)));
    Some(g.is_inclusion() && adjoint_check(&f, g))
}

/// Every monotone map between two finite lattices, up to `cap` candidates
/// examined (all functions are enumerated).
pub fn monotone_maps<'a, A: FiniteLattice, B: FiniteLattice>(
    dom: &'a A,
    cod: &'a B,
    cap: usize,
) -> Result<Vec<LatticeMap<'a, A, B>>> {
    let (n, m) = (dom.size(), cod.size());
    let total = (m as f64).powi(n as i32);
    if total > cap as f64 {
        return Err(Error::CapExceeded { what: "candidate map count", cap });
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let candidate = LatticeMap::new(dom, cod, digits.clone());
        if candidate.is_monotone() {
            out.push(candidate);
        }
        let mut k = 0;
        while k < n {
            digits[k] += 1;
            if digits[k] < m {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if k == n {
            return Ok(out);
        }
    }
}

/// The unit `η_P` and counit `ε_L` of the free-frame adjunction satisfy both
/// triangle identities on `P`, with every poset given all its existing joins.
pub fn global_adjunction_check(p: Arc<Poset>) -> Result<bool> {
    let up = JoinSpec::u_max(p.clone())?;
    if !crate::frames::frame_generating(&up) {
        return Err(Error::NotFrameGenerating);
    }
    let fp = IdealLattice::new(&up)?;
    let l = fp.to_table()?;
    // U(F(P)): the frame viewed as a poset, and F(U(F(P))).
    let lp = Arc::new(lattice_as_poset(&l)?);
    let ul = JoinSpec::u_max(lp.clone())?;
    let ful = IdealLattice::new(&ul)?;
    let eta_p = PosetMap::new(p.clone(), lp.clone(), fp.eta_all())?;
    let f_eta = lift(&eta_p, &fp, &ful)?;
    // ε_{F(P)}: C ↦ ⋁C, from F(U(F(P))) back to F(P).
    let eps = LatticeMap::from_fn(&ful, &fp, |c| l.join_all(ones(ful.ideal_bits(c))));
    let first = f_eta.then(&eps).is_identity();
    // U(ε_L) ∘ η_{U(L)} on elements of L: x ↦ x↓ ↦ ⋁ x↓.
    let second = (0..l.size()).all(|x| l.join_all(ones(ful.ideal_bits(ful.eta(x)))) == x);
    Ok(first && second && eps.preserves_joins())
}

/// `f⁺(p↓) = f(p)↓` for a monotone `f` between posets with all existing joins.
pub fn unit_naturality_check(f: &PosetMap) -> Result<bool> {
    let dom = IdealLattice::new(&JoinSpec::u_max(f.dom.clone())?)?;
    let cod = IdealLattice::new(&JoinSpec::u_max(f.cod.clone())?)?;
    let lifted = lift(f, &dom, &cod)?;
    Ok((0..f.dom.len()).all(|p| lifted.apply(dom.eta(p)) == cod.eta(f.apply(p))))
}

/// A finite lattice re-read as a poset with the same labels.
pub fn lattice_as_poset<L: FiniteOrder>(l: &L) -> Result<Poset> {
    let labels: Vec<String> = (0..l.size()).map(|i| l.element_label(i)).collect();
    let limits = crate::poset::Limits { max_elements: crate::poset::MAX_CARRIER, ..Default::default() };
    Poset::from_leq_with(&labels, |a, b| l.leq(a, b), limits)
}
