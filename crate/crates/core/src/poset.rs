//! Finite posets over dense indices, and subsets of their carriers.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::bits::{self, bit, full, ones, Mask};
use crate::error::{Error, Result};
use crate::lattice::FiniteOrder;

/// Size caps guarding the exponential operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier accepted at construction.
    pub max_elements: usize,
    /// Largest number of downsets `all_downsets` will materialise.
    pub max_downsets: usize,
    /// Largest number of ideals an ideal lattice may hold.
    pub max_ideals: usize,
    /// Operations scanning all `2^n` subsets require `n` at most this.
    pub max_scan_bits: usize,
    /// Largest lattice on which the cubic law checks run.
    pub max_lattice_checks: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 24,
            max_downsets: 1 << 20,
            max_ideals: 1 << 20,
            max_scan_bits: 24,
            max_lattice_checks: 512,
        }
    }
}

/// Hard ceiling imposed by the bitmask representation.
pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetId(u64);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl PosetId {
    fn fresh() -> Self {
        PosetId(NEXT_ID.fetch_add(1, Ordering::Relaxed))
    }
}

/// A subset of the carrier of one particular poset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElemSet {
    owner: PosetId,
    bits: Mask,
}

impl ElemSet {
    pub(crate) fn from_bits(owner: PosetId, bits: Mask) -> Self {
        ElemSet { owner, bits }
    }

    pub fn owner(&self) -> PosetId {
        self.owner
    }

    /// Raw membership mask; bit `i` is element `i`.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.bits & bit(i) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        ones(self.bits)
    }

    fn same_owner(&self, other: &ElemSet) {
        assert_eq!(self.owner, other.owner, "set operation across different posets");
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        self.same_owner(other);
        ElemSet::from_bits(self.owner, self.bits | other.bits)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        self.same_owner(other);
        ElemSet::from_bits(self.owner, self.bits & other.bits)
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        self.same_owner(other);
        ElemSet::from_bits(self.owner, self.bits & !other.bits)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.same_owner(other);
        bits::is_subset(self.bits, other.bits)
    }
}

/// A finite partially ordered set with labelled elements `0..n`.
///
/// The order is stored as principal down- and up-sets, one mask per element.
/// Posets are immutable once built.
#[derive(Debug, Clone)]
pub struct Poset {
    id: PosetId,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    down: Vec<Mask>,
    up: Vec<Mask>,
    limits: Limits,
}

impl PartialEq for Poset {
    /// Structural equality: same labels in the same order and the same order relation.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.down == other.down
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds the poset whose order is the reflexive-transitive closure of `covers`,
    /// given as `(lower, upper)` label pairs.
    pub fn from_covers<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Poset> {
        Self::from_covers_with(labels, covers, Limits::default())
    }

    pub fn from_covers_with<S: AsRef<str>>(
        labels: &[S],
        covers: &[(S, S)],
        limits: Limits,
    ) -> Result<Poset> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = Self::index_labels(&labels, limits)?;
        let n = labels.len();
        let mut succ = vec![0 as Mask; n];
        for (lo, hi) in covers {
            let lo = lookup(&index, lo.as_ref())?;
            let hi = lookup(&index, hi.as_ref())?;
            if lo == hi {
                return Err(Error::Cycle(vec![labels[lo].clone(), labels[lo].clone()]));
            }
            succ[lo] |= bit(hi);
        }
        if let Some(cycle) = find_cycle(&succ) {
            let mut names: Vec<String> = cycle.iter().map(|&i| labels[i].clone()).collect();
            names.push(labels[cycle[0]].clone());
            return Err(Error::Cycle(names));
        }
        // up[i] = reflexive-transitive closure of successors, via Warshall on rows.
        let mut up: Vec<Mask> = (0..n).map(|i| succ[i] | bit(i)).collect();
        for k in 0..n {
            for i in 0..n {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        Ok(Self::from_up_rows(labels, index, up, limits))
    }

    /// Builds a poset from an explicit order predicate, validating the partial-order laws.
    pub fn from_leq<S: AsRef<str>>(labels: &[S], leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        Self::from_leq_with(labels, leq, Limits::default())
    }

    pub fn from_leq_with<S: AsRef<str>>(
        labels: &[S],
        leq: impl Fn(usize, usize) -> bool,
        limits: Limits,
    ) -> Result<Poset> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let index = Self::index_labels(&labels, limits)?;
        let n = labels.len();
        let mut up = vec![0 as Mask; n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    *row |= bit(j);
                }
            }
        }
        for i in 0..n {
            if up[i] & bit(i) == 0 {
                return Err(Error::NotPartialOrder(format!("{} is not below itself", labels[i])));
            }
            for j in ones(up[i]) {
                if j != i && up[j] & bit(i) != 0 {
                    return Err(Error::NotPartialOrder(format!(
                        "{} and {} are mutually below each other",
                        labels[i], labels[j]
                    )));
                }
                if !bits::is_subset(up[j], up[i]) {
                    return Err(Error::NotPartialOrder(format!(
                        "not transitive at {} <= {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(Self::from_up_rows(labels, index, up, limits))
    }

    /// The `n`-element antichain labelled `a, b, c, ...` (or `x0, x1, ...` beyond 26).
    pub fn antichain(n: usize) -> Poset {
        Poset::from_leq(&default_labels(n), |i, j| i == j).expect("antichain")
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Poset {
        Poset::from_leq(&default_labels(n), |i, j| i <= j).expect("chain")
    }

    fn index_labels(labels: &[String], limits: Limits) -> Result<HashMap<String, usize>> {
        let cap = limits.max_elements.min(MAX_CARRIER);
        if labels.is_empty() {
            return Err(Error::Precondition("a poset needs at least one element".into()));
        }
        if labels.len() > cap {
            return Err(Error::TooManyElements { size: labels.len(), cap });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(index)
    }

    fn from_up_rows(labels: Vec<String>, index: HashMap<String, usize>, up: Vec<Mask>, limits: Limits) -> Poset {
        let n = labels.len();
        let mut down = vec![0 as Mask; n];
        for (i, &row) in up.iter().enumerate() {
            for j in ones(row) {
                down[j] |= bit(i);
            }
        }
        Poset { id: PosetId::fresh(), labels, index, down, up, limits }
    }

    /// The subposet induced on the elements of `keep`, with fresh identity.
    pub fn induced(&self, keep: &ElemSet) -> Result<Poset> {
        self.check(keep)?;
        let kept: Vec<usize> = keep.iter().collect();
        let labels: Vec<&str> = kept.iter().map(|&i| self.labels[i].as_str()).collect();
        Poset::from_leq_with(&labels, |a, b| self.leq(kept[a], kept[b]), self.limits)
    }

    pub fn id(&self) -> PosetId {
        self.id
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Same order and labels under different caps; the identity is kept.
    pub fn with_limits(mut self, limits: Limits) -> Poset {
        self.limits = limits;
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a] & bit(b) != 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub(crate) fn full_bits(&self) -> Mask {
        full(self.len())
    }

    pub(crate) fn down_of(&self, i: usize) -> Mask {
        self.down[i]
    }

    pub(crate) fn up_of(&self, i: usize) -> Mask {
        self.up[i]
    }

    pub(crate) fn elem(&self, bits: Mask) -> ElemSet {
        debug_assert!(bits::is_subset(bits, self.full_bits()));
        ElemSet::from_bits(self.id, bits)
    }

    /// Fails with `OwnerMismatch` when `s` does not belong to this poset.
    pub fn check(&self, s: &ElemSet) -> Result<()> {
        if s.owner != self.id || !bits::is_subset(s.bits, self.full_bits()) {
            return Err(Error::OwnerMismatch);
        }
        Ok(())
    }

    pub(crate) fn assert_owned(&self, s: &ElemSet) {
        assert!(self.check(s).is_ok(), "set does not belong to this poset");
    }

    pub fn empty_set(&self) -> ElemSet {
        self.elem(0)
    }

    pub fn full_set(&self) -> ElemSet {
        self.elem(self.full_bits())
    }

    pub fn set<I: IntoIterator<Item = usize>>(&self, elements: I) -> ElemSet {
        let mut m = 0;
        for i in elements {
            assert!(i < self.len(), "element index {i} out of range");
            m |= bit(i);
        }
        self.elem(m)
    }

    /// Builds a set from labels, failing on unknown ones.
    pub fn set_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<ElemSet> {
        let mut m = 0;
        for l in labels {
            m |= bit(lookup(&self.index, l.as_ref())?);
        }
        Ok(self.elem(m))
    }

    /// Parses a whitespace- or comma-separated list of labels.
    pub fn parse_set(&self, text: &str) -> Result<ElemSet> {
        let names: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        self.set_of(&names)
    }

    /// `p↓` as a set.
    pub fn principal_down(&self, p: usize) -> ElemSet {
        self.elem(self.down[p])
    }

    pub fn principal_up(&self, p: usize) -> ElemSet {
        self.elem(self.up[p])
    }

    pub(crate) fn down_bits(&self, s: Mask) -> Mask {
        ones(s).fold(0, |acc, i| acc | self.down[i])
    }

    pub(crate) fn up_bits(&self, s: Mask) -> Mask {
        ones(s).fold(0, |acc, i| acc | self.up[i])
    }

    pub(crate) fn is_down_bits(&self, s: Mask) -> bool {
        self.down_bits(s) == s
    }

    /// `{p : p <= s for some s in S}`.
    pub fn downclose(&self, s: &ElemSet) -> Result<ElemSet> {
        self.check(s)?;
        Ok(self.elem(self.down_bits(s.bits)))
    }

    pub fn upclose(&self, s: &ElemSet) -> Result<ElemSet> {
        self.check(s)?;
        Ok(self.elem(self.up_bits(s.bits)))
    }

    pub fn is_downset(&self, s: &ElemSet) -> Result<bool> {
        self.check(s)?;
        Ok(self.is_down_bits(s.bits))
    }

    /// Common upper bounds of `s` (all of `P` for the empty set).
    pub(crate) fn upper_bounds(&self, s: Mask) -> Mask {
        ones(s).fold(self.full_bits(), |acc, i| acc & self.up[i])
    }

    pub(crate) fn lower_bounds(&self, s: Mask) -> Mask {
        ones(s).fold(self.full_bits(), |acc, i| acc & self.down[i])
    }

    pub(crate) fn join_bits(&self, s: Mask) -> Option<usize> {
        let ub = self.upper_bounds(s);
        ones(ub).find(|&u| bits::is_subset(ub, self.up[u]))
    }

    pub(crate) fn meet_bits(&self, s: Mask) -> Option<usize> {
        let lb = self.lower_bounds(s);
        ones(lb).find(|&l| bits::is_subset(lb, self.down[l]))
    }

    /// Least upper bound of `s`, or `None` when it does not exist.
    /// The join of the empty set is the bottom element, if any.
    pub fn join(&self, s: &ElemSet) -> Result<Option<usize>> {
        self.check(s)?;
        Ok(self.join_bits(s.bits))
    }

    pub fn meet(&self, s: &ElemSet) -> Result<Option<usize>> {
        self.check(s)?;
        Ok(self.meet_bits(s.bits))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.join_bits(0)
    }

    pub fn top(&self) -> Option<usize> {
        self.meet_bits(0)
    }

    /// The element of `s` above every other element of `s`, if any.
    pub(crate) fn max_in(&self, s: Mask) -> Option<usize> {
        ones(s).find(|&m| bits::is_subset(s, self.down[m]))
    }

    /// The cover relation (transitive reduction) as `(lower, upper)` index pairs,
    /// sorted lexicographically.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for lo in 0..self.len() {
            for hi in ones(self.up[lo] & !bit(lo)) {
                let between = self.up[lo] & self.down[hi] & !bit(lo) & !bit(hi);
                if between == 0 {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    /// Every downset of the poset, each once, in the canonical order
    /// (by size, then by mask).
    pub fn all_downsets(&self) -> Result<Vec<ElemSet>> {
        Ok(self.downsets_bits()?.into_iter().map(|m| self.elem(m)).collect())
    }

    pub(crate) fn downsets_bits(&self) -> Result<Vec<Mask>> {
        let cap = self.limits.max_downsets;
        // Elements with fewer predecessors first: a linear extension.
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.down[i].count_ones(), i));
        let mut out = Vec::new();
        let mut stack = vec![(0usize, 0 as Mask)];
        while let Some((k, cur)) = stack.pop() {
            if k == order.len() {
                if out.len() == cap {
                    return Err(Error::CapExceeded { what: "downset count", cap });
                }
                out.push(cur);
                continue;
            }
            let e = order[k];
            stack.push((k + 1, cur));
            if bits::is_subset(self.down[e] & !bit(e), cur) {
                stack.push((k + 1, cur | bit(e)));
            }
        }
        out.sort_by_key(|&m| bits::canon_key(m));
        Ok(out)
    }

    /// Renders a set as `{a,b,c}` in index order.
    pub fn format_set(&self, s: &ElemSet) -> String {
        self.format_bits(s.bits)
    }

    pub(crate) fn format_bits(&self, s: Mask) -> String {
        let names: Vec<&str> = ones(s).map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl FiniteOrder for Poset {
    fn size(&self) -> usize {
        self.len()
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        Poset::leq(self, a, b)
    }

    fn element_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    fn join_of(&self, elems: &[usize]) -> Option<usize> {
        self.join_bits(elems.iter().fold(0, |m, &i| m | bit(i)))
    }

    fn meet_of(&self, elems: &[usize]) -> Option<usize> {
        self.meet_bits(elems.iter().fold(0, |m, &i| m | bit(i)))
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elements: {}", self.labels.join(" "))?;
        for (lo, hi) in self.covers() {
            write!(f, "\ncover: {} {}", self.labels[lo], self.labels[hi])?;
        }
        Ok(())
    }
}

fn lookup(index: &HashMap<String, usize>, label: &str) -> Result<usize> {
    index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

/// Finds a directed cycle in the successor graph, returned as a vertex sequence.
fn find_cycle(succ: &[Mask]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // Iterative DFS: (vertex, remaining successors).
        let mut stack = vec![(root, succ[root])];
        mark[root] = Mark::Active;
        while let Some(&mut (v, ref mut rest)) = stack.last_mut() {
            if *rest == 0 {
                mark[v] = Mark::Done;
                stack.pop();
                continue;
            }
            let w = rest.trailing_zeros() as usize;
            *rest &= *rest - 1;
            match mark[w] {
                Mark::New => {
                    parent[w] = v;
                    mark[w] = Mark::Active;
                    stack.push((w, succ[w]));
                }
                Mark::Active => {
                    let mut cycle = vec![v];
                    let mut u = v;
                    while u != w {
                        u = parent[u];
                        cycle.push(u);
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                Mark::Done => {}
            }
        }
    }
    None
}
