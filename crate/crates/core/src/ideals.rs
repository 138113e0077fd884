//! The lattice of closed sets of a closure operator; for `Γ_U` this is `I_U`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::{self, Mask};
use crate::closure::ClosureRepr;
use crate::error::{Error, Result};
use crate::joinspec::JoinSpec;
use crate::lattice::{FiniteLattice, FiniteOrder, TableLattice};
use crate::poset::{ElemSet, Poset};

/// Closed sets ordered by inclusion: meet is intersection, join is the
/// closure of the union.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    repr: ClosureRepr,
    sets: Vec<Mask>,
    index: HashMap<Mask, usize>,
}

impl IdealLattice {
    /// Enumerates `I_U`.
    pub fn new(spec: &JoinSpec) -> Result<IdealLattice> {
        Self::from_closure(ClosureRepr::Spec(spec.clone()))
    }

    pub fn from_closure(repr: ClosureRepr) -> Result<IdealLattice> {
        let sets = repr.closed_bits()?;
        let index = sets.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(IdealLattice { repr, sets, index })
    }

    pub fn closure(&self) -> &ClosureRepr {
        &self.repr
    }

    pub fn spec(&self) -> Option<&JoinSpec> {
        self.repr.spec()
    }

    pub fn poset(&self) -> &Poset {
        self.repr.poset()
    }

    pub fn poset_arc(&self) -> &Arc<Poset> {
        self.repr.poset_arc()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn ideal(&self, i: usize) -> ElemSet {
        self.poset().elem(self.sets[i])
    }

    pub(crate) fn ideal_bits(&self, i: usize) -> Mask {
        self.sets[i]
    }

    pub fn ideals(&self) -> Vec<ElemSet> {
        self.sets.iter().map(|&m| self.poset().elem(m)).collect()
    }

    pub fn index_of(&self, s: &ElemSet) -> Option<usize> {
        self.poset().check(s).ok()?;
        self.index_of_bits(s.bits())
    }

    pub(crate) fn index_of_bits(&self, m: Mask) -> Option<usize> {
        self.index.get(&m).copied()
    }

    /// Index of the smallest closed set containing `m`.
    pub(crate) fn close_index(&self, m: Mask) -> usize {
        let c = self.repr.close_bits(m);
        self.index[&c]
    }

    /// `η(p) = p↓`.
    pub fn eta(&self, p: usize) -> usize {
        self.close_index(self.poset().down_of(p))
    }

    pub fn eta_all(&self) -> Vec<usize> {
        (0..self.poset().len()).map(|p| self.eta(p)).collect()
    }

    /// Tabulates the lattice operations, subject to the lattice-check cap.
    pub fn to_table(&self) -> Result<TableLattice> {
        let cap = self.poset().limits().max_lattice_checks;
        if self.len() > cap {
            return Err(Error::CapExceeded { what: "ideal lattice size for table checks", cap });
        }
        Ok(TableLattice::from_lattice(self))
    }

    /// Pairs `(lower, upper)` of the covering relation.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !bits::is_subset(self.sets[a], self.sets[b]) {
                    continue;
                }
                let between = (0..n).any(|c| {
                    c != a
                        && c != b
                        && bits::is_subset(self.sets[a], self.sets[c])
                        && bits::is_subset(self.sets[c], self.sets[b])
                });
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

impl FiniteOrder for IdealLattice {
    fn size(&self) -> usize {
        self.len()
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        bits::is_subset(self.sets[a], self.sets[b])
    }

    fn element_label(&self, i: usize) -> String {
        self.poset().format_bits(self.sets[i])
    }

    fn join_of(&self, elems: &[usize]) -> Option<usize> {
        Some(self.close_index(elems.iter().fold(0, |m, &i| m | self.sets[i])))
    }

    fn meet_of(&self, elems: &[usize]) -> Option<usize> {
        Some(self.close_index(elems.iter().fold(self.poset().full_bits(), |m, &i| m & self.sets[i])))
    }
}

impl FiniteLattice for IdealLattice {
    fn join(&self, a: usize, b: usize) -> usize {
        self.close_index(self.sets[a] | self.sets[b])
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        self.close_index(self.sets[a] & self.sets[b])
    }

    fn bottom(&self) -> usize {
        0
    }

    fn top(&self) -> usize {
        self.len() - 1
    }
}
