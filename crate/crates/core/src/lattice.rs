//! Finite orders and lattices given by tables, with the classical law checks:
//! distributivity, modularity, bounded `(m,k)`-distributivity, join-irreducibles
//! and the Birkhoff representation.

use crate::bits::{bit, Mask};
use crate::error::{Error, Result};
use crate::poset::{ElemSet, Poset};

/// A finite partial order on indices `0..size()`.
pub trait FiniteOrder {
    fn size(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn element_label(&self, i: usize) -> String;

    /// Least upper bound of `elems`, if it exists.
    fn join_of(&self, elems: &[usize]) -> Option<usize> {
        let ub: Vec<usize> = (0..self.size()).filter(|&u| elems.iter().all(|&e| self.leq(e, u))).collect();
        ub.iter().copied().find(|&u| ub.iter().all(|&v| self.leq(u, v)))
    }

    fn meet_of(&self, elems: &[usize]) -> Option<usize> {
        let lb: Vec<usize> = (0..self.size()).filter(|&l| elems.iter().all(|&e| self.leq(l, e))).collect();
        lb.iter().copied().find(|&l| lb.iter().all(|&v| self.leq(v, l)))
    }
}

/// A finite lattice: every pair has a join and a meet, and there are bounds.
pub trait FiniteLattice: FiniteOrder {
    fn join(&self, a: usize, b: usize) -> usize;
    fn meet(&self, a: usize, b: usize) -> usize;
    fn bottom(&self) -> usize;
    fn top(&self) -> usize;

    fn join_all<I: IntoIterator<Item = usize>>(&self, elems: I) -> usize
    where
        Self: Sized,
    {
        elems.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    fn meet_all<I: IntoIterator<Item = usize>>(&self, elems: I) -> usize
    where
        Self: Sized,
    {
        elems.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }
}

/// A lattice stored as explicit order, join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLattice {
    labels: Vec<String>,
    leq: Vec<bool>,
    join: Vec<u32>,
    meet: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl TableLattice {
    /// Tabulates an order, failing if some pair lacks a join or a meet.
    pub fn from_order<O: FiniteOrder + ?Sized>(order: &O) -> Result<TableLattice> {
        let n = order.size();
        if n == 0 {
            return Err(Error::NotALattice("empty order".into()));
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = order.leq(a, b);
            }
        }
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let j = least(n, &leq, |u| leq[a * n + u] && leq[b * n + u]).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "{} and {} have no join",
                        order.element_label(a),
                        order.element_label(b)
                    ))
                })?;
                let m = greatest(n, &leq, |l| leq[l * n + a] && leq[l * n + b]).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "{} and {} have no meet",
                        order.element_label(a),
                        order.element_label(b)
                    ))
                })?;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        let bottom = least(n, &leq, |_| true).ok_or_else(|| Error::NotALattice("no bottom".into()))?;
        let top = greatest(n, &leq, |_| true).ok_or_else(|| Error::NotALattice("no top".into()))?;
        let labels = (0..n).map(|i| order.element_label(i)).collect();
        Ok(TableLattice { labels, leq, join, meet, bottom, top })
    }

    /// Tabulates a lattice whose operations are already available.
    pub fn from_lattice<L: FiniteLattice + ?Sized>(lat: &L) -> TableLattice {
        let n = lat.size();
        let mut leq = vec![false; n * n];
        let mut join = vec![0u32; n * n];
        let mut meet = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = lat.leq(a, b);
            }
            for b in a..n {
                let j = lat.join(a, b) as u32;
                let m = lat.meet(a, b) as u32;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let labels = (0..n).map(|i| lat.element_label(i)).collect();
        TableLattice { labels, leq, join, meet, bottom: lat.bottom(), top: lat.top() }
    }

    /// The pentagon `0 < a < c < 1`, `0 < b < 1`.
    pub fn pentagon() -> TableLattice {
        let p = Poset::from_covers(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        )
        .expect("pentagon");
        TableLattice::from_order(&p).expect("pentagon is a lattice")
    }

    /// The diamond with three atoms.
    pub fn diamond() -> TableLattice {
        let p = Poset::from_covers(
            &["0", "x", "y", "z", "1"],
            &[("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")],
        )
        .expect("diamond");
        TableLattice::from_order(&p).expect("diamond is a lattice")
    }

    /// The powerset of an `k`-element set, ordered by inclusion.
    pub fn powerset(k: usize) -> TableLattice {
        let labels: Vec<String> = (0..1usize << k).map(|m| format!("s{m}")).collect();
        let p = Poset::from_leq_with(&labels, |a, b| a & !b == 0, crate::poset::Limits {
            max_elements: 64,
            ..Default::default()
        })
        .expect("powerset");
        TableLattice::from_order(&p).expect("powerset is a lattice")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn least(n: usize, leq: &[bool], member: impl Fn(usize) -> bool) -> Option<usize> {
    let cands: Vec<usize> = (0..n).filter(|&u| member(u)).collect();
    cands.iter().copied().find(|&u| cands.iter().all(|&v| leq[u * n + v]))
}

fn greatest(n: usize, leq: &[bool], member: impl Fn(usize) -> bool) -> Option<usize> {
    let cands: Vec<usize> = (0..n).filter(|&u| member(u)).collect();
    cands.iter().copied().find(|&u| cands.iter().all(|&v| leq[v * n + u]))
}

impl FiniteOrder for TableLattice {
    fn size(&self) -> usize {
        self.labels.len()
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    fn element_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    fn join_of(&self, elems: &[usize]) -> Option<usize> {
        Some(self.join_all(elems.iter().copied()))
    }

    fn meet_of(&self, elems: &[usize]) -> Option<usize> {
        Some(self.meet_all(elems.iter().copied()))
    }
}

impl FiniteLattice for TableLattice {
    fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    fn bottom(&self) -> usize {
        self.bottom
    }

    fn top(&self) -> usize {
        self.top
    }
}

/// `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` for all triples.
pub fn is_distributive<L: FiniteLattice>(lat: &L) -> bool {
    distributivity_witness(lat).is_none()
}

pub fn distributivity_witness<L: FiniteLattice>(lat: &L) -> Option<(usize, usize, usize)> {
    let n = lat.size();
    for x in 0..n {
        for y in 0..n {
            for z in y..n {
                let lhs = lat.meet(x, lat.join(y, z));
                let rhs = lat.join(lat.meet(x, y), lat.meet(x, z));
                if lhs != rhs {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// `x ≤ z ⟹ x ∨ (y ∧ z) = (x ∨ y) ∧ z` for all triples.
pub fn is_modular<L: FiniteLattice>(lat: &L) -> bool {
    modularity_witness(lat).is_none()
}

pub fn modularity_witness<L: FiniteLattice>(lat: &L) -> Option<(usize, usize, usize)> {
    let n = lat.size();
    for x in 0..n {
        for z in 0..n {
            if !lat.leq(x, z) {
                continue;
            }
            for y in 0..n {
                if lat.join(x, lat.meet(y, z)) != lat.meet(lat.join(x, y), z) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// True when `[o, a, c, b, i]` form a pentagon sublattice with chain
/// `o < a < c < i` and side element `b`.
pub fn is_pentagon<L: FiniteLattice>(lat: &L, o: usize, a: usize, c: usize, b: usize, i: usize) -> bool {
    let els = [o, a, c, b, i];
    let distinct = (0..5).all(|p| (p + 1..5).all(|q| els[p] != els[q]));
    let lt = |x: usize, y: usize| x != y && lat.leq(x, y);
    distinct
        && lt(o, a)
        && lt(a, c)
        && lt(c, i)
        && lt(o, b)
        && lt(b, i)
        && !lat.leq(b, c)
        && !lat.leq(c, b)
        && !lat.leq(a, b)
        && !lat.leq(b, a)
        && lat.join(a, b) == i
        && lat.join(c, b) == i
        && lat.meet(a, b) == o
        && lat.meet(c, b) == o
}

/// Elements that are not the join of the elements strictly below them.
pub fn join_irreducibles<L: FiniteLattice>(lat: &L) -> Vec<usize> {
    (0..lat.size())
        .filter(|&x| {
            let below = (0..lat.size()).filter(|&y| y != x && lat.leq(y, x));
            x != lat.bottom() && lat.join_all(below) != x
        })
        .collect()
}

/// Join-irreducible elements of a poset that is a lattice.
pub fn poset_join_irreducibles(p: &Poset) -> Result<ElemSet> {
    let lat = TableLattice::from_order(p)?;
    Ok(p.set(join_irreducibles(&lat)))
}

/// Verifies `L ≅ A(J(L))` through `x ↦ {j ∈ J(L) : j ≤ x}`.
pub fn birkhoff_check<L: FiniteLattice>(lat: &L) -> Result<bool> {
    if !is_distributive(lat) {
        return Err(Error::NotDistributive);
    }
    let ji = join_irreducibles(lat);
    if ji.len() > crate::poset::MAX_CARRIER {
        return Err(Error::CapExceeded { what: "join-irreducible count", cap: crate::poset::MAX_CARRIER });
    }
    if ji.is_empty() {
        // One-element lattice: A(∅) has exactly one downset.
        return Ok(lat.size() == 1);
    }
    let labels: Vec<String> = ji.iter().map(|&j| lat.element_label(j)).collect();
    let limits = crate::poset::Limits { max_elements: crate::poset::MAX_CARRIER, ..Default::default() };
    let jposet = Poset::from_leq_with(&labels, |a, b| lat.leq(ji[a], ji[b]), limits)?;
    let downsets = jposet.downsets_bits()?;
    let image: Vec<Mask> = (0..lat.size())
        .map(|x| {
            ji.iter()
                .enumerate()
                .filter(|&(_, &j)| lat.leq(j, x))
                .fold(0, |m, (k, _)| m | bit(k))
        })
        .collect();
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != lat.size() || downsets.len() != lat.size() {
        return Ok(false);
    }
    if !image.iter().all(|&m| jposet.is_down_bits(m)) {
        return Ok(false);
    }
    let n = lat.size();
    for x in 0..n {
        for y in 0..n {
            if lat.leq(x, y) != (image[x] & !image[y] == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the `(m,k)`-distributive law `⋀_I ⋁_{J_i} x_ij = ⋁_f ⋀_I x_{i f(i)}` over all
/// index families with `1 ≤ |I| < m` and `1 ≤ |J_i| < k`.
///
/// The families `{x_ij : j}` range over antichains: replacing a family by its
/// maximal elements changes neither side. `cap` bounds the number of tuples.
pub fn distributivity_mk<L: FiniteLattice>(lat: &L, m: usize, k: usize, cap: usize) -> Result<bool> {
    if m < 2 || k < 2 {
        return Ok(true);
    }
    let antichains = bounded_antichains(lat, k - 1, cap)?;
    let a = antichains.len();
    // Multisets of size r from a antichains: C(a + r - 1, r).
    let mut total: u128 = 0;
    for r in 1..m {
        total += binomial((a + r - 1) as u128, r as u128);
        if total > cap as u128 {
            return Err(Error::CapExceeded { what: "(m,k)-distributivity tuple count", cap });
        }
    }
    let joins: Vec<usize> = antichains.iter().map(|ys| lat.join_all(ys.iter().copied())).collect();
    for r in 2..m {
        let mut idx = vec![0usize; r];
        loop {
            let lhs = lat.meet_all(idx.iter().map(|&i| joins[i]));
            let families: Vec<&Vec<usize>> = idx.iter().map(|&i| &antichains[i]).collect();
            if lhs != choice_join(lat, &families) {
                return Ok(false);
            }
            // Next nondecreasing index tuple.
            let mut p = r;
            while p > 0 && idx[p - 1] == a - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            let v = idx[p - 1];
            for q in idx.iter_mut().skip(p) {
                *q = v;
            }
        }
    }
    Ok(true)
}

fn choice_join<L: FiniteLattice>(lat: &L, families: &[&Vec<usize>]) -> usize {
    let mut acc = lat.bottom();
    let mut pick = vec![0usize; families.len()];
    loop {
        let meet = lat.meet_all(pick.iter().zip(families).map(|(&j, fam)| fam[j]));
        acc = lat.join(acc, meet);
        let mut p = 0;
        loop {
            if p == pick.len() {
                return acc;
            }
            pick[p] += 1;
            if pick[p] < families[p].len() {
                break;
            }
            pick[p] = 0;
            p += 1;
        }
    }
}

fn binomial(n: u128, r: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn bounded_antichains<L: FiniteLattice>(lat: &L, max_len: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = lat.size();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<L: FiniteLattice>(
        lat: &L,
        start: usize,
        max_len: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        for x in start..lat.size() {
            if cur.iter().any(|&y| lat.leq(x, y) || lat.leq(y, x)) {
                continue;
            }
            cur.push(x);
            if out.len() >= cap {
                return Err(Error::CapExceeded { what: "antichain count", cap });
            }
            out.push(cur.clone());
            if cur.len() < max_len {
                rec(lat, x + 1, max_len, cap, cur, out)?;
            }
            cur.pop();
        }
        Ok(())
    }
    if n > 0 {
        rec(lat, 0, max_len, cap, &mut cur, &mut out)?;
    }
    Ok(out)
}
