//! All posets of a given small size, one per isomorphism class.

use std::collections::BTreeSet;

use crate::bits::{bit, Mask};
use crate::error::{Error, Result};
use crate::poset::{default_labels, Poset};

/// Largest size accepted by [`all_posets`].
pub const MAX_ENUMERATION: usize = 6;

/// One poset per isomorphism class on `n` elements, in a fixed order.
///
/// Every finite poset has a labelling whose order extends `0 < 1 < … < n-1`,
/// so it suffices to close every set of pairs `i < j` and keep the
/// canonical form of each result.
pub fn all_posets(n: usize) -> Result<Vec<Poset>> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::CapExceeded { what: "poset enumeration size", cap: MAX_ENUMERATION });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for pick in 0u64..1 << pairs.len() {
        let mut up: Vec<Mask> = (0..n).map(bit).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if pick & bit(k) != 0 {
                up[i] |= bit(j);
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                if up[i] & bit(j) != 0 {
                    up[i] |= up[j];
                }
            }
        }
        let key = canonical_bits(&up, &perms);
        if seen.insert(key) {
            out.push(up);
        }
    }
    out.sort_by_key(|up| canonical_bits(up, &perms));
    out.into_iter()
        .map(|up| Poset::from_leq(&default_labels(n), |a, b| up[a] & bit(b) != 0))
        .collect()
}

/// The lexicographically least relation matrix over all relabellings.
pub fn canonical_form_of(p: &Poset) -> Vec<bool> {
    let n = p.len();
    let up: Vec<Mask> = (0..n).map(|i| p.up_of(i)).collect();
    canonical_bits(&up, &permutations(n))
}

fn canonical_bits(up: &[Mask], perms: &[Vec<usize>]) -> Vec<bool> {
    let n = up.len();
    perms
        .iter()
        .map(|perm| {
            let mut m = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    m.push(up[perm[a]] & bit(perm[b]) != 0);
                }
            }
            m
        })
        .min()
        .unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}
