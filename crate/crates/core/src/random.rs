//! Seeded generation of posets and join-specifications.
//!
//! The generator is SplitMix64 seeded with the raw 64-bit seed as its state,
//! so a `(seed, parameters)` pair names the same instance in any language.
//! Draws happen in a fixed order:
//!
//! * poset on `n` nodes: one draw per pair `i < j` (row-major); the pair is
//!   an edge `i < j` when `draw · den < num · 2^64`; the order is the
//!   transitive closure of the edges.
//! * specification: a partial Fisher–Yates shuffle over the joinable subsets
//!   of size at least two, listed by size then by bitmask; step `i` picks
//!   `i + below(len - i)`.
//! * `below(r)` rejects draws at or above `2^64 - (2^64 mod r)` and returns
//!   the draw modulo `r`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bits::{bit, Mask};
use crate::error::{Error, Result};
use crate::joinspec::JoinSpec;
use crate::poset::{default_labels, Limits, Poset};

/// A probability `num / den` with `num ≤ den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Ratio> {
        if den == 0 || num > den {
            return Err(Error::Precondition(format!("{num}/{den} is not a probability")));
        }
        Ok(Ratio { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `draw / 2^64 < num / den`.
    pub fn accepts(&self, draw: u64) -> bool {
        (draw as u128) * (self.den as u128) < (self.num as u128) << 64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `num/den` or a decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Ratio> {
        let bad = || Error::Precondition(format!("invalid probability `{s}`"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            return Ratio::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        Ratio::new(num, den)
    }
}

/// The documented generator.
#[derive(Debug, Clone)]
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..r`.
    pub fn below(&mut self, r: u64) -> u64 {
        assert!(r > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % r + 1) % r;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % r;
            }
        }
    }

    pub fn chance(&mut self, p: Ratio) -> bool {
        p.accepts(self.next_u64())
    }
}

/// A poset on `n` nodes labelled `a, b, …` from a random DAG on pairs `i < j`.
pub fn random_poset(rng: &mut Rng, n: usize, edge_prob: Ratio) -> Result<Poset> {
    let limits = Limits::default();
    if n == 0 || n > limits.max_elements {
        return Err(Error::TooManyElements { size: n, cap: limits.max_elements });
    }
    let mut up: Vec<Mask> = (0..n).map(bit).collect();
    for (i, row) in up.iter_mut().enumerate() {
        for j in i + 1..n {
            if rng.chance(edge_prob) {
                *row |= bit(j);
            }
        }
    }
    for i in (0..n).rev() {
        let mut reach = up[i];
        for j in i + 1..n {
            if up[i] & bit(j) != 0 {
                reach |= up[j];
            }
        }
        up[i] = reach;
    }
    Poset::from_leq(&default_labels(n), |a, b| up[a] & bit(b) != 0)
}

/// `B_P` plus `k` distinct joinable subsets of size at least two (fewer when
/// not enough exist).
pub fn random_joinspec(rng: &mut Rng, p: Arc<Poset>, k: usize) -> Result<JoinSpec> {
    let mut pool: Vec<Mask> = JoinSpec::u_infty(p.clone())?
        .member_bits()
        .iter()
        .copied()
        .filter(|m| m.count_ones() >= 2)
        .collect();
    let k = k.min(pool.len());
    for i in 0..k {
        let j = i + rng.below((pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(k);
    JoinSpec::from_masks(p, pool)
}
