//! Bitmask helpers. Subsets of a carrier with at most 64 elements are stored
//! as `u64` masks, bit `i` standing for element `i`.

pub(crate) type Mask = u64;

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u64 << i
}

#[inline]
pub(crate) fn full(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub(crate) fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// Iterates the indices of the set bits in increasing order.
#[derive(Clone, Copy)]
pub(crate) struct Ones(Mask);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

#[inline]
pub(crate) fn ones(m: Mask) -> Ones {
    Ones(m)
}

/// Canonical ordering key: by cardinality, then by mask value.
#[inline]
pub(crate) fn canon_key(m: Mask) -> (u32, Mask) {
    (m.count_ones(), m)
}

/// Iterates every submask of `m` (including 0 and `m` itself).
pub(crate) fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut cur = Some(m);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == 0 { None } else { Some((s - 1) & m) };
        Some(s)
    })
}
