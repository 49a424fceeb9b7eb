//! Bitmask helpers for subsets of a ground set `{0, …, n−1}`.
//!
//! Element `i` lives at bit `i`. All enumeration output in this crate is
//! sorted by the canonical order (cardinality, then mask value).

use std::cmp::Ordering;

pub fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= 63);
    (1u64 << n) - 1
}

pub fn complement(x: u64, n: usize) -> u64 {
    full_mask(n) & !x
}

pub fn contains(x: u64, i: usize) -> bool {
    x >> i & 1 == 1
}

pub fn elements(x: u64) -> Vec<usize> {
    (0..64).filter(|i| contains(x, *i)).collect()
}

pub fn from_elements<I: IntoIterator<Item = usize>>(it: I) -> u64 {
    it.into_iter().fold(0u64, |m, i| m | 1u64 << i)
}

/// Canonical order: by cardinality, then by mask value.
pub fn canonical_cmp(a: u64, b: u64) -> Ordering {
    a.count_ones().cmp(&b.count_ones()).then(a.cmp(&b))
}

pub fn sort_canonical(sets: &mut [u64]) {
    sets.sort_by(|a, b| canonical_cmp(*a, *b));
}

/// All proper non-empty subsets of `{0, …, n−1}`, in mask order.
pub fn proper_nonempty(n: usize) -> impl Iterator<Item = u64> {
    1..full_mask(n)
}

/// All submasks of `m`, including 0 and `m` itself.
pub fn submasks(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submask_enumeration_is_complete() {
        let m = 0b1011;
        let subs = submasks(m);
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s & !m == 0));
        assert_eq!(subs[0], 0);
        assert_eq!(*subs.last().unwrap(), m);
    }

    #[test]
    fn canonical_order_sorts_by_size_then_mask() {
        let mut v = vec![0b11, 0b100, 0b1, 0b110];
        sort_canonical(&mut v);
        assert_eq!(v, vec![0b1, 0b100, 0b11, 0b110]);
    }

    #[test]
    fn element_round_trip() {
        let m = from_elements([0, 2, 5]);
        assert_eq!(elements(m), vec![0, 2, 5]);
        assert_eq!(complement(m, 6), from_elements([1, 3, 4]));
    }
}
