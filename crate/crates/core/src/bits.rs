//! Subsets of `{1..n}` as bitmasks. Index `i` lives in bit `i - 1`.

pub const MAX_INDEX: usize = 32;

#[inline]
pub fn bit(i: usize) -> u32 {
    debug_assert!((1..=MAX_INDEX).contains(&i));
    1u32 << (i - 1)
}

#[inline]
pub fn contains(mask: u32, i: usize) -> bool {
    mask & bit(i) != 0
}

/// Number of elements of `mask` strictly below `i`.
#[inline]
pub fn count_below(mask: u32, i: usize) -> u32 {
    (mask & (bit(i) - 1)).count_ones()
}

/// Number of elements of `mask` strictly above `i`.
#[inline]
pub fn count_above(mask: u32, i: usize) -> u32 {
    if i >= MAX_INDEX {
        0
    } else {
        (mask >> i).count_ones()
    }
}

#[inline]
pub fn full(n: usize) -> u32 {
    if n == 0 {
        0
    } else if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Ascending 1-based indices of the set.
pub fn indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> u32 {
    it.into_iter().fold(0, |m, i| m | bit(i))
}

/// Highest index in the set, or 0 for the empty set.
#[inline]
pub fn max_index(mask: u32) -> usize {
    (32 - mask.leading_zeros()) as usize
}

#[inline]
pub fn odd(k: u32) -> bool {
    k & 1 == 1
}

/// All subsets of `{1..n}` with the given parity of cardinality, in
/// increasing bitmask order.
pub fn subsets_with_parity(n: usize, odd_card: bool) -> Vec<u32> {
    (0..=full(n))
        .filter(|m| odd(m.count_ones()) == odd_card)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting() {
        let m = from_indices([1, 3, 4]);
        assert_eq!(m, 0b1101);
        assert_eq!(count_below(m, 4), 2);
        assert_eq!(count_above(m, 1), 2);
        assert_eq!(max_index(m), 4);
        assert_eq!(indices(m).collect::<Vec<_>>(), vec![1, 3, 4]);
        assert_eq!(subsets_with_parity(2, false), vec![0, 3]);
    }
}
