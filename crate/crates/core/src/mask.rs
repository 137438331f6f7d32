//! Subsets of a ground set `0..n` as fixed-width bit fields.

use std::fmt;

use crate::error::{Error, Result};

const WORDS: usize = 4;

/// Largest ground set a [`SubsetMask`] can describe.
pub const MAX_GROUND: usize = 64 * WORDS;

/// Largest ground set for which all `2^n` subsets may be enumerated.
pub const MAX_ENUMERABLE_GROUND: usize = 20;

/// A subset of `0..ground_size`.
///
/// Bits at or above `ground_size` are always clear.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: [u64; WORDS],
    ground: u16,
}

impl SubsetMask {
    pub fn empty(ground_size: usize) -> Self {
        assert!(
            ground_size <= MAX_GROUND,
            "ground size {ground_size} exceeds {MAX_GROUND}"
        );
        Self {
            bits: [0; WORDS],
            ground: ground_size as u16,
        }
    }

    pub fn full(ground_size: usize) -> Self {
        let mut m = Self::empty(ground_size);
        for i in 0..ground_size {
            m.bits[i / 64] |= 1 << (i % 64);
        }
        m
    }

    pub fn singleton(ground_size: usize, i: usize) -> Self {
        let mut m = Self::empty(ground_size);
        m.insert(i);
        m
    }

    /// Builds a mask from element indices, rejecting indices outside the ground set.
    pub fn from_indices<I: IntoIterator<Item = usize>>(ground_size: usize, indices: I) -> Result<Self> {
        if ground_size > MAX_GROUND {
            return Err(Error::SizeLimit {
                what: "ground size",
                actual: ground_size,
                limit: MAX_GROUND,
            });
        }
        let mut m = Self::empty(ground_size);
        for i in indices {
            if i >= ground_size {
                return Err(Error::Range(format!(
                    "index {i} outside ground set of size {ground_size}"
                )));
            }
            m.insert(i);
        }
        Ok(m)
    }

    /// The subset whose characteristic vector is the binary expansion of `index`.
    /// Requires `ground_size <= 64`.
    pub fn from_index(ground_size: usize, index: u64) -> Self {
        assert!(ground_size <= 64);
        assert!(
            ground_size == 64 || index >> ground_size == 0,
            "index has bits above ground"
        );
        let mut m = Self::empty(ground_size);
        m.bits[0] = index;
        m
    }

    /// Inverse of [`from_index`](Self::from_index).
    pub fn index(&self) -> u64 {
        debug_assert!(self.ground <= 64);
        self.bits[0]
    }

    pub fn ground_size(&self) -> usize {
        self.ground as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.ground_size() && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.ground_size(), "index {i} outside ground {}", self.ground);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.ground_size() {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::full(self.ground_size()).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    /// Lowest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..WORDS).flat_map(move |k| {
            let mut w = self.bits[k];
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Reinterprets the elements `offset..offset+len` as a mask over `0..len`.
    pub fn restrict(&self, offset: usize, len: usize) -> Self {
        let mut m = Self::empty(len);
        for i in self.iter() {
            if i >= offset && i < offset + len {
                m.insert(i - offset);
            }
        }
        m
    }

    /// Embeds this mask into a larger ground set, shifting every element by `offset`.
    pub fn embed(&self, offset: usize, ground_size: usize) -> Self {
        let mut m = Self::empty(ground_size);
        for i in self.iter() {
            m.insert(i + offset);
        }
        m
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.ground, other.ground, "mask ground mismatch");
        let mut bits = [0; WORDS];
        for (k, b) in bits.iter_mut().enumerate() {
            *b = f(self.bits[k], other.bits[k]);
        }
        Self {
            bits,
            ground: self.ground.max(other.ground),
        }
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates every subset of `0..ground_size` in ascending index order.
pub fn all_subsets(ground_size: usize) -> Result<impl Iterator<Item = SubsetMask>> {
    enumerable(ground_size)?;
    Ok((0..1u64 << ground_size).map(move |ix| SubsetMask::from_index(ground_size, ix)))
}

/// Iterates every subset of `mask` (including `∅` and `mask`), ascending by index.
/// Requires `mask.ground_size() <= 64`.
pub fn subsets_of(mask: SubsetMask) -> impl Iterator<Item = SubsetMask> {
    let n = mask.ground_size();
    let full = mask.index();
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == full {
            None
        } else {
            Some((cur.wrapping_sub(full)) & full)
        };
        Some(SubsetMask::from_index(n, cur))
    })
}

pub(crate) fn enumerable(ground_size: usize) -> Result<()> {
    crate::error::size_limit("ground size for subset enumeration", ground_size, MAX_ENUMERABLE_GROUND)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_operations() {
        let a = SubsetMask::from_indices(70, [0, 3, 65]).unwrap();
        let b = SubsetMask::from_indices(70, [3, 69]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![0, 3, 65, 69]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 65]);
        assert_eq!(a.complement().len(), 67);
        assert_eq!(a.first(), Some(0));
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&b));
    }

    #[test]
    fn out_of_range_index_rejected() {
        assert!(SubsetMask::from_indices(3, [3]).is_err());
        assert!(SubsetMask::from_indices(MAX_GROUND + 1, []).is_err());
    }

    #[test]
    fn restrict_and_embed_are_inverse() {
        let m = SubsetMask::from_indices(10, [4, 5, 8]).unwrap();
        let local = m.restrict(4, 3);
        assert_eq!(local.to_vec(), vec![0, 1]);
        assert_eq!(local.embed(4, 10).to_vec(), vec![4, 5]);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(all_subsets(3).unwrap().count(), 8);
        assert!(all_subsets(21).is_err());
        let m = SubsetMask::from_indices(5, [1, 3, 4]).unwrap();
        let subs: Vec<_> = subsets_of(m).map(|s| s.index()).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|&s| s & !m.index() == 0));
    }
}
