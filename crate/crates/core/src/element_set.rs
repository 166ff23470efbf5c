use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A subset of the elements `0..order` of a table with order at most 64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ElementSet {
    bits: u64,
    order: u8,
}

impl ElementSet {
    pub const CAPACITY: usize = 64;

    fn check_order(order: usize) -> Result<()> {
        if order > Self::CAPACITY {
            Err(Error::OrderTooLarge {
                order,
                limit: Self::CAPACITY,
            })
        } else {
            Ok(())
        }
    }

    pub fn empty(order: usize) -> Result<Self> {
        Self::check_order(order)?;
        Ok(ElementSet {
            bits: 0,
            order: order as u8,
        })
    }

    pub fn full(order: usize) -> Result<Self> {
        Self::check_order(order)?;
        Ok(ElementSet {
            bits: Self::mask(order),
            order: order as u8,
        })
    }

    pub fn from_bits(order: usize, bits: u64) -> Result<Self> {
        Self::check_order(order)?;
        if bits & !Self::mask(order) != 0 {
            return Err(Error::ElementOutOfRange(
                63 - bits.leading_zeros() as usize,
                order,
            ));
        }
        Ok(ElementSet {
            bits,
            order: order as u8,
        })
    }

    pub fn from_elements(order: usize, elems: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(order)?;
        for e in elems {
            if e >= order {
                return Err(Error::ElementOutOfRange(e, order));
            }
            s.bits |= 1 << e;
        }
        Ok(s)
    }

    #[inline]
    fn mask(order: usize) -> u64 {
        if order == 64 {
            u64::MAX
        } else {
            (1u64 << order) - 1
        }
    }

    // only called with in-range sets built by this crate
    #[inline]
    pub(crate) fn from_raw(order: usize, bits: u64) -> Self {
        ElementSet {
            bits,
            order: order as u8,
        }
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ambient_order(self) -> usize {
        self.order as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.bits >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) -> Result<()> {
        if e >= self.ambient_order() {
            return Err(Error::ElementOutOfRange(e, self.ambient_order()));
        }
        self.bits |= 1 << e;
        Ok(())
    }

    pub fn is_subset(self, other: ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: ElementSet) -> ElementSet {
        ElementSet {
            bits: self.bits | other.bits,
            order: self.order.max(other.order),
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Subsets of `0..n` with exactly `k` elements, in increasing bit order
/// (Gosper's hack). Requires `n ≤ 63`.
pub(crate) fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    debug_assert!(n < 64);
    let limit = 1u64 << n;
    let mut next = if k == 0 || k > n {
        None
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        let succ = (((r ^ cur) >> 2) / c) | r;
        next = if succ < limit { Some(succ) } else { None };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let s = ElementSet::from_elements(5, [4, 0, 2]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![0, 2, 4]);
        assert_eq!(s.to_string(), "{0,2,4}");
        assert!(s.contains(2) && !s.contains(3));
        assert!(ElementSet::from_elements(5, [5]).is_err());
        assert!(ElementSet::from_bits(3, 0b1000).is_err());
        assert!(ElementSet::empty(65).is_err());
        assert_eq!(ElementSet::full(64).unwrap().len(), 64);
    }

    #[test]
    fn gosper_counts() {
        assert_eq!(k_subsets(6, 3).count(), 20);
        assert_eq!(k_subsets(4, 4).collect::<Vec<_>>(), vec![0b1111]);
        assert_eq!(k_subsets(4, 0).count(), 0);
        assert_eq!(k_subsets(3, 5).count(), 0);
        let v: Vec<u64> = k_subsets(5, 2).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(v.iter().all(|b| b.count_ones() == 2));
    }
}
