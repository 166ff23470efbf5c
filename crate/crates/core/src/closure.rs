//! Generated subsemigroups and exact subsemigroup search.
//!
//! Two search back ends are provided. Up to [`DEFAULT_EXHAUSTIVE_CAP`]
//! elements every subset is tested directly. Above it, closed sets are
//! generated with a close-by-one walk over the closure lattice: each closed
//! set is reached exactly once from its lectically canonical parent, and a
//! branch is cut as soon as its closure exceeds the size of interest. Both
//! back ends are exhaustive and pick the same (bit-minimal) witnesses.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::element_set::{k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::table::MulTable;

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Subset scan up to the cap, lattice walk above it.
    #[default]
    Auto,
    /// Subset scan only; errors above the cap.
    Exhaustive,
    /// Close-by-one lattice walk at every order.
    Lattice,
}

fn check_capacity(t: &MulTable) -> Result<()> {
    if t.order() > ElementSet::CAPACITY {
        Err(Error::OrderTooLarge {
            order: t.order(),
            limit: ElementSet::CAPACITY,
        })
    } else {
        Ok(())
    }
}

fn closure_bits(t: &MulTable, seed: u64) -> u64 {
    let mut set = seed;
    let mut members: Vec<usize> = ElementSet::from_raw(t.order(), seed).iter().collect();
    let mut next = 0;
    while next < members.len() {
        let x = members[next];
        let known = members.len();
        for idx in 0..known {
            let y = members[idx];
            for p in [t.mul(x, y), t.mul(y, x)] {
                if set >> p & 1 == 0 {
                    set |= 1 << p;
                    members.push(p);
                }
            }
        }
        next += 1;
    }
    set
}

fn is_closed_bits(t: &MulTable, set: u64) -> bool {
    let s = ElementSet::from_raw(t.order(), set);
    s.iter().all(|x| s.iter().all(|y| set >> t.mul(x, y) & 1 == 1))
}

/// The subsemigroup generated by `seed`.
pub fn closure(t: &MulTable, seed: ElementSet) -> Result<ElementSet> {
    check_capacity(t)?;
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    if let Some(e) = seed.iter().find(|&e| e >= t.order()) {
        return Err(Error::ElementOutOfRange(e, t.order()));
    }
    Ok(ElementSet::from_raw(t.order(), closure_bits(t, seed.bits())))
}

/// Whether `set` is closed under the product.
pub fn is_closed(t: &MulTable, set: ElementSet) -> bool {
    t.order() <= ElementSet::CAPACITY && set.iter().all(|e| e < t.order()) && is_closed_bits(t, set.bits())
}

/// Close-by-one enumeration of the nonempty closed sets, skipping every
/// closed set larger than `limit`.
fn walk_closed_sets(t: &MulTable, limit: usize, visit: &mut impl FnMut(u64)) {
    fn go(t: &MulTable, current: u64, start: usize, limit: usize, visit: &mut impl FnMut(u64)) {
        for i in start..t.order() {
            if current >> i & 1 == 1 {
                continue;
            }
            let next = closure_bits(t, current | 1 << i);
            let below = (1u64 << i) - 1;
            if next & below != current & below {
                continue;
            }
            if next.count_ones() as usize > limit {
                continue;
            }
            visit(next);
            go(t, next, i + 1, limit, visit);
        }
    }
    go(t, 0, 0, limit, visit);
}

fn use_exhaustive(t: &MulTable, strategy: Strategy) -> Result<bool> {
    let n = t.order();
    match strategy {
        Strategy::Auto => Ok(n <= DEFAULT_EXHAUSTIVE_CAP),
        Strategy::Lattice => Ok(false),
        Strategy::Exhaustive if n <= DEFAULT_EXHAUSTIVE_CAP => Ok(true),
        Strategy::Exhaustive => Err(Error::OrderTooLargeForExhaustive {
            order: n,
            cap: DEFAULT_EXHAUSTIVE_CAP,
        }),
    }
}

/// A subsemigroup with exactly `k` elements, the least one as a bit pattern.
pub fn has_subsemigroup_of_order(t: &MulTable, k: usize) -> Result<Option<ElementSet>> {
    has_subsemigroup_of_order_with(t, k, Strategy::Auto)
}

pub fn has_subsemigroup_of_order_with(
    t: &MulTable,
    k: usize,
    strategy: Strategy,
) -> Result<Option<ElementSet>> {
    check_capacity(t)?;
    let n = t.order();
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            range: format!("1..={}", n),
        });
    }
    if k == n {
        return Ok(Some(ElementSet::full(n)?));
    }
    let found = if use_exhaustive(t, strategy)? {
        k_subsets(n, k).find(|&bits| is_closed_bits(t, bits))
    } else {
        let mut best: Option<u64> = None;
        walk_closed_sets(t, k, &mut |bits| {
            if bits.count_ones() as usize == k && best.map_or(true, |b| bits < b) {
                best = Some(bits);
            }
        });
        best
    };
    Ok(found.map(|bits| ElementSet::from_raw(n, bits)))
}

/// Every subsemigroup, ordered by (cardinality, bit pattern).
pub fn all_subsemigroups(t: &MulTable) -> Result<Vec<ElementSet>> {
    all_subsemigroups_with(t, Strategy::Exhaustive)
}

pub fn all_subsemigroups_with(t: &MulTable, strategy: Strategy) -> Result<Vec<ElementSet>> {
    check_capacity(t)?;
    let n = t.order();
    let mut found: Vec<u64> = Vec::new();
    if use_exhaustive(t, strategy)? {
        for bits in 1..(1u64 << n) {
            if is_closed_bits(t, bits) {
                found.push(bits);
            }
        }
    } else {
        walk_closed_sets(t, n, &mut |bits| found.push(bits));
    }
    found.sort_by_key(|&b| (b.count_ones(), b));
    Ok(found.into_iter().map(|b| ElementSet::from_raw(n, b)).collect())
}

/// The set of orders realized by subsemigroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub achievable: BTreeSet<usize>,
    pub ambient_order: usize,
}

impl Spectrum {
    pub fn contains(&self, k: usize) -> bool {
        self.achievable.contains(&k)
    }

    pub fn excludes(&self, k: usize) -> bool {
        !self.contains(k)
    }

    pub fn missing(&self) -> Vec<usize> {
        (1..=self.ambient_order)
            .filter(|k| !self.achievable.contains(k))
            .collect()
    }
}

impl std::fmt::Display for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.achievable.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn spectrum(t: &MulTable) -> Result<Spectrum> {
    spectrum_with(t, Strategy::Exhaustive)
}

pub fn spectrum_with(t: &MulTable, strategy: Strategy) -> Result<Spectrum> {
    check_capacity(t)?;
    let n = t.order();
    let mut achievable = BTreeSet::new();
    if use_exhaustive(t, strategy)? {
        for bits in 1..(1u64 << n) {
            if is_closed_bits(t, bits) {
                achievable.insert(bits.count_ones() as usize);
            }
        }
    } else {
        walk_closed_sets(t, n, &mut |bits| {
            achievable.insert(bits.count_ones() as usize);
        });
    }
    Ok(Spectrum {
        achievable,
        ambient_order: n,
    })
}
