//! Independent reference implementations used as oracles.
//!
//! Nothing here calls into the search, closure or enumeration code of the
//! library; only `MulTable` is shared as a container.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rand::Rng;
use subsemi::table::parse_sgt_many;
use subsemi::MulTable;

pub const CORPUS: &str = include_str!("../corpus/small.sgt");

pub fn corpus() -> Vec<MulTable> {
    parse_sgt_many(CORPUS).expect("corpus parses")
}

pub fn op(t: &MulTable) -> Vec<Vec<usize>> {
    t.rows().map(|r| r.iter().map(|&x| x as usize).collect()).collect()
}

pub fn naive_associative(m: &[Vec<usize>]) -> bool {
    let n = m.len();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| m[m[x][y]][z] == m[x][m[y][z]])))
}

/// `x^r` by repeated multiplication.
pub fn naive_power(m: &[Vec<usize>], x: usize, r: u32) -> usize {
    (1..r).fold(x, |acc, _| m[acc][x])
}

pub fn naive_exponent(m: &[Vec<usize>], r: u32) -> bool {
    (0..m.len()).all(|x| naive_power(m, x, r) == x)
}

/// Membership-vector closedness check.
pub fn naive_closed(m: &[Vec<usize>], members: &[bool]) -> bool {
    let n = m.len();
    (0..n).all(|x| !members[x] || (0..n).all(|y| !members[y] || members[m[x][y]]))
}

/// Every nonempty subset tried in turn.
pub fn naive_spectrum(m: &[Vec<usize>]) -> BTreeSet<usize> {
    let n = m.len();
    let mut out = BTreeSet::new();
    for mask in 1u64..(1u64 << n) {
        let members: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if naive_closed(m, &members) {
            out.insert(mask.count_ones() as usize);
        }
    }
    out
}

pub fn naive_subsemigroup_count(m: &[Vec<usize>]) -> usize {
    let n = m.len();
    (1u64..(1u64 << n))
        .filter(|mask| {
            let members: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            naive_closed(m, &members)
        })
        .count()
}

/// Table with elements renamed by `p`: the new product of `p[x]` and `p[y]`
/// is `p[m[x][y]]`.
pub fn naive_relabel(m: &[Vec<usize>], p: &[usize]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut out = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            out[p[x]][p[y]] = p[m[x][y]];
        }
    }
    out
}

/// Smallest row-major entry vector over all relabelings.
pub fn naive_canonical_key(m: &[Vec<usize>]) -> Vec<usize> {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| naive_relabel(m, &p).concat())
        .min()
        .expect("at least one permutation")
}

pub fn naive_automorphisms(m: &[Vec<usize>]) -> usize {
    let n = m.len();
    (0..n).permutations(n).filter(|p| naive_relabel(m, p) == m).count()
}

/// Every table of order `n` (there are `n^(n*n)` of them).
pub fn all_tables(n: usize) -> impl Iterator<Item = Vec<Vec<usize>>> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    (0..total).map(move |mut code| {
        let mut flat = vec![0; cells];
        for c in flat.iter_mut() {
            *c = code % n;
            code /= n;
        }
        flat.chunks(n).map(|r| r.to_vec()).collect()
    })
}

/// Canonical keys of all associative tables of order `n` satisfying `x^r = x`.
pub fn naive_classes(n: usize, r: u32) -> HashSet<Vec<usize>> {
    all_tables(n)
        .filter(|m| naive_exponent(m, r) && naive_associative(m))
        .map(|m| naive_canonical_key(&m))
        .collect()
}

pub fn naive_labeled_count(n: usize, r: u32) -> usize {
    all_tables(n)
        .filter(|m| naive_exponent(m, r) && naive_associative(m))
        .count()
}

pub fn random_table<R: Rng>(rng: &mut R, n: usize) -> MulTable {
    MulTable::from_fn(n, |_, _| rng.gen_range(0..n)).expect("valid table")
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
