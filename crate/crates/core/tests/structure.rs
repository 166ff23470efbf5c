mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use subsemi::constructions::{counterexample_spec, group_counterexample_spec};
use subsemi::{
    all_subsemigroups, closure, counterexample_without_subsemigroup, cyclic_group, direct_product,
    enumerate, exhibit_small_subsemigroup, local_exponent, rectangular_band, spectrum, ElementSet,
    EnumerationQuery, Error, MulTable,
};

use common::*;

fn bands_up_to(n: usize) -> Vec<MulTable> {
    (1..=n).flat_map(|k| enumerate(EnumerationQuery::bands(k)).unwrap()).collect()
}

fn set(t: &MulTable, elems: &[usize]) -> ElementSet {
    ElementSet::from_elements(t.order(), elems.iter().copied()).unwrap()
}

#[test]
fn rectangular_subsemigroups_are_subrectangles() {
    for p in 1..=4 {
        for q in 1..=4 {
            let t = rectangular_band(p, q).unwrap();
            let mut rects = BTreeSet::new();
            for rows in 1u64..(1 << p) {
                for cols in 1u64..(1 << q) {
                    let mut bits = 0u64;
                    for a in (0..p).filter(|a| rows >> a & 1 == 1) {
                        for b in (0..q).filter(|b| cols >> b & 1 == 1) {
                            bits |= 1 << (a * q + b);
                        }
                    }
                    rects.insert(bits);
                }
            }
            let closed: BTreeSet<u64> = all_subsemigroups(&t).unwrap().iter().map(|s| s.bits()).collect();
            assert_eq!(closed, rects, "{}x{}", p, q);
        }
    }
}

#[test]
fn rectangular_spectrum_is_products() {
    let t = rectangular_band(3, 3).unwrap();
    assert_eq!(spectrum(&t).unwrap().to_string(), "{1,2,3,4,6,9}");
}

#[test]
fn group_spectra_are_subgroup_orders() {
    let z33 = direct_product(&cyclic_group(3).unwrap(), &cyclic_group(3).unwrap()).unwrap();
    assert_eq!(spectrum(&z33).unwrap().to_string(), "{1,3,9}");
    let z6 = cyclic_group(6).unwrap();
    assert_eq!(spectrum(&z6).unwrap().to_string(), "{1,2,3,6}");
}

#[test]
fn two_generated_bands_have_at_most_six_elements() {
    for t in bands_up_to(6) {
        for (a, b) in (0..t.order()).tuple_combinations() {
            let c = closure(&t, set(&t, &[a, b])).unwrap();
            assert!((2..=6).contains(&c.len()), "{:?} {} {}", t, a, b);
        }
    }
}

#[test]
fn small_three_generated_closures_contain_abc() {
    let mut checked = 0;
    for t in bands_up_to(6) {
        let m = op(&t);
        for (a, b, c) in (0..t.order()).tuple_combinations() {
            if closure(&t, set(&t, &[a, b, c])).unwrap().len() > 5 {
                continue;
            }
            for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let xyz = m[m[x][y]][z];
                let allowed = [x, y, z, m[x][y], m[x][z], m[y][z]];
                assert!(allowed.contains(&xyz), "{:?} {} {} {}", t, x, y, z);
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn four_element_pair_closures_have_one_shape() {
    let mut seen = [0usize; 3];
    for t in bands_up_to(6) {
        let m = op(&t);
        for (a, b) in (0..t.order()).permutations(2).map(|v| (v[0], v[1])) {
            let c = closure(&t, set(&t, &[a, b])).unwrap();
            if c.len() != 4 {
                continue;
            }
            let (ab, ba) = (m[a][b], m[b][a]);
            assert_eq!(c, set(&t, &[a, b, ab, ba]));
            let (aba, bab) = (m[ab][a], m[ba][b]);
            let shapes = [
                aba == a && bab == b,
                aba == ab && bab == ba,
                aba == ba && bab == ab,
            ];
            assert_eq!(shapes.iter().filter(|&&s| s).count(), 1, "{:?} {} {}", t, a, b);
            seen[shapes.iter().position(|&s| s).unwrap()] += 1;
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "{:?}", seen);
}

#[test]
fn power_subsemigroups_have_the_requested_order() {
    let z8 = cyclic_group(8).unwrap();
    let z4 = cyclic_group(4).unwrap();
    let z2 = cyclic_group(2).unwrap();
    for (t, a) in [(&z8, 1), (&z8, 3), (&z4, 1), (&z2, 1)] {
        let e = local_exponent(t, a).unwrap();
        assert!((e - 1).is_power_of_two());
        for target in [2, 4] {
            match exhibit_small_subsemigroup(t, a, target) {
                Ok(s) => {
                    assert_eq!(s.len(), target);
                    assert!(naive_closed(&op(t), &(0..t.order()).map(|i| s.contains(i)).collect::<Vec<_>>()));
                }
                Err(Error::PreconditionFailed(_)) => assert!(e - 1 < target),
                Err(e) => panic!("{}", e),
            }
        }
    }
}

#[test]
fn band_counterexamples_exclude_their_order() {
    for n in [3, 5, 7, 8, 9, 10, 11, 12, 13, 14] {
        let t = counterexample_without_subsemigroup(n).unwrap();
        let m = op(&t);
        assert!(t.order() > n);
        assert!(naive_associative(&m));
        assert!(naive_exponent(&m, 2));
        assert!(!naive_spectrum(&m).contains(&n), "n = {}", n);
    }
}

#[test]
fn forced_band_orders_have_no_counterexample() {
    for n in [1, 2, 4, 6] {
        assert_eq!(counterexample_spec(n), Err(Error::TheoremForbids(n)));
    }
    assert_eq!(counterexample_spec(12).unwrap().to_string(), "union:(rect:3x3,rect:2x2)");
    assert_eq!(counterexample_without_subsemigroup(12).unwrap().order(), 13);
}

#[test]
fn group_counterexamples_match_their_exponent() {
    for (r, blocked) in [(3, 6), (5, 6), (4, 2), (4, 4), (7, 2), (7, 6), (10, 4)] {
        let spec = group_counterexample_spec(r, blocked).unwrap();
        let t = spec.build().unwrap();
        let m = op(&t);
        assert!(naive_exponent(&m, r as u32), "{} for r = {}", spec, r);
        assert!(t.order() > blocked);
        assert!(!naive_spectrum(&m).contains(&blocked), "{} blocks {}", spec, blocked);
    }
}
