mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use subsemi::constructions::{cyclic_power, pq_condition_holds};
use subsemi::free_band::evaluate;
use subsemi::{
    canonical_form, closure, enumerate, is_closed, rectangle_dims_for, satisfies_exponent, union_ideal,
    word_equal, BandWord, ConstructionSpec, ElementSet, EnumerationQuery, MulTable,
};

use common::*;

fn pool() -> &'static [MulTable] {
    static POOL: OnceLock<Vec<MulTable>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut v = corpus();
        v.extend(enumerate(EnumerationQuery::bands(4)).unwrap());
        v.extend(enumerate(EnumerationQuery::exponent(5, 3)).unwrap());
        v
    })
}

fn table_and_seed() -> impl Strategy<Value = (MulTable, u64)> {
    (0..pool().len()).prop_flat_map(|i| {
        let t = pool()[i].clone();
        let n = t.order();
        (Just(t), 1u64..(1u64 << n))
    })
}

fn spec_strategy() -> impl Strategy<Value = ConstructionSpec> {
    let leaf = prop_oneof![
        (1usize..4, 1usize..4).prop_map(|(p, q)| ConstructionSpec::RectangularBand(p, q)),
        (1usize..6).prop_map(ConstructionSpec::CyclicGroup),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| ConstructionSpec::UnionIdeal {
                upper: Box::new(a),
                lower: Box::new(b),
            }),
            (inner.clone(), inner).prop_map(|(a, b)| ConstructionSpec::DirectProduct(Box::new(a), Box::new(b))),
        ]
    })
}

fn word(max_len: usize) -> impl Strategy<Value = BandWord> {
    prop::collection::vec(0u8..3, 1..=max_len).prop_map(|l| BandWord::new(l, 3).unwrap())
}

/// Applies `x -> xx` or `xx -> x` at positions picked by `moves`.
fn rewrite(w: &BandWord, moves: &[(usize, usize, bool)]) -> BandWord {
    let mut l = w.letters().to_vec();
    for &(at, len, grow) in moves {
        let len = 1 + len % l.len();
        let at = at % (l.len() - len + 1);
        if grow {
            let piece = l[at..at + len].to_vec();
            l.splice(at + len..at + len, piece);
        } else if at + 2 * len <= l.len() && l[at..at + len] == l[at + len..at + 2 * len] {
            l.drain(at + len..at + 2 * len);
        }
    }
    BandWord::new(l, 3).unwrap()
}

fn cat(u: &BandWord, v: &BandWord) -> BandWord {
    u.concat(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_least_closed_superset((t, bits) in table_and_seed()) {
        let seed = ElementSet::from_bits(t.order(), bits).unwrap();
        let c = closure(&t, seed).unwrap();
        prop_assert!(seed.is_subset(c));
        prop_assert!(is_closed(&t, c));
        prop_assert_eq!(closure(&t, c).unwrap(), c);
        let m = op(&t);
        let n = t.order();
        for mask in 1u64..(1 << n) {
            let members: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            if mask & bits == bits && naive_closed(&m, &members) {
                prop_assert_eq!(mask & c.bits(), c.bits());
            }
        }
    }

    #[test]
    fn closure_is_monotone((t, a) in table_and_seed(), extra in any::<u64>()) {
        let n = t.order();
        let b = a | (extra & ((1u64 << n) - 1));
        let ca = closure(&t, ElementSet::from_bits(n, a).unwrap()).unwrap();
        let cb = closure(&t, ElementSet::from_bits(n, b).unwrap()).unwrap();
        prop_assert!(ca.is_subset(cb));
    }

    #[test]
    fn spec_display_parse_round_trip(spec in spec_strategy()) {
        let text = spec.to_string();
        let back: ConstructionSpec = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back.order(), spec.order());
    }

    #[test]
    fn built_specs_are_semigroups(spec in spec_strategy()) {
        prop_assume!(spec.order() <= 24);
        let t = spec.build().unwrap();
        prop_assert_eq!(t.order(), spec.order());
        prop_assert!(naive_associative(&op(&t)));
    }

    #[test]
    fn union_of_semigroups_is_a_semigroup(i in 0..60usize, j in 0..60usize) {
        let (a, b) = (&pool()[i % pool().len()], &pool()[j % pool().len()]);
        let u = union_ideal(a, b).unwrap();
        let m = op(&u);
        prop_assert!(naive_associative(&m));
        let (na, nb) = (a.order(), b.order());
        for x in 0..na {
            for y in 0..nb {
                prop_assert_eq!(m[x][na + y], na + y);
                prop_assert_eq!(m[na + y][x], na + y);
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent(u in word(12)) {
        let c = canonical_form(&u);
        prop_assert_eq!(canonical_form(c.word()), c.clone());
        prop_assert!(word_equal(&u, c.word()).unwrap());
        prop_assert_eq!(c.word().content(), u.content());
        prop_assert!(c.word().len() <= u.len());
    }

    #[test]
    fn squares_collapse(u in word(12)) {
        prop_assert!(word_equal(&u, &cat(&u, &u)).unwrap());
    }

    #[test]
    fn rewrites_preserve_the_element(
        u in word(10),
        moves in prop::collection::vec((any::<usize>(), any::<usize>(), any::<bool>()), 1..6),
        w in word(4),
    ) {
        let v = rewrite(&u, &moves);
        prop_assert!(word_equal(&u, &v).unwrap());
        prop_assert!(word_equal(&cat(&u, &w), &cat(&v, &w)).unwrap());
        prop_assert!(word_equal(&cat(&w, &u), &cat(&w, &v)).unwrap());
    }

    #[test]
    fn equal_words_share_content(u in word(8), v in word(8)) {
        if word_equal(&u, &v).unwrap() {
            prop_assert_eq!(u.content(), v.content());
            prop_assert_eq!(u.letters()[0], v.letters()[0]);
        }
    }

    #[test]
    fn equal_words_evaluate_equally_in_bands(u in word(9), v in word(9), i in 0..46usize) {
        static BANDS: OnceLock<Vec<MulTable>> = OnceLock::new();
        let bands = BANDS.get_or_init(|| enumerate(EnumerationQuery::bands(4)).unwrap());
        if word_equal(&u, &v).unwrap() {
            let t = &bands[i];
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        prop_assert_eq!(evaluate(t, &u, &[a, b, c]), evaluate(t, &v, &[a, b, c]));
                    }
                }
            }
        }
    }

    #[test]
    fn rectangle_dims_solve_the_inequality(n in 1u64..200_000) {
        match rectangle_dims_for(n) {
            Ok((p, q)) => prop_assert!(pq_condition_holds(n, p, q)),
            Err(_) => prop_assert!([1, 2, 4, 6, 12].contains(&n)),
        }
    }

    #[test]
    fn cyclic_powers_satisfy_exactly_the_right_exponents(q in 1usize..6, k in 1u32..3, r in 2u64..14) {
        let t = cyclic_power(q, k).unwrap();
        prop_assert_eq!(t.order(), q.pow(k));
        prop_assert_eq!(satisfies_exponent(&t, r), (r - 1) % q as u64 == 0);
        prop_assert_eq!(naive_exponent(&op(&t), r as u32), (r - 1) % q as u64 == 0);
    }
}
