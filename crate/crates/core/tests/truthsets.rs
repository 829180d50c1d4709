mod common;

use std::collections::BTreeMap;

use common::Raw;
use ganti::fixtures;
use ganti::truthsets::*;
use proptest::prelude::*;

fn set(n: u32, m: &[u32]) -> TruthSet {
    TruthSet::from_members(n, m.iter().copied()).unwrap()
}

#[test]
fn distance_set_examples() {
    assert_eq!(distance_set(&set(4, &[0, 1, 2, 3]), 0).unwrap().members(), vec![1, 2, 3]);
    assert!(distance_set(&set(4, &[5]), 5).unwrap().is_empty());
    let s = set(4, &[6, 8, 9, 10, 11, 12, 13, 14, 15]);
    assert_eq!(distance_set(&s, 6).unwrap().members(), (8..16).map(|x| x ^ 6).collect::<std::collections::BTreeSet<_>>().into_iter().collect::<Vec<_>>());
    assert!(matches!(distance_set(&s, 7), Err(TruthSetError::NotMember(7))));
}

#[test]
fn distance_structure_examples() {
    let low = distance_structure(&set(4, &[0, 1, 2, 3]));
    let high = distance_structure(&set(4, &[12, 13, 14, 15]));
    let want = BTreeMap::from([(1, 2), (2, 2), (3, 2)]);
    assert_eq!(low.counts, want);
    assert_eq!(low, high);
    let listed = DistanceMultiset::from_ordered_listing(4, &[1, 2, 3, 3, 2, 1, 1, 2, 3, 3, 2, 1]).unwrap();
    assert_eq!(listed, low);
    assert_eq!(distance_structure(&set(4, &[9])).total(), 0);
}

#[test]
fn constraint1_examples_match_pair_search() {
    let cases = [
        (fixtures::example1().unwrap(), Some((0, 0))),
        (fixtures::example3().unwrap(), Some((0, 0))),
        (fixtures::example2().unwrap(), Some((6, 0))),
    ];
    for (block, want) in cases {
        let brute = Raw::of(&block).constraint1();
        assert_eq!(brute, want);
        assert_eq!(check_constraint1(&block).unwrap(), want);
    }
    let ex2 = fixtures::example2().unwrap();
    assert!(is_constraint1_witness(&ex2, 6, 5).unwrap());
    assert!(ex2.f().true_set().contains(6));
    assert!(ex2.g().true_set().contains(5));
}

#[test]
fn right_key_offset_examples() {
    let ex1 = fixtures::example1().unwrap();
    assert_eq!(Raw::of(&ex1).right_offsets(), vec![4, 5, 6, 7, 12, 13, 14, 15]);
    assert_eq!(right_key_offsets(&ex1).members(), vec![4, 5, 6, 7, 12, 13, 14, 15]);
    assert!(check_constraint2(&ex1));

    let ex3 = fixtures::example3().unwrap();
    assert!(Raw::of(&ex3).right_offsets().is_empty());
    assert!(right_key_offsets(&ex3).is_empty());
    assert!(!check_constraint2(&ex3));
    // All 256 keys are wrong.
    let raw = Raw::of(&ex3);
    assert!((0..16).all(|kf| (0..16).all(|kg| raw.errors(kf, kg) > 0)));
}

#[test]
fn example1_key_checks() {
    let ex1 = fixtures::example1().unwrap();
    assert!(is_right_key(&ex1, Key::new(0b0000, 0b0100)));
    assert!(!is_right_key(&ex1, Key::new(0b0000, 0b0001)));
    assert!(ex1.eval(1, Key::new(0, 1)));
}

#[test]
fn wrong_key_set_examples() {
    let anti = LockBlock::complementary(BooleanFunction::from_fn(4, |l| l == 15).unwrap(), BlockType::Type0);
    let wk = wrong_key_set(&anti, 0);
    assert_eq!(wk.len(), 15);
    assert!(wk.members.iter().all(|k| k.kf == 15 && k.kg != 15));

    let ex1 = fixtures::example1().unwrap();
    let wk = wrong_key_set(&ex1, 0);
    assert_eq!(wk.len(), 20);
    let brute = Raw::of(&ex1).wrong_keys(0);
    assert_eq!(wk.members.iter().map(|k| (k.kf, k.kg)).collect::<std::collections::BTreeSet<_>>(), brute);
}

#[test]
fn distinct_element_examples() {
    let anti = LockBlock::complementary(BooleanFunction::from_fn(4, |l| l == 15).unwrap(), BlockType::Type0);
    let o = wrong_key_overlap(&anti).unwrap();
    assert!(o.distinct_elements && o.pairwise_disjoint);
    assert!(has_distinct_elements(&fixtures::example1().unwrap()).unwrap());
    let same = LockBlock::from_true_sets(4, &[0, 1], &[0, 1]).unwrap();
    assert!(!has_distinct_elements(&same).unwrap());
    let wide = LockBlock::complementary(BooleanFunction::from_fn(9, |l| l == 0).unwrap(), BlockType::Type0);
    assert!(matches!(wrong_key_overlap(&wide), Err(TruthSetError::TooWide { .. })));
}

#[test]
fn complementary_offsets_are_the_stabilizer() {
    for seed in 0..20u32 {
        let f = BooleanFunction::from_fn(5, |l| (l.wrapping_mul(2654435761) ^ seed) % 5 < 2).unwrap();
        let b = LockBlock::complementary(f.clone(), BlockType::Type0);
        let stab: Vec<u32> = (0..32).filter(|&k| f.true_set().translate(k) == *f.true_set()).collect();
        assert_eq!(right_key_offsets(&b).members(), stab);
        assert!(stab.contains(&0));
        if !f.true_set().is_empty() {
            assert!(check_constraint2(&b));
        }
    }
}

#[test]
fn type1_uses_false_sets() {
    // Type-1 dual of example 1: the error sets are the false sets.
    let f = BooleanFunction::from_true_set(set(4, &[0, 1, 2, 3]).complement());
    let g = BooleanFunction::from_true_set(set(4, &[0, 8, 9, 10, 11]).complement());
    let b = LockBlock::new(f, g, BlockType::Type1).unwrap();
    let raw = Raw::of(&b);
    assert_eq!(right_key_offsets(&b).members(), raw.right_offsets());
    assert_eq!(check_constraint1(&b).unwrap(), raw.constraint1());
    assert_eq!(right_key_offsets(&b).members(), vec![4, 5, 6, 7, 12, 13, 14, 15]);
}

#[test]
fn bitvector_and_serde() {
    let v: BitVector = "0100".parse().unwrap();
    assert_eq!(v.value(), 4);
    assert_eq!(v.to_string(), "0100");
    assert!("01x0".parse::<BitVector>().is_err());
    assert_eq!(BitVector::from_msb_bits(&[1, 0, 0, 1]).unwrap().value(), 9);
    let s = set(4, &[1, 7]);
    let js = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<TruthSet>(&js).unwrap(), s);
    assert!(TruthSet::from_members(4, [16]).is_err());
    assert!(TruthSet::empty(25).is_err());
}

fn arb_block(max_n: u32) -> impl Strategy<Value = LockBlock> {
    (3u32..=max_n).prop_flat_map(|n| {
        let size = 1usize << n;
        (
            proptest::collection::vec(any::<bool>(), size),
            proptest::collection::vec(any::<bool>(), size),
            any::<bool>(),
        )
            .prop_map(move |(f, g, t1)| {
                let ft = TruthSet::from_predicate(n, |l| f[l as usize]).unwrap();
                let gt = TruthSet::from_predicate(n, |l| g[l as usize]).unwrap();
                let ty = if t1 { BlockType::Type1 } else { BlockType::Type0 };
                LockBlock::new(BooleanFunction::from_true_set(ft), BooleanFunction::from_true_set(gt), ty).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offsets_match_brute_force(b in arb_block(4)) {
        let raw = Raw::of(&b);
        prop_assert_eq!(right_key_offsets(&b).members(), raw.right_offsets());
        for kf in 0..1u32 << b.n() {
            for kg in 0..1u32 << b.n() {
                prop_assert_eq!(b.corruptibility(Key::new(kf, kg)), raw.errors(kf, kg));
            }
        }
    }

    #[test]
    fn constraint1_matches_pair_search(b in arb_block(5)) {
        let (a, bb) = b.error_sets();
        let raw = Raw::of(&b);
        if a.is_empty() || bb.is_empty() {
            prop_assert!(check_constraint1(&b).is_err());
        } else {
            let got = check_constraint1(&b).unwrap();
            prop_assert_eq!(got, raw.constraint1());
            if let Some((x, y)) = got {
                prop_assert!(is_constraint1_witness(&b, x, y).unwrap());
            }
        }
    }

    #[test]
    fn wrong_key_sets_match_brute_force(b in arb_block(4)) {
        let raw = Raw::of(&b);
        for x in 0..1u32 << b.n() {
            let got: std::collections::BTreeSet<(u32, u32)> =
                wrong_key_set(&b, x).members.iter().map(|k| (k.kf, k.kg)).collect();
            prop_assert_eq!(got, raw.wrong_keys(x));
        }
    }

    #[test]
    fn distance_sets_and_structures(members in proptest::collection::btree_set(0u32..64, 1..20), k in 0u32..64) {
        let s = TruthSet::from_members(6, members.iter().copied()).unwrap();
        for &m in &members {
            let d = distance_set(&s, m).unwrap();
            prop_assert!(!d.contains(0));
            prop_assert_eq!(d.len(), members.len() - 1);
        }
        let ds = distance_structure(&s);
        prop_assert_eq!(ds.total() as usize, members.len() * (members.len() - 1) / 2);
        prop_assert_eq!(distance_structure(&s.translate(k)), ds);
    }

    #[test]
    fn overlap_profile_matches_direct(a in proptest::collection::btree_set(0u32..128, 0..128), b in proptest::collection::btree_set(0u32..128, 0..128)) {
        let sa = TruthSet::from_members(7, a.iter().copied()).unwrap();
        let sb = TruthSet::from_members(7, b.iter().copied()).unwrap();
        let p = overlap_profile(&sa, &sb).unwrap();
        for k in 0..128u32 {
            let direct = a.iter().filter(|&&m| b.contains(&(m ^ k))).count() as u64;
            prop_assert_eq!(p[k as usize], direct);
        }
    }
}

#[test]
fn constraint1_agrees_with_distinct_elements_when_unlockable() {
    let mut checked = 0;
    for n in 3..=4u32 {
        let size = 1u32 << n;
        for seed in 0..300u32 {
            let h = |l: u32, s: u32| (l.wrapping_mul(0x9E37_79B9) ^ s.wrapping_mul(0x85EB_CA6B)).rotate_left(7) % 7;
            let f: Vec<u32> = (0..size).filter(|&l| h(l, seed) < 2).collect();
            let g: Vec<u32> = (0..size).filter(|&l| h(l, seed + 1000) < 4).collect();
            if f.is_empty() || g.is_empty() {
                continue;
            }
            let b = LockBlock::from_true_sets(n, &f, &g).unwrap();
            if right_key_offsets(&b).is_empty() {
                continue;
            }
            checked += 1;
            assert_eq!(
                check_constraint1(&b).unwrap().is_some(),
                has_distinct_elements(&b).unwrap(),
                "F^T={f:?} G^T={g:?}"
            );
        }
    }
    assert!(checked > 20);
}
