use ibn_core::rank::{
    canonical_rank, class_count, derive_type, equiv_ranks, oracle_closure, Partition,
};
use ibn_core::{BasisType, EquivalenceWitnessSet, Rank};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bt(n: u64, k: u64) -> BasisType {
    BasisType::new(n, k).unwrap()
}

fn types(max: u64) -> impl Iterator<Item = BasisType> {
    (1..=max).flat_map(move |n| (1..=max).map(move |k| bt(n, k)))
}

/// Pairwise comparison, so a non-transitive relation cannot hide behind a
/// matching partition.
fn agrees(p: &Partition, t: BasisType) -> bool {
    let b = p.bound();
    (0..=b).all(|x| (0..=b).all(|y| p.same_class(x, y) == equiv_ranks(t, Rank(x), Rank(y))))
}

#[test]
fn equiv_ranks_is_an_equivalence() {
    for t in types(12) {
        for a in 0..=60 {
            assert!(equiv_ranks(t, Rank(a), Rank(a)));
            for b in 0..=60 {
                let ab = equiv_ranks(t, Rank(a), Rank(b));
                assert_eq!(ab, equiv_ranks(t, Rank(b), Rank(a)));
                if !ab {
                    continue;
                }
                for c in 0..=60 {
                    if equiv_ranks(t, Rank(b), Rank(c)) {
                        assert!(equiv_ranks(t, Rank(a), Rank(c)), "{t}: {a}~{b}~{c}");
                    }
                }
            }
        }
    }
}

#[test]
fn equiv_ranks_is_translation_invariant() {
    for t in types(12) {
        for a in 0..=40 {
            for b in 0..=40 {
                if equiv_ranks(t, Rank(a), Rank(b)) {
                    for c in 0..=20 {
                        assert!(equiv_ranks(t, Rank(a + c), Rank(b + c)));
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_matches_closed_form_for_single_generators() {
    for t in types(8) {
        let ws =
            EquivalenceWitnessSet::from_pairs([(t.n_min(), t.n_min() + t.k_period())]).unwrap();
        let p = oracle_closure(&ws, 64).unwrap();
        assert!(agrees(&p, t), "{t}");
        assert_eq!(derive_type(&ws).unwrap(), t);
    }
}

#[test]
fn oracle_class_counts() {
    for t in types(8) {
        let ws =
            EquivalenceWitnessSet::from_pairs([(t.n_min(), t.n_min() + t.k_period())]).unwrap();
        let p = oracle_closure(&ws, t.n_min() + 2 * t.k_period()).unwrap();
        assert_eq!(p.class_count() as u64, class_count(t).unwrap(), "{t}");
    }
}

#[test]
fn derive_type_agrees_with_oracle_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b_2024);
    for _ in 0..500 {
        let mut ws = EquivalenceWitnessSet::new();
        for _ in 0..rng.gen_range(1..=4) {
            let a = rng.gen_range(1..=20);
            let b = rng.gen_range(1..=20);
            if a != b {
                ws.insert(a, b).unwrap();
            }
        }
        if ws.is_empty() {
            ws.insert(1, 20).unwrap();
        }
        let t = derive_type(&ws).unwrap();
        let p = oracle_closure(&ws, 200).unwrap();
        assert!(agrees(&p, t), "{ws:?} -> {t}");
    }
}

#[test]
fn frozen_oracle_values() {
    // Values computed by the union-find closure.
    let ws = EquivalenceWitnessSet::from_pairs([(3, 5)]).unwrap();
    let p = oracle_closure(&ws, 40).unwrap();
    assert!(p.classes().contains(&vec![2]));
    assert!(p.same_class(9, 3));
    let ws = EquivalenceWitnessSet::from_pairs([(3, 5), (4, 10)]).unwrap();
    let p = oracle_closure(&ws, 40).unwrap();
    assert_eq!(p.classes().len(), 5);
    assert_eq!(p.classes()[3], (3..=39).step_by(2).collect::<Vec<_>>());
}

proptest! {
    #[test]
    fn canonical_rank_is_idempotent_minimum(n in 1u64..=8, k in 1u64..=8, r in 0u64..=64) {
        let t = bt(n, k);
        let c = canonical_rank(t, Rank(r));
        prop_assert_eq!(canonical_rank(t, c), c);
        prop_assert!(equiv_ranks(t, Rank(r), c));
        let ws = EquivalenceWitnessSet::from_pairs([(n, n + k)]).unwrap();
        let p = oracle_closure(&ws, 64).unwrap();
        let class = p.classes().iter().find(|cl| cl.contains(&r)).unwrap();
        prop_assert_eq!(class[0], c.get());
    }

    #[test]
    fn derive_type_round_trip(n in 1u64..=1000, k in 1u64..=1000) {
        let ws = EquivalenceWitnessSet::from_pairs([(n + k, n)]).unwrap();
        prop_assert_eq!(derive_type(&ws).unwrap(), bt(n, k));
    }
}
