use ibn_core::catalog::{validate_entry, ProvenanceLevel};
use ibn_core::rank::Rank;
use ibn_core::star::{verify_unitary, witness, Verification, WitnessAlgebra, DEFAULT_STEP_BOUND};
use ibn_core::{Catalog, Flag, UnitOrder};

#[test]
fn family_members_validate() {
    let cat = Catalog::builtin();
    let mut ids: Vec<String> = (2..=12).map(|n| format!("O:{n}")).collect();
    ids.extend((1..=6).flat_map(|m| (m + 1..=m + 6).map(move |n| format!("Unc:{m},{n}"))));
    ids.extend((1..=6).map(|n| format!("Rordam:{n}")));
    for id in ids {
        let e = cat.lookup(&id).unwrap();
        assert_eq!(validate_entry(&e), vec![], "{id}");
    }
}

#[test]
fn unc_types_separate_what_k0_cannot() {
    let cat = Catalog::builtin();
    let a = cat.lookup("Unc:2,5").unwrap();
    let b = cat.lookup("Unc:3,6").unwrap();
    assert_eq!(a.k0_unit_order, UnitOrder::Finite(3));
    assert_eq!(a.k0_unit_order, b.k0_unit_order);
    assert_ne!(a.exact_type(), b.exact_type());
    let listed: Vec<_> = cat.list().into_iter().map(|e| e.id).collect();
    assert!(listed.contains(&"Unc:2,5".to_string()) && listed.contains(&"Unc:3,6".to_string()));

    for (m, n) in [(1, 3), (2, 4), (1, 4), (2, 6), (3, 4)] {
        let x = cat.lookup(&format!("Unc:{m},{n}")).unwrap();
        let y = cat.lookup(&format!("Unc:{},{}", m + 1, n + 1)).unwrap();
        assert_eq!(x.k0_unit_order, y.k0_unit_order);
        assert_ne!(x.exact_type(), y.exact_type());
    }
}

#[test]
fn presented_entries_admit_verified_witnesses() {
    let cat = Catalog::builtin();
    for e in cat.list() {
        let (Some(_), Some(t)) = (&e.presentation_id, e.exact_type()) else {
            continue;
        };
        let alg = WitnessAlgebra::from_catalog_id(&e.id).unwrap();
        let w = witness(alg, Rank(t.n_min()), Rank(t.n_min() + t.k_period())).unwrap();
        assert_eq!(
            verify_unitary(&w, &alg.presentation(), DEFAULT_STEP_BOUND),
            Verification::Verified,
            "{}",
            e.id
        );
    }
}

#[test]
fn standard_facts_are_marked() {
    let cat = Catalog::builtin();
    let standard: Vec<_> = cat
        .list()
        .into_iter()
        .filter(|e| e.provenance_level == ProvenanceLevel::StandardFact)
        .map(|e| e.id)
        .collect();
    assert_eq!(standard, vec!["Commutative", "Oinf"]);
}

#[test]
fn ibn_flags_follow_known_examples() {
    let cat = Catalog::builtin();
    let t2 = cat.lookup("T2").unwrap();
    assert!(t2.ibn);
    assert_eq!(t2.ibn1, Flag::No);
    let toeplitz = cat.lookup("Toeplitz").unwrap();
    assert!(toeplitz.ibn);
    assert_eq!(toeplitz.ibn1, Flag::Unknown);
    assert_eq!(toeplitz.ibn2_stably_finite, Flag::No);
    assert_eq!(
        cat.lookup("StablyFinite").unwrap().ibn2_stably_finite,
        Flag::Yes
    );
}
