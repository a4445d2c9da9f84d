//! Character-sum fiber formulas against the brute-force enumeration oracle,
//! plus structural invariants of the fiber tables.

use num::{BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use wordmap_core::chartab::build_character_table;
use wordmap_core::group::aut::{aut_class_orbits, automorphism_action};
use wordmap_core::group::classes::conjugacy_classes;
use wordmap_core::group::GroupHandle;
use wordmap_core::spectral::{
    deviation_bounds, frobenius_fibers, l1_distance, squares_word_fibers, Distribution, Tolerance,
};
use wordmap_core::words::{brute_force_fibers, parse_word};

const SMALL_GROUPS: &[&str] = &["S3", "C6", "A4", "PSL2(3)", "C2xC3", "S3xC2", "A5", "S4", "S5", "PSL2(7)"];

#[test]
fn commutator_formula_equals_brute_force() {
    let word = parse_word("[x1,x2]").unwrap();
    for desc in SMALL_GROUPS {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        let formula = frobenius_fibers(&table).unwrap();
        let brute = brute_force_fibers(&word, &group, &classes).unwrap();
        assert_eq!(formula.counts, brute.counts, "{desc}");
        // N(1) = |G| k(G).
        assert_eq!(
            formula.counts[0],
            group.order() as u128 * classes.count() as u128,
            "{desc}"
        );
    }
}

#[test]
fn squares_formula_equals_brute_force() {
    let word = parse_word("x1^2x2^2").unwrap();
    for desc in SMALL_GROUPS {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        let formula = squares_word_fibers(&table).unwrap();
        let brute = brute_force_fibers(&word, &group, &classes).unwrap();
        assert_eq!(formula.counts, brute.counts, "{desc}");
    }
}

#[test]
fn a5_five_cycle_fiber_from_both_routes() {
    let group = GroupHandle::alternating(5).unwrap();
    let classes = conjugacy_classes(&group);
    let table = build_character_table(&group, &classes).unwrap();
    let c5 = (0..classes.count()).find(|&c| classes.order(c) == 5).unwrap();
    let brute = brute_force_fibers(&parse_word("[x1,x2]").unwrap(), &group, &classes).unwrap();
    assert_eq!(brute.counts[c5], 65);
    assert_eq!(frobenius_fibers(&table).unwrap().counts[c5], 65);
}

#[test]
fn fibers_constant_on_aut_orbits() {
    for desc in ["A5", "PSL2(7)", "PSL2(8)", "PSL2(9)"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        let fibers = frobenius_fibers(&table).unwrap();
        let act = automorphism_action(&group).unwrap();
        let orbits = aut_class_orbits(&group, &classes, &act);
        for orbit in orbits.orbits() {
            let first = fibers.counts[orbit[0] as usize];
            for &c in orbit {
                assert_eq!(fibers.counts[c as usize], first, "{desc} orbit {orbit:?}");
            }
        }
    }
}

#[test]
fn l1_bounds_on_small_groups() {
    for desc in SMALL_GROUPS {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        let uniform = Distribution::uniform(table.class_sizes());

        let comm = Distribution::from_fibers(&frobenius_fibers(&table).unwrap());
        let d1 = l1_distance(&comm, &uniform).unwrap();
        assert!(
            Tolerance::SqrtOf(table.zeta2_minus_one()).ge_abs(&d1),
            "{desc} commutator L1"
        );

        let sq = Distribution::from_fibers(&squares_word_fibers(&table).unwrap());
        let d2 = l1_distance(&sq, &uniform).unwrap();
        let real_base = table.real_zeta2_minus_one();
        assert!(Tolerance::SqrtOf(real_base.clone()).ge_abs(&d2), "{desc} squares L1");
        // The real-character bound is itself at most the full zeta bound.
        assert!(real_base <= table.zeta2_minus_one(), "{desc}");
    }
}

#[test]
fn generation_verdict_is_conjugation_invariant() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    for desc in ["A5", "S4", "PSL2(7)"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let n = group.order() as u32;
        for _ in 0..200 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let h = rng.gen_range(0..n);
            let verdict = group.is_generating(&[a, b]);
            let conj = group.is_generating(&[group.conj(a, h), group.conj(b, h)]);
            assert_eq!(verdict, conj, "{desc}");
        }
    }
}

#[test]
fn randomized_associativity_on_large_groups() {
    // Groups too big for the exhaustive axiom sweep get sampled checks.
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    for desc in ["PSL2(13)", "PSL2(16)", "S6", "A7"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let n = group.order() as u32;
        for _ in 0..2000 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let c = rng.gen_range(0..n);
            assert_eq!(group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)), "{desc}");
        }
        for _ in 0..500 {
            let a = rng.gen_range(0..n);
            assert_eq!(group.mul(a, group.inv(a)), group.identity(), "{desc}");
            assert_eq!(group.mul(group.identity(), a), a, "{desc}");
        }
    }
}

#[test]
fn deviation_bounds_follow_zeta() {
    for desc in SMALL_GROUPS {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        let b = deviation_bounds(&table);
        let x = b.zeta2_minus_one.to_f64().unwrap();
        assert!((b.delta * b.delta - x).abs() < 1e-12);
        assert!((b.epsilon * b.epsilon * b.epsilon * b.epsilon - x).abs() < 1e-12);
        // Abelian groups: zeta(2) - 1 = |G| - 1.
        if table.degrees().iter().all(|&d| d == 1) {
            assert_eq!(
                b.zeta2_minus_one,
                BigRational::from_integer((group.order() as i64 - 1).into())
            );
        }
    }
}
