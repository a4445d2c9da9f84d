//! Product, composition, and shape equidistribution checks, and the
//! witness/L1 round trip on synthetic and real fiber tables.

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use wordmap_core::chartab::build_character_table;
use wordmap_core::group::classes::conjugacy_classes;
use wordmap_core::group::GroupHandle;
use wordmap_core::spectral::{
    equidistribution_witness, frobenius_fibers, l1_distance,
    minimal_equidistribution_tolerance, Distribution, FiberTable, Tolerance,
};
use wordmap_core::words::{all_shapes, brute_force_fibers, gamma_bound, parse_word};

fn l1_to_uniform(fibers: &FiberTable) -> BigRational {
    let dist = Distribution::from_fibers(fibers);
    let uniform = Distribution::uniform(&fibers.class_sizes);
    l1_distance(&dist, &uniform).unwrap()
}

/// Both directions of the witness/L1 relationship for one table:
/// at the minimal passing tolerance e, L1 <= 4e; and the witness at
/// sqrt(L1) succeeds.
fn check_roundtrip(fibers: &FiberTable) {
    let l1 = l1_to_uniform(fibers);
    let eps = minimal_equidistribution_tolerance(fibers);
    assert!(
        Tolerance::Exact(eps.clone() * BigRational::from_integer(4.into())).ge_abs(&l1),
        "L1 {l1} > 4 * {eps} for {}",
        fibers.word_id
    );
    let witness = equidistribution_witness(fibers, &Tolerance::SqrtOf(l1.clone()));
    assert!(witness.verdict, "sqrt-L1 witness fails for {}", fibers.word_id);
}

#[test]
fn witness_roundtrip_on_real_tables() {
    for desc in ["S3", "C6", "A4", "A5", "PSL2(7)", "S5"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        check_roundtrip(&frobenius_fibers(&table).unwrap());
    }
}

#[test]
fn witness_roundtrip_on_synthetic_tables() {
    let mut rng = ChaCha12Rng::seed_from_u64(31);
    for _ in 0..100 {
        let k = rng.gen_range(1..=12usize);
        let sizes: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=20u64)).collect();
        let mut counts: Vec<u128> = (0..k).map(|_| rng.gen_range(0..=30u128)).collect();
        if counts.iter().all(|&c| c == 0) {
            counts[0] = 1;
        }
        let fibers = FiberTable::synthetic("synthetic", sizes, counts);
        fibers.check_conservation().unwrap();
        check_roundtrip(&fibers);
    }
}

#[test]
fn product_map_l1_is_subadditive() {
    // ||P_{f1 x f2} - U|| <= d1 + d2, with the product checked two ways:
    // multiplying factor fiber tables, and brute-forcing the same word on
    // the product group.
    let cases = [("C2", "C3"), ("S3", "C2"), ("A4", "C2")];
    let word = parse_word("[x1,x2]").unwrap();
    for (d1, d2) in cases {
        let g1 = GroupHandle::from_descriptor(d1).unwrap();
        let g2 = GroupHandle::from_descriptor(d2).unwrap();
        let c1 = conjugacy_classes(&g1);
        let c2 = conjugacy_classes(&g2);
        let f1 = brute_force_fibers(&word, &g1, &c1).unwrap();
        let f2 = brute_force_fibers(&word, &g2, &c2).unwrap();
        let l1 = l1_to_uniform(&f1);
        let l2 = l1_to_uniform(&f2);

        let prod = GroupHandle::product(g1, g2).unwrap();
        let cp = conjugacy_classes(&prod);
        let n2 = match prod.family() {
            wordmap_core::group::Family::Product(_, b) => b.order() as u64,
            _ => unreachable!(),
        };
        // Per product class, the per-element fiber count is the product of
        // the factor counts at the component classes.
        let mut counts = Vec::new();
        for c in 0..cp.count() {
            let code = prod.code(cp.representative(c));
            let i1 = (code / n2) as u32;
            let i2 = (code % n2) as u32;
            counts.push(f1.counts[c1.class_of(i1) as usize] * f2.counts[c2.class_of(i2) as usize]);
        }
        let product_fibers = FiberTable::synthetic("product", cp.sizes().to_vec(), counts);
        product_fibers.check_conservation().unwrap();

        // Same word on the product group gives the same table.
        let brute = brute_force_fibers(&word, &prod, &cp).unwrap();
        assert_eq!(product_fibers.counts, brute.counts, "{d1} x {d2}");

        let lp = l1_to_uniform(&product_fibers);
        let bound = l1.clone() + l2.clone();
        assert!(lp <= bound, "{d1} x {d2}: {lp} > {l1} + {l2}");
    }
}

#[test]
fn composition_l1_is_subadditive() {
    // f1 = commutator map, f2 = squaring; the composition is the word map
    // of [x1,x2]^2 and its L1 distance is bounded by the parts' distances.
    for desc in ["S3", "A4", "A5", "C6"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let f1 = brute_force_fibers(&parse_word("[x1,x2]").unwrap(), &group, &classes).unwrap();
        let f2 = brute_force_fibers(&parse_word("x1^2").unwrap(), &group, &classes).unwrap();

        // Push the f1 distribution through squaring, element by element.
        let mut composed_mass = vec![BigRational::from_integer(0.into()); group.order()];
        for y in 0..group.order() as u32 {
            let z = group.mul(y, y);
            let mass = BigRational::new(
                BigInt::from(f1.counts[classes.class_of(y) as usize]),
                BigInt::from(f1.domain_size()),
            );
            composed_mass[z as usize] += mass;
        }
        // The composition is a class function; collapse to per-class counts.
        let mut counts = vec![0u128; classes.count()];
        for g in 0..group.order() as u32 {
            let c = classes.class_of(g) as usize;
            let expected = composed_mass[classes.representative(c) as usize].clone();
            assert_eq!(composed_mass[g as usize], expected, "{desc}: not a class function");
        }
        for c in 0..classes.count() {
            let mass = &composed_mass[classes.representative(c) as usize];
            let scaled = mass * BigRational::from_integer(BigInt::from(f1.domain_size()));
            assert!(scaled.is_integer());
            counts[c] = scaled.to_integer().try_into().unwrap();
        }
        let composed = FiberTable::synthetic("composed", classes.sizes().to_vec(), counts);

        // Cross-check: the composition is itself a word map.
        let direct = brute_force_fibers(&parse_word("[x1,x2]^2").unwrap(), &group, &classes).unwrap();
        assert_eq!(composed.counts, direct.counts, "{desc}");

        let lhs = l1_to_uniform(&composed);
        let bound = l1_to_uniform(&f1) + l1_to_uniform(&f2);
        assert!(lhs <= bound, "{desc}: {lhs} > {bound}");
    }
}

#[test]
fn commutator_shapes_are_gamma_equidistributed() {
    // Wherever gamma(G) = sqrt(m-1)(zeta(2)-1)^(1/4) < 1 and |G| <= 360,
    // every m-fold bracket arrangement passes the witness at gamma.
    for desc in ["A5", "A6", "PSL2(7)", "PSL2(9)"] {
        let group = GroupHandle::from_descriptor(desc).unwrap();
        let classes = conjugacy_classes(&group);
        let table = build_character_table(&group, &classes).unwrap();
        assert!(group.order() <= 360);
        for m in 2..=3usize {
            let gamma = gamma_bound(&table, m).unwrap();
            if gamma.gamma >= 1.0 {
                continue; // vacuous at this scale
            }
            let tol = Tolerance::FourthRootOf(gamma.quartic_base.clone());
            for shape in all_shapes(m) {
                shape.validate().unwrap();
                let word = shape.to_word();
                let fibers = brute_force_fibers(&word, &group, &classes).unwrap();
                let witness = equidistribution_witness(&fibers, &tol);
                assert!(witness.verdict, "{desc} m={m} word {}", word.render());
            }
        }
    }
}

#[test]
fn four_fold_commutators_with_generating_pairs_on_a5() {
    // Elements [[g1,g2],[g3,g4]] where every pair of coordinates generates:
    // enumerated exhaustively (60^4 tuples is under the cap), and the image
    // set must be closed under conjugation.
    let group = GroupHandle::alternating(5).unwrap();
    let n = group.order() as u32;
    let mut gen_pair = vec![false; (n * n) as usize];
    for a in 0..n {
        for b in 0..n {
            gen_pair[(a * n + b) as usize] = group.is_generating(&[a, b]);
        }
    }
    let pair = |a: u32, b: u32| gen_pair[(a * n + b) as usize];
    let mut covered = vec![false; n as usize];
    for g1 in 0..n {
        for g2 in 0..n {
            if !pair(g1, g2) {
                continue;
            }
            let left = group.commutator(g1, g2);
            for g3 in 0..n {
                if !(pair(g1, g3) && pair(g2, g3)) {
                    continue;
                }
                for g4 in 0..n {
                    if !(pair(g1, g4) && pair(g2, g4) && pair(g3, g4)) {
                        continue;
                    }
                    let right = group.commutator(g3, g4);
                    covered[group.commutator(left, right) as usize] = true;
                }
            }
        }
    }
    let count = covered.iter().filter(|&&b| b).count();
    // Conjugation-closure of the image set.
    for g in 0..n {
        if !covered[g as usize] {
            continue;
        }
        for h in 0..n {
            assert!(covered[group.conj(g, h) as usize]);
        }
    }
    println!("A5 four-fold commutator coverage with generating pairs: {count}/60");
    assert!(count > 0);
}
