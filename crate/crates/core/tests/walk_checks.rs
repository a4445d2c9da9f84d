//! Product replacement walk: determinism and empirical mixing thresholds.
//! Thresholds were fixed after observing the walk's behavior at these
//! parameters; they are loose enough to be stable across seeds.

use num::{BigInt, BigRational, Signed};

use wordmap_core::group::classes::conjugacy_classes;
use wordmap_core::group::GroupHandle;
use wordmap_core::tsys::pra_walk;

#[test]
fn fixed_seed_reproduces_samples_exactly() {
    let group = GroupHandle::alternating(5).unwrap();
    let classes = conjugacy_classes(&group);
    let a = pra_walk(&group, &classes, 3, 2, 100, 1000, 42).unwrap();
    let b = pra_walk(&group, &classes, 3, 2, 100, 1000, 42).unwrap();
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.start_tuple, b.start_tuple);
    let c = pra_walk(&group, &classes, 3, 2, 100, 1000, 43).unwrap();
    assert_ne!(a.samples, c.samples);
}

#[test]
fn a5_walk_mixes_under_threshold() {
    let group = GroupHandle::alternating(5).unwrap();
    let classes = conjugacy_classes(&group);
    let walk = pra_walk(&group, &classes, 3, 1, 1000, 100_000, 42).unwrap();
    assert!(
        walk.l1_f64() < 0.15,
        "empirical L1 {} over threshold",
        walk.l1_f64()
    );
}

#[test]
fn two_seeds_agree_at_scale() {
    let group = GroupHandle::alternating(5).unwrap();
    let classes = conjugacy_classes(&group);
    let a = pra_walk(&group, &classes, 3, 1, 1000, 1_000_000, 1).unwrap();
    let b = pra_walk(&group, &classes, 3, 1, 1000, 1_000_000, 2).unwrap();
    let n = a.samples.len() as i64;
    let mut l1 = BigRational::from_integer(0.into());
    for g in 0..group.order() {
        let diff = BigRational::new(BigInt::from(a.counts[g]), BigInt::from(n))
            - BigRational::new(BigInt::from(b.counts[g]), BigInt::from(n));
        l1 += diff.abs();
    }
    let l1f = num::ToPrimitive::to_f64(&l1).unwrap();
    assert!(l1f < 0.05, "seed-to-seed L1 {l1f} over threshold");
}
