//! Conjugacy classes by orbit enumeration under conjugation by generators.

use super::GroupHandle;
use crate::error::{Error, Result};

/// Conjugacy class data with a deterministic class ordering:
/// (element order, class size, smallest representative index).
#[derive(Clone, Debug)]
pub struct ClassData {
    sizes: Vec<u64>,
    reps: Vec<u32>,
    orders: Vec<u32>,
    class_of: Vec<u32>,
    inverse_class: Vec<u32>,
    /// Per element g, a witness w with g = w^-1 * rep * w.
    witness: Vec<u32>,
}

pub fn conjugacy_classes(group: &GroupHandle) -> ClassData {
    let n = group.order();
    const UNSET: u32 = u32::MAX;
    let mut class_of = vec![UNSET; n];
    let mut witness = vec![0u32; n];
    let mut members: Vec<Vec<u32>> = Vec::new();

    let gens: Vec<u32> = group.generators().to_vec();
    let gen_invs: Vec<u32> = gens.iter().map(|&s| group.inv(s)).collect();

    for start in 0..n as u32 {
        if class_of[start as usize] != UNSET {
            continue;
        }
        let id = members.len() as u32;
        let mut orbit = vec![start];
        class_of[start as usize] = id;
        witness[start as usize] = group.identity();
        let mut head = 0usize;
        while head < orbit.len() {
            let h = orbit[head];
            head += 1;
            for (k, &s) in gens.iter().enumerate() {
                let conj = group.mul(group.mul(gen_invs[k], h), s);
                if class_of[conj as usize] == UNSET {
                    class_of[conj as usize] = id;
                    witness[conj as usize] = group.mul(witness[h as usize], s);
                    orbit.push(conj);
                }
            }
        }
        members.push(orbit);
    }

    // Reorder classes deterministically. BFS starts at the smallest unvisited
    // index, so members[c][0] is the smallest index in class c.
    let mut keyed: Vec<(u32, u64, u32, u32)> = members
        .iter()
        .enumerate()
        .map(|(c, orbit)| {
            let rep = orbit[0];
            (group.element_order(rep), orbit.len() as u64, rep, c as u32)
        })
        .collect();
    keyed.sort_unstable();

    let mut remap = vec![0u32; members.len()];
    let mut sizes = Vec::with_capacity(members.len());
    let mut reps = Vec::with_capacity(members.len());
    let mut orders = Vec::with_capacity(members.len());
    for (new_id, &(order, size, rep, old_id)) in keyed.iter().enumerate() {
        remap[old_id as usize] = new_id as u32;
        sizes.push(size);
        reps.push(rep);
        orders.push(order);
    }
    for c in class_of.iter_mut() {
        *c = remap[*c as usize];
    }

    let inverse_class: Vec<u32> = reps.iter().map(|&r| class_of[group.inv(r) as usize]).collect();

    ClassData {
        sizes,
        reps,
        orders,
        class_of,
        inverse_class,
        witness,
    }
}

impl ClassData {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn size(&self, c: usize) -> u64 {
        self.sizes[c]
    }

    pub fn representative(&self, c: usize) -> u32 {
        self.reps[c]
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self, c: usize) -> u32 {
        self.orders[c]
    }

    pub fn class_of(&self, g: u32) -> u32 {
        self.class_of[g as usize]
    }

    pub fn inverse_class(&self, c: usize) -> u32 {
        self.inverse_class[c]
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn centralizer_order(&self, c: usize) -> u64 {
        self.group_order() / self.sizes[c]
    }

    /// A witness w with g = w^-1 * rep(class_of(g)) * w.
    pub fn conjugator_to_rep(&self, g: u32) -> u32 {
        self.witness[g as usize]
    }

    /// Class index of rep(c)^e.
    pub fn power_class(&self, group: &GroupHandle, c: usize, e: u64) -> u32 {
        self.class_of[group.pow(self.reps[c], e) as usize]
    }

    /// Number of fixed points of the class representative (permutation families only).
    pub fn fixed_points(&self, group: &GroupHandle, c: usize) -> Option<u32> {
        use super::Family;
        let n = match group.family() {
            Family::Alternating(n) | Family::Symmetric(n) => *n,
            _ => return None,
        };
        let code = group.code(self.reps[c]);
        let mut fixed = 0;
        for i in 0..n {
            if (code >> (4 * i)) & 0xF == i as u64 {
                fixed += 1;
            }
        }
        Some(fixed)
    }
}

/// c(G): the minimal centralizer order over all classes.
pub fn min_centralizer_order(classes: &ClassData) -> u64 {
    (0..classes.count())
        .map(|c| classes.centralizer_order(c))
        .min()
        .expect("at least one class")
}

/// Checks the basic class-partition invariants; used by tests and callers
/// that want hard failures instead of silent corruption.
pub fn validate(group: &GroupHandle, classes: &ClassData) -> Result<()> {
    let n = group.order() as u64;
    let total: u64 = classes.sizes().iter().sum();
    if total != n {
        return Err(Error::Internal(format!("class sizes sum to {total}, group order {n}")));
    }
    for c in 0..classes.count() {
        if !n.is_multiple_of(classes.size(c)) {
            return Err(Error::Internal(format!("class size {} does not divide {n}", classes.size(c))));
        }
    }
    if classes.class_of(group.identity()) != 0 || classes.size(0) != 1 {
        return Err(Error::Internal("identity class is not class 0 of size 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupHandle;

    #[test]
    fn a5_classes() {
        let g = GroupHandle::alternating(5).unwrap();
        let cd = conjugacy_classes(&g);
        validate(&g, &cd).unwrap();
        assert_eq!(cd.count(), 5);
        let mut sizes = cd.sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        // Deterministic ordering: (order, size, rep).
        assert_eq!(cd.orders(), &[1, 2, 3, 5, 5]);
        assert_eq!(cd.sizes(), &[1, 15, 20, 12, 12]);
    }

    #[test]
    fn s3_classes() {
        let g = GroupHandle::symmetric(3).unwrap();
        let cd = conjugacy_classes(&g);
        validate(&g, &cd).unwrap();
        assert_eq!(cd.count(), 3);
        assert_eq!(cd.sizes(), &[1, 3, 2]);
    }

    #[test]
    fn trivial_group_single_class() {
        let g = GroupHandle::cyclic(1).unwrap();
        let cd = conjugacy_classes(&g);
        assert_eq!(cd.count(), 1);
        assert_eq!(cd.sizes(), &[1]);
    }

    #[test]
    fn conjugation_closure_spot_checks() {
        let g = GroupHandle::psl2(7).unwrap();
        let cd = conjugacy_classes(&g);
        validate(&g, &cd).unwrap();
        for g1 in (0..g.order() as u32).step_by(13) {
            for x in (0..g.order() as u32).step_by(29) {
                assert_eq!(cd.class_of(g.conj(g1, x)), cd.class_of(g1));
            }
        }
    }

    #[test]
    fn witness_conjugates_to_representative() {
        let g = GroupHandle::alternating(5).unwrap();
        let cd = conjugacy_classes(&g);
        for el in 0..g.order() as u32 {
            let w = cd.conjugator_to_rep(el);
            let rep = cd.representative(cd.class_of(el) as usize);
            assert_eq!(g.conj(rep, w), el);
        }
    }

    #[test]
    fn min_centralizer_examples() {
        // A5: the 3-cycle class has size 20, so the smallest centralizer is
        // 60/20 = 3 (a 3-cycle commutes only with its own powers in A5).
        let a5 = GroupHandle::alternating(5).unwrap();
        assert_eq!(min_centralizer_order(&conjugacy_classes(&a5)), 3);
        // PSL2(7): the order-3 class has size 56, centralizer order 3.
        let psl27 = GroupHandle::psl2(7).unwrap();
        assert_eq!(min_centralizer_order(&conjugacy_classes(&psl27)), 3);
        // Abelian: every centralizer is the whole group.
        let c12 = GroupHandle::cyclic(12).unwrap();
        assert_eq!(min_centralizer_order(&conjugacy_classes(&c12)), 12);
    }

    #[test]
    fn psl2_class_count_formula() {
        // k = q + 1 for even q, (q + 5)/2 for odd q.
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let g = GroupHandle::psl2(q).unwrap();
            let cd = conjugacy_classes(&g);
            let expect = if q % 2 == 0 { q + 1 } else { (q + 5) / 2 };
            assert_eq!(cd.count() as u64, expect, "q={q}");
        }
    }

    #[test]
    fn inverse_class_map() {
        let g = GroupHandle::cyclic(5).unwrap();
        let cd = conjugacy_classes(&g);
        for c in 0..cd.count() {
            let rep = cd.representative(c);
            assert_eq!(cd.inverse_class(c), cd.class_of(g.inv(rep)));
        }
    }
}
