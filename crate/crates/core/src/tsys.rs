//! Generating tuples, Nielsen-move graphs, T-systems, Higman invariants,
//! and the product replacement random walk.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use num::{BigInt, BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::group::aut::{AutAction, ClassOrbits};
use crate::group::classes::ClassData;
use crate::group::GroupHandle;
use crate::spectral::Tolerance;
use crate::unionfind::DisjointSets;

/// Guard on |G|^k for full tuple enumeration.
pub const TUPLE_ENUMERATION_CAP: u128 = 10_000_000;

/// All generating k-tuples of a group, in lexicographic order of their
/// element-index vectors; positions in that order are the dense tuple ids.
#[derive(Clone, Debug)]
pub struct GeneratingTupleSet {
    k: usize,
    group_order: u64,
    flat: Vec<u32>,
}

impl GeneratingTupleSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> usize {
        self.flat.len() / self.k
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn tuple(&self, i: usize) -> &[u32] {
        &self.flat[i * self.k..(i + 1) * self.k]
    }

    pub fn index_of(&self, tuple: &[u32]) -> Option<usize> {
        let n = self.count();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tuple(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks(self.k)
    }
}

/// Enumerates V_k(G) for k in 1..=3. Generation verdicts are computed once
/// per (class of g1, rest) and transported by simultaneous conjugation.
pub fn generating_tuples(group: &GroupHandle, classes: &ClassData, k: usize) -> Result<GeneratingTupleSet> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidParameter(format!("tuple enumeration supports k in 1..=3, got {k}")));
    }
    let n = group.order();
    if (n as u128).pow(k as u32) > TUPLE_ENUMERATION_CAP {
        return Err(Error::SizeCap(format!(
            "|G|^{k} = {} exceeds the enumeration cap {TUPLE_ENUMERATION_CAP}",
            (n as u128).pow(k as u32)
        )));
    }
    let mut flat = Vec::new();
    match k {
        1 => {
            for g in 0..n as u32 {
                if group.element_order(g) as usize == n {
                    flat.push(g);
                }
            }
        }
        2 => {
            let kk = classes.count();
            let mut verdict = vec![false; kk * n];
            for c1 in 0..kk {
                let rep = classes.representative(c1);
                for g2 in 0..n as u32 {
                    verdict[c1 * n + g2 as usize] = group.is_generating(&[rep, g2]);
                }
            }
            for g1 in 0..n as u32 {
                let c1 = classes.class_of(g1) as usize;
                let w = classes.conjugator_to_rep(g1);
                let wi = group.inv(w);
                for g2 in 0..n as u32 {
                    let g2p = group.mul(group.mul(w, g2), wi);
                    if verdict[c1 * n + g2p as usize] {
                        flat.push(g1);
                        flat.push(g2);
                    }
                }
            }
        }
        3 => {
            // Rows are shared between pairs generating the same subgroup.
            let mut rows_by_subgroup: HashMap<Vec<u64>, Rc<Vec<bool>>> = HashMap::new();
            let kk = classes.count();
            let mut row_of_pair: Vec<Option<Rc<Vec<bool>>>> = vec![None; kk * n];
            for c1 in 0..kk {
                let rep = classes.representative(c1);
                for g2 in 0..n as u32 {
                    let (bits, size) = group.closure_bitset(&[rep, g2], false);
                    let row = if let Some(row) = rows_by_subgroup.get(&bits) {
                        row.clone()
                    } else {
                        let row: Rc<Vec<bool>> = if size == n {
                            Rc::new(vec![true; n])
                        } else {
                            Rc::new(
                                (0..n as u32)
                                    .map(|g3| {
                                        let present = bits[g3 as usize / 64] >> (g3 % 64) & 1 == 1;
                                        !present && group.is_generating(&[rep, g2, g3])
                                    })
                                    .collect(),
                            )
                        };
                        rows_by_subgroup.insert(bits, row.clone());
                        row
                    };
                    row_of_pair[c1 * n + g2 as usize] = Some(row);
                }
            }
            for g1 in 0..n as u32 {
                let c1 = classes.class_of(g1) as usize;
                let w = classes.conjugator_to_rep(g1);
                let wi = group.inv(w);
                for g2 in 0..n as u32 {
                    let g2p = group.mul(group.mul(w, g2), wi);
                    let row = row_of_pair[c1 * n + g2p as usize].as_ref().unwrap();
                    for g3 in 0..n as u32 {
                        let g3p = group.mul(group.mul(w, g3), wi);
                        if row[g3p as usize] {
                            flat.push(g1);
                            flat.push(g2);
                            flat.push(g3);
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(GeneratingTupleSet {
        k,
        group_order: n as u64,
        flat,
    })
}

/// Which edges a tuple graph carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSet {
    /// R+-, L+- only: the product replacement moves.
    Pra,
    /// All Nielsen moves: R+-, L+-, swaps, inversions.
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    RightMult { i: usize, j: usize, inverse: bool },
    LeftMult { i: usize, j: usize, inverse: bool },
    Swap { i: usize, j: usize },
    Invert { i: usize },
}

/// The selected move set on k-tuples.
#[derive(Clone, Debug)]
pub struct MoveSet {
    k: usize,
    edge_set: EdgeSet,
    moves: Vec<Move>,
}

impl MoveSet {
    pub fn new(k: usize, edge_set: EdgeSet) -> MoveSet {
        let mut moves = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                for inverse in [false, true] {
                    moves.push(Move::RightMult { i, j, inverse });
                    moves.push(Move::LeftMult { i, j, inverse });
                }
            }
        }
        if edge_set == EdgeSet::Extended {
            for i in 0..k {
                for j in i + 1..k {
                    moves.push(Move::Swap { i, j });
                }
            }
            for i in 0..k {
                moves.push(Move::Invert { i });
            }
        }
        MoveSet {
            k,
            edge_set,
            moves,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edge_set
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn apply(&self, group: &GroupHandle, tuple: &[u32], mv: Move) -> Vec<u32> {
        let mut out = tuple.to_vec();
        match mv {
            Move::RightMult { i, j, inverse } => {
                let gj = if inverse { group.inv(tuple[j]) } else { tuple[j] };
                out[i] = group.mul(tuple[i], gj);
            }
            Move::LeftMult { i, j, inverse } => {
                let gj = if inverse { group.inv(tuple[j]) } else { tuple[j] };
                out[i] = group.mul(gj, tuple[i]);
            }
            Move::Swap { i, j } => out.swap(i, j),
            Move::Invert { i } => out[i] = group.inv(tuple[i]),
        }
        out
    }

    /// Images of a tuple under every move in the set.
    pub fn neighbors(&self, group: &GroupHandle, tuple: &[u32]) -> Vec<Vec<u32>> {
        self.moves.iter().map(|&mv| self.apply(group, tuple, mv)).collect()
    }
}

/// Connected components of a tuple graph.
#[derive(Clone, Debug)]
pub struct ComponentStructure {
    pub component_of: Vec<u32>,
    pub count: usize,
    pub sizes: Vec<u64>,
    /// Smallest tuple id in each component.
    pub representatives: Vec<usize>,
}

fn components_from_unions(ds: &mut DisjointSets) -> ComponentStructure {
    let (component_of, count) = ds.component_ids();
    let mut sizes = vec![0u64; count];
    let mut representatives = vec![usize::MAX; count];
    for (t, &c) in component_of.iter().enumerate() {
        sizes[c as usize] += 1;
        if representatives[c as usize] == usize::MAX {
            representatives[c as usize] = t;
        }
    }
    ComponentStructure {
        component_of,
        count,
        sizes,
        representatives,
    }
}

/// Union-find over all (tuple, move) edges. Every move must land inside
/// V_k; a miss is a hard error, which doubles as the closure check.
pub fn graph_components(
    group: &GroupHandle,
    tuples: &GeneratingTupleSet,
    moves: &MoveSet,
) -> Result<ComponentStructure> {
    let mut ds = DisjointSets::new(tuples.count());
    let mut image = vec![0u32; tuples.k()];
    for t in 0..tuples.count() {
        let tuple = tuples.tuple(t);
        for &mv in moves.moves() {
            image.clear();
            image.extend_from_slice(tuple);
            let img = moves.apply(group, &image, mv);
            let idx = tuples
                .index_of(&img)
                .ok_or_else(|| Error::Internal("Nielsen move left the generating set".into()))?;
            ds.union(t, idx);
        }
    }
    Ok(components_from_unions(&mut ds))
}

/// Extended-graph components additionally merged under coordinatewise
/// automorphisms: the T_k-systems.
pub fn t_systems(
    group: &GroupHandle,
    tuples: &GeneratingTupleSet,
    action: &AutAction,
) -> Result<(usize, ComponentStructure)> {
    let moves = MoveSet::new(tuples.k(), EdgeSet::Extended);
    let mut ds = DisjointSets::new(tuples.count());
    for t in 0..tuples.count() {
        let tuple = tuples.tuple(t);
        for &mv in moves.moves() {
            let img = moves.apply(group, tuple, mv);
            let idx = tuples
                .index_of(&img)
                .ok_or_else(|| Error::Internal("Nielsen move left the generating set".into()))?;
            ds.union(t, idx);
        }
        for map_idx in 0..action.maps().len() {
            let img: Vec<u32> = tuple.iter().map(|&g| action.apply(map_idx, g)).collect();
            let idx = tuples
                .index_of(&img)
                .ok_or_else(|| Error::Internal("automorphism left the generating set".into()))?;
            ds.union(t, idx);
        }
    }
    let comps = components_from_unions(&mut ds);
    Ok((comps.count, comps))
}

/// The inverse-closed Aut-orbit union of the commutator class: the class
/// of [g2,g1] = [g1,g2]^-1 is merged in by construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HigmanLabel(pub Vec<u32>);

pub fn higman_invariant(
    group: &GroupHandle,
    classes: &ClassData,
    orbits: &ClassOrbits,
    tuple: &[u32],
) -> HigmanLabel {
    let c = classes.class_of(group.commutator(tuple[0], tuple[1]));
    let cell = orbits.merged_of(c);
    HigmanLabel(orbits.merged()[cell as usize].clone())
}

/// Census of Higman labels over all generating pairs, plus the quantities
/// in the T2-system lower bound.
#[derive(Clone, Debug)]
pub struct Census {
    pub labels: BTreeSet<HigmanLabel>,
    pub min_centralizer: u64,
    pub out_order: u64,
    /// c(G) / (2 |Out(G)|).
    pub bound_quantity: BigRational,
}

pub fn t2_invariant_census(
    group: &GroupHandle,
    tuples: &GeneratingTupleSet,
    classes: &ClassData,
    orbits: &ClassOrbits,
    action: &AutAction,
) -> Result<Census> {
    if tuples.k() != 2 {
        return Err(Error::InvalidParameter("Higman census needs k = 2".into()));
    }
    let mut labels = BTreeSet::new();
    for t in 0..tuples.count() {
        labels.insert(higman_invariant(group, classes, orbits, tuples.tuple(t)));
    }
    let c_g = crate::group::classes::min_centralizer_order(classes);
    let out = action.out_order();
    Ok(Census {
        labels,
        min_centralizer: c_g,
        out_order: out,
        bound_quantity: BigRational::new(BigInt::from(c_g), BigInt::from(2 * out)),
    })
}

/// Exhaustive check that the conjugacy class of [g1,g2] is constant on
/// every component of the PRA graph.
#[derive(Clone, Debug)]
pub struct PraInvariantCheck {
    pub components: ComponentStructure,
    pub ok: bool,
}

pub fn pra_component_invariant_check(
    group: &GroupHandle,
    tuples: &GeneratingTupleSet,
    classes: &ClassData,
) -> Result<PraInvariantCheck> {
    if tuples.k() != 2 {
        return Err(Error::InvalidParameter("PRA component invariant needs k = 2".into()));
    }
    let moves = MoveSet::new(2, EdgeSet::Pra);
    let components = graph_components(group, tuples, &moves)?;
    let mut class_of_component = vec![u32::MAX; components.count];
    let mut ok = true;
    for t in 0..tuples.count() {
        let tuple = tuples.tuple(t);
        let c = classes.class_of(group.commutator(tuple[0], tuple[1]));
        let comp = components.component_of[t] as usize;
        if class_of_component[comp] == u32::MAX {
            class_of_component[comp] = c;
        } else if class_of_component[comp] != c {
            ok = false;
        }
    }
    Ok(PraInvariantCheck { components, ok })
}

/// Product replacement walk output.
#[derive(Clone, Debug)]
pub struct WalkReport {
    pub k: usize,
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    pub start_tuple: Vec<u32>,
    /// Sampled element indices, in emission order.
    pub samples: Vec<u32>,
    /// Per-element hit counts.
    pub counts: Vec<u64>,
    pub l1_to_uniform: BigRational,
}

impl WalkReport {
    pub fn l1_f64(&self) -> f64 {
        self.l1_to_uniform.to_f64().unwrap()
    }
}

/// First generating k-tuple in lexicographic index order.
pub fn first_generating_tuple(group: &GroupHandle, k: usize) -> Result<Vec<u32>> {
    let n = group.order() as u32;
    let mut tuple = vec![0u32; k];
    loop {
        if group.is_generating(&tuple) {
            return Ok(tuple);
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return Err(Error::InvalidParameter(format!(
                    "no generating {k}-tuple exists for {}",
                    group.descriptor()
                )));
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Runs the product replacement walk: each move draws (i, j) with i != j
/// uniformly, then one of R+, R-, L+, L- with probability 1/4. After the
/// burn-in, every `steps` moves a uniformly chosen coordinate is emitted.
pub fn pra_walk(
    group: &GroupHandle,
    classes: &ClassData,
    k: usize,
    steps: u64,
    burn_in: u64,
    samples: u64,
    seed: u64,
) -> Result<WalkReport> {
    if !(2..=5).contains(&k) {
        return Err(Error::InvalidParameter(format!("walk supports k in 2..=5, got {k}")));
    }
    let d = group.min_generators(classes)?;
    if k < d {
        return Err(Error::InvalidParameter(format!(
            "k = {k} below the minimal generator count {d} of {}",
            group.descriptor()
        )));
    }
    let start_tuple = first_generating_tuple(group, k)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut tuple = start_tuple.clone();
    let do_move = |tuple: &mut Vec<u32>, rng: &mut ChaCha12Rng| {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let op = rng.gen_range(0..4u8);
        let gj = if op % 2 == 1 { group.inv(tuple[j]) } else { tuple[j] };
        tuple[i] = if op < 2 {
            group.mul(tuple[i], gj)
        } else {
            group.mul(gj, tuple[i])
        };
    };
    for _ in 0..burn_in {
        do_move(&mut tuple, &mut rng);
    }
    let mut out = Vec::with_capacity(samples as usize);
    let mut counts = vec![0u64; group.order()];
    for _ in 0..samples {
        for _ in 0..steps {
            do_move(&mut tuple, &mut rng);
        }
        let coord = rng.gen_range(0..k);
        let g = tuple[coord];
        out.push(g);
        counts[g as usize] += 1;
    }
    let n = group.order() as i64;
    let mut l1 = BigRational::from_integer(BigInt::from(0));
    if samples > 0 {
        for &c in &counts {
            let diff = BigRational::new(BigInt::from(c), BigInt::from(samples))
                - BigRational::new(BigInt::from(1), BigInt::from(n));
            l1 += num::Signed::abs(&diff);
        }
    }
    Ok(WalkReport {
        k,
        steps,
        burn_in,
        seed,
        start_tuple,
        samples: out,
        counts,
        l1_to_uniform: l1,
    })
}

/// Commutator image of the generating pairs and the measure-preservation
/// lower bound instantiated at X = V_2(G).
#[derive(Clone, Debug)]
pub struct Coverage {
    pub covered: Vec<bool>,
    pub count: u64,
    pub fraction: BigRational,
    pub v2_fraction: BigRational,
    /// The lower bound |V2|/|G|^2 - 3 epsilon is <= 0, so the check says nothing.
    pub vacuous: bool,
    pub ok: bool,
}

pub fn commutator_generating_coverage(
    group: &GroupHandle,
    tuples: &GeneratingTupleSet,
    table: &CharacterTable,
) -> Result<Coverage> {
    if tuples.k() != 2 {
        return Err(Error::InvalidParameter("coverage needs k = 2".into()));
    }
    let n = group.order();
    let mut covered = vec![false; n];
    for t in 0..tuples.count() {
        let tuple = tuples.tuple(t);
        covered[group.commutator(tuple[0], tuple[1]) as usize] = true;
    }
    let count = covered.iter().filter(|&&b| b).count() as u64;
    let fraction = BigRational::new(BigInt::from(count), BigInt::from(n as u64));
    let v2_fraction = BigRational::new(
        BigInt::from(tuples.count() as u64),
        BigInt::from(n as u64 * n as u64),
    );
    let eps3 = Tolerance::FourthRootOf(table.zeta2_minus_one()).scaled(3);
    // Vacuous when 3 eps >= |V2|/|G|^2, i.e. the bound is nonpositive.
    let vacuous = eps3.ge_abs(&v2_fraction);
    let gap = v2_fraction.clone() - fraction.clone();
    let ok = gap <= BigRational::from_integer(BigInt::from(0)) || eps3.ge_abs(&gap);
    Ok(Coverage {
        covered,
        count,
        fraction,
        v2_fraction,
        vacuous,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::build_character_table;
    use crate::group::aut::{aut_class_orbits, automorphism_action};
    use crate::group::classes::conjugacy_classes;

    fn setup(desc: &str) -> (GroupHandle, ClassData) {
        let g = GroupHandle::from_descriptor(desc).unwrap();
        let cd = conjugacy_classes(&g);
        (g, cd)
    }

    #[test]
    fn tuple_counts() {
        let (c2, cd) = setup("C2");
        assert_eq!(generating_tuples(&c2, &cd, 2).unwrap().count(), 3);
        let (s3, cd3) = setup("S3");
        assert_eq!(generating_tuples(&s3, &cd3, 2).unwrap().count(), 18);
        let (a5, cd5) = setup("A5");
        assert_eq!(generating_tuples(&a5, &cd5, 2).unwrap().count(), 2280);
    }

    #[test]
    fn tuple_index_roundtrip() {
        let (s3, cd) = setup("S3");
        let v2 = generating_tuples(&s3, &cd, 2).unwrap();
        for t in 0..v2.count() {
            assert_eq!(v2.index_of(v2.tuple(t)), Some(t));
        }
        assert_eq!(v2.index_of(&[0, 0]), None);
    }

    #[test]
    fn k3_enumeration_matches_direct_check() {
        let (s3, cd) = setup("S3");
        let v3 = generating_tuples(&s3, &cd, 3).unwrap();
        let mut direct = 0usize;
        for a in 0..6u32 {
            for b in 0..6u32 {
                for c in 0..6u32 {
                    if s3.is_generating(&[a, b, c]) {
                        direct += 1;
                        assert!(v3.index_of(&[a, b, c]).is_some());
                    }
                }
            }
        }
        assert_eq!(v3.count(), direct);
    }

    #[test]
    fn move_definitions() {
        let (s3, _) = setup("S3");
        let moves = MoveSet::new(2, EdgeSet::Extended);
        let x = 1u32;
        let y = 4u32;
        let inv1 = moves.apply(&s3, &[x, y], Move::Invert { i: 0 });
        assert_eq!(inv1, vec![s3.inv(x), y]);
        let swap = moves.apply(&s3, &[x, y], Move::Swap { i: 0, j: 1 });
        assert_eq!(swap, vec![y, x]);
        let r = moves.apply(&s3, &[x, y], Move::RightMult { i: 0, j: 1, inverse: false });
        assert_eq!(r, vec![s3.mul(x, y), y]);
        let l = moves.apply(&s3, &[x, y], Move::LeftMult { i: 0, j: 1, inverse: true });
        assert_eq!(l, vec![s3.mul(s3.inv(y), x), y]);
        // PRA edge set has 4 * k * (k-1) moves, extended adds swaps + inversions.
        assert_eq!(MoveSet::new(2, EdgeSet::Pra).moves().len(), 8);
        assert_eq!(moves.moves().len(), 8 + 1 + 2);
        assert_eq!(moves.neighbors(&s3, &[x, y]).len(), moves.moves().len());
    }

    #[test]
    fn c2_extended_graph_is_connected() {
        let (c2, cd) = setup("C2");
        let v2 = generating_tuples(&c2, &cd, 2).unwrap();
        let comps = graph_components(&c2, &v2, &MoveSet::new(2, EdgeSet::Extended)).unwrap();
        assert_eq!(comps.count, 1);
        assert_eq!(comps.sizes, vec![3]);
    }

    #[test]
    fn component_chain_inequality() {
        for desc in ["S3", "A4", "C5", "A5"] {
            let (g, cd) = setup(desc);
            let v2 = generating_tuples(&g, &cd, 2).unwrap();
            let basic = graph_components(&g, &v2, &MoveSet::new(2, EdgeSet::Pra)).unwrap();
            let ext = graph_components(&g, &v2, &MoveSet::new(2, EdgeSet::Extended)).unwrap();
            assert!(ext.count <= basic.count, "{desc}");
            assert!(basic.count <= 2 * ext.count, "{desc}");
        }
    }

    #[test]
    fn t_system_counts() {
        let (c5, cd) = setup("C5");
        let v2 = generating_tuples(&c5, &cd, 2).unwrap();
        let act = automorphism_action(&c5).unwrap();
        let (count, _) = t_systems(&c5, &v2, &act).unwrap();
        assert_eq!(count, 1); // abelian groups have a single T_k-system

        let (s3, cd3) = setup("S3");
        let v2 = generating_tuples(&s3, &cd3, 2).unwrap();
        let act3 = automorphism_action(&s3).unwrap();
        assert_eq!(t_systems(&s3, &v2, &act3).unwrap().0, 1);

        // A5 has two T2-systems: generating pairs split by whether the
        // commutator is a 3-cycle or a 5-cycle (distinct Higman labels, so
        // one system is impossible). Cross-checked by an independent
        // union-find over all 2280 pairs.
        let (a5, cd5) = setup("A5");
        let v2 = generating_tuples(&a5, &cd5, 2).unwrap();
        let act5 = automorphism_action(&a5).unwrap();
        assert_eq!(t_systems(&a5, &v2, &act5).unwrap().0, 2);
    }

    #[test]
    fn higman_label_examples() {
        let (s3, cd) = setup("S3");
        let act = automorphism_action(&s3).unwrap();
        let orbits = aut_class_orbits(&s3, &cd, &act);
        // A transposition and a 3-cycle generate S3; their commutator is a
        // 3-cycle, whose class is inverse-closed and Aut-stable.
        let t = (0..6u32).find(|&g| s3.element_order(g) == 2).unwrap();
        let c = (0..6u32).find(|&g| s3.element_order(g) == 3).unwrap();
        assert!(s3.is_generating(&[t, c]));
        let label = higman_invariant(&s3, &cd, &orbits, &[t, c]);
        let three_cycle_class = cd.class_of(c);
        assert_eq!(label, HigmanLabel(vec![three_cycle_class]));
        // The label of a generating pair of a nonabelian group never
        // contains the identity class.
        assert!(!label.0.contains(&0));
    }

    #[test]
    fn census_and_invariance() {
        let (a5, cd) = setup("A5");
        let v2 = generating_tuples(&a5, &cd, 2).unwrap();
        let act = automorphism_action(&a5).unwrap();
        let orbits = aut_class_orbits(&a5, &cd, &act);
        let census = t2_invariant_census(&a5, &v2, &cd, &orbits, &act).unwrap();
        assert!(!census.labels.is_empty());
        let (t_count, t_comps) = t_systems(&a5, &v2, &act).unwrap();
        assert!(census.labels.len() <= t_count);
        // Higman label constant on every T2 orbit.
        let mut label_of = vec![None; t_comps.count];
        for t in 0..v2.count() {
            let lab = higman_invariant(&a5, &cd, &orbits, v2.tuple(t));
            let comp = t_comps.component_of[t] as usize;
            match &label_of[comp] {
                None => label_of[comp] = Some(lab),
                Some(prev) => assert_eq!(prev, &lab),
            }
        }
    }

    #[test]
    fn pra_invariant_on_s3_and_a5() {
        for desc in ["S3", "A5"] {
            let (g, cd) = setup(desc);
            let v2 = generating_tuples(&g, &cd, 2).unwrap();
            let check = pra_component_invariant_check(&g, &v2, &cd).unwrap();
            assert!(check.ok, "{desc}");
        }
    }

    #[test]
    fn walk_determinism_and_start() {
        let (a5, cd) = setup("A5");
        let w1 = pra_walk(&a5, &cd, 3, 2, 50, 200, 9).unwrap();
        let w2 = pra_walk(&a5, &cd, 3, 2, 50, 200, 9).unwrap();
        assert_eq!(w1.samples, w2.samples);
        // steps=0, samples=1, no burn-in: a coordinate of the start tuple.
        let w0 = pra_walk(&a5, &cd, 3, 0, 0, 1, 7).unwrap();
        assert!(w0.start_tuple.contains(&w0.samples[0]));
        assert!(pra_walk(&a5, &cd, 1, 1, 1, 1, 0).is_err());
    }

    #[test]
    fn coverage_on_a5() {
        // Commutators of generating pairs of A5 are exactly the 3-cycles
        // and 5-cycles: 20 + 24 = 44 elements. The double transpositions
        // are commutators of A5 but never of a generating pair.
        let (a5, cd) = setup("A5");
        let v2 = generating_tuples(&a5, &cd, 2).unwrap();
        let table = build_character_table(&a5, &cd).unwrap();
        let cov = commutator_generating_coverage(&a5, &v2, &table).unwrap();
        assert_eq!(cov.count, 44);
        assert!(!cov.covered[0]);
        for g in 0..60u32 {
            let o = a5.element_order(g);
            assert_eq!(cov.covered[g as usize], o == 3 || o == 5);
        }
        assert!(cov.vacuous); // 3 eps(A5) > 2280/3600
        assert!(cov.ok);
    }
}
