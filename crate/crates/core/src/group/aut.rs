//! Automorphism actions for the supported families.
//!
//! An action is stored as a small list of index permutations whose closure
//! under composition is the full automorphism group acting on elements.
//! A6 and S6 are refused: their exceptional outer automorphism is not
//! realized here, and silently using the inner part would corrupt every
//! T-system count downstream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::classes::ClassData;
use super::{Family, GroupHandle};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::unionfind::DisjointSets;

/// Generator maps for Aut(G) acting on element indices.
#[derive(Clone, Debug)]
pub struct AutAction {
    maps: Vec<Vec<u32>>,
    out_order: u64,
}

impl AutAction {
    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn out_order(&self) -> u64 {
        self.out_order
    }

    pub fn apply(&self, map_idx: usize, g: u32) -> u32 {
        self.maps[map_idx][g as usize]
    }
}

fn compose_images(a: &[u8], b: &[u8]) -> Vec<u8> {
    // Left-to-right: apply a, then b.
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert_images(a: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len()];
    for (i, &v) in a.iter().enumerate() {
        out[v as usize] = i as u8;
    }
    out
}

fn encode_perm(img: &[u8]) -> u64 {
    let mut code = 0u64;
    for (i, &v) in img.iter().enumerate() {
        code |= (v as u64) << (4 * i);
    }
    code
}

fn decode_perm(code: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((code >> (4 * i)) & 0xF) as u8).collect()
}

/// Conjugation of every group element by an arbitrary point permutation
/// (which need not lie in the group itself).
fn conjugation_map_by_images(group: &GroupHandle, n: usize, s: &[u8]) -> Result<Vec<u32>> {
    let s_inv = invert_images(s);
    let mut map = vec![0u32; group.order()];
    for (i, slot) in map.iter_mut().enumerate() {
        let g = decode_perm(group.code(i as u32), n);
        let conj = compose_images(&compose_images(&s_inv, &g), s);
        *slot = group
            .index_of_code(encode_perm(&conj))
            .ok_or_else(|| Error::Internal("conjugation left the group".into()))?;
    }
    Ok(map)
}

/// Conjugation of every element by a fixed group element.
fn inner_map(group: &GroupHandle, x: u32) -> Vec<u32> {
    (0..group.order() as u32).map(|g| group.conj(g, x)).collect()
}

fn psl2_diagonal_twist_map(group: &GroupHandle, q: u64, field: &Field) -> Result<Vec<u32>> {
    // Conjugation by diag(v, 1) for the smallest non-square v: the PGL2 coset
    // representative outside PSL2 for odd q.
    let mut nonsquare = None;
    'search: for v in field.elements().skip(1) {
        for w in field.elements().skip(1) {
            if field.mul(w, w) == v {
                continue 'search;
            }
        }
        nonsquare = Some(v);
        break;
    }
    let v = nonsquare.ok_or_else(|| Error::Internal("no non-square in odd-order field".into()))?;
    let v_inv = field.inv(v)?;
    let mut map = vec![0u32; group.order()];
    for (i, slot) in map.iter_mut().enumerate() {
        let code = group.code(i as u32);
        let d0 = (code % q) as u32;
        let c0 = ((code / q) % q) as u32;
        let b0 = ((code / (q * q)) % q) as u32;
        let a0 = ((code / (q * q * q)) % q) as u32;
        use crate::field::FieldElement as El;
        let b1 = field.mul(El(b0), v_inv);
        let c1 = field.mul(El(c0), v);
        let twisted = canonical_code(field, q, [El(a0), b1, c1, El(d0)]);
        *slot = group
            .index_of_code(twisted)
            .ok_or_else(|| Error::Internal("diagonal twist left the group".into()))?;
    }
    Ok(map)
}

fn psl2_frobenius_map(group: &GroupHandle, q: u64, field: &Field) -> Result<Vec<u32>> {
    let p = field.characteristic();
    let mut map = vec![0u32; group.order()];
    for (i, slot) in map.iter_mut().enumerate() {
        let code = group.code(i as u32);
        use crate::field::FieldElement as El;
        let d0 = El((code % q) as u32);
        let c0 = El(((code / q) % q) as u32);
        let b0 = El(((code / (q * q)) % q) as u32);
        let a0 = El(((code / (q * q * q)) % q) as u32);
        let m = [field.pow(a0, p), field.pow(b0, p), field.pow(c0, p), field.pow(d0, p)];
        *slot = group
            .index_of_code(canonical_code(field, q, m))
            .ok_or_else(|| Error::Internal("Frobenius left the group".into()))?;
    }
    Ok(map)
}

fn canonical_code(field: &Field, q: u64, m: [crate::field::FieldElement; 4]) -> u64 {
    let enc = |x: &[crate::field::FieldElement; 4]| {
        ((x[0].0 as u64 * q + x[1].0 as u64) * q + x[2].0 as u64) * q + x[3].0 as u64
    };
    if field.characteristic() == 2 {
        return enc(&m);
    }
    let neg = [field.neg(m[0]), field.neg(m[1]), field.neg(m[2]), field.neg(m[3])];
    enc(if enc(&neg) < enc(&m) { &neg } else { &m })
}

fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|a| gcd(*a, m) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Greedy generating set for the unit group (Z/m)*.
fn unit_group_generators(m: u64) -> Vec<u64> {
    if m <= 2 {
        return Vec::new();
    }
    let mut gens = Vec::new();
    let mut closure = std::collections::HashSet::new();
    closure.insert(1u64);
    for a in 2..m {
        if gcd(a, m) != 1 || closure.contains(&a) {
            continue;
        }
        gens.push(a);
        let snapshot: Vec<u64> = closure.iter().copied().collect();
        for base in snapshot {
            let mut x = base;
            loop {
                x = x * a % m;
                if !closure.insert(x) {
                    break;
                }
            }
        }
        // Re-close under all generators until stable.
        loop {
            let before = closure.len();
            let snapshot: Vec<u64> = closure.iter().copied().collect();
            for &g in &gens {
                for &x in &snapshot {
                    closure.insert(x * g % m);
                }
            }
            if closure.len() == before {
                break;
            }
        }
        if closure.len() as u64 == euler_phi(m) {
            break;
        }
    }
    gens
}

/// Full automorphism action for the supported families.
pub fn automorphism_action(group: &GroupHandle) -> Result<AutAction> {
    let (maps, out_order) = match group.family() {
        Family::Alternating(6) => {
            return Err(Error::ExceptionalOuterAutomorphism("A6".into()));
        }
        Family::Symmetric(6) => {
            return Err(Error::ExceptionalOuterAutomorphism("S6".into()));
        }
        Family::Alternating(n) => {
            let n = *n;
            let mut t: Vec<u8> = (0..n as u8).collect();
            t.swap(0, 1);
            let cyc: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
            let maps = vec![
                conjugation_map_by_images(group, n, &t)?,
                conjugation_map_by_images(group, n, &cyc)?,
            ];
            (maps, 2)
        }
        Family::Symmetric(n) => {
            let maps = group.generators().iter().map(|&s| inner_map(group, s)).collect();
            let _ = n;
            (maps, 1)
        }
        Family::Psl2 { q, field } => {
            let q = *q;
            let f = field.degree() as u64;
            let mut maps: Vec<Vec<u32>> =
                group.generators().iter().map(|&s| inner_map(group, s)).collect();
            if q % 2 == 1 {
                maps.push(psl2_diagonal_twist_map(group, q, field)?);
            }
            if f > 1 {
                maps.push(psl2_frobenius_map(group, q, field)?);
            }
            let out = if q % 2 == 1 { 2 * f } else { f };
            (maps, out)
        }
        Family::Cyclic(m) => {
            let m = *m;
            let maps: Vec<Vec<u32>> = unit_group_generators(m)
                .into_iter()
                .map(|a| (0..m).map(|x| (x * a % m) as u32).collect())
                .collect();
            (maps, euler_phi(m))
        }
        Family::Product(_, _) => {
            return Err(Error::UnsupportedGroup(format!(
                "automorphism action of direct product {}",
                group.descriptor()
            )));
        }
    };
    let action = AutAction { maps, out_order };
    verify_action(group, &action)?;
    Ok(action)
}

/// Every listed map must be a homomorphic permutation: exhaustive for
/// |G| <= 1200, 10^4 seeded random pairs otherwise.
fn verify_action(group: &GroupHandle, action: &AutAction) -> Result<()> {
    let n = group.order() as u32;
    for map in action.maps() {
        if map.len() != n as usize {
            return Err(Error::Internal("automorphism map has wrong length".into()));
        }
        let check = |g: u32, h: u32| -> bool {
            map[group.mul(g, h) as usize] == group.mul(map[g as usize], map[h as usize])
        };
        if n <= 1200 {
            for g in 0..n {
                for h in 0..n {
                    if !check(g, h) {
                        return Err(Error::Internal("map is not an automorphism".into()));
                    }
                }
            }
        } else {
            let mut rng = ChaCha12Rng::seed_from_u64(0xA07);
            for _ in 0..10_000 {
                let g = rng.gen_range(0..n);
                let h = rng.gen_range(0..n);
                if !check(g, h) {
                    return Err(Error::Internal("map is not an automorphism".into()));
                }
            }
        }
    }
    Ok(())
}

/// Partition of conjugacy classes into Aut(G)-orbits, plus the coarser
/// partition into inverse-closed orbit unions.
#[derive(Clone, Debug)]
pub struct ClassOrbits {
    orbit_of: Vec<u32>,
    orbits: Vec<Vec<u32>>,
    merged_of: Vec<u32>,
    merged: Vec<Vec<u32>>,
}

impl ClassOrbits {
    pub fn orbit_of(&self, class: u32) -> u32 {
        self.orbit_of[class as usize]
    }

    pub fn orbits(&self) -> &[Vec<u32>] {
        &self.orbits
    }

    /// Inverse-closed Aut-orbit union containing the class.
    pub fn merged_of(&self, class: u32) -> u32 {
        self.merged_of[class as usize]
    }

    pub fn merged(&self) -> &[Vec<u32>] {
        &self.merged
    }
}

pub fn aut_class_orbits(group: &GroupHandle, classes: &ClassData, action: &AutAction) -> ClassOrbits {
    let k = classes.count();
    let mut ds = DisjointSets::new(k);
    for map in action.maps() {
        for c in 0..k {
            let image = classes.class_of(map[classes.representative(c) as usize]);
            ds.union(c, image as usize);
        }
    }
    let _ = group;
    let (orbit_of, orbit_count) = ds.component_ids();
    let mut orbits = vec![Vec::new(); orbit_count];
    for c in 0..k {
        orbits[orbit_of[c] as usize].push(c as u32);
    }

    let mut ds2 = ds.clone();
    for c in 0..k {
        ds2.union(c, classes.inverse_class(c) as usize);
    }
    let (merged_of, merged_count) = ds2.component_ids();
    let mut merged = vec![Vec::new(); merged_count];
    for c in 0..k {
        merged[merged_of[c] as usize].push(c as u32);
    }

    ClassOrbits {
        orbit_of,
        orbits,
        merged_of,
        merged,
    }
}
