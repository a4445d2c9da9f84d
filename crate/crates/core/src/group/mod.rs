//! Concrete finite groups with canonical element indexing.
//!
//! Supported families: alternating and symmetric groups (acting on points
//! 0..n-1), PSL(2,q) as determinant-one matrices modulo the center, cyclic
//! groups, and direct products of these. Every group is fully enumerated;
//! element 0 is the identity and the remaining elements are sorted by their
//! canonical integer encoding, so indices are stable across runs.
//!
//! The global product convention is left-to-right: `mul(a, b)` means "apply
//! a first, then b" for permutations, and the ordinary matrix product `A*B`
//! for PSL(2,q). Word evaluation and Nielsen moves inherit this convention.

pub mod aut;
pub mod classes;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// Cap on fully enumerated group order (A9 is the largest supported family member).
pub const MAX_ENUMERATED_ORDER: u64 = 400_000;

/// Groups at or below this order precompute the full multiplication table.
const MUL_TABLE_ORDER_LIMIT: usize = 2048;

/// Human-readable name of the composition convention, echoed in reports.
pub const COMPOSITION_CONVENTION: &str = "left-to-right";

#[derive(Clone, Debug)]
pub enum Family {
    Alternating(usize),
    Symmetric(usize),
    Psl2 { q: u64, field: Field },
    Cyclic(u64),
    Product(Box<GroupHandle>, Box<GroupHandle>),
}

/// A fully enumerated finite group.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    descriptor: String,
    family: Family,
    codes: Vec<u64>,
    index_of: HashMap<u64, u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    mul_table: Option<Vec<u16>>,
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v as u8);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

fn permutation_is_even(img: &[u8]) -> bool {
    let n = img.len();
    let mut seen = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = img[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions.is_multiple_of(2)
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

fn perm_cycle_notation(img: &[u8]) -> String {
    let n = img.len();
    let mut seen = vec![false; n];
    let mut s = String::new();
    for start in 0..n {
        if seen[start] || img[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x + 1);
            x = img[x] as usize;
        }
        s.push('(');
        s.push_str(&cyc.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

type Mat2 = [FieldElement; 4];

fn encode_mat(m: &Mat2, q: u64) -> u64 {
    ((m[0].0 as u64 * q + m[1].0 as u64) * q + m[2].0 as u64) * q + m[3].0 as u64
}

fn decode_mat(code: u64, q: u64) -> Mat2 {
    let d = (code % q) as u32;
    let c = ((code / q) % q) as u32;
    let b = ((code / (q * q)) % q) as u32;
    let a = ((code / (q * q * q)) % q) as u32;
    [FieldElement(a), FieldElement(b), FieldElement(c), FieldElement(d)]
}

/// Representative of {M, -M} with the lexicographically smaller entry tuple.
fn canonical_mat(field: &Field, m: Mat2) -> Mat2 {
    if field.characteristic() == 2 {
        return m;
    }
    let neg = [field.neg(m[0]), field.neg(m[1]), field.neg(m[2]), field.neg(m[3])];
    let key = |x: &Mat2| (x[0].0, x[1].0, x[2].0, x[3].0);
    if key(&neg) < key(&m) {
        neg
    } else {
        m
    }
}

fn mat_mul(field: &Field, a: &Mat2, b: &Mat2) -> Mat2 {
    [
        field.add(field.mul(a[0], b[0]), field.mul(a[1], b[2])),
        field.add(field.mul(a[0], b[1]), field.mul(a[1], b[3])),
        field.add(field.mul(a[2], b[0]), field.mul(a[3], b[2])),
        field.add(field.mul(a[2], b[1]), field.mul(a[3], b[3])),
    ]
}

fn mat_inv(field: &Field, m: &Mat2) -> Mat2 {
    // Determinant is 1, so the adjugate is the inverse.
    [m[3], field.neg(m[1]), field.neg(m[2]), m[0]]
}

fn prime_power_split(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut f = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                f += 1;
            }
            return if rest == 1 { Some((p, f)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

impl GroupHandle {
    /// Parses a descriptor such as `A5`, `S6`, `PSL2(7)`, `C12`, or a
    /// product joined with `x` like `C2xC3`.
    pub fn from_descriptor(desc: &str) -> Result<GroupHandle> {
        let desc = desc.trim();
        if let Some((left, right)) = split_top_product(desc) {
            let g1 = GroupHandle::from_descriptor(left)?;
            let g2 = GroupHandle::from_descriptor(right)?;
            return GroupHandle::product(g1, g2);
        }
        if let Some(rest) = desc.strip_prefix("PSL2(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::UnsupportedGroup(desc.to_string()))?;
            let q: u64 = inner
                .parse()
                .map_err(|_| Error::UnsupportedGroup(desc.to_string()))?;
            return GroupHandle::psl2(q);
        }
        if let Some(rest) = desc.strip_prefix('A') {
            if let Ok(n) = rest.parse::<usize>() {
                return GroupHandle::alternating(n);
            }
        }
        if let Some(rest) = desc.strip_prefix('S') {
            if let Ok(n) = rest.parse::<usize>() {
                return GroupHandle::symmetric(n);
            }
        }
        if let Some(rest) = desc.strip_prefix('C') {
            if let Ok(m) = rest.parse::<u64>() {
                return GroupHandle::cyclic(m);
            }
        }
        Err(Error::UnsupportedGroup(desc.to_string()))
    }

    pub fn alternating(n: usize) -> Result<GroupHandle> {
        if !(3..=9).contains(&n) {
            return Err(Error::UnsupportedGroup(format!("A{n} (supported: 3 <= n <= 9)")));
        }
        let codes: Vec<u64> = permutations(n)
            .into_iter()
            .filter(|img| permutation_is_even(img))
            .map(|img| encode_perm(&img))
            .collect();
        let gens = alternating_generator_images(n);
        Self::build(format!("A{n}"), Family::Alternating(n), codes, gens)
    }

    pub fn symmetric(n: usize) -> Result<GroupHandle> {
        if !(2..=8).contains(&n) {
            return Err(Error::UnsupportedGroup(format!("S{n} (supported: 2 <= n <= 8)")));
        }
        let codes: Vec<u64> = permutations(n).into_iter().map(|img| encode_perm(&img)).collect();
        let mut gens: Vec<u64> = Vec::new();
        let mut t: Vec<u8> = (0..n as u8).collect();
        t.swap(0, 1);
        gens.push(encode_perm(&t));
        if n > 2 {
            let c: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
            gens.push(encode_perm(&c));
        }
        Self::build(format!("S{n}"), Family::Symmetric(n), codes, gens)
    }

    pub fn psl2(q: u64) -> Result<GroupHandle> {
        if !(2..=16).contains(&q) {
            return Err(Error::UnsupportedGroup(format!("PSL2({q}) (supported: 2 <= q <= 16)")));
        }
        let (p, f) = prime_power_split(q)
            .ok_or_else(|| Error::UnsupportedGroup(format!("PSL2({q}): q must be a prime power")))?;
        let field = Field::new(p, f as usize)?;
        let mut seen = std::collections::HashSet::new();
        let mut codes = Vec::new();
        for a in field.elements() {
            for b in field.elements() {
                for c in field.elements() {
                    for d in field.elements() {
                        let det = field.sub(field.mul(a, d), field.mul(b, c));
                        if det != field.one() {
                            continue;
                        }
                        let m = canonical_mat(&field, [a, b, c, d]);
                        let code = encode_mat(&m, q);
                        if seen.insert(code) {
                            codes.push(code);
                        }
                    }
                }
            }
        }
        // Transvection generators of SL2 descend to PSL2. Over an extension
        // field the upper transvections must span GF(q) additively, so one is
        // included per power basis element.
        let mut gens = Vec::new();
        for j in 0..f {
            let lam = field.pow(field.el(p), j as u64); // x^j in the power basis
            let e12 = canonical_mat(&field, [field.one(), lam, field.zero(), field.one()]);
            gens.push(encode_mat(&e12, q));
        }
        let e21 = canonical_mat(&field, [field.one(), field.zero(), field.one(), field.one()]);
        gens.push(encode_mat(&e21, q));
        gens.dedup();
        Self::build(format!("PSL2({q})"), Family::Psl2 { q, field }, codes, gens)
    }

    pub fn cyclic(m: u64) -> Result<GroupHandle> {
        if !(1..=10_000).contains(&m) {
            return Err(Error::UnsupportedGroup(format!("C{m} (supported: 1 <= m <= 10000)")));
        }
        let codes: Vec<u64> = (0..m).collect();
        let gens = if m > 1 { vec![1u64] } else { vec![] };
        Self::build(format!("C{m}"), Family::Cyclic(m), codes, gens)
    }

    pub fn product(g1: GroupHandle, g2: GroupHandle) -> Result<GroupHandle> {
        let n1 = g1.order() as u64;
        let n2 = g2.order() as u64;
        let total = n1.saturating_mul(n2);
        if total > MAX_ENUMERATED_ORDER {
            return Err(Error::SizeCap(format!("product order {total} exceeds {MAX_ENUMERATED_ORDER}")));
        }
        let descriptor = format!("{}x{}", g1.descriptor(), g2.descriptor());
        let codes: Vec<u64> = (0..total).collect();
        let mut gens = Vec::new();
        for &g in g1.generators() {
            gens.push(g as u64 * n2);
        }
        for &h in g2.generators() {
            gens.push(h as u64);
        }
        Self::build(descriptor, Family::Product(Box::new(g1), Box::new(g2)), codes, gens)
    }

    fn build(descriptor: String, family: Family, mut codes: Vec<u64>, gen_codes: Vec<u64>) -> Result<GroupHandle> {
        if codes.len() as u64 > MAX_ENUMERATED_ORDER {
            return Err(Error::SizeCap(format!(
                "group order {} exceeds {MAX_ENUMERATED_ORDER}",
                codes.len()
            )));
        }
        codes.sort_unstable();
        let id_code = identity_code(&family);
        let pos = codes
            .binary_search(&id_code)
            .map_err(|_| Error::Internal("identity not among enumerated elements".into()))?;
        codes.remove(pos);
        codes.insert(0, id_code);
        let index_of: HashMap<u64, u32> = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        if index_of.len() != codes.len() {
            return Err(Error::Internal("duplicate canonical element encodings".into()));
        }
        let mut group = GroupHandle {
            descriptor,
            family,
            codes,
            index_of,
            inverse: Vec::new(),
            generators: Vec::new(),
            mul_table: None,
        };
        group.inverse = (0..group.order())
            .map(|i| {
                let inv_code = invert_code(&group.family, group.codes[i]);
                group.index_of[&inv_code]
            })
            .collect();
        group.generators = gen_codes
            .iter()
            .map(|c| {
                group
                    .index_of
                    .get(c)
                    .copied()
                    .ok_or_else(|| Error::Internal("generator not in element list".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        if group.order() <= MUL_TABLE_ORDER_LIMIT {
            let n = group.order();
            let mut table = vec![0u16; n * n];
            for i in 0..n {
                for j in 0..n {
                    let code = compose_codes(&group.family, group.codes[i], group.codes[j]);
                    table[i * n + j] = group.index_of[&code] as u16;
                }
            }
            group.mul_table = Some(table);
        }
        // The recorded generating set must actually generate.
        if !group.generators.is_empty() {
            let gens = group.generators.clone();
            if !group.is_generating(&gens) {
                return Err(Error::Internal("family generating set failed closure check".into()));
            }
        }
        Ok(group)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn code(&self, i: u32) -> u64 {
        self.codes[i as usize]
    }

    pub fn index_of_code(&self, code: u64) -> Option<u32> {
        self.index_of.get(&code).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[a as usize * self.codes.len() + b as usize] as u32,
            None => {
                let code = compose_codes(&self.family, self.codes[a as usize], self.codes[b as usize]);
                self.index_of[&code]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = self.identity();
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut acc = a;
        let mut ord = 1u32;
        while acc != self.identity() {
            acc = self.mul(acc, a);
            ord += 1;
        }
        ord
    }

    /// x^-1 g x.
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(self.inv(x), g), x)
    }

    /// [a, b] = a^-1 b^-1 a b under the left-to-right convention.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.mul(self.inv(a), self.inv(b)), a), b)
    }

    /// Breadth-first closure of a generating set; returns sorted indices.
    pub fn subgroup_closure(&self, gens: &[u32]) -> Vec<u32> {
        let (bits, _) = self.closure_bitset(gens, false);
        let mut out = Vec::new();
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                out.push((w * 64 + b) as u32);
                word &= word - 1;
            }
        }
        out
    }

    /// BFS closure as a bitset. With `early_exit`, stops as soon as the
    /// closure exceeds |G|/2 (index of a proper subgroup is at least 2),
    /// reporting the group order as the size.
    pub fn closure_bitset(&self, gens: &[u32], early_exit: bool) -> (Vec<u64>, usize) {
        let n = self.order();
        let mut bits = vec![0u64; n.div_ceil(64)];
        let set = |bits: &mut [u64], i: u32| {
            bits[i as usize / 64] |= 1u64 << (i % 64);
        };
        let get = |bits: &[u64], i: u32| bits[i as usize / 64] >> (i % 64) & 1 == 1;
        let mut queue: Vec<u32> = Vec::new();
        set(&mut bits, self.identity());
        queue.push(self.identity());
        let mut size = 1usize;
        let mut head = 0usize;
        while head < queue.len() {
            let h = queue[head];
            head += 1;
            for &g in gens {
                for next in [self.mul(h, g), self.mul(h, self.inv(g))] {
                    if !get(&bits, next) {
                        set(&mut bits, next);
                        queue.push(next);
                        size += 1;
                        if early_exit && size > n / 2 {
                            return (bits, n);
                        }
                    }
                }
            }
        }
        (bits, size)
    }

    /// True iff the tuple generates the whole group.
    pub fn is_generating(&self, tuple: &[u32]) -> bool {
        if tuple.is_empty() {
            return self.order() == 1;
        }
        let (_, size) = self.closure_bitset(tuple, true);
        size == self.order()
    }

    /// Minimal number of generators, searched up to 3.
    pub fn min_generators(&self, classes: &classes::ClassData) -> Result<usize> {
        let n = self.order();
        if n == 1 {
            return Ok(0);
        }
        if classes.orders().iter().any(|&o| o as usize == n) {
            return Ok(1);
        }
        for c in 0..classes.count() {
            let rep = classes.representative(c);
            for g2 in 0..n as u32 {
                if self.is_generating(&[rep, g2]) {
                    return Ok(2);
                }
            }
        }
        for c in 0..classes.count() {
            let rep = classes.representative(c);
            for g2 in 0..n as u32 {
                for g3 in 0..n as u32 {
                    if self.is_generating(&[rep, g2, g3]) {
                        return Ok(3);
                    }
                }
            }
        }
        Err(Error::InvalidParameter(format!(
            "{} needs more than 3 generators",
            self.descriptor
        )))
    }

    /// Human-readable element label for reports.
    pub fn label(&self, i: u32) -> String {
        match &self.family {
            Family::Alternating(n) | Family::Symmetric(n) => {
                perm_cycle_notation(&decode_perm(self.codes[i as usize], *n))
            }
            Family::Psl2 { q, .. } => {
                let m = decode_mat(self.codes[i as usize], *q);
                format!("[[{},{}],[{},{}]]", m[0].0, m[1].0, m[2].0, m[3].0)
            }
            Family::Cyclic(_) => format!("{}", self.codes[i as usize]),
            Family::Product(g1, g2) => {
                let n2 = g2.order() as u64;
                let code = self.codes[i as usize];
                format!("({},{})", g1.label((code / n2) as u32), g2.label((code % n2) as u32))
            }
        }
    }
}

fn identity_code(family: &Family) -> u64 {
    match family {
        Family::Alternating(n) | Family::Symmetric(n) => {
            let img: Vec<u8> = (0..*n as u8).collect();
            encode_perm(&img)
        }
        Family::Psl2 { q, field } => {
            let m = [field.one(), field.zero(), field.zero(), field.one()];
            encode_mat(&m, *q)
        }
        Family::Cyclic(_) => 0,
        Family::Product(_, _) => 0,
    }
}

fn compose_codes(family: &Family, a: u64, b: u64) -> u64 {
    match family {
        Family::Alternating(n) | Family::Symmetric(n) => {
            let pa = decode_perm(a, *n);
            let pb = decode_perm(b, *n);
            let img: Vec<u8> = (0..*n).map(|i| pb[pa[i] as usize]).collect();
            encode_perm(&img)
        }
        Family::Psl2 { q, field } => {
            let ma = decode_mat(a, *q);
            let mb = decode_mat(b, *q);
            let m = canonical_mat(field, mat_mul(field, &ma, &mb));
            encode_mat(&m, *q)
        }
        Family::Cyclic(m) => (a + b) % m,
        Family::Product(g1, g2) => {
            let n2 = g2.order() as u64;
            let i = g1.mul((a / n2) as u32, (b / n2) as u32) as u64;
            let j = g2.mul((a % n2) as u32, (b % n2) as u32) as u64;
            i * n2 + j
        }
    }
}

fn invert_code(family: &Family, a: u64) -> u64 {
    match family {
        Family::Alternating(n) | Family::Symmetric(n) => {
            let pa = decode_perm(a, *n);
            let mut img = vec![0u8; *n];
            for (i, &v) in pa.iter().enumerate() {
                img[v as usize] = i as u8;
            }
            encode_perm(&img)
        }
        Family::Psl2 { q, field } => {
            let m = decode_mat(a, *q);
            let inv = canonical_mat(field, mat_inv(field, &m));
            encode_mat(&inv, *q)
        }
        Family::Cyclic(m) => (m - a) % m,
        Family::Product(g1, g2) => {
            let n2 = g2.order() as u64;
            let i = g1.inv((a / n2) as u32) as u64;
            let j = g2.inv((a % n2) as u32) as u64;
            i * n2 + j
        }
    }
}

fn alternating_generator_images(n: usize) -> Vec<u64> {
    let mut gens = Vec::new();
    let mut three: Vec<u8> = (0..n as u8).collect();
    three[0] = 1;
    three[1] = 2;
    three[2] = 0;
    gens.push(encode_perm(&three));
    if n > 3 {
        let cyc: Vec<u8> = if n % 2 == 1 {
            (0..n).map(|i| ((i + 1) % n) as u8).collect()
        } else {
            // Rotate points 1..n-1 and fix 0, giving an even (n-1)-cycle.
            (0..n)
                .map(|i| if i == 0 { 0 } else { (i % (n - 1) + 1) as u8 })
                .collect()
        };
        gens.push(encode_perm(&cyc));
    }
    gens
}

fn split_top_product(desc: &str) -> Option<(&str, &str)> {
    // Split at the last 'x' that separates two descriptors (left-fold nesting).
    let bytes = desc.as_bytes();
    for i in (1..bytes.len().saturating_sub(1)).rev() {
        if bytes[i] == b'x' {
            return Some((&desc[..i], &desc[i + 1..]));
        }
    }
    None
}
