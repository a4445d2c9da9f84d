//! Free-group words, commutator shapes, word-map evaluation, and the
//! brute-force fiber oracle.
//!
//! The oracle enumerates tuples exhaustively (with the first coordinate
//! reduced to class representatives, since word maps commute with
//! simultaneous conjugation) and is the independent cross-check for every
//! character-sum fiber formula in [`crate::spectral`].

use num::{BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::group::classes::ClassData;
use crate::group::GroupHandle;
use crate::spectral::{FiberMode, FiberTable};

/// Exhaustive enumeration cap on |G|^arity.
pub const BRUTE_FORCE_CAP: u128 = 100_000_000;

/// Default sample count above the exhaustive cap.
pub const DEFAULT_SAMPLES: u64 = 10_000_000;

/// A freely reduced word in x1..x9.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<(u8, i8)>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn variable(v: u8) -> Word {
        Word {
            letters: vec![(v, 1)],
        }
    }

    pub fn letters(&self) -> &[(u8, i8)] {
        &self.letters
    }

    /// Highest variable index used, plus one.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|&(v, _)| v as usize + 1).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, v: u8, e: i8) {
        if let Some(&(lv, le)) = self.letters.last() {
            if lv == v && le == -e {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((v, e));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &(v, e) in &other.letters {
            out.push(v, e);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    pub fn repeat(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Canonical text form, e.g. `x1^-1x2^-1x1x2`.
    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let (v, e) = self.letters[i];
            let mut run = 1i64;
            while i + 1 < self.letters.len() && self.letters[i + 1] == (v, e) {
                run += 1;
                i += 1;
            }
            let exp = run * e as i64;
            s.push('x');
            s.push_str(&(v + 1).to_string());
            if exp != 1 {
                s.push('^');
                s.push_str(&exp.to_string());
            }
            i += 1;
        }
        s
    }

    /// Substitution: evaluate the word at a tuple of element indices under
    /// the left-to-right product convention.
    pub fn evaluate(&self, group: &GroupHandle, tuple: &[u32]) -> Result<u32> {
        if tuple.len() < self.arity() {
            return Err(Error::InvalidParameter(format!(
                "word of arity {} evaluated on a {}-tuple",
                self.arity(),
                tuple.len()
            )));
        }
        let mut acc = group.identity();
        for &(v, e) in &self.letters {
            let g = tuple[v as usize];
            let g = if e < 0 { group.inv(g) } else { g };
            acc = group.mul(acc, g);
        }
        Ok(acc)
    }
}

/// Parses the word grammar: variables `x1`..`x9`, powers `^k` (negative
/// allowed), juxtaposition, and brackets `[u,v]` for commutators.
pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let word = parse_sequence(bytes, &mut pos, 0)?;
    if pos != bytes.len() {
        return Err(Error::WordSyntax {
            pos,
            msg: format!("unexpected '{}'", bytes[pos] as char),
        });
    }
    Ok(word)
}

fn parse_sequence(bytes: &[u8], pos: &mut usize, depth: usize) -> Result<Word> {
    let mut out = Word::empty();
    let mut any = false;
    loop {
        match bytes.get(*pos) {
            Some(b'x') | Some(b'[') => {
                let factor = parse_factor(bytes, pos, depth)?;
                out = out.concat(&factor);
                any = true;
            }
            Some(b',') | Some(b']') if depth > 0 => break,
            None => break,
            Some(&c) => {
                return Err(Error::WordSyntax {
                    pos: *pos,
                    msg: format!("unexpected '{}'", c as char),
                })
            }
        }
    }
    if !any && depth > 0 {
        return Err(Error::WordSyntax {
            pos: *pos,
            msg: "empty bracket operand".into(),
        });
    }
    Ok(out)
}

fn parse_factor(bytes: &[u8], pos: &mut usize, depth: usize) -> Result<Word> {
    let base = match bytes.get(*pos) {
        Some(b'x') => {
            *pos += 1;
            let d = bytes.get(*pos).copied().ok_or(Error::WordSyntax {
                pos: *pos,
                msg: "expected variable digit".into(),
            })?;
            if !(b'1'..=b'9').contains(&d) {
                return Err(Error::WordSyntax {
                    pos: *pos,
                    msg: "variable index must be 1..9".into(),
                });
            }
            *pos += 1;
            Word::variable(d - b'1')
        }
        Some(b'[') => {
            *pos += 1;
            let left = parse_sequence(bytes, pos, depth + 1)?;
            if bytes.get(*pos) != Some(&b',') {
                return Err(Error::WordSyntax {
                    pos: *pos,
                    msg: "expected ',' in bracket".into(),
                });
            }
            *pos += 1;
            let right = parse_sequence(bytes, pos, depth + 1)?;
            if bytes.get(*pos) != Some(&b']') {
                return Err(Error::WordSyntax {
                    pos: *pos,
                    msg: "expected ']'".into(),
                });
            }
            *pos += 1;
            Word::commutator(&left, &right)
        }
        other => {
            return Err(Error::WordSyntax {
                pos: *pos,
                msg: format!("expected variable or bracket, found {:?}", other.map(|&c| c as char)),
            })
        }
    };
    if bytes.get(*pos) == Some(&b'^') {
        *pos += 1;
        let start = *pos;
        if bytes.get(*pos) == Some(&b'-') {
            *pos += 1;
        }
        while bytes.get(*pos).map(|c| c.is_ascii_digit()).unwrap_or(false) {
            *pos += 1;
        }
        let k: i64 = text_slice(bytes, start, *pos).parse().map_err(|_| Error::WordSyntax {
            pos: start,
            msg: "expected integer exponent".into(),
        })?;
        return Ok(base.repeat(k));
    }
    Ok(base)
}

fn text_slice(bytes: &[u8], a: usize, b: usize) -> &str {
    std::str::from_utf8(&bytes[a..b]).unwrap_or("")
}

/// A bracket arrangement: a binary tree whose leaves are the distinct
/// variables x1..xm in some order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommutatorShape {
    Leaf(u8),
    Node(Box<CommutatorShape>, Box<CommutatorShape>),
}

impl CommutatorShape {
    pub fn leaves(&self) -> Vec<u8> {
        match self {
            CommutatorShape::Leaf(v) => vec![*v],
            CommutatorShape::Node(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }

    /// Leaf labels must be a permutation of 0..m.
    pub fn validate(&self) -> Result<()> {
        let mut labels = self.leaves();
        labels.sort_unstable();
        let m = labels.len() as u8;
        if labels != (0..m).collect::<Vec<u8>>() {
            return Err(Error::InvalidParameter("shape leaves are not distinct variables 1..m".into()));
        }
        Ok(())
    }

    pub fn to_word(&self) -> Word {
        match self {
            CommutatorShape::Leaf(v) => Word::variable(*v),
            CommutatorShape::Node(l, r) => Word::commutator(&l.to_word(), &r.to_word()),
        }
    }
}

/// Every bracket arrangement on m distinct variables (tree shapes times
/// leaf orderings).
pub fn all_shapes(m: usize) -> Vec<CommutatorShape> {
    fn structures(slots: &[u8]) -> Vec<CommutatorShape> {
        if slots.len() == 1 {
            return vec![CommutatorShape::Leaf(slots[0])];
        }
        let mut out = Vec::new();
        for split in 1..slots.len() {
            for l in structures(&slots[..split]) {
                for r in structures(&slots[split..]) {
                    out.push(CommutatorShape::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }
    let mut out = Vec::new();
    let mut perm: Vec<u8> = (0..m as u8).collect();
    loop {
        out.extend(structures(&perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exact per-class fiber counts by exhaustive enumeration. The first
/// coordinate runs over class representatives only; conjugation invariance
/// recovers the full count with multiplicity |class|.
pub fn brute_force_fibers(word: &Word, group: &GroupHandle, classes: &ClassData) -> Result<FiberTable> {
    let m = word.arity();
    if m == 0 {
        return Err(Error::InvalidParameter("cannot enumerate fibers of the empty word".into()));
    }
    let n = group.order();
    let domain = (n as u128).pow(m as u32);
    if domain > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap(format!(
            "|G|^{m} = {domain} exceeds the exhaustive cap {BRUTE_FORCE_CAP}"
        )));
    }
    let k = classes.count();
    let mut totals = vec![0u128; k];
    let mut tuple = vec![0u32; m];
    for c1 in 0..k {
        tuple[0] = classes.representative(c1);
        let mult = classes.size(c1) as u128;
        let mut raw = vec![0u64; k];
        if m == 1 {
            raw[classes.class_of(word.evaluate(group, &tuple)?) as usize] += 1;
        } else {
            // Odometer over the free coordinates 1..m.
            for t in tuple.iter_mut().skip(1) {
                *t = 0;
            }
            'outer: loop {
                let img = word.evaluate(group, &tuple)?;
                raw[classes.class_of(img) as usize] += 1;
                let mut pos = 1;
                loop {
                    if pos == m {
                        break 'outer;
                    }
                    tuple[pos] += 1;
                    if (tuple[pos] as usize) < n {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                }
            }
        }
        for (t, &hits) in raw.iter().enumerate() {
            totals[t] += mult * hits as u128;
        }
    }
    let mut counts = Vec::with_capacity(k);
    for (t, &total) in totals.iter().enumerate() {
        let size = classes.size(t) as u128;
        if total % size != 0 {
            return Err(Error::Internal(format!(
                "class total {total} not divisible by class size {size} at class {t}"
            )));
        }
        counts.push(total / size);
    }
    let fibers = FiberTable {
        word_id: word.render(),
        arity: m as u32,
        group_order: n as u64,
        class_sizes: classes.sizes().to_vec(),
        counts,
        domain,
        mode: FiberMode::Exhaustive,
    };
    fibers.check_conservation()?;
    Ok(fibers)
}

/// Seeded uniform sampling for word maps above the exhaustive cap.
pub fn sampled_fibers(
    word: &Word,
    group: &GroupHandle,
    classes: &ClassData,
    samples: u64,
    seed: u64,
) -> Result<FiberTable> {
    let m = word.arity();
    if m == 0 {
        return Err(Error::InvalidParameter("cannot sample fibers of the empty word".into()));
    }
    let n = group.order() as u32;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts = vec![0u128; classes.count()];
    let mut tuple = vec![0u32; m];
    for _ in 0..samples {
        for t in tuple.iter_mut() {
            *t = rng.gen_range(0..n);
        }
        let img = word.evaluate(group, &tuple)?;
        counts[classes.class_of(img) as usize] += 1;
    }
    Ok(FiberTable {
        word_id: word.render(),
        arity: m as u32,
        group_order: n as u64,
        class_sizes: classes.sizes().to_vec(),
        counts,
        domain: samples as u128,
        mode: FiberMode::Sampled { samples, seed },
    })
}

/// Chooses exhaustive enumeration under the cap, sampling above it.
pub fn fibers_auto(
    word: &Word,
    group: &GroupHandle,
    classes: &ClassData,
    samples: u64,
    seed: u64,
) -> Result<FiberTable> {
    let m = word.arity().max(1);
    let domain = (group.order() as u128).pow(m as u32);
    if domain <= BRUTE_FORCE_CAP {
        brute_force_fibers(word, group, classes)
    } else {
        sampled_fibers(word, group, classes, samples, seed)
    }
}

/// Equidistribution parameter for m-fold commutator shapes:
/// sqrt(m-1) * (zeta(2)-1)^(1/4).
#[derive(Clone, Debug)]
pub struct GammaBound {
    pub gamma: f64,
    /// (m-1)^2 (zeta(2)-1): gamma is its fourth root.
    pub quartic_base: BigRational,
}

pub fn gamma_bound(table: &CharacterTable, m: usize) -> Result<GammaBound> {
    if m < 2 {
        return Err(Error::InvalidParameter("gamma bound needs arity >= 2".into()));
    }
    let base = table.zeta2_minus_one();
    let f = ((m - 1) * (m - 1)) as i64;
    let quartic_base = base * BigRational::from_integer(f.into());
    let gamma = quartic_base.to_f64().unwrap().max(0.0).powf(0.25);
    Ok(GammaBound {
        gamma,
        quartic_base,
    })
}
