//! Exact arithmetic in GF(p^n) for small prime powers.
//!
//! Elements are stored as a single integer whose base-p digits are the
//! coefficients of the reduced polynomial representative (constant term in
//! the lowest digit). The modulus is the lexicographically smallest monic
//! irreducible polynomial of the requested degree, so a field is fully
//! determined by (p, n) and results are reproducible across runs.

#![allow(clippy::needless_range_loop)]

use crate::error::{Error, Result};

/// Hard cap on the number of field elements.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Fields at or below this order precompute full operation tables.
const TABLE_ORDER_LIMIT: u64 = 256;

/// An element of a [`Field`], in canonical reduced form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FieldElement(pub u32);

/// GF(p^n) with a fixed irreducible modulus.
#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    degree: usize,
    q: u64,
    /// Monic modulus; coefficient of x^i at index i, length degree+1.
    modulus: Vec<u64>,
    add_tab: Option<Vec<u32>>,
    mul_tab: Option<Vec<u32>>,
    neg_tab: Option<Vec<u32>>,
    inv_tab: Option<Vec<u32>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits_of(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut() {
        *slot = v % p;
        v /= p;
    }
    out
}

fn value_of(digits: &[u64], p: u64) -> u64 {
    let mut v = 0u64;
    for &d in digits.iter().rev() {
        v = v * p + d;
    }
    v
}

/// Remainder of `a` modulo the monic polynomial `m`, coefficients mod p.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let top = r.len() - 1;
        if lead != 0 {
            for j in 0..dm {
                let idx = top - dm + j;
                r[idx] = (r[idx] + lead * (p - m[j] % p)) % p;
            }
        }
        r.pop();
    }
    while r.len() > 1 && (*r.last().unwrap()).is_multiple_of(p) {
        r.pop();
    }
    r.iter_mut().for_each(|c| *c %= p);
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ca * cb) % p;
        }
    }
    out
}

fn is_zero_poly(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=n/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits_of(low, p, d);
            g.push(1);
            if is_zero_poly(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree n over GF(p).
fn find_modulus(p: u64, n: usize) -> Vec<u64> {
    let count = p.pow(n as u32);
    for low in 0..count {
        let mut f = digits_of(low, p, n);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

impl Field {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n < 1 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..n {
            q = q.saturating_mul(p);
            if q > MAX_FIELD_ORDER {
                return Err(Error::SizeCap(format!("field order {p}^{n} exceeds {MAX_FIELD_ORDER}")));
            }
        }
        let modulus = find_modulus(p, n);
        let mut field = Field {
            p,
            degree: n,
            q,
            modulus,
            add_tab: None,
            mul_tab: None,
            neg_tab: None,
            inv_tab: None,
        };
        if q <= TABLE_ORDER_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut neg = vec![0u32; q];
        let mut inv = vec![0u32; q];
        for a in 0..q as u64 {
            neg[a as usize] = self.neg_raw(a) as u32;
            for b in 0..q as u64 {
                add[(a * self.q + b) as usize] = self.add_raw(a, b) as u32;
                mul[(a * self.q + b) as usize] = self.mul_raw(a, b) as u32;
            }
        }
        for a in 1..q as u64 {
            inv[a as usize] = self.pow_raw(a, self.q - 2) as u32;
        }
        self.add_tab = Some(add);
        self.mul_tab = Some(mul);
        self.neg_tab = Some(neg);
        self.inv_tab = Some(inv);
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic leading 1 last.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn el(&self, v: u64) -> FieldElement {
        FieldElement((v % self.q) as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    fn add_raw(&self, a: u64, b: u64) -> u64 {
        let da = digits_of(a, self.p, self.degree);
        let db = digits_of(b, self.p, self.degree);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        value_of(&sum, self.p)
    }

    fn neg_raw(&self, a: u64) -> u64 {
        let da = digits_of(a, self.p, self.degree);
        let n: Vec<u64> = da.iter().map(|x| (self.p - x) % self.p).collect();
        value_of(&n, self.p)
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let da = digits_of(a, self.p, self.degree);
        let db = digits_of(b, self.p, self.degree);
        let prod = poly_mul(&da, &db, self.p);
        let mut red = poly_rem(&prod, &self.modulus, self.p);
        red.resize(self.degree, 0);
        value_of(&red, self.p)
    }

    fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_tab {
            Some(t) => FieldElement(t[(a.0 as u64 * self.q + b.0 as u64) as usize]),
            None => FieldElement(self.add_raw(a.0 as u64, b.0 as u64) as u32),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match &self.neg_tab {
            Some(t) => FieldElement(t[a.0 as usize]),
            None => FieldElement(self.neg_raw(a.0 as u64) as u32),
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.mul_tab {
            Some(t) => FieldElement(t[(a.0 as u64 * self.q + b.0 as u64) as usize]),
            None => FieldElement(self.mul_raw(a.0 as u64, b.0 as u64) as u32),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse { q: self.q });
        }
        match &self.inv_tab {
            Some(t) => Ok(FieldElement(t[a.0 as usize])),
            None => Ok(FieldElement(self.pow_raw(a.0 as u64, self.q - 2) as u32)),
        }
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(self.pow_raw(a.0 as u64, e) as u32)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse { q: self.q });
        }
        let mut acc = a;
        let mut ord = 1u64;
        while acc != self.one() {
            acc = self.mul(acc, a);
            ord += 1;
        }
        Ok(ord)
    }
}
