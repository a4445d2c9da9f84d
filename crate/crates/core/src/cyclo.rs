//! Exact cyclotomic numbers.
//!
//! A [`CycNum`] is a rational linear combination of `order`-th roots of
//! unity, held in canonical reduced form: coefficients over the power basis
//! 1, z, ..., z^(phi(order)-1) modulo the cyclotomic polynomial. Canonical
//! form makes rationality tests and exact equality decidable, which is what
//! turns "this character sum is an integer" into a provable assertion
//! instead of a float comparison.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer coefficients of the cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    // Build Phi_d for every divisor d of n in ascending order.
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut phis: Vec<Vec<BigInt>> = Vec::new();
    for &d in &divisors {
        // x^d - 1 divided by the Phi of all proper divisors of d.
        let mut poly = vec![BigInt::zero(); d as usize + 1];
        poly[0] = BigInt::from(-1);
        poly[d as usize] = BigInt::one();
        for (j, &dj) in divisors.iter().enumerate() {
            if dj < d && d % dj == 0 {
                poly = poly_divide_exact(&poly, &phis[j]);
            }
        }
        phis.push(poly);
    }
    phis.pop().unwrap()
}

/// Exact division by a monic integer polynomial; panics if not exact.
fn poly_divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let top = rem.len() - 1;
        let c = rem[top].clone();
        if !c.is_zero() {
            quot[top - dd] = c.clone();
            for (j, dc) in den.iter().enumerate() {
                let idx = top - dd + j;
                let sub = &c * dc;
                rem[idx] -= sub;
            }
        }
        rem.pop();
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A rational linear combination of roots of unity in canonical form.
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u64,
    /// Power-basis coefficients, length phi(order); index i is the
    /// coefficient of z^i for z = exp(2 pi i / order).
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero() -> CycNum {
        CycNum {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn from_rational(r: BigRational) -> CycNum {
        CycNum {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(v: i64) -> CycNum {
        CycNum::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// Sum of `mults[j]` copies of the j-th power of a primitive
    /// `order`-th root of unity.
    pub fn roots_combination(order: u64, mults: &[u64]) -> CycNum {
        assert_eq!(mults.len(), order as usize);
        let raw: Vec<BigRational> = mults
            .iter()
            .map(|&m| BigRational::from_integer(BigInt::from(m)))
            .collect();
        CycNum::reduce(order, raw)
    }

    /// Canonicalizes a raw coefficient vector over all `order` powers.
    pub fn reduce(order: u64, mut raw: Vec<BigRational>) -> CycNum {
        assert!(raw.len() <= order as usize);
        raw.resize(order as usize, BigRational::zero());
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let phi_rat: Vec<BigRational> = phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        while raw.len() > deg {
            let top = raw.len() - 1;
            let c = raw[top].clone();
            if !c.is_zero() {
                for (j, pc) in phi_rat.iter().enumerate() {
                    let idx = top - deg + j;
                    let sub = &c * pc;
                    raw[idx] -= sub;
                }
            }
            raw.pop();
        }
        raw.resize(deg, BigRational::zero());
        CycNum { order, coeffs: raw }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Raw coordinates over all powers of the `target`-order root.
    fn lift(&self, target: u64) -> Vec<BigRational> {
        assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[i * step] += c;
            }
        }
        out
    }

    pub fn add(&self, other: &CycNum) -> CycNum {
        let m = lcm(self.order, other.order);
        let mut a = self.lift(m);
        for (i, c) in other.lift(m).into_iter().enumerate() {
            a[i] += c;
        }
        CycNum::reduce(m, a)
    }

    pub fn sub(&self, other: &CycNum) -> CycNum {
        self.add(&other.scale(&BigRational::from_integer(BigInt::from(-1))))
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugate (z -> z^-1).
    pub fn conj(&self) -> CycNum {
        let n = self.order;
        let mut raw = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let idx = ((n - i as u64) % n) as usize;
                raw[idx] += c;
            }
        }
        CycNum::reduce(n, raw)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eq_value(&self, other: &CycNum) -> bool {
        self.sub(other).is_zero()
    }

    /// Some(r) iff the number is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Exact integer extraction; errors if the value is not a rational integer.
    pub fn as_integer(&self) -> Result<BigInt> {
        let r = self
            .as_rational()
            .ok_or_else(|| Error::Internal("cyclotomic value is not rational".into()))?;
        if !r.is_integer() {
            return Err(Error::Internal(format!("cyclotomic value {r} is not an integer")));
        }
        Ok(r.to_integer())
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().unwrap_or(f64::NAN);
            let theta = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            re += x * theta.cos();
            im += x * theta.sin();
        }
        (re, im)
    }
}

/// Float evaluation of a plain multiplicity vector over `order`-th roots.
pub fn eval_roots_f64(order: u64, mults: &[u64]) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for (j, &m) in mults.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let theta = 2.0 * std::f64::consts::PI * j as f64 / order as f64;
        re += m as f64 * theta.cos();
        im += m as f64 * theta.sin();
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![int(-1), int(1)]);
        assert_eq!(cyclotomic_polynomial(2), vec![int(1), int(1)]);
        assert_eq!(cyclotomic_polynomial(3), vec![int(1), int(1), int(1)]);
        assert_eq!(cyclotomic_polynomial(4), vec![int(1), int(0), int(1)]);
        assert_eq!(cyclotomic_polynomial(6), vec![int(1), int(-1), int(1)]);
        // Phi_105 is the first with a coefficient outside {-1,0,1}.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len(), 49);
        assert!(p105.iter().any(|c| c.abs() == int(2)));
    }

    #[test]
    fn full_root_sum_vanishes() {
        for n in [2u64, 3, 4, 6, 12, 30] {
            let all = CycNum::roots_combination(n, &vec![1; n as usize]);
            assert!(all.is_zero(), "sum of all {n}-th roots");
        }
    }

    #[test]
    fn rationality_detection() {
        // z + z^4 + z^2 + z^3 for z = zeta_5 is -1.
        let v = CycNum::roots_combination(5, &[0, 1, 1, 1, 1]);
        assert_eq!(v.as_rational().unwrap(), BigRational::from_integer(int(-1)));
        // z alone is irrational.
        let z = CycNum::roots_combination(5, &[0, 1, 0, 0, 0]);
        assert!(z.as_rational().is_none());
    }

    #[test]
    fn cross_order_equality() {
        // zeta_6 = -zeta_3^2.
        let a = CycNum::roots_combination(6, &[0, 1, 0, 0, 0, 0]);
        let b = CycNum::roots_combination(3, &[0, 0, 1]).scale(&BigRational::from_integer(int(-1)));
        assert!(a.eq_value(&b));
    }

    #[test]
    fn conjugation_and_floats() {
        let z = CycNum::roots_combination(8, &[0, 1, 0, 0, 0, 0, 0, 0]);
        let sum = z.add(&z.conj());
        // z + conj(z) = 2 cos(pi/4) = sqrt(2): real but irrational.
        assert!(sum.as_rational().is_none());
        let (re, im) = sum.to_complex();
        assert!((re - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
        assert!(sum.eq_value(&sum.conj()));
    }
}
