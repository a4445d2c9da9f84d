//! Exact character tables via Dixon's modular method.
//!
//! The class-algebra structure constants are diagonalized simultaneously
//! over GF(l) for a prime l = 1 (mod exponent(G)) with l > 2*sqrt(|G|).
//! Degrees fall out of the orthogonality normalization, and eigenvalue
//! multiplicities lift every character value to an exact sum of roots of
//! unity via discrete Fourier inversion mod l. A double-precision complex
//! mirror of each value is kept alongside the exact data.

#![allow(clippy::needless_range_loop)]

use num::BigRational;

use crate::cyclo::{eval_roots_f64, CycNum};
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::group::classes::ClassData;
use crate::group::GroupHandle;

/// Largest supported class count.
pub const MAX_CLASS_COUNT: usize = 60;

/// Class-multiplication structure constants:
/// `a[i][j][t] = #{(x,y) in C_i x C_j : xy = z_t}` for the fixed class
/// representative `z_t`.
#[derive(Clone, Debug)]
pub struct ClassAlgebra {
    k: usize,
    a: Vec<u64>,
}

impl ClassAlgebra {
    #[inline]
    pub fn get(&self, i: usize, j: usize, t: usize) -> u64 {
        self.a[(i * self.k + j) * self.k + t]
    }

    pub fn class_count(&self) -> usize {
        self.k
    }
}

pub fn class_algebra(group: &GroupHandle, classes: &ClassData) -> Result<ClassAlgebra> {
    let k = classes.count();
    let n = group.order();
    let mut a = vec![0u64; k * k * k];
    // For fixed z_t, the second factor y = x^-1 z_t is forced, so one pass
    // over x per target class captures every pair.
    let inv: Vec<u32> = (0..n as u32).map(|x| group.inv(x)).collect();
    for t in 0..k {
        let zt = classes.representative(t);
        for x in 0..n as u32 {
            let i = classes.class_of(x) as usize;
            let y = group.mul(inv[x as usize], zt);
            let j = classes.class_of(y) as usize;
            a[(i * k + j) * k + t] += 1;
        }
    }
    let algebra = ClassAlgebra { k, a };
    // Sum rule: sum_t a[i][j][t] |C_t| = |C_i| |C_j|.
    for i in 0..k {
        for j in 0..k {
            let total: u128 = (0..k)
                .map(|t| algebra.get(i, j, t) as u128 * classes.size(t) as u128)
                .sum();
            if total != classes.size(i) as u128 * classes.size(j) as u128 {
                return Err(Error::Internal(format!("class algebra sum rule fails at ({i},{j})")));
            }
        }
    }
    Ok(algebra)
}

/// One exact character value: the multiset of eigenvalues of the
/// representing matrix, as multiplicities of `order`-th roots of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycValue {
    pub order: u64,
    pub mults: Vec<u64>,
}

impl CycValue {
    pub fn to_cyc_num(&self) -> CycNum {
        CycNum::roots_combination(self.order, &self.mults)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        eval_roots_f64(self.order, &self.mults)
    }
}

/// Exact character table with float mirrors.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group_order: u64,
    exponent: u64,
    prime: u64,
    primitive_root: u64,
    class_sizes: Vec<u64>,
    class_orders: Vec<u32>,
    inverse_class: Vec<u32>,
    degrees: Vec<u64>,
    values: Vec<Vec<CycValue>>,
    mirror: Vec<Vec<(f64, f64)>>,
    real_flags: Vec<bool>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smallest prime l = 1 (mod e) with l > 2 sqrt(n), decided as l^2 > 4n.
fn dixon_prime(e: u64, n: u64) -> Result<u64> {
    let mut l = e + 1;
    loop {
        if (l as u128) * (l as u128) > 4 * n as u128 && is_prime(l) && (l - 1).is_multiple_of(e) {
            return Ok(l);
        }
        l = l.checked_add(e.max(1)).ok_or(Error::NoDixonPrime { exponent: e })?;
        if l >= 1 << 31 {
            return Err(Error::NoDixonPrime { exponent: e });
        }
    }
}

fn smallest_primitive_root(l: u64) -> u64 {
    let mut factors = Vec::new();
    let mut rest = l - 1;
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            factors.push(d);
            while rest.is_multiple_of(d) {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    'cand: for w in 2..l {
        for &p in &factors {
            if pow_mod(w, (l - 1) / p, l) == 1 {
                continue 'cand;
            }
        }
        return w;
    }
    unreachable!("prime fields have primitive roots")
}

/// Minimal polynomial (monic, constant first) of `v` under repeated `mat`.
fn min_poly_of_vector(mat: &[Vec<u64>], v: &[u64], l: u64) -> Vec<u64> {
    let d = v.len();
    // Echelon rows: (reduced vector, pivot column, expression over Krylov powers).
    let mut rows: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
    let mut current = v.to_vec();
    for power in 0..=d {
        let mut vec = current.clone();
        let mut rep = vec![0u64; power + 1];
        rep[power] = 1;
        for (rvec, rpiv, rrep) in &rows {
            let c = vec[*rpiv];
            if c != 0 {
                for i in 0..d {
                    vec[i] = (vec[i] + mul_mod(c, l - rvec[i] % l, l)) % l;
                }
                for (i, rc) in rrep.iter().enumerate() {
                    if i < rep.len() {
                        rep[i] = (rep[i] + mul_mod(c, l - rc % l, l)) % l;
                    } else if *rc != 0 {
                        unreachable!("older rows never have longer reps");
                    }
                }
            }
        }
        if let Some(piv) = vec.iter().position(|&x| x != 0) {
            let inv = inv_mod(vec[piv], l);
            for x in vec.iter_mut() {
                *x = mul_mod(*x, inv, l);
            }
            for x in rep.iter_mut() {
                *x = mul_mod(*x, inv, l);
            }
            rows.push((vec, piv, rep));
        } else {
            // Dependence found: rep encodes the minimal polynomial of v.
            return rep;
        }
        // current = mat * current
        let mut next = vec![0u64; d];
        for (r, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u64;
            for c in 0..d {
                if current[c] != 0 && mat[r][c] != 0 {
                    acc = (acc + mul_mod(mat[r][c], current[c], l)) % l;
                }
            }
            *slot = acc;
        }
        current = next;
    }
    unreachable!("a vector in dimension d satisfies a degree <= d polynomial")
}

fn poly_mul_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ca, cb, l)) % l;
        }
    }
    out
}

fn poly_rem_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], l);
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, l);
        if c != 0 {
            for j in 0..=db {
                let idx = top - db + j;
                r[idx] = (r[idx] + mul_mod(c, l - b[j] % l, l)) % l;
            }
        }
        r.pop();
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    r
}

fn poly_gcd_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem_mod(&x, &y, l);
        x = y;
        y = r;
    }
    let inv = inv_mod(*x.last().unwrap(), l);
    x.iter().map(|&c| mul_mod(c, inv, l)).collect()
}

fn poly_div_exact_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], l);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = mul_mod(r[top], lead_inv, l);
        q[top - db] = c;
        if c != 0 {
            for j in 0..=db {
                let idx = top - db + j;
                r[idx] = (r[idx] + mul_mod(c, l - b[j] % l, l)) % l;
            }
        }
        r.pop();
    }
    q
}

fn poly_lcm_mod(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let g = poly_gcd_mod(a, b, l);
    let prod = poly_mul_mod(a, b, l);
    poly_div_exact_mod(&prod, &g, l)
}

fn min_poly_of_matrix(mat: &[Vec<u64>], l: u64) -> Vec<u64> {
    let d = mat.len();
    let mut m = vec![1u64];
    for s in 0..d {
        let mut seed = vec![0u64; d];
        seed[s] = 1;
        let mp = min_poly_of_vector(mat, &seed, l);
        m = poly_lcm_mod(&m, &mp, l);
        if m.len() == d + 1 {
            break;
        }
    }
    m
}

/// Basis of the kernel of `mat` (rows x cols square), vectors of length d.
fn kernel_basis(mat: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let d = mat.len();
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..d {
        let mut sel = None;
        for r in row..d {
            if m[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        m.swap(row, sel);
        let inv = inv_mod(m[row][col], l);
        for c in 0..d {
            m[row][c] = mul_mod(m[row][c], inv, l);
        }
        for r in 0..d {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..d {
                    m[r][c] = (m[r][c] + mul_mod(f, l - m[row][c] % l, l)) % l;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == d {
            break;
        }
    }
    let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (l - m[r][free] % l) % l;
        }
        basis.push(v);
    }
    basis
}

/// Coordinates of each y in the span of `basis` (vectors of length n).
fn coords_in_basis(basis: &[Vec<u64>], ys: &[Vec<u64>], l: u64) -> Result<Vec<Vec<u64>>> {
    let n = basis[0].len();
    let d = basis.len();
    let width = d + ys.len();
    // Augmented matrix: columns are basis vectors then the targets.
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut row = Vec::with_capacity(width);
            for b in basis {
                row.push(b[r]);
            }
            for y in ys {
                row.push(y[r]);
            }
            row
        })
        .collect();
    let mut pivot_row_of_col = vec![usize::MAX; d];
    let mut row = 0usize;
    for col in 0..d {
        let mut sel = None;
        for r in row..n {
            if m[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else {
            return Err(Error::Internal("basis is not independent".into()));
        };
        m.swap(row, sel);
        let inv = inv_mod(m[row][col], l);
        for c in 0..width {
            m[row][c] = mul_mod(m[row][c], inv, l);
        }
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..width {
                    m[r][c] = (m[r][c] + mul_mod(f, l - m[row][c] % l, l)) % l;
                }
            }
        }
        pivot_row_of_col[col] = row;
        row += 1;
    }
    // Rows beyond the pivots must be zero in the target columns.
    for r in row..n {
        for c in d..width {
            if m[r][c] != 0 {
                return Err(Error::Internal("vector escapes the invariant subspace".into()));
            }
        }
    }
    Ok((0..ys.len())
        .map(|yi| (0..d).map(|c| m[pivot_row_of_col[c]][d + yi]).collect())
        .collect())
}

pub fn character_table(
    group: &GroupHandle,
    classes: &ClassData,
    algebra: &ClassAlgebra,
) -> Result<CharacterTable> {
    let k = classes.count();
    if k > MAX_CLASS_COUNT {
        return Err(Error::SizeCap(format!("class count {k} exceeds {MAX_CLASS_COUNT}")));
    }
    let n = group.order() as u64;
    let exponent = classes
        .orders()
        .iter()
        .fold(1u64, |acc, &o| acc / gcd(acc, o as u64) * o as u64);
    let prime = dixon_prime(exponent, n)?;
    let w = smallest_primitive_root(prime);
    let z_e = pow_mod(w, (prime - 1) / exponent, prime);

    // Class matrices (M_i)[j][t] = a[i][j][t]; the vector of eigenvalue
    // ratios (omega_t) is a simultaneous eigenvector of every M_i.
    let mats: Vec<Vec<Vec<u64>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| (0..k).map(|t| algebra.get(i, j, t) % prime).collect())
                .collect()
        })
        .collect();

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|s| {
            let mut v = vec![0u64; k];
            v[s] = 1;
            v
        })
        .collect()];
    for mat in mats.iter().skip(1) {
        if spaces.iter().all(|b| b.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let d = basis.len();
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..k)
                        .map(|r| {
                            let mut acc = 0u64;
                            for c in 0..k {
                                if b[c] != 0 && mat[r][c] != 0 {
                                    acc = (acc + mul_mod(mat[r][c], b[c], prime)) % prime;
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let coords = coords_in_basis(&basis, &images, prime)?;
            // Restriction matrix: column s holds the coords of M*basis[s].
            let restr: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|s| coords[s][r]).collect()).collect();
            let mp = min_poly_of_matrix(&restr, prime);
            let mut roots = Vec::new();
            for lam in 0..prime {
                // Horner evaluation of the minimal polynomial.
                let mut acc = 0u64;
                for &c in mp.iter().rev() {
                    acc = (mul_mod(acc, lam, prime) + c) % prime;
                }
                if acc == 0 {
                    roots.push(lam);
                    if roots.len() == mp.len() - 1 {
                        break;
                    }
                }
            }
            let mut captured = 0usize;
            for lam in roots {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| {
                                let v = restr[r][c];
                                if r == c {
                                    (v + prime - lam) % prime
                                } else {
                                    v
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ker = kernel_basis(&shifted, prime);
                captured += ker.len();
                if !ker.is_empty() {
                    let sub: Vec<Vec<u64>> = ker
                        .iter()
                        .map(|coef| {
                            let mut v = vec![0u64; k];
                            for (s, &c) in coef.iter().enumerate() {
                                if c != 0 {
                                    for (x, slot) in v.iter_mut().enumerate() {
                                        *slot = (*slot + mul_mod(c, basis[s][x], prime)) % prime;
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    next.push(sub);
                }
            }
            if captured != d {
                return Err(Error::Internal("class matrices failed to diagonalize".into()));
            }
        }
        spaces = next;
    }
    if spaces.len() != k || spaces.iter().any(|b| b.len() != 1) {
        return Err(Error::Internal("common eigenspaces are not one-dimensional".into()));
    }

    // Normalize each eigenvector so the identity-class entry is 1.
    let mut omegas: Vec<Vec<u64>> = Vec::with_capacity(k);
    for basis in &spaces {
        let v = &basis[0];
        if v[0] == 0 {
            return Err(Error::Internal("eigenvector vanishes on the identity class".into()));
        }
        let inv = inv_mod(v[0], prime);
        omegas.push(v.iter().map(|&x| mul_mod(x, inv, prime)).collect());
    }

    // Degrees from the orthogonality normalization.
    let size_inv: Vec<u64> = (0..k).map(|t| inv_mod(classes.size(t) % prime, prime)).collect();
    let sqrt_n = isqrt(n);
    let mut degrees_raw = Vec::with_capacity(k);
    for omega in &omegas {
        let mut s = 0u64;
        for t in 0..k {
            let t_inv = classes.inverse_class(t) as usize;
            s = (s + mul_mod(mul_mod(omega[t], omega[t_inv], prime), size_inv[t], prime)) % prime;
        }
        if s == 0 {
            return Err(Error::Internal("degenerate degree normalization".into()));
        }
        let d_sq = mul_mod(n % prime, inv_mod(s, prime), prime);
        let mut found = None;
        for d in 1..=sqrt_n {
            if mul_mod(d, d, prime) == d_sq {
                found = Some(d);
                break;
            }
        }
        let d = found.ok_or_else(|| Error::Internal("no degree matches the normalization".into()))?;
        degrees_raw.push(d);
    }

    // Power maps: class of rep(t)^u for u < order(t).
    let power_class: Vec<Vec<usize>> = (0..k)
        .map(|t| {
            let o = classes.order(t) as u64;
            (0..o).map(|u| classes.power_class(group, t, u) as usize).collect()
        })
        .collect();

    // Lift values: eigenvalue multiplicities by Fourier inversion mod l.
    let mut chars: Vec<(u64, Vec<CycValue>)> = Vec::with_capacity(k);
    for (omega, &d) in omegas.iter().zip(&degrees_raw) {
        let vals_mod: Vec<u64> = (0..k)
            .map(|t| mul_mod(mul_mod(d % prime, omega[t], prime), size_inv[t], prime))
            .collect();
        let mut values = Vec::with_capacity(k);
        for t in 0..k {
            let o = classes.order(t) as u64;
            let z_o = pow_mod(z_e, exponent / o, prime);
            let z_o_inv = inv_mod(z_o, prime);
            let o_inv = inv_mod(o % prime, prime);
            let mut mults = Vec::with_capacity(o as usize);
            let mut total = 0u64;
            for j in 0..o {
                let mut acc = 0u64;
                for (u, &cls) in power_class[t].iter().enumerate() {
                    let root = pow_mod(z_o_inv, j * u as u64 % o, prime);
                    acc = (acc + mul_mod(vals_mod[cls], root, prime)) % prime;
                }
                let mu = mul_mod(acc, o_inv, prime);
                if mu > d {
                    return Err(Error::Internal(format!(
                        "eigenvalue multiplicity {mu} exceeds degree {d}"
                    )));
                }
                total += mu;
                mults.push(mu);
            }
            if total != d {
                return Err(Error::Internal("eigenvalue multiplicities do not sum to the degree".into()));
            }
            values.push(CycValue { order: o, mults });
        }
        chars.push((d, values));
    }

    // Deterministic ordering: trivial character first, then by degree with
    // ties broken by the exact value vectors.
    let is_trivial = |vals: &[CycValue]| {
        vals.iter().all(|v| v.mults[0] == 1 && v.mults.iter().skip(1).all(|&m| m == 0))
    };
    chars.sort_by(|a, b| {
        let ta = is_trivial(&a.1);
        let tb = is_trivial(&b.1);
        tb.cmp(&ta)
            .then(a.0.cmp(&b.0))
            .then_with(|| {
                for (va, vb) in a.1.iter().zip(b.1.iter()) {
                    match va.mults.cmp(&vb.mults) {
                        std::cmp::Ordering::Equal => {}
                        other => return other,
                    }
                }
                std::cmp::Ordering::Equal
            })
    });

    let degrees: Vec<u64> = chars.iter().map(|c| c.0).collect();
    let values: Vec<Vec<CycValue>> = chars.into_iter().map(|c| c.1).collect();

    let table = CharacterTable::assemble(
        n,
        exponent,
        prime,
        z_e,
        classes.sizes().to_vec(),
        classes.orders().to_vec(),
        (0..k).map(|c| classes.inverse_class(c)).collect(),
        degrees,
        values,
    )?;
    Ok(table)
}

impl CharacterTable {
    /// Builds the derived data (mirrors, reality flags) and runs the full
    /// validity checks. Shared by fresh computation and cache reload.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        group_order: u64,
        exponent: u64,
        prime: u64,
        primitive_root: u64,
        class_sizes: Vec<u64>,
        class_orders: Vec<u32>,
        inverse_class: Vec<u32>,
        degrees: Vec<u64>,
        values: Vec<Vec<CycValue>>,
    ) -> Result<CharacterTable> {
        let k = class_sizes.len();
        if degrees.len() != k || values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::Internal("character table shape mismatch".into()));
        }
        let mirror: Vec<Vec<(f64, f64)>> = values
            .iter()
            .map(|row| row.iter().map(|v| v.to_complex()).collect())
            .collect();
        let mut real_flags = Vec::with_capacity(k);
        for (i, row) in values.iter().enumerate() {
            let float_real = mirror[i].iter().all(|&(_, im)| im.abs() <= 1e-9);
            let exact_real = (0..k).all(|t| {
                let v = row[t].to_cyc_num();
                let v_inv = row[inverse_class[t] as usize].to_cyc_num();
                v.eq_value(&v_inv)
            });
            if float_real != exact_real {
                return Err(Error::Internal("reality flag cross-check failed".into()));
            }
            real_flags.push(exact_real);
        }
        let table = CharacterTable {
            group_order,
            exponent,
            prime,
            primitive_root,
            class_sizes,
            class_orders,
            inverse_class,
            degrees,
            values,
            mirror,
            real_flags,
        };
        table.validate()?;
        Ok(table)
    }

    /// Orthogonality, degree, and mirror-consistency checks.
    pub fn validate(&self) -> Result<()> {
        let k = self.class_count();
        let n = self.group_order as f64;
        let sum_sq: u128 = self.degrees.iter().map(|&d| d as u128 * d as u128).sum();
        if sum_sq != self.group_order as u128 {
            return Err(Error::Internal(format!(
                "degree squares sum to {sum_sq}, group order {}",
                self.group_order
            )));
        }
        for &d in &self.degrees {
            if !self.group_order.is_multiple_of(d) {
                return Err(Error::Internal(format!("degree {d} does not divide the group order")));
            }
        }
        for (i, row) in self.values.iter().enumerate() {
            // The identity column is the degree, exactly.
            if !row[0]
                .to_cyc_num()
                .eq_value(&CycNum::from_integer(self.degrees[i] as i64))
            {
                return Err(Error::Internal("identity value differs from degree".into()));
            }
            for (t, v) in row.iter().enumerate() {
                let (re, im) = self.mirror[i][t];
                let canon = v.to_cyc_num().to_complex();
                if (re - canon.0).abs() > 1e-10 || (im - canon.1).abs() > 1e-10 {
                    return Err(Error::Internal("float mirror drifts from exact value".into()));
                }
                let abs = (re * re + im * im).sqrt();
                if abs > self.degrees[i] as f64 + 1e-9 {
                    return Err(Error::Internal("character value exceeds degree in modulus".into()));
                }
            }
        }
        // Row orthogonality.
        for i in 0..k {
            for j in 0..k {
                let mut acc_re = 0.0;
                let mut acc_im = 0.0;
                for t in 0..k {
                    let (a, b) = self.mirror[i][t];
                    let (c, d) = self.mirror[j][t];
                    // a+bi times conj(c+di)
                    let w = self.class_sizes[t] as f64;
                    acc_re += w * (a * c + b * d);
                    acc_im += w * (b * c - a * d);
                }
                acc_re /= n;
                acc_im /= n;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (acc_re - expect).abs() > 1e-8 || acc_im.abs() > 1e-8 {
                    return Err(Error::Internal(format!("row orthogonality fails at ({i},{j})")));
                }
            }
        }
        // Column orthogonality.
        for s in 0..k {
            for t in 0..k {
                let mut acc_re = 0.0;
                let mut acc_im = 0.0;
                for i in 0..k {
                    let (a, b) = self.mirror[i][s];
                    let (c, d) = self.mirror[i][t];
                    acc_re += a * c + b * d;
                    acc_im += b * c - a * d;
                }
                let expect = if s == t { n / self.class_sizes[t] as f64 } else { 0.0 };
                if (acc_re - expect).abs() > 1e-8 * expect.max(1.0) || acc_im.abs() > 1e-8 {
                    return Err(Error::Internal(format!("column orthogonality fails at ({s},{t})")));
                }
            }
        }
        Ok(())
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn primitive_root(&self) -> u64 {
        self.primitive_root
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn char_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn class_orders(&self) -> &[u32] {
        &self.class_orders
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c] as usize
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn degree(&self, chi: usize) -> u64 {
        self.degrees[chi]
    }

    pub fn value(&self, chi: usize, class: usize) -> &CycValue {
        &self.values[chi][class]
    }

    pub fn value_complex(&self, chi: usize, class: usize) -> (f64, f64) {
        self.mirror[chi][class]
    }

    pub fn is_real(&self, chi: usize) -> bool {
        self.real_flags[chi]
    }

    /// Indices of the real-valued irreducible characters.
    pub fn real_characters(&self) -> Vec<usize> {
        (0..self.char_count()).filter(|&i| self.real_flags[i]).collect()
    }

    /// Exact sum_{chi != 1} degree^-2 (the trivial character is index 0).
    pub fn zeta2_minus_one(&self) -> BigRational {
        let mut acc = BigRational::from_integer(0.into());
        for &d in self.degrees.iter().skip(1) {
            acc += BigRational::new(1.into(), (d as i64 * d as i64).into());
        }
        acc
    }

    /// Exact sum over nontrivial real characters of degree^-2.
    pub fn real_zeta2_minus_one(&self) -> BigRational {
        let mut acc = BigRational::from_integer(0.into());
        for i in 1..self.char_count() {
            if self.real_flags[i] {
                let d = self.degrees[i] as i64;
                acc += BigRational::new(1.into(), (d * d).into());
            }
        }
        acc
    }
}

/// Convenience: classes + algebra + table in one call.
pub fn build_character_table(group: &GroupHandle, classes: &ClassData) -> Result<CharacterTable> {
    let algebra = class_algebra(group, classes)?;
    character_table(group, classes, &algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::classes::conjugacy_classes;

    #[test]
    fn class_algebra_identity_row() {
        let g = GroupHandle::symmetric(3).unwrap();
        let cd = conjugacy_classes(&g);
        let alg = class_algebra(&g, &cd).unwrap();
        // With z_t fixed, (e, y) with y = z_t is the only pair from C_0 x C_j.
        for j in 0..cd.count() {
            for t in 0..cd.count() {
                let expect = if j == t { 1 } else { 0 };
                assert_eq!(alg.get(0, j, t), expect);
            }
        }
    }

    #[test]
    fn class_algebra_s3_transpositions() {
        let g = GroupHandle::symmetric(3).unwrap();
        let cd = conjugacy_classes(&g);
        assert_eq!(cd.sizes(), &[1, 3, 2]);
        let alg = class_algebra(&g, &cd).unwrap();
        // Two equal transpositions multiply to the identity: 3 pairs.
        assert_eq!(alg.get(1, 1, 0), 3);
    }

    #[test]
    fn class_algebra_abelian_is_addition() {
        let g = GroupHandle::cyclic(3).unwrap();
        let cd = conjugacy_classes(&g);
        let alg = class_algebra(&g, &cd).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for t in 0..3 {
                    let ri = g.code(cd.representative(i)) as usize;
                    let rj = g.code(cd.representative(j)) as usize;
                    let rt = g.code(cd.representative(t)) as usize;
                    let expect = if (ri + rj) % 3 == rt { 1 } else { 0 };
                    assert_eq!(alg.get(i, j, t), expect);
                }
            }
        }
    }

    #[test]
    fn s3_degrees() {
        let g = GroupHandle::symmetric(3).unwrap();
        let cd = conjugacy_classes(&g);
        let table = build_character_table(&g, &cd).unwrap();
        assert_eq!(table.degrees(), &[1, 1, 2]);
        assert_eq!(table.real_characters(), vec![0, 1, 2]);
    }

    #[test]
    fn a5_degrees() {
        let g = GroupHandle::alternating(5).unwrap();
        let cd = conjugacy_classes(&g);
        let table = build_character_table(&g, &cd).unwrap();
        assert_eq!(table.degrees(), &[1, 3, 3, 4, 5]);
        assert_eq!(table.real_characters(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn psl27_degrees() {
        let g = GroupHandle::psl2(7).unwrap();
        let cd = conjugacy_classes(&g);
        let table = build_character_table(&g, &cd).unwrap();
        assert_eq!(table.degrees(), &[1, 3, 3, 6, 7, 8]);
    }

    #[test]
    fn c3_linear_characters() {
        let g = GroupHandle::cyclic(3).unwrap();
        let cd = conjugacy_classes(&g);
        let table = build_character_table(&g, &cd).unwrap();
        assert_eq!(table.degrees(), &[1, 1, 1]);
        // Only the trivial character is real; the others take cube-root values.
        assert_eq!(table.real_characters(), vec![0]);
        let mut saw_nontrivial_root = false;
        for chi in 1..3 {
            for t in 0..3 {
                let v = table.value(chi, t);
                if v.order == 3 && v.mults[1] + v.mults[2] > 0 {
                    saw_nontrivial_root = true;
                }
            }
        }
        assert!(saw_nontrivial_root);
    }

    #[test]
    fn trivial_group_table() {
        let g = GroupHandle::cyclic(1).unwrap();
        let cd = conjugacy_classes(&g);
        let table = build_character_table(&g, &cd).unwrap();
        assert_eq!(table.degrees(), &[1]);
    }

    #[test]
    fn class_count_cap() {
        let g = GroupHandle::cyclic(61).unwrap();
        let cd = conjugacy_classes(&g);
        let alg = class_algebra(&g, &cd).unwrap();
        assert!(matches!(
            character_table(&g, &cd, &alg),
            Err(Error::SizeCap(_))
        ));
    }
}
