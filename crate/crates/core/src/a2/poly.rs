//! Determinants of matrices whose entries are integer polynomials of degree
//! at most one, as arise from Fox derivatives of Wirtinger relators.
//!
//! Two exact routes are provided. `det_fraction_free` runs Bareiss
//! elimination over `Z[t]` with big-integer coefficients.
//! `det_modular` evaluates the matrix at `deg + 1` points modulo a Mersenne
//! prime and interpolates. It is exact whenever the coefficient bound of the
//! determinant stays below half the modulus, which `det_modular` checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `entry[0] + entry[1] * t`.
pub type Linear = [i64; 2];

/// Dense integer polynomial, lowest degree first.
pub type Poly = Vec<BigInt>;

const MODULUS: u64 = (1 << 61) - 1;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// `a / b`, which must divide exactly.
fn div_exact(a: &Poly, b: &Poly) -> Result<Poly> {
    let lead = b.last().ok_or(Error::Invariant("division by zero polynomial".into()))?;
    let mut rem = a.clone();
    if rem.len() < b.len() {
        return if rem.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::Invariant("inexact polynomial division".into()))
        };
    }
    let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(lead);
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &c * y;
        }
        quot[k] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(Error::Invariant("inexact polynomial division".into()));
    }
    trim(&mut quot);
    Ok(quot)
}

fn lift(m: &[Vec<Linear>]) -> Vec<Vec<Poly>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let mut p = vec![BigInt::from(e[0]), BigInt::from(e[1])];
                    trim(&mut p);
                    p
                })
                .collect()
        })
        .collect()
}

/// Bareiss elimination over `Z[t]`.
pub fn det_fraction_free(m: &[Vec<Linear>]) -> Result<Poly> {
    let size = m.len();
    if size == 0 {
        return Ok(vec![BigInt::one()]);
    }
    let mut a = lift(m);
    let mut negate = false;
    let mut prev: Poly = vec![BigInt::one()];
    for k in 0..size {
        let Some(pivot) = (k..size).find(|&r| !a[r][k].is_empty()) else {
            return Ok(Vec::new());
        };
        if pivot != k {
            a.swap(pivot, k);
            negate = !negate;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = sub(&mul(&a[k][k], &a[i][j]), &mul(&a[i][k], &a[k][j]));
                a[i][j] = div_exact(&num, &prev)?;
            }
            a[i][k] = Vec::new();
        }
        prev = a[k][k].clone();
    }
    let mut det = a[size - 1][size - 1].clone();
    if negate {
        det.iter_mut().for_each(|c| *c = -&*c);
    }
    Ok(det)
}

/// `a * b mod 2^61 - 1` for reduced `a, b`, folding the high bits back in
/// since `2^61 = 1` modulo a Mersenne prime.
fn mul_mod(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let folded = (x as u64 & MODULUS) + (x >> 61) as u64;
    let folded = (folded & MODULUS) + (folded >> 61);
    if folded >= MODULUS {
        folded - MODULUS
    } else {
        folded
    }
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

fn reduce(x: i64) -> u64 {
    x.rem_euclid(MODULUS as i64) as u64
}

fn det_at(m: &[Vec<Linear>], t: u64) -> u64 {
    let size = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| (reduce(e[0]) + mul_mod(reduce(e[1]), t)) % MODULUS)
                .collect()
        })
        .collect();
    let mut det = 1;
    for k in 0..size {
        let Some(pivot) = (k..size).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if pivot != k {
            a.swap(pivot, k);
            det = (MODULUS - det) % MODULUS;
        }
        det = mul_mod(det, a[k][k]);
        let inv = inv_mod(a[k][k]);
        for i in k + 1..size {
            if a[i][k] == 0 {
                continue;
            }
            let factor = mul_mod(a[i][k], inv);
            for j in k..size {
                let sub = mul_mod(factor, a[k][j]);
                a[i][j] = (a[i][j] + MODULUS - sub) % MODULUS;
            }
        }
    }
    det
}

/// Upper bound on every coefficient of the determinant: the product of the
/// row l1-norms, saturating.
pub fn coefficient_bound(m: &[Vec<Linear>]) -> u128 {
    m.iter().fold(1u128, |acc, row| {
        let norm: u128 = row
            .iter()
            .map(|e| (e[0].unsigned_abs() + e[1].unsigned_abs()) as u128)
            .sum();
        acc.saturating_mul(norm)
    })
}

/// True when `det_modular` can recover the determinant exactly.
pub fn modular_applies(m: &[Vec<Linear>]) -> bool {
    coefficient_bound(m).saturating_mul(2) < MODULUS as u128
}

/// Evaluation and Newton interpolation modulo `2^61 - 1`.
pub fn det_modular(m: &[Vec<Linear>]) -> Result<Poly> {
    if !modular_applies(m) {
        return Err(Error::Overflow("modular determinant coefficient bound"));
    }
    let size = m.len();
    let points: Vec<u64> = (0..=size as u64).collect();
    let values: Vec<u64> = points.iter().map(|&t| det_at(m, t)).collect();

    // divided differences
    let mut coef = values.clone();
    for level in 1..points.len() {
        for i in (level..points.len()).rev() {
            let num = (coef[i] + MODULUS - coef[i - 1]) % MODULUS;
            let den = (points[i] + MODULUS - points[i - level]) % MODULUS;
            coef[i] = mul_mod(num, inv_mod(den));
        }
    }
    // expand the Newton form, highest term first
    let mut poly = vec![0u64; points.len()];
    for k in (0..points.len()).rev() {
        // poly = poly * (t - x_k) + coef[k]
        let xk = points[k];
        let mut next = vec![0u64; points.len()];
        for i in 0..points.len() {
            if poly[i] == 0 {
                continue;
            }
            if i + 1 < points.len() {
                next[i + 1] = (next[i + 1] + poly[i]) % MODULUS;
            }
            next[i] = (next[i] + MODULUS - mul_mod(poly[i], xk)) % MODULUS;
        }
        next[0] = (next[0] + coef[k]) % MODULUS;
        poly = next;
    }
    let half = MODULUS / 2;
    let mut out: Poly = poly
        .into_iter()
        .map(|c| {
            if c > half {
                -BigInt::from(MODULUS - c)
            } else {
                BigInt::from(c)
            }
        })
        .collect();
    trim(&mut out);
    Ok(out)
}

pub fn to_i64(p: &Poly) -> Result<Vec<i64>> {
    p.iter()
        .map(|c| c.to_i64().ok_or(Error::Overflow("polynomial coefficient")))
        .collect()
}
