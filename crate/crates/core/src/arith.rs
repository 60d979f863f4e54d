//! Small integer helpers: primality, powers, valuations, factor bases.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `base^exp` if it fits in a `u64`.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn big_pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation_big(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

pub fn valuation_u64(x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    Some(v)
}

/// Distinct prime divisors of `|x|` by trial division. Intended for the
/// small denominators that appear in user-supplied witnesses.
pub fn prime_divisors(x: &BigInt) -> Vec<BigInt> {
    let mut y = x.abs();
    let mut out = Vec::new();
    if y.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2u32);
    while &d * &d <= y {
        if (&y % &d).is_zero() {
            out.push(d.clone());
            while (&y % &d).is_zero() {
                y /= &d;
            }
        }
        d += 1u32;
    }
    if y > BigInt::one() {
        out.push(y);
    }
    out
}

/// Exact `round(log_p(x))` for `x >= 1`, i.e. the `d` with
/// `p^(2d-1) <= x^2 < p^(2d+1)`.
pub fn round_log(x: &BigUint, p: u64) -> u32 {
    let sq = x * x;
    let pb = BigUint::from(p);
    let mut d = 0u32;
    // smallest d with x^2 < p^(2d+1)
    let mut bound = pb.clone();
    while sq >= bound {
        bound = &bound * &pb * &pb;
        d += 1;
    }
    d
}

pub fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}
