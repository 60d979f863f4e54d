//! Dense polynomials over F_p, just enough to pick a Galois ring modulus.

use alloc::vec;
use alloc::vec::Vec;

type Fp = Vec<u64>; // coefficients low to high, trimmed

fn trim(mut f: Fp) -> Fp {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let len = a.len().max(b.len());
    let mut out = vec![0; len];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(out)
}

fn rem(a: &Fp, m: &Fp, p: u64) -> Fp {
    let mut a = trim(a.clone());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let t = (a[da] as u128 * lead_inv as u128 % p as u128) as u64;
        for j in 0..=dm {
            let idx = da - dm + j;
            let s = (t as u128 * m[j] as u128 % p as u128) as u64;
            a[idx] = (a[idx] + p - s) % p;
        }
        a = trim(a);
    }
    a
}

fn mul_rem(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    rem(&out, m, p)
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`
fn frobenius_power(k: u32, m: &Fp, p: u64) -> Fp {
    let mut acc = rem(&vec![0, 1], m, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut base = acc.clone();
        let mut result = vec![1u64];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = mul_rem(&result, &base, m, p);
            }
            base = mul_rem(&base, &base, m, p);
            e >>= 1;
        }
        acc = result;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let deg = match f.len() {
        0 | 1 => return false,
        l => (l - 1) as u32,
    };
    let x = vec![0, 1];
    if sub(&frobenius_power(deg, &f, p), &rem(&x, &f, p), p) != Vec::<u64>::new() {
        return false;
    }
    let mut q = 2;
    let mut d = deg;
    while d > 1 {
        if d % q == 0 {
            while d % q == 0 {
                d /= q;
            }
            let h = sub(&frobenius_power(deg / q, &f, p), &x, p);
            let g = gcd(&f, &h, p);
            if g.len() > 1 {
                return false;
            }
        }
        q += 1;
    }
    true
}

/// First monic irreducible polynomial of degree `r` over F_p, scanning the
/// non-leading coefficient vectors `(c_0, ..., c_{r-1})` lexicographically.
/// Returns the non-leading coefficients.
pub(crate) fn first_irreducible(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    let mut coeffs = vec![0u64; r];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return coeffs;
        }
        // odometer with c_{r-1} varying fastest keeps c_0 most significant
        let mut i = r;
        loop {
            if i == 0 {
                unreachable!("irreducible polynomials exist in every degree");
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}
