//! Finite local rings `Z_q / m_q^n` with `q = p^r`.
//!
//! Elements of the Galois ring are coefficient vectors over `Z/p^n` in the
//! basis `1, θ, ..., θ^(r-1)` where `θ` is a root of a fixed monic lift of an
//! irreducible polynomial over F_p. For `r = 1` the [`IntMod`] type gives the
//! same ring with a scalar representation, which the counting engine uses on
//! its hot path.

pub mod linalg;
mod modulus;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith;
use crate::error::{invalid, limit, Result};

/// Largest supported `p^n`; keeps sums of two residues inside a `u64`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Arithmetic of a finite local ring whose maximal ideal is generated by `p`.
///
/// Elements at different precisions share one representation, so reducing
/// from precision `n` to `k <= n` is coefficientwise reduction and lifting is
/// the identity on canonical representatives.
pub trait LocalArith: Clone + Debug + Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn prime(&self) -> u64;
    /// Precision `n`: the ring is `Z_q / p^n`.
    fn level(&self) -> u32;
    /// Residue degree `r`.
    fn degree(&self) -> u32;
    /// The same ring at precision `k`.
    fn at_level(&self, k: u32) -> Self;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, x: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Largest `k <= n` with `a` in `p^k`; `n` for zero.
    fn valuation(&self, a: &Self::Elem) -> u32;
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Reduce a representative taken from any precision into this ring.
    fn reduce(&self, a: &Self::Elem) -> Self::Elem;
    /// `a / p^k`, assuming every coefficient is divisible by `p^k`.
    fn div_p_pow(&self, a: &Self::Elem, k: u32) -> Self::Elem;
    /// `a + p^k * v` on canonical representatives, reduced into this ring.
    fn add_p_pow(&self, a: &Self::Elem, v: &Self::Elem, k: u32) -> Self::Elem;

    /// `p^(n*r)` if it fits in a `u64`.
    fn size(&self) -> Option<u64>;
    /// Element number `idx` in lexicographic order of coefficient vectors.
    fn element_at(&self, idx: u64) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of a rational number whose denominator is a unit.
    fn from_ratio(&self, x: &BigRational) -> Option<Self::Elem> {
        let num = self.from_bigint(x.numer());
        let den = self.from_bigint(x.denom());
        self.inverse(&den).map(|d| self.mul(&num, &d))
    }
}

fn reduce_bigint(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    debug_assert!(r.sign() != Sign::Minus);
    r.to_u64().expect("residue fits")
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `Z/p^n` with scalar residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMod {
    p: u64,
    n: u32,
    modulus: u64,
}

impl IntMod {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(invalid!("{p} is not prime"));
        }
        if n < 1 {
            return Err(invalid!("level must be at least 1"));
        }
        let modulus = arith::checked_pow(p, n)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| limit!("{p}^{n} exceeds the supported modulus 2^62"))?;
        Ok(IntMod { p, n, modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl LocalArith for IntMod {
    type Elem = u64;

    fn prime(&self) -> u64 {
        self.p
    }
    fn level(&self) -> u32 {
        self.n
    }
    fn degree(&self) -> u32 {
        1
    }
    fn at_level(&self, k: u32) -> Self {
        IntMod { p: self.p, n: k, modulus: self.p.pow(k) }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.modulus)
    }
    fn from_bigint(&self, x: &BigInt) -> u64 {
        reduce_bigint(x, self.modulus)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn valuation(&self, a: &u64) -> u32 {
        arith::valuation_u64(*a, self.p).map_or(self.n, |v| v.min(self.n))
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            return None;
        }
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.modulus as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        Some(t.rem_euclid(self.modulus as i128) as u64)
    }
    fn reduce(&self, a: &u64) -> u64 {
        a % self.modulus
    }
    fn div_p_pow(&self, a: &u64, k: u32) -> u64 {
        (a / self.p.pow(k)) % self.modulus
    }
    fn add_p_pow(&self, a: &u64, v: &u64, k: u32) -> u64 {
        let shifted = mulmod(*v, self.p.pow(k) % self.modulus, self.modulus);
        self.add(&(a % self.modulus), &shifted)
    }
    fn size(&self) -> Option<u64> {
        Some(self.modulus)
    }
    fn element_at(&self, idx: u64) -> u64 {
        idx
    }
}

/// An element of a [`RingSpec`]: `r` coefficients in `[0, p^n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem {
    pub coeffs: Vec<u64>,
}

/// The Galois ring `Z_q / m_q^n`, `q = p^r`, in the unramified presentation
/// `(Z/p^n)[θ] / (modulus(θ))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    p: u64,
    n: u32,
    r: u32,
    /// Non-leading coefficients `c_0..c_{r-1}` of the monic modulus, each in
    /// `[0, p)`; empty when `r = 1`.
    modulus: Vec<u64>,
    pn: u64,
}

impl RingSpec {
    /// Build `Z_q / m_q^n`; for `r > 1` the modulus is the first monic
    /// irreducible polynomial mod `p` in lexicographic coefficient order.
    pub fn new(p: u64, n: u32, r: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(invalid!("{p} is not prime"));
        }
        if n < 1 {
            return Err(invalid!("level n must be at least 1"));
        }
        if r < 1 {
            return Err(invalid!("residue degree r must be at least 1"));
        }
        let pn = arith::checked_pow(p, n)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| limit!("{p}^{n} exceeds the supported modulus 2^62"))?;
        let modulus = if r > 1 { modulus::first_irreducible(p, r) } else { Vec::new() };
        Ok(RingSpec { p, n, r, modulus, pn })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    /// `p^n`, the characteristic.
    pub fn char_modulus(&self) -> u64 {
        self.pn
    }

    /// The monic modulus as full coefficient list (low to high, leading 1),
    /// or `None` for `r = 1`.
    pub fn modulus(&self) -> Option<Vec<u64>> {
        if self.r == 1 {
            return None;
        }
        let mut m = self.modulus.clone();
        m.push(1);
        Some(m)
    }

    /// `p^(n*r)`.
    pub fn cardinality(&self) -> BigUint {
        arith::big_pow(self.p, self.n as u64 * self.r as u64)
    }

    /// `q = p^r`, the size of the residue field.
    pub fn residue_size(&self) -> BigUint {
        arith::big_pow(self.p, self.r as u64)
    }

    pub fn residue_field(&self) -> RingSpec {
        self.at_level(1)
    }

    /// Canonical element from arbitrary integer coefficients.
    pub fn elem(&self, coeffs: &[i64]) -> Result<RingElem> {
        if coeffs.len() != self.r as usize {
            return Err(invalid!("expected {} coefficients, got {}", self.r, coeffs.len()));
        }
        let m = self.pn as i128;
        Ok(RingElem {
            coeffs: coeffs.iter().map(|&c| (c as i128).rem_euclid(m) as u64).collect(),
        })
    }

    pub fn from_int(&self, x: i64) -> RingElem {
        self.from_bigint(&BigInt::from(x))
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.valuation(a) == 0
    }

    /// Every element, lexicographic in the coefficient vector.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<RingElem>> {
        match self.size() {
            Some(s) if s <= cap => Ok((0..s).map(|i| self.element_at(i)).collect()),
            _ => Err(limit!(
                "ring of cardinality {} exceeds enumeration cap {cap}",
                self.cardinality()
            )),
        }
    }

    fn reduce_coeff(&self, x: u64) -> u64 {
        x % self.pn
    }
}

impl LocalArith for RingSpec {
    type Elem = RingElem;

    fn prime(&self) -> u64 {
        self.p
    }
    fn level(&self) -> u32 {
        self.n
    }
    fn degree(&self) -> u32 {
        self.r
    }
    fn at_level(&self, k: u32) -> Self {
        RingSpec { p: self.p, n: k, r: self.r, modulus: self.modulus.clone(), pn: self.p.pow(k) }
    }

    fn zero(&self) -> RingElem {
        RingElem { coeffs: vec![0; self.r as usize] }
    }
    fn one(&self) -> RingElem {
        let mut c = vec![0; self.r as usize];
        c[0] = 1 % self.pn;
        RingElem { coeffs: c }
    }
    fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let m = self.pn;
        RingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= m {
                        s - m
                    } else {
                        s
                    }
                })
                .collect(),
        }
    }
    fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let m = self.pn;
        RingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| if x >= y { x - y } else { x + m - y })
                .collect(),
        }
    }
    fn neg(&self, a: &RingElem) -> RingElem {
        let m = self.pn;
        RingElem { coeffs: a.coeffs.iter().map(|&x| if x == 0 { 0 } else { m - x }).collect() }
    }
    fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let m = self.pn;
        let r = self.r as usize;
        if r == 1 {
            return RingElem { coeffs: vec![mulmod(a.coeffs[0], b.coeffs[0], m)] };
        }
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let t = mulmod(x, y, m);
                let s = prod[i + j] + t;
                prod[i + j] = if s >= m { s - m } else { s };
            }
        }
        // θ^r = -(c_0 + c_1 θ + ... + c_{r-1} θ^{r-1})
        for d in (r..2 * r - 1).rev() {
            let t = prod[d];
            if t == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &c) in self.modulus.iter().enumerate() {
                let s = mulmod(t, c, m);
                let slot = &mut prod[d - r + j];
                *slot = if *slot >= s { *slot - s } else { *slot + m - s };
            }
        }
        prod.truncate(r);
        RingElem { coeffs: prod }
    }
    fn from_bigint(&self, x: &BigInt) -> RingElem {
        let mut c = vec![0; self.r as usize];
        c[0] = reduce_bigint(x, self.pn);
        RingElem { coeffs: c }
    }
    fn is_zero(&self, a: &RingElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }
    fn valuation(&self, a: &RingElem) -> u32 {
        a.coeffs
            .iter()
            .filter_map(|&c| arith::valuation_u64(c, self.p))
            .min()
            .map_or(self.n, |v| v.min(self.n))
    }
    fn inverse(&self, a: &RingElem) -> Option<RingElem> {
        if self.valuation(a) != 0 {
            return None;
        }
        // the unit group has order (q - 1) q^(n-1)
        let q = (self.p as u128).pow(self.r);
        let order = (q - 1) * q.pow(self.n - 1);
        let mut e = order - 1;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Some(acc)
    }
    fn reduce(&self, a: &RingElem) -> RingElem {
        RingElem { coeffs: a.coeffs.iter().map(|&c| self.reduce_coeff(c)).collect() }
    }
    fn div_p_pow(&self, a: &RingElem, k: u32) -> RingElem {
        let d = self.p.pow(k);
        RingElem { coeffs: a.coeffs.iter().map(|&c| (c / d) % self.pn).collect() }
    }
    fn add_p_pow(&self, a: &RingElem, v: &RingElem, k: u32) -> RingElem {
        let shift = self.p.pow(k) % self.pn;
        RingElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&v.coeffs)
                .map(|(&x, &y)| (x % self.pn + mulmod(y, shift, self.pn)) % self.pn)
                .collect(),
        }
    }
    fn size(&self) -> Option<u64> {
        arith::checked_pow(self.pn, self.r)
    }
    fn element_at(&self, mut idx: u64) -> RingElem {
        let r = self.r as usize;
        let mut coeffs = vec![0; r];
        for slot in coeffs.iter_mut().rev() {
            *slot = idx % self.pn;
            idx /= self.pn;
        }
        RingElem { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_cardinality() {
        assert_eq!(RingSpec::new(2, 3, 1).unwrap().cardinality(), BigUint::from(8u32));
        assert_eq!(RingSpec::new(3, 2, 2).unwrap().cardinality(), BigUint::from(81u32));
        assert!(matches!(RingSpec::new(4, 1, 1), Err(crate::Error::InvalidInput(_))));
        assert!(RingSpec::new(3, 0, 1).is_err());
        assert!(RingSpec::new(3, 1, 0).is_err());
    }

    #[test]
    fn same_inputs_same_ring() {
        assert_eq!(RingSpec::new(3, 2, 3).unwrap(), RingSpec::new(3, 2, 3).unwrap());
        assert_eq!(RingSpec::new(3, 2, 2).unwrap().modulus(), Some(vec![1, 0, 1]));
    }

    #[test]
    fn z9_arithmetic() {
        let r = RingSpec::new(3, 2, 1).unwrap();
        let (a, b) = (r.from_int(5), r.from_int(7));
        assert_eq!(r.add(&a, &b), r.from_int(3));
        assert_eq!(r.mul(&r.from_int(3), &r.from_int(3)), r.zero());
        assert_eq!(r.neg(&r.from_int(1)), r.from_int(8));
    }

    #[test]
    fn theta_squared_is_minus_one() {
        // GR(9, 2) with modulus θ^2 + 1
        let r = RingSpec::new(3, 2, 2).unwrap();
        let theta = r.elem(&[0, 1]).unwrap();
        assert_eq!(r.mul(&theta, &theta), r.elem(&[8, 0]).unwrap());
    }

    #[test]
    fn valuations() {
        let z27 = RingSpec::new(3, 3, 1).unwrap();
        assert_eq!(z27.valuation(&z27.from_int(18)), 2);
        assert_eq!(z27.valuation(&z27.zero()), 3);
        let gr = RingSpec::new(3, 3, 2).unwrap();
        assert_eq!(gr.valuation(&gr.elem(&[3, 6]).unwrap()), 1);
    }

    #[test]
    fn units() {
        let z8 = RingSpec::new(2, 3, 1).unwrap();
        assert!(z8.is_unit(&z8.from_int(3)));
        assert!(!z8.is_unit(&z8.from_int(6)));
        let z9 = RingSpec::new(3, 2, 1).unwrap();
        let units = z9.enumerate(100).unwrap().into_iter().filter(|a| z9.is_unit(a)).count();
        assert_eq!(units, 6);
    }

    #[test]
    fn enumeration() {
        let z4 = RingSpec::new(2, 2, 1).unwrap();
        let all: Vec<u64> = z4.enumerate(10).unwrap().iter().map(|e| e.coeffs[0]).collect();
        assert_eq!(all, [0, 1, 2, 3]);
        assert_eq!(RingSpec::new(2, 2, 2).unwrap().enumerate(100).unwrap().len(), 16);
        assert!(matches!(
            RingSpec::new(2, 1, 1).unwrap().enumerate(1),
            Err(crate::Error::ResourceLimit(_))
        ));
        let gr = RingSpec::new(2, 1, 2).unwrap();
        let els = gr.enumerate(10).unwrap();
        assert!(els.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn inverses_in_galois_ring() {
        let gr = RingSpec::new(2, 3, 2).unwrap();
        for a in gr.enumerate(1000).unwrap() {
            match gr.inverse(&a) {
                Some(b) => assert_eq!(gr.mul(&a, &b), gr.one()),
                None => assert!(!gr.is_unit(&a)),
            }
        }
        let z = IntMod::new(5, 3).unwrap();
        for a in 0..125u64 {
            if let Some(b) = z.inverse(&a) {
                assert_eq!(z.mul(&a, &b), 1);
            }
        }
    }

    #[test]
    fn intmod_matches_ringspec() {
        let z = IntMod::new(3, 3).unwrap();
        let r = RingSpec::new(3, 3, 1).unwrap();
        for a in 0..27u64 {
            for b in 0..27u64 {
                let (ea, eb) = (r.element_at(a), r.element_at(b));
                assert_eq!(r.mul(&ea, &eb).coeffs[0], z.mul(&a, &b));
                assert_eq!(r.sub(&ea, &eb).coeffs[0], z.sub(&a, &b));
            }
            assert_eq!(r.valuation(&r.element_at(a)), z.valuation(&a));
        }
    }
}
