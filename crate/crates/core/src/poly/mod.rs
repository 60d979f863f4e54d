//! Multivariate polynomials with exact integer or rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by dense exponent vectors ordered
//! graded-lexicographically, so iteration order is canonical and zero
//! coefficients are never stored.

mod compiled;
mod parse;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};
use crate::ring::LocalArith;

pub use compiled::{CompiledPoly, CompiledSystem};
pub use parse::{parse_int_poly, parse_rat_poly};

/// Dense exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient domains: `BigInt` and `BigRational`.
pub trait Coeff:
    Clone + fmt::Debug + fmt::Display + Eq + Signed + From<BigInt> + Send + Sync
{
}

impl Coeff for BigInt {}
impl Coeff for BigRational {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), C::one());
        p
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(invalid!("exponent vector of length {} in {nvars} variables", exps.len()));
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (slot, &e) in out.iter_mut().zip(&m.0) {
                *slot = (*slot).max(e);
            }
        }
        out
    }

    /// Whether variable `i` occurs in some term.
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.terms.insert(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c.clone() * C::from(BigInt::from(e)));
        }
        out
    }

    /// Substitute `subs[i]` for variable `i`; the result lives in the
    /// variables of the substitutes.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(invalid!("{} substitutes for {} variables", subs.len(), self.nvars));
        }
        let target = subs.first().map_or(0, |s| s.nvars);
        if subs.iter().any(|s| s.nvars != target) {
            return Err(invalid!("substitutes live in different variable sets"));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (s, &e) in subs.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &s.pow(e);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Embed into `nvars + extra` variables, new variables last.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let nvars = self.nvars + extra;
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.resize(nvars, 0);
            out.terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Canonical text using the given variable names, highest term first.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, names }
    }
}

impl IntPoly {
    pub fn to_rat(&self) -> RatPoly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), BigRational::from(c.clone()))).collect(),
        }
    }

    /// Value at a point of `ring^nvars`.
    pub fn eval<A: LocalArith>(&self, ring: &A, point: &[A::Elem]) -> Result<A::Elem> {
        if point.len() != self.nvars {
            return Err(invalid!("point of length {} for a polynomial in {} variables", point.len(), self.nvars));
        }
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.from_bigint(c);
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = ring.mul(&t, &ring.pow(x, e as u64));
                }
            }
            acc = ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Content (gcd of coefficients), positive; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl RatPoly {
    /// `Some` when every coefficient is an integer.
    pub fn to_int(&self) -> Option<IntPoly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            terms.insert(m.clone(), c.to_integer());
        }
        Some(Poly { nvars: self.nvars, terms })
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Value at a point where every denominator is a unit; `None` otherwise.
    pub fn eval<A: LocalArith>(&self, ring: &A, point: &[A::Elem]) -> Result<Option<A::Elem>> {
        if point.len() != self.nvars {
            return Err(invalid!("point of length {} for a polynomial in {} variables", point.len(), self.nvars));
        }
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let Some(mut t) = ring.from_ratio(c) else { return Ok(None) };
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = ring.mul(&t, &ring.pow(x, e as u64));
                }
            }
            acc = ring.add(&acc, &t);
        }
        Ok(Some(acc))
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials in different rings");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different rings");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

pub struct PolyDisplay<'a, C> {
    poly: &'a Poly<C>,
    names: &'a [String],
}

impl<C: Coeff> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                let name = self.names.get(i).map(String::as_str).unwrap_or("?");
                match e {
                    0 => {}
                    1 => factors.push(String::from(name)),
                    _ => factors.push(alloc::format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A polynomial map `A^M -> A^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap<C> {
    source_vars: usize,
    components: Vec<Poly<C>>,
}

impl<C: Coeff> PolyMap<C> {
    pub fn new(source_vars: usize, components: Vec<Poly<C>>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid!("a polynomial map needs at least one component"));
        }
        if let Some(bad) = components.iter().find(|c| c.nvars() != source_vars) {
            return Err(invalid!("component in {} variables, map source has {source_vars}", bad.nvars()));
        }
        Ok(PolyMap { source_vars, components })
    }

    pub fn source_vars(&self) -> usize {
        self.source_vars
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly<C>] {
        &self.components
    }

    /// `N x M` matrix of formal partial derivatives.
    pub fn jacobian(&self) -> Vec<Vec<Poly<C>>> {
        self.components
            .iter()
            .map(|f| (0..self.source_vars).map(|j| f.derivative(j)).collect())
            .collect()
    }

    pub fn identity(nvars: usize) -> Self {
        PolyMap { source_vars: nvars, components: (0..nvars).map(|i| Poly::var(nvars, i)).collect() }
    }
}

/// `g(x_1/K, ..., x_c/K)`, every variable scaled.
pub fn scale_poly(g: &IntPoly, k: &BigInt) -> RatPoly {
    scale_rat_poly(&g.to_rat(), k)
}

pub fn scale_rat_poly(g: &RatPoly, k: &BigInt) -> RatPoly {
    assert!(k.is_positive(), "scale factor must be positive");
    let mut out = RatPoly::zero(g.nvars);
    for (m, c) in &g.terms {
        let den = num_traits::pow(k.clone(), m.degree() as usize);
        out.terms.insert(m.clone(), c / BigRational::from(den));
    }
    out
}

/// Minimal `r >= 0` with `K^r * (f_i)_K` integral for every `f_i`.
pub fn r_of_k(fs: &[IntPoly], k: &BigInt) -> u32 {
    let scaled: Vec<RatPoly> = fs.iter().map(|f| scale_poly(f, k)).collect();
    let kr = BigRational::from(k.clone());
    let mut r = 0;
    let mut factor = BigRational::one();
    loop {
        if scaled.iter().all(|g| g.scale(&factor).is_integral()) {
            return r;
        }
        r += 1;
        factor = &factor * &kr;
    }
}

/// `(content * g, content)` with `content` the least positive integer making
/// `g` integral.
pub fn clear_denominators(g: &RatPoly) -> Result<(IntPoly, BigInt)> {
    if g.is_zero() {
        return Err(invalid!("cannot clear denominators of the zero polynomial"));
    }
    let l = g.denominator_lcm();
    let int = g.scale(&BigRational::from(l.clone())).to_int().expect("lcm clears denominators");
    Ok((int, l))
}

/// Substitute `K * x_i` for every variable.
pub fn substitute_scaled<C: Coeff>(g: &Poly<C>, k: &BigInt) -> Poly<C> {
    let mut out = Poly::zero(g.nvars);
    for (m, c) in &g.terms {
        let f = C::from(num_traits::pow(k.clone(), m.degree() as usize));
        out.terms.insert(m.clone(), c.clone() * f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn ip(s: &str, vars: &[&str]) -> IntPoly {
        parse_int_poly(s, &names(vars)).unwrap()
    }

    fn rp(s: &str, vars: &[&str]) -> RatPoly {
        parse_rat_poly(s, &names(vars)).unwrap()
    }

    #[test]
    fn eval_examples() {
        let z9 = RingSpec::new(3, 2, 1).unwrap();
        let f = ip("x^2 - 2", &["x"]);
        assert_eq!(f.eval(&z9, &[z9.from_int(5)]).unwrap(), z9.from_int(5));
        let g = ip("x*y", &["x", "y"]);
        assert_eq!(g.eval(&z9, &[z9.from_int(3), z9.from_int(3)]).unwrap(), z9.zero());
        let z3 = RingSpec::new(3, 1, 1).unwrap();
        let h = ip("x^2 + y^2 + z^2", &["x", "y", "z"]);
        let one = z3.one();
        assert_eq!(h.eval(&z3, &[one.clone(), one.clone(), one]).unwrap(), z3.zero());
        assert!(h.eval(&z3, &[z3.one()]).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let v = ["x", "y"];
        let j = PolyMap::new(2, vec![ip("x^2 - y", &v)]).unwrap().jacobian();
        assert_eq!(j[0], [ip("2*x", &v), ip("-1", &v)]);
        let j = PolyMap::new(2, vec![ip("x*y", &v)]).unwrap().jacobian();
        assert_eq!(j[0], [ip("y", &v), ip("x", &v)]);
        let w = ["x", "y", "z"];
        let j = PolyMap::new(3, vec![ip("x^2+y^2+z^2", &w)]).unwrap().jacobian();
        assert_eq!(j[0], [ip("2*x", &w), ip("2*y", &w), ip("2*z", &w)]);
    }

    #[test]
    fn scale_examples() {
        let two = BigInt::from(2);
        assert_eq!(scale_poly(&ip("x^2 - 2", &["x"]), &two), rp("x^2/4 - 2", &["x"]));
        let g = ip("3*x*y - y + 7", &["x", "y"]);
        assert_eq!(scale_poly(&g, &BigInt::one()), g.to_rat());
        assert_eq!(scale_poly(&ip("x*y", &["x", "y"]), &BigInt::from(3)), rp("x*y/9", &["x", "y"]));
    }

    #[test]
    fn r_of_k_examples() {
        let f = ip("x^2 - 2", &["x"]);
        assert_eq!(r_of_k(&[f.clone()], &BigInt::from(2)), 2);
        assert_eq!(r_of_k(&[ip("x", &["x"])], &BigInt::from(5)), 1);
        assert_eq!(r_of_k(&[f, ip("x^5 + 3", &["x"])], &BigInt::one()), 0);
        // minimality: r - 1 leaves x^2/2 - 4, not integral
        let scaled = scale_poly(&ip("x^2 - 2", &["x"]), &BigInt::from(2));
        assert!(!scaled.scale(&BigRational::from(BigInt::from(2))).is_integral());
    }

    #[test]
    fn clear_denominator_examples() {
        let v = ["x", "y"];
        assert_eq!(clear_denominators(&rp("x^2/4 - y/4", &v)).unwrap(), (ip("x^2 - y", &v), BigInt::from(4)));
        assert_eq!(clear_denominators(&rp("x - 1", &v)).unwrap(), (ip("x - 1", &v), BigInt::one()));
        assert_eq!(clear_denominators(&rp("x/2 + y/3", &v)).unwrap(), (ip("3*x + 2*y", &v), BigInt::from(6)));
        assert!(clear_denominators(&RatPoly::zero(2)).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let v = names(&["x", "y"]);
        let f = rp("-1/2*y + x^2 - 3 + 2*x*y^3", &["x", "y"]);
        assert_eq!(f.display(&v).to_string(), "2*x*y^3 + x^2 - 1/2*y - 3");
        assert_eq!(RatPoly::zero(2).display(&v).to_string(), "0");
        assert_eq!(ip("-x", &["x", "y"]).display(&v).to_string(), "-x");
    }

    #[test]
    fn compose_and_scaled_substitution() {
        let v = ["x", "y"];
        let g = scale_poly(&ip("x^2 - 2 + x*y", &v), &BigInt::from(3));
        assert_eq!(substitute_scaled(&g, &BigInt::from(3)), ip("x^2 - 2 + x*y", &v).to_rat());
        let f = ip("x^2 - y", &v);
        let subs = [ip("x + y", &v), ip("x*y", &v)];
        assert_eq!(f.compose(&subs).unwrap(), ip("x^2 + x*y + y^2", &v));
    }
}
