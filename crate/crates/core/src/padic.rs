//! Finite unions of balls in `Z_p^N`, their Haar measure, pushforward
//! masses under integral polynomial maps, and eccentricity of families.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::count::{self, CountConfig, RootExecutor, Sequential};
use crate::error::{invalid, Result};
use crate::poly::{clear_denominators, IntPoly, PolyMap, RatPoly};
use crate::scheme::SchemePresentation;

fn p_pow(p: u64, e: u32) -> BigInt {
    BigInt::from(arith::big_pow(p, e as u64))
}

/// `{y in Z_p^N : y = center mod p^k}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    k: u32,
    center: Vec<BigInt>,
}

impl Ball {
    pub fn new(p: u64, center: Vec<BigInt>, k: u32) -> Self {
        let m = p_pow(p, k);
        Ball { k, center: center.iter().map(|c| c.mod_floor(&m)).collect() }
    }

    pub fn center(&self) -> &[BigInt] {
        &self.center
    }

    pub fn radius_exp(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn contains_point(&self, p: u64, x: &[BigInt]) -> bool {
        vec_valuation(p, &self.center, x).is_none_or(|v| v >= self.k)
    }

    /// Whether `other` is a subset of `self`.
    fn contains_ball(&self, p: u64, other: &Ball) -> bool {
        other.k >= self.k && self.contains_point(p, &other.center)
    }
}

/// `min_i v(a_i - b_i)`, `None` when the vectors are equal.
fn vec_valuation(p: u64, a: &[BigInt], b: &[BigInt]) -> Option<u32> {
    a.iter().zip(b).filter_map(|(x, y)| arith::valuation_big(&(x - y), p)).min()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallUnion {
    p: u64,
    dim: usize,
    balls: Vec<Ball>,
}

impl BallUnion {
    pub fn new(p: u64, dim: usize, balls: Vec<Ball>) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(invalid!("{p} is not prime"));
        }
        if let Some(b) = balls.iter().find(|b| b.dim() != dim) {
            return Err(invalid!("ball of dimension {} in a union of dimension {dim}", b.dim()));
        }
        Ok(BallUnion { p, dim, balls })
    }

    pub fn empty(p: u64, dim: usize) -> Result<Self> {
        Self::new(p, dim, Vec::new())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Disjoint representation of the same set: balls contained in another
    /// ball are dropped, the rest sorted by radius then center.
    pub fn normalize(&self) -> BallUnion {
        let mut sorted = self.balls.clone();
        sorted.sort();
        sorted.dedup();
        let mut kept: Vec<Ball> = Vec::new();
        for b in sorted {
            if !kept.iter().any(|k| k.contains_ball(self.p, &b)) {
                kept.push(b);
            }
        }
        BallUnion { p: self.p, dim: self.dim, balls: kept }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// Haar measure of the set, normalizing first.
    pub fn haar(&self) -> BigRational {
        self.normalize().raw_measure()
    }

    /// `sum_i p^(-k_i N)` over the balls as listed, overlaps counted twice.
    pub fn raw_measure(&self) -> BigRational {
        self.balls
            .iter()
            .map(|b| BigRational::new(BigInt::one(), p_pow(self.p, b.k * self.dim as u32)))
            .sum()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.balls.iter().any(|b| b.contains_point(self.p, x))
    }

    /// Image under `y -> p^s u y` with `u` a unit.
    pub fn map_linear(&self, s: u32, u: &BigInt) -> Result<BallUnion> {
        if (u % BigInt::from(self.p)).is_zero() {
            return Err(invalid!("{u} is not a unit at {}", self.p));
        }
        let f = p_pow(self.p, s) * u;
        let balls = self.balls.iter().map(|b| Ball::new(self.p, b.center.iter().map(|c| c * &f).collect(), b.k + s)).collect();
        BallUnion::new(self.p, self.dim, balls)
    }
}

/// `mu(F^-1(U))` for normalized Haar measure on `Z_p^M`, by counting the
/// solutions of `F = c_i mod p^(k_i)` for each ball of the normalized union.
pub fn pushforward_mass_with(
    f: &PolyMap<BigInt>,
    u: &BallUnion,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<BigRational> {
    check_dims(f.target_dim(), u)?;
    mass_by_balls(f.source_vars(), u, cfg, exec, |center| {
        let m = f.source_vars();
        Ok(f.components().iter().zip(center).map(|(g, c)| g - &IntPoly::constant(m, c.clone())).collect())
    })
}

/// As [`pushforward_mass_with`] for a map with rational coefficients, which
/// must be `p`-integral.
pub fn pushforward_mass_rat_with(
    f: &PolyMap<BigRational>,
    u: &BallUnion,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<BigRational> {
    check_dims(f.target_dim(), u)?;
    let p = BigInt::from(u.p());
    if let Some(g) = f.components().iter().find(|g| (g.denominator_lcm() % &p).is_zero()) {
        return Err(invalid!("component with denominator {} is not {}-integral", g.denominator_lcm(), u.p()));
    }
    let m = f.source_vars();
    mass_by_balls(m, u, cfg, exec, |center| {
        f.components()
            .iter()
            .zip(center)
            .map(|(g, c)| {
                let shifted = g - &RatPoly::constant(m, BigRational::from_integer(c.clone()));
                if shifted.is_zero() {
                    Ok(IntPoly::zero(m))
                } else {
                    clear_denominators(&shifted).map(|(int, _)| int)
                }
            })
            .collect()
    })
}

fn check_dims(target: usize, u: &BallUnion) -> Result<()> {
    if target != u.dim() {
        return Err(invalid!("map has {target} components, balls live in dimension {}", u.dim()));
    }
    Ok(())
}

fn mass_by_balls(
    m: usize,
    u: &BallUnion,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
    fiber: impl Fn(&[BigInt]) -> Result<Vec<IntPoly>>,
) -> Result<BigRational> {
    let names: Vec<String> = (1..=m).map(|i| format!("u{i}")).collect();
    let mut mass = BigRational::zero();
    for b in u.normalize().balls() {
        if b.k == 0 {
            mass += BigRational::one();
            continue;
        }
        let generators = fiber(b.center())?;
        let x = SchemePresentation { name: String::from("fiber"), vars: names.clone(), generators, dim_q: 0, cia: None, cover: None, tags: Vec::new() };
        let n = count::count_lifted_with(&x, u.p(), b.k, 1, cfg, exec)?;
        mass += BigRational::new(BigInt::from(n), p_pow(u.p(), b.k * m as u32));
    }
    Ok(mass)
}

pub fn pushforward_mass(f: &PolyMap<BigInt>, u: &BallUnion, cfg: &CountConfig) -> Result<BigRational> {
    pushforward_mass_with(f, u, cfg, &Sequential)
}

pub fn pushforward_mass_rat(f: &PolyMap<BigRational>, u: &BallUnion, cfg: &CountConfig) -> Result<BigRational> {
    pushforward_mass_rat_with(f, u, cfg, &Sequential)
}

/// `B(0, p^(-2n^2)) u B(p^(2n+1), p^(-4n))` in dimension 1, as constructed.
/// For `n = 1` the second ball lies inside the first.
pub fn counterexample_family(p: u64, n: u32) -> Result<BallUnion> {
    if n < 1 {
        return Err(invalid!("family index starts at 1"));
    }
    let b1 = Ball::new(p, vec![BigInt::zero()], 2 * n * n);
    let b2 = Ball::new(p, vec![p_pow(p, 2 * n + 1)], 4 * n);
    BallUnion::new(p, 1, vec![b1, b2])
}

/// `p^(-n^2) / (p^(-2n^2) + p^(-4n))`.
pub fn counterexample_ratio_closed_form(p: u64, n: u32) -> BigRational {
    let inv = |e: u32| BigRational::new(BigInt::one(), p_pow(p, e));
    inv(n * n) / (inv(2 * n * n) + inv(4 * n))
}

/// Families of ball unions indexed by `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BallFamily {
    /// `p^(scale n) Z_p^dim`.
    Balls { p: u64, dim: usize, scale: u32 },
    Counterexample { p: u64 },
    /// Member `n` is `unions[n - 1]`.
    Explicit(Vec<BallUnion>),
}

impl BallFamily {
    pub fn member(&self, n: u32) -> Result<BallUnion> {
        match self {
            BallFamily::Balls { p, dim, scale } => {
                BallUnion::new(*p, *dim, vec![Ball::new(*p, vec![BigInt::zero(); *dim], scale * n)])
            }
            BallFamily::Counterexample { p } => counterexample_family(*p, n),
            BallFamily::Explicit(us) => {
                us.get((n as usize).wrapping_sub(1)).cloned().ok_or_else(|| invalid!("family has no member {n}"))
            }
        }
    }

    pub fn len_hint(&self) -> Option<u32> {
        match self {
            BallFamily::Explicit(us) => Some(us.len() as u32),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioEntry {
    pub n: u32,
    pub mass: BigRational,
    pub haar: BigRational,
    pub ratio: BigRational,
}

/// `mass(F, U_n) / haar(U_n)` for `n = 1..=n_max`.
pub fn boundedness_ratio_with(
    f: &PolyMap<BigInt>,
    family: &BallFamily,
    n_max: u32,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<Vec<RatioEntry>> {
    (1..=n_max)
        .map(|n| {
            let u = family.member(n)?;
            let mass = pushforward_mass_with(f, &u, cfg, exec)?;
            let haar = u.haar();
            if haar.is_zero() {
                return Err(invalid!("family member {n} is empty"));
            }
            Ok(RatioEntry { n, ratio: &mass / &haar, mass, haar })
        })
        .collect()
}

pub fn boundedness_ratio(f: &PolyMap<BigInt>, family: &BallFamily, n_max: u32, cfg: &CountConfig) -> Result<Vec<RatioEntry>> {
    boundedness_ratio_with(f, family, n_max, cfg, &Sequential)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EccentricityRecord {
    pub index: u32,
    /// Radius exponent of the smallest ball around `x` containing the set.
    pub min_enclosing_exp: u32,
    /// Radius exponent of the largest ball around `x` inside the set.
    pub max_contained_exp: u32,
    /// `p^((max - min) N)`.
    pub ratio: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EccentricityVerdict {
    BoundedAtScale,
    UnboundedAtScale,
    Inconclusive,
}

/// Eccentricity of one set around `x`.
pub fn eccentricity_at(u: &BallUnion, x: &[BigInt], index: u32) -> Result<EccentricityRecord> {
    let u = u.normalize();
    if x.len() != u.dim() {
        return Err(invalid!("point of dimension {} for sets of dimension {}", x.len(), u.dim()));
    }
    let p = u.p();
    let home = u
        .balls()
        .iter()
        .find(|b| b.contains_point(p, x))
        .ok_or_else(|| invalid!("point lies outside family member {index}"))?;
    let min_enclosing_exp = u
        .balls()
        .iter()
        .map(|b| vec_valuation(p, b.center(), x).map_or(b.k, |v| v.min(b.k)))
        .min()
        .expect("x lies in some ball");
    let max_contained_exp = (min_enclosing_exp..=home.k)
        .find(|&e| ball_inside(&u, x, e))
        .expect("the ball containing x is inside the set");
    let ratio = p_pow(p, (max_contained_exp - min_enclosing_exp) * u.dim() as u32);
    Ok(EccentricityRecord { index, min_enclosing_exp, max_contained_exp, ratio })
}

/// Whether `B(x, p^-e)` lies inside the normalized union `u`.
fn ball_inside(u: &BallUnion, x: &[BigInt], e: u32) -> bool {
    let p = u.p();
    let target = Ball::new(p, x.to_vec(), e);
    let mut covered = BigRational::zero();
    for b in u.balls() {
        if b.contains_ball(p, &target) {
            return true;
        }
        if target.contains_ball(p, b) {
            covered += BigRational::new(BigInt::one(), p_pow(p, b.k * u.dim() as u32));
        }
    }
    covered == BigRational::new(BigInt::one(), p_pow(p, e * u.dim() as u32))
}

/// Records for `n = 1..=n_max` and a finite-range verdict: bounded when the
/// last two ratios do not exceed the earlier maximum, unbounded when the
/// ratios never decrease and the last one is a strict new maximum.
pub fn eccentricity(
    family: &BallFamily,
    x: &[BigInt],
    n_max: u32,
) -> Result<(Vec<EccentricityRecord>, EccentricityVerdict)> {
    let records = (1..=n_max).map(|n| eccentricity_at(&family.member(n)?, x, n)).collect::<Result<Vec<_>>>()?;
    Ok((records.clone(), eccentricity_verdict(&records)))
}

pub fn eccentricity_verdict(records: &[EccentricityRecord]) -> EccentricityVerdict {
    let ratios: Vec<&BigInt> = records.iter().map(|r| &r.ratio).collect();
    if ratios.len() < 2 {
        return EccentricityVerdict::Inconclusive;
    }
    let l = ratios.len();
    let earlier_max = ratios[..l.saturating_sub(2).max(1)].iter().copied().max().expect("nonempty");
    if ratios[l - 2..].iter().all(|r| *r <= earlier_max) {
        return EccentricityVerdict::BoundedAtScale;
    }
    let nondecreasing = ratios.windows(2).all(|w| w[0] <= w[1]);
    if nondecreasing && ratios[..l - 1].iter().all(|r| *r < ratios[l - 1]) {
        EccentricityVerdict::UnboundedAtScale
    } else {
        EccentricityVerdict::Inconclusive
    }
}

/// Sanity: the eccentricity ratio is always a power of `p`, at least 1.
pub fn ratio_is_valid(rec: &EccentricityRecord) -> bool {
    rec.min_enclosing_exp <= rec.max_contained_exp && rec.ratio.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_int_poly;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn map(comps: &[&str], vars: &[&str]) -> PolyMap<BigInt> {
        let names: Vec<String> = vars.iter().map(|s| String::from(*s)).collect();
        PolyMap::new(vars.len(), comps.iter().map(|c| parse_int_poly(c, &names).unwrap()).collect()).unwrap()
    }

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    #[test]
    fn normalize_examples() {
        let u = BallUnion::new(3, 1, vec![Ball::new(3, vec![big(0)], 1), Ball::new(3, vec![big(0)], 2)]).unwrap();
        assert_eq!(u.normalize().balls(), [Ball::new(3, vec![big(0)], 1)]);
        assert_eq!(u.haar(), rat(1, 3));
        let v = BallUnion::new(3, 1, vec![Ball::new(3, vec![big(0)], 1), Ball::new(3, vec![big(1)], 1)]).unwrap();
        assert_eq!(v.normalize(), v);
        assert!(BallUnion::new(3, 2, vec![Ball::new(3, vec![big(0)], 1)]).is_err());
        assert_eq!(BallUnion::empty(5, 2).unwrap().haar(), rat(0, 1));
    }

    #[test]
    fn haar_examples() {
        let b = BallUnion::new(5, 2, vec![Ball::new(5, vec![big(0), big(0)], 3)]).unwrap();
        assert_eq!(b.haar(), rat(1, 5i64.pow(6)));
        for p in [3u64, 5] {
            for n in 2..=3u32 {
                let u = counterexample_family(p, n).unwrap();
                let expect = BigRational::new(BigInt::one(), p_pow(p, 2 * n * n)) + BigRational::new(BigInt::one(), p_pow(p, 4 * n));
                assert_eq!(u.haar(), expect);
                assert!(u.is_normalized() || u.normalize().balls().len() == 2);
            }
        }
        let u1 = counterexample_family(3, 1).unwrap();
        assert_eq!(u1.balls(), [Ball::new(3, vec![big(0)], 2), Ball::new(3, vec![big(27)], 4)]);
        assert_eq!(u1.raw_measure(), rat(1, 9) + rat(1, 81));
        // degenerate: the second ball lies inside the first
        assert_eq!(u1.normalize().balls().len(), 1);
    }

    #[test]
    fn pushforward_examples() {
        let sq = map(&["x^2"], &["x", "y"]);
        let u = BallUnion::new(3, 1, vec![Ball::new(3, vec![big(0)], 2)]).unwrap();
        assert_eq!(pushforward_mass(&sq, &u, &cfg()).unwrap(), rat(1, 3));
        let id = map(&["x", "y"], &["x", "y"]);
        let w = BallUnion::new(3, 2, vec![Ball::new(3, vec![big(1), big(2)], 2), Ball::new(3, vec![big(0), big(0)], 1)]).unwrap();
        assert_eq!(pushforward_mass(&id, &w, &cfg()).unwrap(), w.haar());
        let b2 = BallUnion::new(3, 1, vec![Ball::new(3, vec![big(27)], 4)]).unwrap();
        assert_eq!(pushforward_mass(&sq, &b2, &cfg()).unwrap(), rat(0, 1));
    }

    #[test]
    fn pushforward_counts_cia_fibers() {
        use crate::constructions::cia_hat;
        use crate::count::count_lifted;
        let base = crate::corpus::hat_base();
        let hat = cia_hat(&base).unwrap().hat;
        for (x, primes) in [(&base, &[3u64][..]), (&hat, &[2, 3][..])] {
            let w = x.cia.as_ref().unwrap();
            let m = w.ambient_dim() as u32;
            for &p in primes {
                for n in 1..=3 {
                    let u = BallFamily::Balls { p, dim: w.equations(), scale: 1 }.member(n).unwrap();
                    let mass = pushforward_mass_rat(&w.phi, &u, &cfg()).unwrap();
                    let count = count_lifted(x, p, n, 1, &cfg()).unwrap();
                    assert_eq!(mass * BigRational::from_integer(p_pow(p, m * n)), BigRational::from_integer(count.into()));
                }
            }
        }
        let u = BallFamily::Balls { p: 2, dim: 1, scale: 1 }.member(1).unwrap();
        assert!(pushforward_mass_rat(&base.cia.unwrap().phi, &u, &cfg()).is_err());
    }

    #[test]
    fn ratio_examples() {
        let sq = map(&["x^2"], &["x", "y"]);
        for p in [3u64, 5] {
            let r = boundedness_ratio(&sq, &BallFamily::Counterexample { p }, 3, &cfg()).unwrap();
            for e in &r[1..] {
                assert_eq!(e.ratio, counterexample_ratio_closed_form(p, e.n));
            }
            assert!(r[2].ratio < r[1].ratio);
        }
        let id = map(&["x"], &["x"]);
        let r = boundedness_ratio(&id, &BallFamily::Balls { p: 3, dim: 1, scale: 1 }, 4, &cfg()).unwrap();
        assert!(r.iter().all(|e| e.ratio == rat(1, 1)));
        let one = map(&["x^2"], &["x"]);
        let r = boundedness_ratio(&one, &BallFamily::Balls { p: 3, dim: 1, scale: 2 }, 3, &cfg()).unwrap();
        assert_eq!(r.iter().map(|e| e.ratio.clone()).collect::<Vec<_>>(), [rat(3, 1), rat(9, 1), rat(27, 1)]);
    }

    #[test]
    fn eccentricity_examples() {
        let zero = [big(0)];
        let (recs, v) = eccentricity(&BallFamily::Balls { p: 3, dim: 1, scale: 1 }, &zero, 4).unwrap();
        assert!(recs.iter().all(|r| r.ratio.is_one()));
        assert_eq!(v, EccentricityVerdict::BoundedAtScale);
        let (recs, v) = eccentricity(&BallFamily::Counterexample { p: 3 }, &zero, 3).unwrap();
        assert_eq!(v, EccentricityVerdict::UnboundedAtScale);
        assert!(recs[0].ratio.is_one());
        for r in &recs[1..] {
            let n = r.index;
            assert_eq!((r.min_enclosing_exp, r.max_contained_exp), (2 * n + 1, 2 * n * n));
            assert_eq!(r.ratio, p_pow(3, 2 * n * n - 2 * n - 1));
        }
        assert!(eccentricity(&BallFamily::Counterexample { p: 3 }, &[big(1)], 2).is_err());
    }

    #[test]
    fn split_ball_is_recognised_as_contained() {
        let balls = (0..3).map(|i| Ball::new(3, vec![big(i * 3)], 2)).collect();
        let u = BallUnion::new(3, 1, balls).unwrap();
        let r = eccentricity_at(&u, &[big(0)], 1).unwrap();
        assert_eq!((r.min_enclosing_exp, r.max_contained_exp, r.ratio.clone()), (1, 1, big(1)));
    }

    #[test]
    fn linear_maps_preserve_ratios() {
        let p = 3u64;
        let fam = BallFamily::Counterexample { p };
        for n in 1..=3 {
            let u = fam.member(n).unwrap();
            let base = eccentricity_at(&u, &[big(0)], n).unwrap();
            for (s, unit) in [(0u32, 2i64), (0, 5), (1, 1), (2, 7)] {
                let v = u.map_linear(s, &big(unit)).unwrap();
                let r = eccentricity_at(&v, &[big(0)], n).unwrap();
                assert_eq!(r.ratio, base.ratio);
                assert_eq!(r.min_enclosing_exp, base.min_enclosing_exp + s);
                assert_eq!(r.max_contained_exp, base.max_contained_exp + s);
            }
        }
        assert!(fam.member(1).unwrap().map_linear(0, &big(3)).is_err());
    }
}
