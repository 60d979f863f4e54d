//! Finite-grid tests of the asymptotic behaviour of `h_X`: the large-prime
//! limit, the `p^(-1/2)` envelope, boundedness in `n`, smooth stability and
//! a least-squares growth exponent.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::constructions::Cell;
use crate::corpus;
use crate::count::{h_sequence_with, CountConfig, HSequence, RootExecutor, Sequential};
use crate::error::{invalid, Result};
use crate::scheme::{scheme_hash, SchemeHash, SchemePresentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    Violated,
    BoundedAtScale,
    GrowthDetected,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "consistent",
            Verdict::Violated => "violated",
            Verdict::BoundedAtScale => "bounded-at-scale",
            Verdict::GrowthDetected => "growth-detected",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Thresholds shared by the boundedness and envelope tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    /// Minimum `h(n_max) / min(tail)` for growth.
    pub tau: BigRational,
    /// Tail length; `None` means `max(3, n_max / 2 + 1)`.
    pub tail_len: Option<usize>,
    /// Relative slack under which a new running maximum counts as stable.
    pub stable_eps: BigRational,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            tau: BigRational::new(3.into(), 2.into()),
            tail_len: None,
            stable_eps: BigRational::new(1.into(), 10.into()),
        }
    }
}

impl Thresholds {
    pub fn tail_for(&self, n_max: u32) -> usize {
        self.tail_len.unwrap_or_else(|| 3usize.max(n_max as usize / 2 + 1))
    }
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Smallest 1-based index `i` with `max(all) <= (1 + eps) * max(values[..i])`.
fn stabilization_index(values: &[BigRational], eps: &BigRational) -> Option<usize> {
    let top = values.iter().max()?;
    let slack = BigRational::one() + eps;
    let mut running = values[0].clone();
    for (i, v) in values.iter().enumerate() {
        if *v > running {
            running = v.clone();
        }
        if *top <= &running * &slack {
            return Some(i + 1);
        }
    }
    None
}

/// Nondecreasing tail whose last value is at least `tau` times its minimum.
fn grows(values: &[BigRational], tail: usize, tau: &BigRational) -> bool {
    if values.len() < tail || tail < 2 {
        return false;
    }
    let t = &values[values.len() - tail..];
    let min = t.iter().min().expect("nonempty tail");
    t.windows(2).all(|w| w[0] <= w[1]) && t[t.len() - 1] >= min * tau && t[t.len() - 1] > *min
}

fn hseq(x: &SchemePresentation, p: u64, r: u32, n_max: u32, cfg: &CountConfig, exec: &dyn RootExecutor) -> Result<HSequence> {
    h_sequence_with(x, p, r, n_max, cfg, exec)
}

fn h_at(seq: &HSequence, n: u32) -> Option<BigRational> {
    seq.values().into_iter().find(|(m, _)| *m == n).map(|(_, h)| h.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionI {
    pub n: u32,
    pub cells: Vec<Cell>,
    pub h: Vec<BigRational>,
    pub deviation: Vec<BigRational>,
    pub verdict: Verdict,
}

/// `|h - 1|` along the prime list at fixed `n`: consistent when it does not
/// increase over the last half of the list and ends below `1/2`, violated
/// when it ends at or above `1/2` without strictly decreasing there.
pub fn test_condition_i(x: &SchemePresentation, n: u32, primes: &[u64], cfg: &CountConfig) -> Result<ConditionI> {
    test_condition_i_with(x, n, primes, cfg, &Sequential)
}

pub fn test_condition_i_with(
    x: &SchemePresentation,
    n: u32,
    primes: &[u64],
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<ConditionI> {
    if primes.len() < 3 {
        return Err(invalid!("the large-prime test needs at least 3 primes"));
    }
    let mut h = Vec::new();
    for &p in primes {
        let seq = hseq(x, p, 1, n, cfg, exec)?;
        h.push(h_at(&seq, n).ok_or_else(|| crate::error::limit!("h at p = {p}, n = {n} hit a resource limit"))?);
    }
    Ok(condition_i_from(n, primes, h))
}

fn condition_i_from(n: u32, primes: &[u64], h: Vec<BigRational>) -> ConditionI {
    let deviation: Vec<BigRational> = h.iter().map(|v| (v - BigRational::one()).abs()).collect();
    let tail = &deviation[deviation.len() - deviation.len().div_ceil(2).max(2)..];
    let last = &deviation[deviation.len() - 1];
    let half = rat(1, 2);
    let verdict = if tail.windows(2).all(|w| w[1] <= w[0]) && *last < half {
        Verdict::Consistent
    } else if *last >= half && !tail.windows(2).all(|w| w[1] < w[0]) {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    let cells = primes.iter().map(|&p| Cell { p, r: 1, n }).collect();
    ConditionI { n, cells, h, deviation, verdict }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionII {
    pub cells: Vec<Cell>,
    /// `max (h - 1)^2 p` over the grid, the square of the fitted constant.
    pub c_squared: BigRational,
    pub c_fit: f64,
    /// Cell attaining the maximum.
    pub worst: Option<Cell>,
    pub per_prime: Vec<(u64, Verdict)>,
    pub verdict: Verdict,
}

impl ConditionII {
    /// Whether `|h - 1| <= c p^(-1/2)` on every cell, compared via squares.
    pub fn within(&self, c: &BigRational) -> bool {
        self.c_squared <= c * c
    }
}

pub fn test_condition_ii(x: &SchemePresentation, primes: &[u64], n_max: u32, cfg: &CountConfig) -> Result<ConditionII> {
    let th = Thresholds::default();
    let seqs = primes.iter().map(|&p| hseq(x, p, 1, n_max, cfg, &Sequential)).collect::<Result<Vec<_>>>()?;
    Ok(condition_ii_from(&seqs, &th))
}

/// Per prime, the squared envelope constants `(h_n - 1)^2 p` must stabilize
/// in the sense of [`test_boundedness`] (with squared thresholds).
fn condition_ii_from(seqs: &[HSequence], th: &Thresholds) -> ConditionII {
    let mut cells = Vec::new();
    let mut c_squared = BigRational::zero();
    let mut worst = None;
    let mut per_prime = Vec::new();
    let slack = BigRational::one() + &th.stable_eps;
    let eps2 = &slack * &slack - BigRational::one();
    let tau2 = &th.tau * &th.tau;
    for seq in seqs {
        let pr = BigRational::from_integer(seq.p.into());
        let vals: Vec<BigRational> = seq
            .values()
            .into_iter()
            .map(|(n, h)| {
                let d = h - BigRational::one();
                let c = &d * &d * &pr;
                cells.push(Cell { p: seq.p, r: seq.r, n });
                if worst.is_none() || c > c_squared {
                    c_squared = c.clone();
                    worst = Some(Cell { p: seq.p, r: seq.r, n });
                }
                c
            })
            .collect();
        let n_max = vals.len();
        let v = if seq.is_partial() || n_max < 3 {
            Verdict::Inconclusive
        } else if grows(&vals, th.tail_for(n_max as u32), &tau2) {
            Verdict::Violated
        } else if stabilization_index(&vals, &eps2).is_some_and(|i| i + 2 <= n_max) {
            Verdict::Consistent
        } else {
            Verdict::Inconclusive
        };
        per_prime.push((seq.p, v));
    }
    let verdict = if per_prime.iter().all(|(_, v)| *v == Verdict::Consistent) {
        Verdict::Consistent
    } else if per_prime.iter().any(|(_, v)| *v == Verdict::Violated) {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    };
    let c_fit = libm::sqrt(c_squared.to_f64().unwrap_or(f64::INFINITY));
    ConditionII { cells, c_squared, c_fit, worst, per_prime, verdict }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Boundedness {
    pub p: u64,
    pub r: u32,
    pub n_max: u32,
    pub cells: Vec<Cell>,
    pub h: Vec<BigRational>,
    pub sup: Option<BigRational>,
    pub tail_len: usize,
    pub tau: BigRational,
    pub stable_eps: BigRational,
    /// First index after which the running maximum stays within `stable_eps`.
    pub stabilized_at: Option<usize>,
    pub partial: bool,
    pub verdict: Verdict,
}

/// Growth when the tail is nondecreasing and its last value is at least
/// `tau` times its minimum; bounded when the running maximum stabilizes
/// before `n_max - 2`; otherwise inconclusive.
pub fn test_boundedness(
    x: &SchemePresentation,
    p: u64,
    r: u32,
    n_max: u32,
    th: &Thresholds,
    cfg: &CountConfig,
) -> Result<Boundedness> {
    test_boundedness_with(x, p, r, n_max, th, cfg, &Sequential)
}

pub fn test_boundedness_with(
    x: &SchemePresentation,
    p: u64,
    r: u32,
    n_max: u32,
    th: &Thresholds,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<Boundedness> {
    if n_max < 4 {
        return Err(invalid!("boundedness needs n_max >= 4"));
    }
    Ok(boundedness_from(&hseq(x, p, r, n_max, cfg, exec)?, n_max, th))
}

pub fn boundedness_from(seq: &HSequence, n_max: u32, th: &Thresholds) -> Boundedness {
    let vals: Vec<(u32, &BigRational)> = seq.values();
    let h: Vec<BigRational> = vals.iter().map(|(_, v)| (*v).clone()).collect();
    let cells = vals.iter().map(|(n, _)| Cell { p: seq.p, r: seq.r, n: *n }).collect();
    let tail_len = th.tail_for(n_max);
    let partial = seq.is_partial();
    let stabilized_at = stabilization_index(&h, &th.stable_eps);
    let verdict = if partial {
        Verdict::Inconclusive
    } else if grows(&h, tail_len, &th.tau) {
        Verdict::GrowthDetected
    } else if stabilized_at.is_some_and(|i| i + 2 <= n_max as usize) {
        Verdict::BoundedAtScale
    } else {
        Verdict::Inconclusive
    };
    Boundedness {
        p: seq.p,
        r: seq.r,
        n_max,
        cells,
        sup: h.iter().max().cloned(),
        h,
        tail_len,
        tau: th.tau.clone(),
        stable_eps: th.stable_eps.clone(),
        stabilized_at,
        partial,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityEntry {
    pub p: u64,
    pub h1: Option<BigRational>,
    /// First `n` with `h(n) != h(1)`.
    pub first_failure: Option<u32>,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothStability {
    pub n_max: u32,
    pub entries: Vec<StabilityEntry>,
    pub exceptional: Vec<u64>,
    pub verdict: Verdict,
}

/// `h(Z/p^n) = h(Z/p)` for all `n <= n_max`; primes where it fails are
/// listed as exceptional. Requires the scheme to be tagged smooth.
pub fn test_smooth_stability(x: &SchemePresentation, primes: &[u64], n_max: u32, cfg: &CountConfig) -> Result<SmoothStability> {
    let seqs = primes.iter().map(|&p| hseq(x, p, 1, n_max, cfg, &Sequential)).collect::<Result<Vec<_>>>()?;
    smooth_stability_from(x, &seqs, n_max)
}

fn smooth_stability_from(x: &SchemePresentation, seqs: &[HSequence], n_max: u32) -> Result<SmoothStability> {
    if !x.has_tag(corpus::SMOOTH) {
        return Err(invalid!("{} is not tagged {}", x.name, corpus::SMOOTH));
    }
    let mut entries = Vec::new();
    let mut exceptional = Vec::new();
    let mut partial = false;
    for seq in seqs {
        let vals = seq.values();
        partial |= seq.is_partial();
        let h1 = vals.first().map(|(_, h)| (*h).clone());
        let first_failure = h1.as_ref().and_then(|h1| vals.iter().find(|(_, h)| *h != h1).map(|(n, _)| *n));
        if first_failure.is_some() {
            exceptional.push(seq.p);
        }
        let cells = vals.iter().map(|(n, _)| Cell { p: seq.p, r: seq.r, n: *n }).collect();
        entries.push(StabilityEntry { p: seq.p, h1, first_failure, cells });
    }
    let verdict = if !exceptional.is_empty() && exceptional.len() == seqs.len() {
        Verdict::Violated
    } else if partial {
        Verdict::Inconclusive
    } else {
        Verdict::Consistent
    };
    Ok(SmoothStability { n_max, entries, exceptional, verdict })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub p: u64,
    pub r: u32,
    /// Least-squares slope of `log_q(count)` against `n`.
    pub alpha: BigRational,
    pub intercept: BigRational,
    pub max_residual: f64,
    pub points: usize,
    /// Whether every `log_q(count)` was an exact rational.
    pub exact: bool,
    pub h_nondecreasing: bool,
}

/// `log_q(c)`, exact when `c` is a power of `p`.
fn log_q(c: &BigUint, p: u64, r: u32) -> (BigRational, bool) {
    let v = arith::valuation_big(&BigInt::from(c.clone()), p).unwrap_or(0);
    if *c == arith::big_pow(p, v as u64) {
        return (BigRational::new(BigInt::from(v), BigInt::from(r)), true);
    }
    let l = c.bits() as f64;
    let shift = l - 53.0;
    let approx = if shift > 0.0 {
        let top = (c >> (shift as usize)).to_f64().unwrap_or(f64::MAX);
        libm::log(top) + shift * core::f64::consts::LN_2
    } else {
        libm::log(c.to_f64().unwrap_or(f64::MAX))
    };
    let val = approx / (r as f64 * libm::log(p as f64));
    (BigRational::from_float(val).unwrap_or_else(BigRational::zero), false)
}

/// Exact normal equations over the points with nonzero count.
pub fn growth_fit(seq: &HSequence) -> Result<GrowthFit> {
    let pts: Vec<(BigRational, BigRational, bool)> = seq
        .counts()
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| {
            let (y, exact) = log_q(c, seq.p, seq.r);
            (BigRational::from_integer(n.into()), y, exact)
        })
        .collect();
    if pts.len() < 3 {
        return Err(invalid!("a growth fit needs at least 3 nonzero counts"));
    }
    let k = BigRational::from_integer(pts.len().into());
    let sx: BigRational = pts.iter().map(|p| &p.0).sum();
    let sy: BigRational = pts.iter().map(|p| &p.1).sum();
    let sxx: BigRational = pts.iter().map(|p| &p.0 * &p.0).sum();
    let sxy: BigRational = pts.iter().map(|p| &p.0 * &p.1).sum();
    let alpha = (&k * &sxy - &sx * &sy) / (&k * &sxx - &sx * &sx);
    let intercept = (&sy - &alpha * &sx) / &k;
    let max_residual = pts
        .iter()
        .map(|(x, y, _)| (y - &intercept - &alpha * x).abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let h: Vec<&BigRational> = seq.values().into_iter().map(|(_, h)| h).collect();
    Ok(GrowthFit {
        p: seq.p,
        r: seq.r,
        alpha,
        intercept,
        max_residual,
        points: pts.len(),
        exact: pts.iter().all(|p| p.2),
        h_nondecreasing: h.windows(2).all(|w| w[0] <= w[1]),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub primes: Vec<u64>,
    pub rs: Vec<u32>,
    pub n_max: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { primes: vec![3, 5], rs: vec![1], n_max: 6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub scheme: SchemeHash,
    pub name: String,
    pub grid: Grid,
    pub thresholds: Thresholds,
    pub sequences: Vec<HSequence>,
    /// At `n = 2`, run only with at least 3 primes.
    pub cond_i: Option<ConditionI>,
    pub cond_ii: ConditionII,
    /// Per `(p, r)`.
    pub cond_iv_prime: Vec<Boundedness>,
    /// Per `p`, the `r = 1` rows of the boundedness test.
    pub cond_v: Vec<(u64, Verdict)>,
    pub smooth: Option<SmoothStability>,
    pub growth: Vec<Option<GrowthFit>>,
    pub verdict: Verdict,
    pub implication: String,
    pub caveats: Vec<String>,
}

pub const CAVEAT_IRREDUCIBLE: &str = "irreducibility assumed, not verified";
pub const CAVEAT_FINITE: &str = "finite-grid verdicts: boundedness and limits cannot be decided from finitely many terms";

pub fn classify(x: &SchemePresentation, grid: &Grid, th: &Thresholds, cfg: &CountConfig) -> Result<ClassificationReport> {
    classify_with(x, grid, th, cfg, &Sequential)
}

pub fn classify_with(
    x: &SchemePresentation,
    grid: &Grid,
    th: &Thresholds,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<ClassificationReport> {
    if grid.primes.is_empty() || grid.rs.is_empty() {
        return Err(invalid!("empty classification grid"));
    }
    if grid.n_max < 4 {
        return Err(invalid!("classification needs n_max >= 4"));
    }
    let mut sequences = Vec::new();
    for &p in &grid.primes {
        for &r in &grid.rs {
            sequences.push(hseq(x, p, r, grid.n_max, cfg, exec)?);
        }
    }
    let r1: Vec<HSequence> = sequences.iter().filter(|s| s.r == 1).cloned().collect();
    let cond_i = if r1.len() >= 3 {
        let n = 2.min(grid.n_max);
        let h: Option<Vec<BigRational>> = r1.iter().map(|s| h_at(s, n)).collect();
        let primes: Vec<u64> = r1.iter().map(|s| s.p).collect();
        h.map(|h| condition_i_from(n, &primes, h))
    } else {
        None
    };
    let cond_ii = condition_ii_from(&r1, th);
    let cond_iv_prime: Vec<Boundedness> = sequences.iter().map(|s| boundedness_from(s, grid.n_max, th)).collect();
    let cond_v = cond_iv_prime.iter().filter(|b| b.r == 1).map(|b| (b.p, b.verdict)).collect();
    let smooth = if x.has_tag(corpus::SMOOTH) { Some(smooth_stability_from(x, &r1, grid.n_max)?) } else { None };
    let growth = sequences.iter().map(|s| growth_fit(s).ok()).collect();
    let verdict = if cond_iv_prime.iter().any(|b| b.verdict == Verdict::GrowthDetected) {
        Verdict::GrowthDetected
    } else if cond_iv_prime.iter().all(|b| b.verdict == Verdict::BoundedAtScale) {
        Verdict::BoundedAtScale
    } else {
        Verdict::Inconclusive
    };
    let implication = String::from(match verdict {
        Verdict::BoundedAtScale => "consistent with rational singularities",
        Verdict::GrowthDetected => "inconsistent with condition iv'), hence with rational singularities",
        _ => "no implication at this scale",
    });
    let mut caveats = vec![String::from(CAVEAT_IRREDUCIBLE), String::from(CAVEAT_FINITE)];
    if sequences.iter().any(|s| s.is_partial()) {
        caveats.push(String::from("some cells hit a resource limit; their verdicts are inconclusive"));
    }
    if cond_i.is_none() {
        caveats.push(format!("large-prime test skipped: needs at least 3 primes, grid has {}", r1.len()));
    }
    Ok(ClassificationReport {
        scheme: scheme_hash(x),
        name: x.name.clone(),
        grid: grid.clone(),
        thresholds: th.clone(),
        sequences,
        cond_i,
        cond_ii,
        cond_iv_prime,
        cond_v,
        smooth,
        growth,
        verdict,
        implication,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::h_sequence;

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    #[test]
    fn condition_i_examples() {
        let a1 = test_condition_i(&corpus::affine(1), 2, &[2, 3, 5, 7], &cfg()).unwrap();
        assert_eq!(a1.verdict, Verdict::Consistent);
        let xy = test_condition_i(&corpus::node(), 2, &[3, 5, 7], &cfg()).unwrap();
        assert_eq!(xy.h, [rat(7, 3), rat(13, 5), rat(19, 7)]);
        assert_eq!(xy.verdict, Verdict::Violated);
        let x2 = test_condition_i(&corpus::double_point(), 2, &[3, 5, 7], &cfg()).unwrap();
        assert_eq!(x2.h, [rat(3, 1), rat(5, 1), rat(7, 1)]);
        assert_eq!(x2.verdict, Verdict::Violated);
        assert!(test_condition_i(&corpus::affine(1), 2, &[2, 3], &cfg()).is_err());
    }

    #[test]
    fn condition_ii_examples() {
        let a2 = test_condition_ii(&corpus::affine(2), &[2, 3, 5], 4, &cfg()).unwrap();
        assert!(a2.c_squared.is_zero());
        assert_eq!(a2.verdict, Verdict::Consistent);
        let e = test_condition_ii(&corpus::elliptic(), &[3, 5, 7], 4, &cfg()).unwrap();
        assert!(e.within(&rat(2, 1)));
        assert_eq!(e.verdict, Verdict::Consistent);
        let cone = test_condition_ii(&corpus::cone(), &[3], 6, &cfg()).unwrap();
        assert_eq!(cone.verdict, Verdict::Consistent);
    }

    #[test]
    fn boundedness_examples() {
        let th = Thresholds::default();
        let x2 = test_boundedness(&corpus::double_point(), 2, 1, 6, &th, &cfg()).unwrap();
        assert_eq!(x2.h, [1, 2, 2, 4, 4, 8].map(|v| rat(v, 1)));
        assert_eq!(x2.verdict, Verdict::GrowthDetected);
        let cone = test_boundedness(&corpus::cone(), 3, 1, 6, &th, &cfg()).unwrap();
        assert_eq!(cone.verdict, Verdict::BoundedAtScale);
        assert!(cone.stabilized_at.unwrap() <= 4);
        let cusp = test_boundedness(&corpus::cusp(), 5, 1, 6, &th, &cfg()).unwrap();
        assert_eq!(cusp.verdict, Verdict::GrowthDetected);
        assert!(test_boundedness(&corpus::cone(), 3, 1, 3, &th, &cfg()).is_err());
    }

    #[test]
    fn stabilization_rule() {
        let v = [1, 2, 2, 2, 2].map(|a| rat(a, 1));
        assert_eq!(stabilization_index(&v, &rat(0, 1)), Some(2));
        let w = [rat(1, 1), rat(11, 9), rat(11, 9), rat(35, 27), rat(35, 27), rat(107, 81)];
        assert_eq!(stabilization_index(&w, &rat(0, 1)), Some(6));
        assert_eq!(stabilization_index(&w, &rat(1, 10)), Some(2));
        assert!(grows(&[1, 2, 2, 4].map(|a| rat(a, 1)), 3, &rat(3, 2)));
        assert!(!grows(&[1, 1, 1].map(|a| rat(a, 1)), 3, &rat(1, 1)));
    }

    #[test]
    fn smooth_stability_examples() {
        let e = test_smooth_stability(&corpus::elliptic(), &[3, 5, 7], 5, &cfg()).unwrap();
        assert!(e.exceptional.is_empty());
        assert_eq!(e.verdict, Verdict::Consistent);
        let bad = test_smooth_stability(&corpus::elliptic(), &[31], 3, &cfg()).unwrap();
        assert_eq!(bad.exceptional, [31]);
        let a = test_smooth_stability(&corpus::affine(2), &[2, 3], 4, &cfg()).unwrap();
        assert!(a.exceptional.is_empty());
        assert!(test_smooth_stability(&corpus::cone(), &[3], 3, &cfg()).is_err());
    }

    #[test]
    fn growth_fit_examples() {
        let a1 = growth_fit(&h_sequence(&corpus::affine(1), 2, 1, 5, &cfg()).unwrap()).unwrap();
        assert_eq!(a1.alpha, rat(1, 1));
        assert!(a1.exact && a1.max_residual == 0.0);
        for d in 1..=3 {
            for p in [2, 3, 5] {
                let f = growth_fit(&h_sequence(&corpus::affine(d), p, 1, 3, &cfg()).unwrap()).unwrap();
                assert_eq!(f.alpha, rat(d as i64, 1));
            }
        }
        let x2 = growth_fit(&h_sequence(&corpus::double_point(), 3, 1, 6, &cfg()).unwrap()).unwrap();
        assert_eq!(x2.alpha, rat(19, 35));
        let xy = growth_fit(&h_sequence(&corpus::node(), 3, 1, 5, &cfg()).unwrap()).unwrap();
        let a = xy.alpha.to_f64().unwrap();
        assert!(a > 1.0 && a < 1.5 && !xy.exact && xy.max_residual > 0.0);
        let f2 = growth_fit(&h_sequence(&corpus::affine(1), 3, 2, 3, &cfg()).unwrap()).unwrap();
        assert_eq!(f2.alpha, rat(1, 1));
    }

    #[test]
    fn corpus_tags_match_verdicts() {
        let grid = Grid::default();
        let th = Thresholds::default();
        for x in corpus::all() {
            let rep = classify(&x, &grid, &th, &cfg()).unwrap();
            if x.has_tag(corpus::RATIONAL_SING) {
                assert_eq!(rep.verdict, Verdict::BoundedAtScale, "{}", x.name);
            }
            if x.has_tag(corpus::NON_RATIONAL) {
                assert_eq!(rep.verdict, Verdict::GrowthDetected, "{}", x.name);
            }
            assert!(rep.caveats.iter().any(|c| c == CAVEAT_FINITE));
            assert_eq!(rep.smooth.is_some(), x.has_tag(corpus::SMOOTH));
        }
    }
}
