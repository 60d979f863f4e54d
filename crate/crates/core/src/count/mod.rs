//! Exact point counts `|X(Z_q / p^n)|` and the normalized values `h_X`.

mod lifted;
mod naive;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith;
use crate::error::{invalid, Error, Result};
use crate::ring::{IntMod, LocalArith, RingSpec};
use crate::scheme::{scheme_hash, SchemeHash, SchemePresentation};

pub use lifted::LiftPlan;
pub use naive::{count_naive, points_naive};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest number of tuples naive enumeration may visit.
    pub naive_cap: u64,
    /// Largest depth-first stack of unexpanded lifting nodes.
    pub live_node_cap: usize,
    /// Total lifting nodes one count may visit.
    pub node_budget: u64,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig { naive_cap: 10_000_000, live_node_cap: 1_000_000, node_budget: 100_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    Lifted,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Naive => "naive",
            Method::Lifted => "lifted",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "lifted" => Ok(Method::Lifted),
            _ => Err(Error::Parse(alloc::format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub scheme: SchemeHash,
    pub p: u64,
    pub r: u32,
    pub n: u32,
    pub count: BigUint,
    pub method: Method,
    /// Wall-clock seconds, when measured.
    pub elapsed: Option<f64>,
}

pub(crate) fn check_arity(x: &SchemePresentation) -> Result<()> {
    match x.generators.iter().position(|g| g.nvars() != x.nvars()) {
        Some(i) => Err(invalid!("generator {} of {} has the wrong number of variables", i + 1, x.name)),
        None => Ok(()),
    }
}

/// Sums per-root subtree counts; lets callers choose how roots are scheduled.
pub trait RootExecutor: Sync {
    fn sum(&self, jobs: usize, job: &(dyn Fn(usize) -> Result<BigUint> + Sync)) -> Result<BigUint>;
}

pub struct Sequential;

impl RootExecutor for Sequential {
    fn sum(&self, jobs: usize, job: &(dyn Fn(usize) -> Result<BigUint> + Sync)) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for i in 0..jobs {
            total += job(i)?;
        }
        Ok(total)
    }
}

fn run_plan<A: LocalArith>(x: &SchemePresentation, ring: &A, cfg: &CountConfig, exec: &dyn RootExecutor) -> Result<BigUint> {
    let plan = LiftPlan::new(x, ring, cfg)?;
    let total = exec.sum(plan.num_roots(), &|i| plan.subtree(i))?;
    Ok(total * plan.free_factor())
}

/// `|X(Z_q / p^n)|` by Hensel lifting, roots scheduled by `exec`.
pub fn count_lifted_with(
    x: &SchemePresentation,
    p: u64,
    n: u32,
    r: u32,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<BigUint> {
    if r == 1 {
        run_plan(x, &IntMod::new(p, n)?, cfg, exec)
    } else {
        run_plan(x, &RingSpec::new(p, n, r)?, cfg, exec)
    }
}

pub fn count_lifted(x: &SchemePresentation, p: u64, n: u32, r: u32, cfg: &CountConfig) -> Result<BigUint> {
    count_lifted_with(x, p, n, r, cfg, &Sequential)
}

/// `count / q^(n dim)` in lowest terms.
pub fn h_value(count: &BigUint, p: u64, n: u32, r: u32, dim_q: u32) -> BigRational {
    let den = arith::big_pow(p, n as u64 * r as u64 * dim_q as u64);
    BigRational::new(BigInt::from(count.clone()), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq)]
pub enum HOutcome {
    Value { count: BigUint, h: BigRational, method: Method },
    /// The count hit a resource limit; the message says which.
    Limit(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HEntry {
    pub n: u32,
    pub outcome: HOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HSequence {
    pub scheme: SchemeHash,
    pub p: u64,
    pub r: u32,
    pub dim_q: u32,
    pub entries: Vec<HEntry>,
}

impl HSequence {
    pub fn is_partial(&self) -> bool {
        self.entries.iter().any(|e| matches!(e.outcome, HOutcome::Limit(_)))
    }

    /// Computed `(n, h)` pairs, in order, stopping at the first limit.
    pub fn values(&self) -> Vec<(u32, &BigRational)> {
        self.entries
            .iter()
            .map_while(|e| match &e.outcome {
                HOutcome::Value { h, .. } => Some((e.n, h)),
                HOutcome::Limit(_) => None,
            })
            .collect()
    }

    pub fn counts(&self) -> Vec<(u32, &BigUint)> {
        self.entries
            .iter()
            .map_while(|e| match &e.outcome {
                HOutcome::Value { count, .. } => Some((e.n, count)),
                HOutcome::Limit(_) => None,
            })
            .collect()
    }
}

/// `h_X(Z_q / p^n)` for `n = 1..=n_max`. Lifted counts, with a naive
/// fallback when lifting hits a limit; once both fail every later entry is
/// marked as a limit.
pub fn h_sequence_with(
    x: &SchemePresentation,
    p: u64,
    r: u32,
    n_max: u32,
    cfg: &CountConfig,
    exec: &dyn RootExecutor,
) -> Result<HSequence> {
    if n_max < 1 {
        return Err(invalid!("n_max must be at least 1"));
    }
    RingSpec::new(p, 1, r)?;
    let mut entries = Vec::new();
    let mut stopped: Option<String> = None;
    for n in 1..=n_max {
        if let Some(msg) = &stopped {
            entries.push(HEntry { n, outcome: HOutcome::Limit(msg.clone()) });
            continue;
        }
        let outcome = match count_lifted_with(x, p, n, r, cfg, exec) {
            Ok(count) => Ok((count, Method::Lifted)),
            Err(Error::ResourceLimit(msg)) => match RingSpec::new(p, n, r).and_then(|ring| count_naive(x, &ring, cfg)) {
                Ok(count) => Ok((count, Method::Naive)),
                Err(Error::ResourceLimit(_)) => Err(msg),
                Err(e) => return Err(e),
            },
            Err(e) => return Err(e),
        };
        match outcome {
            Ok((count, method)) => {
                let h = h_value(&count, p, n, r, x.dim_q);
                entries.push(HEntry { n, outcome: HOutcome::Value { count, h, method } });
            }
            Err(msg) => {
                entries.push(HEntry { n, outcome: HOutcome::Limit(msg.clone()) });
                stopped = Some(msg);
            }
        }
    }
    Ok(HSequence { scheme: scheme_hash(x), p, r, dim_q: x.dim_q, entries })
}

pub fn h_sequence(x: &SchemePresentation, p: u64, r: u32, n_max: u32, cfg: &CountConfig) -> Result<HSequence> {
    h_sequence_with(x, p, r, n_max, cfg, &Sequential)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::parse_int_poly;
    use alloc::vec;

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    fn naive(x: &SchemePresentation, p: u64, n: u32, r: u32) -> BigUint {
        count_naive(x, &RingSpec::new(p, n, r).unwrap(), &cfg()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive(&corpus::double_point(), 3, 4, 1), big(9));
        assert_eq!(naive(&corpus::affine(1), 5, 3, 1), big(125));
        assert_eq!(naive(&corpus::node(), 3, 2, 1), big(21));
    }

    #[test]
    fn naive_cap() {
        let small = CountConfig { naive_cap: 100, ..cfg() };
        let ring = RingSpec::new(3, 2, 1).unwrap();
        assert!(matches!(count_naive(&corpus::cone(), &ring, &small), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn lifted_examples() {
        assert_eq!(count_lifted(&corpus::double_point(), 3, 4, 1, &cfg()).unwrap(), big(9));
        assert_eq!(count_lifted(&corpus::node(), 3, 2, 1, &cfg()).unwrap(), big(21));
        let cone = corpus::cone();
        assert_eq!(count_lifted(&cone, 3, 3, 1, &cfg()).unwrap(), naive(&cone, 3, 3, 1));
    }

    #[test]
    fn lifted_matches_naive_on_corpus() {
        for x in corpus::all() {
            for (p, r) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)] {
                for n in 1..=3 {
                    let Some(total) = arith::checked_pow(p, n * r * x.nvars() as u32) else { continue };
                    if total > 2_000_000 {
                        continue;
                    }
                    let l = count_lifted(&x, p, n, r, &cfg()).unwrap();
                    assert_eq!(l, naive(&x, p, n, r), "{} p={p} n={n} r={r}", x.name);
                }
            }
        }
    }

    #[test]
    fn lifted_handles_redundant_and_constant_generators() {
        let v: Vec<String> = ["x", "y"].iter().map(|s| String::from(*s)).collect();
        let ip = |s: &str| parse_int_poly(s, &v).unwrap();
        let cases = [
            vec![ip("x"), ip("x + 9")],
            vec![ip("x*y"), ip("x^2")],
            vec![ip("2")],
            vec![ip("0")],
            vec![ip("x^2 - y^2"), ip("x*y - 3")],
            vec![ip("4*x - 2*y^2")],
        ];
        for gens in cases {
            let x = SchemePresentation::new("t", &["x", "y"], gens, 0);
            for (p, n) in [(2, 4), (3, 3), (3, 4)] {
                assert_eq!(count_lifted(&x, p, n, 1, &cfg()).unwrap(), naive(&x, p, n, 1), "{:?} p={p} n={n}", x.generators);
            }
        }
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_value(&big(64), 2, 3, 1, 2), rat(1, 1));
        assert_eq!(h_value(&big(21), 3, 2, 1, 1), rat(7, 3));
        assert_eq!(h_value(&big(9), 3, 1, 1, 2), rat(1, 1));
        assert_eq!(h_value(&naive(&corpus::cone(), 3, 1, 1), 3, 1, 1, 2), rat(1, 1));
    }

    fn hs(x: &SchemePresentation, p: u64, n_max: u32) -> Vec<BigRational> {
        h_sequence(x, p, 1, n_max, &cfg()).unwrap().values().into_iter().map(|(_, h)| h.clone()).collect()
    }

    #[test]
    fn h_sequence_examples() {
        assert_eq!(hs(&corpus::affine(1), 2, 4), vec![rat(1, 1); 4]);
        assert_eq!(hs(&corpus::node(), 3, 4), [rat(5, 3), rat(7, 3), rat(3, 1), rat(11, 3)]);
        let dbl: Vec<_> = [1, 2, 2, 4, 4, 8].iter().map(|&v| rat(v, 1)).collect();
        assert_eq!(hs(&corpus::double_point(), 2, 6), dbl);
    }

    #[test]
    fn frozen_sequences() {
        // independent brute-force values
        let cusp3 = [3, 15, 45, 135, 405, 2673, 8019];
        let counts = h_sequence(&corpus::cusp(), 3, 1, 7, &cfg()).unwrap();
        let got: Vec<BigUint> = counts.counts().into_iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(got, cusp3.map(big));
        assert_eq!(
            hs(&corpus::cusp(), 5, 6),
            [rat(1, 1), rat(9, 5), rat(9, 5), rat(9, 5), rat(9, 5), rat(29, 5)]
        );
        assert_eq!(
            hs(&corpus::cone(), 3, 6),
            [rat(1, 1), rat(11, 9), rat(11, 9), rat(35, 27), rat(35, 27), rat(107, 81)]
        );
        assert_eq!(hs(&corpus::cone(), 2, 7), [1, 2, 2, 4, 4, 8, 8].map(|d| rat(1, d)));
        assert_eq!(hs(&corpus::elliptic(), 5, 4), vec![rat(8, 5); 4]);
        assert_eq!(hs(&corpus::elliptic(), 7, 4), vec![rat(4, 7); 4]);
        assert_eq!(hs(&corpus::elliptic(), 31, 3), [rat(32, 31), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn partial_sequence_is_marked() {
        let tiny = CountConfig { naive_cap: 10, live_node_cap: 4, node_budget: 50 };
        let seq = h_sequence(&corpus::cone(), 3, 1, 5, &tiny).unwrap();
        assert!(seq.is_partial());
        assert!(matches!(seq.entries.last().unwrap().outcome, HOutcome::Limit(_)));
    }

    #[test]
    fn bad_prime_is_invalid() {
        assert!(matches!(count_lifted(&corpus::node(), 4, 2, 1, &cfg()), Err(Error::InvalidInput(_))));
    }
}
