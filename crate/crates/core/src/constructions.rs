//! Scaled models, the hat scheme of a CIA witness, LCI patches of a cover,
//! and checks of the counting inequalities they satisfy.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith;
use crate::count::{self, CountConfig};
use crate::error::{invalid, Error, Result};
use crate::poly::{r_of_k, scale_poly, scale_rat_poly, IntPoly, PolyMap, RatPoly};
use crate::ring::{LocalArith, RingSpec};
use crate::scheme::{fresh_var, validate, CiaWitness, SchemePresentation};

/// A grid cell `Z_q / p^n` with `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub p: u64,
    pub r: u32,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledModel {
    pub base: SchemePresentation,
    pub k: BigInt,
    pub r_k: u32,
    pub result: SchemePresentation,
}

/// Generators `K^r(K) * f_i(x / K)`.
pub fn scale_model(x: &SchemePresentation, k: &BigInt) -> Result<ScaledModel> {
    if !k.is_positive() {
        return Err(invalid!("scale factor must be at least 1, got {k}"));
    }
    let r_k = r_of_k(&x.generators, k);
    let factor = BigRational::from(num_traits::pow(k.clone(), r_k as usize));
    let generators = x
        .generators
        .iter()
        .map(|f| scale_poly(f, k).scale(&factor).to_int().expect("r(K) clears denominators"))
        .collect();
    let result = SchemePresentation {
        name: if k.is_one() { x.name.clone() } else { format!("{}-scaled-{k}", x.name) },
        vars: x.vars.clone(),
        generators,
        dim_q: x.dim_q,
        cia: None,
        cover: None,
        tags: x.tags.clone(),
    };
    Ok(ScaledModel { base: x.clone(), k: k.clone(), r_k, result })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatScheme {
    pub base: SchemePresentation,
    pub p_prime: BigInt,
    pub t: u32,
    pub p: BigInt,
    pub m: u32,
    pub hat: SchemePresentation,
    /// `P * psi`, a map from the base's variables to the hat's.
    pub morphism: Vec<IntPoly>,
}

fn smallest_clearing_exponent(polys: &[RatPoly], base: &BigInt) -> Option<u32> {
    if polys.iter().all(RatPoly::is_integral) {
        return Some(0);
    }
    if base.is_one() {
        return None;
    }
    let b = BigRational::from(base.clone());
    let mut factor = BigRational::one();
    for e in 1..=256 {
        factor = &factor * &b;
        if polys.iter().all(|g| g.scale(&factor).is_integral()) {
            return Some(e);
        }
    }
    None
}

/// The integral CIA presentation attached to a witness with denominators.
pub fn cia_hat(x: &SchemePresentation) -> Result<HatScheme> {
    let w = x.cia.as_ref().ok_or_else(|| invalid!("{} has no CIA witness", x.name))?;
    let findings = validate(x);
    if !findings.is_empty() {
        return Err(Error::Certificate(findings.join("; ")));
    }
    let all: Vec<&RatPoly> = w.phi.components().iter().chain(&w.psi).collect();
    let mut primes: Vec<BigInt> = Vec::new();
    for g in &all {
        for q in arith::prime_divisors(&g.denominator_lcm()) {
            if !primes.contains(&q) {
                primes.push(q);
            }
        }
    }
    let p_prime: BigInt = primes.iter().product();
    let t_psi = smallest_clearing_exponent(&w.psi, &p_prime).expect("P' collects every denominator prime");
    let t = t_psi.max(1);
    let p = num_traits::pow(p_prime.clone(), t as usize);
    let phi_p: Vec<RatPoly> = w.phi.components().iter().map(|f| scale_rat_poly(f, &p)).collect();
    let m = smallest_clearing_exponent(&phi_p, &p)
        .ok_or_else(|| Error::Certificate(format!("no power of P = {p} clears the denominators of phi_P")))?;
    let pm = BigRational::from(num_traits::pow(p.clone(), m as usize));
    let generators: Vec<IntPoly> = phi_p.iter().map(|g| g.scale(&pm).to_int().expect("m clears")).collect();
    let pr = BigRational::from(p.clone());
    let morphism = w.psi.iter().map(|g| g.scale(&pr).to_int().expect("t >= t_psi")).collect();
    let mdim = w.ambient_dim();
    let amb: Vec<&str> = w.ambient_vars.iter().map(String::as_str).collect();
    let mut hat = SchemePresentation::new(&format!("{}-hat", x.name), &amb, generators.clone(), (mdim - w.equations()) as u32);
    hat.tags = x.tags.clone();
    let identity: Vec<Vec<RatPoly>> = (0..generators.len())
        .map(|j| (0..generators.len()).map(|k| if j == k { RatPoly::one(mdim) } else { RatPoly::zero(mdim) }).collect())
        .collect();
    hat.cia = Some(CiaWitness {
        ambient_vars: w.ambient_vars.clone(),
        phi: PolyMap::new(mdim, generators.iter().map(IntPoly::to_rat).collect())?,
        psi: PolyMap::<BigRational>::identity(mdim).components().to_vec(),
        membership: Some(identity),
    });
    Ok(HatScheme { base: x.clone(), p_prime, t, p, m, hat, morphism })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchedCover {
    pub base: SchemePresentation,
    pub p: BigInt,
    pub patches: Vec<SchemePresentation>,
    pub n_bound: BigInt,
}

/// Charts `Z[x, t]/(f, P g_i t - D P)`, one per open of the certificate.
pub fn lci_patch(x: &SchemePresentation, p: Option<&BigInt>) -> Result<PatchedCover> {
    let cov = x.cover.as_ref().ok_or_else(|| Error::Certificate(format!("{} has no cover certificate", x.name)))?;
    let findings = validate(x);
    if !findings.is_empty() {
        return Err(Error::Certificate(findings.join("; ")));
    }
    let p = p.cloned().unwrap_or_else(BigInt::one);
    if !p.is_positive() {
        return Err(invalid!("P must be at least 1"));
    }
    let c = x.nvars();
    let t = IntPoly::var(c + 1, c);
    let dp = IntPoly::constant(c + 1, &cov.d * &p);
    let mut vars = x.vars.clone();
    vars.push(fresh_var(&x.vars, "t"));
    let patches = cov
        .opens
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut generators: Vec<IntPoly> = x.generators.iter().map(|f| f.extend_vars(1)).collect();
            let pg = o.g.extend_vars(1).scale(&p);
            generators.push(&(&pg * &t) - &dp);
            SchemePresentation {
                name: format!("{}-patch-{}", x.name, i + 1),
                vars: vars.clone(),
                generators,
                dim_q: x.dim_q,
                cia: None,
                cover: None,
                tags: Vec::new(),
            }
        })
        .collect();
    let n_bound = cov.d.abs() * &p + 1;
    Ok(PatchedCover { base: x.clone(), p, patches, n_bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus<T> {
    BelowThreshold,
    Checked(T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberData {
    pub x_count: BigUint,
    pub y_count: BigUint,
    /// `q^(N(p) c)`.
    pub factor: BigUint,
    pub holds: bool,
    /// Largest fiber of the morphism on points, when `X(R)` was enumerable.
    pub max_fiber: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCheck {
    pub cell: Cell,
    pub n_p: u32,
    pub status: CheckStatus<FiberData>,
}

/// `|X(R)| <= q^(N(p) c) |Y(R)|` on every cell with `n > N(p) = v_p(K)`.
pub fn verify_fiber_bound(
    x: &SchemePresentation,
    y: &SchemePresentation,
    morphism: &[IntPoly],
    k: &BigInt,
    grid: &[Cell],
    cfg: &CountConfig,
) -> Result<Vec<FiberCheck>> {
    if morphism.len() != y.nvars() || morphism.iter().any(|g| g.nvars() != x.nvars()) {
        return Err(invalid!("morphism must have {} components in {} variables", y.nvars(), x.nvars()));
    }
    if !k.is_positive() {
        return Err(invalid!("K must be at least 1"));
    }
    let mut out = Vec::new();
    for &cell in grid {
        let n_p = arith::valuation_big(k, cell.p).unwrap_or(0);
        if cell.n <= n_p {
            out.push(FiberCheck { cell, n_p, status: CheckStatus::BelowThreshold });
            continue;
        }
        let ring = RingSpec::new(cell.p, cell.n, cell.r)?;
        let max_fiber = match count::points_naive(x, &ring, cfg.naive_cap) {
            Ok(points) => Some(fiber_max(y, morphism, &ring, &points)?),
            Err(Error::ResourceLimit(_)) => None,
            Err(e) => return Err(e),
        };
        let x_count = count::count_lifted(x, cell.p, cell.n, cell.r, cfg)?;
        let y_count = count::count_lifted(y, cell.p, cell.n, cell.r, cfg)?;
        let factor = arith::big_pow(cell.p, cell.r as u64 * n_p as u64 * x.nvars() as u64);
        let holds = x_count <= &factor * &y_count;
        out.push(FiberCheck { cell, n_p, status: CheckStatus::Checked(FiberData { x_count, y_count, factor, holds, max_fiber }) });
    }
    Ok(out)
}

fn fiber_max(
    y: &SchemePresentation,
    morphism: &[IntPoly],
    ring: &RingSpec,
    points: &[Vec<<RingSpec as LocalArith>::Elem>],
) -> Result<u64> {
    let mut fibers: BTreeMap<Vec<<RingSpec as LocalArith>::Elem>, u64> = BTreeMap::new();
    for a in points {
        let image = morphism.iter().map(|g| g.eval(ring, a)).collect::<Result<Vec<_>>>()?;
        for f in &y.generators {
            if !ring.is_zero(&f.eval(ring, &image)?) {
                return Err(invalid!("morphism sends a point outside {}", y.name));
            }
        }
        *fibers.entry(image).or_insert(0) += 1;
    }
    Ok(fibers.values().copied().max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverData {
    pub x_count: BigUint,
    pub patch_counts: Vec<BigUint>,
    pub holds: bool,
    /// `sum |U_i(R)| - |X(R)|`.
    pub margin: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCheck {
    pub cell: Cell,
    pub status: CheckStatus<CoverData>,
}

/// `|X(R)| <= sum_i |U_i(R)|` on every cell with `n > N_bound`.
pub fn verify_cover_bound(pc: &PatchedCover, grid: &[Cell], cfg: &CountConfig) -> Result<Vec<CoverCheck>> {
    let mut out = Vec::new();
    for &cell in grid {
        if BigInt::from(cell.n) <= pc.n_bound {
            out.push(CoverCheck { cell, status: CheckStatus::BelowThreshold });
            continue;
        }
        let x_count = count::count_lifted(&pc.base, cell.p, cell.n, cell.r, cfg)?;
        let patch_counts = pc
            .patches
            .iter()
            .map(|u| count::count_lifted(u, cell.p, cell.n, cell.r, cfg))
            .collect::<Result<Vec<_>>>()?;
        let sum: BigUint = patch_counts.iter().sum();
        let margin = BigInt::from(sum.clone()) - BigInt::from(x_count.clone());
        out.push(CoverCheck { cell, status: CheckStatus::Checked(CoverData { holds: x_count <= sum, x_count, patch_counts, margin }) });
    }
    Ok(out)
}

/// Every `(p, r, n)` with `n` in `ns`.
pub fn grid(primes: &[u64], rs: &[u32], ns: impl Iterator<Item = u32> + Clone) -> Vec<Cell> {
    let mut out = Vec::new();
    for &p in primes {
        for &r in rs {
            for n in ns.clone() {
                out.push(Cell { p, r, n });
            }
        }
    }
    out
}
