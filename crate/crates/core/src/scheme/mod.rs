//! Affine scheme presentations over Z.

mod text;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::arith;
use crate::count::{self, CountConfig};
use crate::error::{invalid, Result};
use crate::poly::{IntPoly, PolyMap, RatPoly};
use crate::ring::{IntMod, RingSpec};

pub use text::canonical_text;

/// Closed embedding `psi: X_Q -> A^M` onto the zero fiber of `phi: A^M -> A^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiaWitness {
    pub ambient_vars: Vec<String>,
    pub phi: PolyMap<BigRational>,
    pub psi: Vec<RatPoly>,
    /// `membership[j][k] = a_jk` with `phi_j(psi) = sum_k a_jk f_k`.
    pub membership: Option<Vec<Vec<RatPoly>>>,
}

impl CiaWitness {
    pub fn ambient_dim(&self) -> usize {
        self.phi.source_vars()
    }

    pub fn equations(&self) -> usize {
        self.phi.target_dim()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverOpen {
    pub g: IntPoly,
    pub c: IntPoly,
}

/// `sum_i c_i g_i - D = sum_j h_j f_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub opens: Vec<CoverOpen>,
    pub d: BigInt,
    pub syzygy: Vec<IntPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemePresentation {
    pub name: String,
    pub vars: Vec<String>,
    pub generators: Vec<IntPoly>,
    pub dim_q: u32,
    pub cia: Option<CiaWitness>,
    pub cover: Option<CoverCertificate>,
    pub tags: Vec<String>,
}

impl SchemePresentation {
    /// A presentation without witnesses or tags.
    pub fn new(name: &str, vars: &[&str], generators: Vec<IntPoly>, dim_q: u32) -> Self {
        SchemePresentation {
            name: name.into(),
            vars: vars.iter().map(|v| String::from(*v)).collect(),
            generators,
            dim_q,
            cia: None,
            cover: None,
            tags: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    pub fn with_tags(mut self, tags: &[&str]) -> Self {
        self.tags = tags.iter().map(|t| String::from(*t)).collect();
        self
    }
}

/// SHA-256 of the canonical text with the name and tags left out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemeHash(pub [u8; 32]);

impl fmt::Display for SchemeHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

pub fn scheme_hash(x: &SchemePresentation) -> SchemeHash {
    let mut anon = x.clone();
    anon.name.clear();
    anon.tags.clear();
    let digest = Sha256::digest(canonical_text(&anon).as_bytes());
    let mut out = [0u8; 32];
    out.copy_from_slice(&digest);
    SchemeHash(out)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Every violated invariant, as human-readable findings. Empty iff valid.
pub fn validate(x: &SchemePresentation) -> Vec<String> {
    let mut out = Vec::new();
    let c = x.nvars();
    for (i, v) in x.vars.iter().enumerate() {
        if !is_identifier(v) {
            out.push(format!("variable name {v:?} is not an identifier"));
        }
        if x.vars[..i].contains(v) {
            out.push(format!("variable {v} declared twice"));
        }
    }
    for (i, g) in x.generators.iter().enumerate() {
        if g.nvars() != c {
            out.push(format!("generator {} has {} variables, expected {c}", i + 1, g.nvars()));
        }
    }
    if x.dim_q as usize > c {
        out.push(format!("dim_Q = {} exceeds the number of variables {c}", x.dim_q));
    }
    if !out.is_empty() {
        return out;
    }
    if let Some(w) = &x.cia {
        validate_cia(x, w, &mut out);
    }
    if let Some(cov) = &x.cover {
        validate_cover(x, cov, &mut out);
    }
    out
}

fn validate_cia(x: &SchemePresentation, w: &CiaWitness, out: &mut Vec<String>) {
    let c = x.nvars();
    let (m, n) = (w.ambient_dim(), w.equations());
    if m < n || m - n != x.dim_q as usize {
        out.push(format!("dimension mismatch: M - N = {m} - {n} but dim_Q = {}", x.dim_q));
    }
    if w.ambient_vars.len() != m {
        out.push(format!("{} ambient variable names for M = {m}", w.ambient_vars.len()));
    }
    if w.psi.len() != m {
        out.push(format!("psi has {} components, expected M = {m}", w.psi.len()));
    }
    if w.psi.iter().any(|q| q.nvars() != c) {
        out.push(format!("psi components must be polynomials in the {c} scheme variables"));
    }
    if !out.is_empty() {
        return;
    }
    let composed: Vec<RatPoly> = match w.phi.components().iter().map(|f| f.compose(&w.psi)).collect() {
        Ok(v) => v,
        Err(e) => {
            out.push(format!("cannot compose phi with psi: {e}"));
            return;
        }
    };
    match &w.membership {
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != x.generators.len()) {
                out.push(format!("membership certificate must be {n} x {} coefficients", x.generators.len()));
                return;
            }
            for (j, (row, target)) in rows.iter().zip(&composed).enumerate() {
                let mut sum = RatPoly::zero(c);
                for (a, f) in row.iter().zip(&x.generators) {
                    if a.nvars() != c {
                        out.push(format!("membership coefficient in {} variables", a.nvars()));
                        return;
                    }
                    sum = &sum + &(a * &f.to_rat());
                }
                if &sum != target {
                    out.push(format!("membership certificate fails for phi component {}", j + 1));
                }
            }
        }
        None => {
            if let Some(msg) = pointwise_cia_check(x, &composed) {
                out.push(msg);
            }
        }
    }
}

/// Check `phi(psi(a)) = 0` at every F_p-point of X for p in {2, 3}, skipping
/// primes that divide a denominator.
fn pointwise_cia_check(x: &SchemePresentation, composed: &[RatPoly]) -> Option<String> {
    for p in [2u64, 3] {
        let pb = BigInt::from(p);
        if composed.iter().any(|g| (g.denominator_lcm() % &pb).is_zero()) {
            continue;
        }
        let field = IntMod::new(p, 1).expect("small prime");
        let points = match count::points_naive(x, &field, 1 << 16) {
            Ok(pts) => pts,
            Err(_) => continue,
        };
        for a in points {
            for g in composed {
                match g.eval(&field, &a) {
                    Ok(Some(0)) => {}
                    _ => return Some(format!("CIA witness incompatible: phi(psi(a)) != 0 at {a:?} mod {p}")),
                }
            }
        }
    }
    None
}

fn validate_cover(x: &SchemePresentation, cov: &CoverCertificate, out: &mut Vec<String>) {
    let c = x.nvars();
    if cov.opens.is_empty() {
        out.push("cover certificate has no opens".into());
    }
    if cov.d.is_zero() {
        out.push("cover certificate needs D != 0".into());
    }
    if cov.syzygy.len() != x.generators.len() {
        out.push(format!("syzygy has {} entries for {} generators", cov.syzygy.len(), x.generators.len()));
    }
    let arity_ok = cov.opens.iter().all(|o| o.g.nvars() == c && o.c.nvars() == c)
        && cov.syzygy.iter().all(|h| h.nvars() == c);
    if !arity_ok {
        out.push(format!("cover polynomials must be in the {c} scheme variables"));
    }
    if !out.is_empty() {
        return;
    }
    if !cover_identity_holds(x, cov) {
        out.push("syzygy identity fails".into());
    }
}

fn cover_identity_holds(x: &SchemePresentation, cov: &CoverCertificate) -> bool {
    let c = x.nvars();
    let mut lhs = IntPoly::constant(c, -cov.d.clone());
    for o in &cov.opens {
        lhs = &lhs + &(&o.c * &o.g);
    }
    let mut rhs = IntPoly::zero(c);
    for (h, f) in cov.syzygy.iter().zip(&x.generators) {
        rhs = &rhs + &(h * f);
    }
    lhs == rhs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimSanity {
    pub p: u64,
    pub count: BigUint,
    /// `round(log_p count)`, `None` when there are no points.
    pub estimate: Option<u32>,
    pub agrees: bool,
}

/// Lang-Weil heuristic: compare `round(log_p |X(F_p)|)` with the declared dimension.
pub fn dim_sanity(x: &SchemePresentation, primes: &[u64], cfg: &CountConfig) -> Result<Vec<DimSanity>> {
    primes
        .iter()
        .map(|&p| {
            let ring = RingSpec::new(p, 1, 1)?;
            let count = count::count_naive(x, &ring, cfg)?;
            let estimate = (!count.is_zero()).then(|| arith::round_log(&count, p));
            Ok(DimSanity { p, agrees: estimate == Some(x.dim_q), count, estimate })
        })
        .collect()
}

/// `Z[x, t]/(f, g t - 1)`: the basic open `D(g)` as an affine scheme.
pub fn localized(x: &SchemePresentation, g: &IntPoly) -> Result<SchemePresentation> {
    if g.nvars() != x.nvars() {
        return Err(invalid!("g has {} variables, scheme has {}", g.nvars(), x.nvars()));
    }
    let c = x.nvars();
    let t = IntPoly::var(c + 1, c);
    let mut generators: Vec<IntPoly> = x.generators.iter().map(|f| f.extend_vars(1)).collect();
    generators.push(&(&g.extend_vars(1) * &t) - &IntPoly::one(c + 1));
    let mut vars = x.vars.clone();
    vars.push(fresh_var(&x.vars, "t"));
    Ok(SchemePresentation {
        name: format!("{}[1/g]", x.name),
        vars,
        generators,
        dim_q: x.dim_q,
        cia: None,
        cover: None,
        tags: Vec::new(),
    })
}

/// `base`, or `base` with a numeric suffix when it collides with `taken`.
pub fn fresh_var(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|v| v == base) {
        return base.into();
    }
    (1..).map(|i| format!("{base}{i}")).find(|cand| !taken.contains(cand)).expect("unbounded")
}

/// `|D(g)(R)|`, counted on the localized presentation.
pub fn basic_open_count(x: &SchemePresentation, g: &IntPoly, ring: &RingSpec, cfg: &CountConfig) -> Result<BigUint> {
    count::count_naive(&localized(x, g)?, ring, cfg)
}

/// `|D(g)(R)|` as the points of X where `g` is a unit.
pub fn basic_open_count_direct(x: &SchemePresentation, g: &IntPoly, ring: &RingSpec, cfg: &CountConfig) -> Result<BigUint> {
    let pts = count::points_naive(x, ring, cfg.naive_cap)?;
    let mut n = 0u64;
    for a in pts {
        if ring.is_unit(&g.eval(ring, &a)?) {
            n += 1;
        }
    }
    Ok(BigUint::from(n))
}

/// `(|X(R)|, |D(g1)(R)| + |D(g2)(R)| - |D(g1 g2)(R)|)` for a certified two-set cover.
pub fn cover_inclusion_exclusion(
    x: &SchemePresentation,
    g1: &IntPoly,
    g2: &IntPoly,
    ring: &RingSpec,
    cfg: &CountConfig,
) -> Result<(BigUint, BigUint)> {
    let cov = x.cover.as_ref().ok_or_else(|| invalid!("no cover certificate for {}", x.name))?;
    let gs: Vec<&IntPoly> = cov.opens.iter().map(|o| &o.g).collect();
    let certified = gs.len() == 2 && ((gs[0] == g1 && gs[1] == g2) || (gs[0] == g2 && gs[1] == g1));
    if !certified {
        return Err(invalid!("the cover certificate is not for {{g1, g2}}"));
    }
    let findings = validate(x);
    if !findings.is_empty() {
        return Err(invalid!("invalid scheme: {}", findings.join("; ")));
    }
    let lhs = count::count_naive(x, ring, cfg)?;
    let a = basic_open_count(x, g1, ring, cfg)?;
    let b = basic_open_count(x, g2, ring, cfg)?;
    let both = basic_open_count(x, &(g1 * g2), ring, cfg)?;
    Ok((lhs, a + b - both))
}
