//! Depth-first Hensel lifting.
//!
//! A node is a point `a` known mod `p^k` at which every generator vanishes
//! mod `p^k`. Its children are `a + p^k v` with `J(a) v = -f(a)/p^k` over the
//! residue field. A node stops branching once the Jacobian at `a` has full row
//! rank with every elementary divisor of valuation `e_i < k`: then the
//! Taylor expansion at `a` is, after unimodular changes of coordinates,
//! `b_i + p^(k + e_i) (z_i + p^(k - e_i) Q_i(z))` and the number of descendants
//! at level `n` has the closed form returned by [`LiftPlan::certify`].

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::CountConfig;
use crate::arith;
use crate::error::{limit, Result};
use crate::poly::{CompiledSystem, IntPoly, Poly};
use crate::ring::linalg::Echelon;
use crate::ring::LocalArith;
use crate::scheme::SchemePresentation;

enum Cert {
    Zero,
    /// `q^e` descendants at level `n`.
    Pow(u64),
    Open,
}

/// Generators restricted to the variables they mention.
pub(crate) struct Reduced {
    pub gens: Vec<IntPoly>,
    pub nvars: usize,
    pub free: usize,
}

pub(crate) fn reduce_system(x: &SchemePresentation) -> Reduced {
    let c = x.nvars();
    let gens: Vec<&IntPoly> = x.generators.iter().filter(|g| !g.is_zero()).collect();
    let used: Vec<usize> = (0..c).filter(|&i| gens.iter().any(|g| g.uses_var(i))).collect();
    let gens = gens
        .iter()
        .map(|g| {
            let terms = g.terms().map(|(m, coef)| (used.iter().map(|&i| m.exps()[i]).collect(), coef.clone()));
            Poly::from_terms(used.len(), terms).expect("consistent arity")
        })
        .collect();
    Reduced { gens, nvars: used.len(), free: c - used.len() }
}

/// Roots mod `p` plus everything needed to count each root's subtree.
pub struct LiftPlan<A: LocalArith> {
    ring: A,
    field: A,
    full: CompiledSystem<A>,
    residue: CompiledSystem<A>,
    nvars: usize,
    free: usize,
    roots: Vec<Vec<A::Elem>>,
    cfg: CountConfig,
    nodes: AtomicU64,
}

impl<A: LocalArith> LiftPlan<A> {
    /// `ring` is the target level `Z_q / p^n`.
    pub fn new(x: &SchemePresentation, ring: &A, cfg: &CountConfig) -> Result<Self> {
        super::check_arity(x)?;
        let red = reduce_system(x);
        let field = ring.at_level(1);
        let residue = CompiledSystem::new(&red.gens, red.nvars, &field);
        let mut roots = Vec::new();
        super::naive::for_each_point(&field, red.nvars, cfg.naive_cap, |a| {
            if residue.vanishes(a) {
                roots.push(a.to_vec());
            }
        })?;
        Ok(LiftPlan {
            full: CompiledSystem::new(&red.gens, red.nvars, ring),
            ring: ring.clone(),
            field,
            residue,
            nvars: red.nvars,
            free: red.free,
            roots,
            cfg: cfg.clone(),
            nodes: AtomicU64::new(0),
        })
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    fn q_pow(&self, e: u64) -> BigUint {
        arith::big_pow(self.ring.prime(), e * self.ring.degree() as u64)
    }

    /// `q^(n * free)` for the variables no generator mentions.
    pub fn free_factor(&self) -> BigUint {
        self.q_pow(self.ring.level() as u64 * self.free as u64)
    }

    /// Level-`n` points reducing to root `i`, ignoring free variables.
    pub fn subtree(&self, i: usize) -> Result<BigUint> {
        let n = self.ring.level();
        if n == 1 {
            return Ok(BigUint::one());
        }
        let root = &self.roots[i];
        let ech = Echelon::new(&self.field, &self.residue.jacobian(root), self.nvars);
        let kernel = ech.kernel();
        let q = self.field.size().expect("residue field is small");
        let branching = arith::checked_pow(q, kernel.len() as u32);
        let mut total = BigUint::zero();
        let mut stack = vec![(root.clone(), 1u32)];
        while let Some((a, k)) = stack.pop() {
            if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.cfg.node_budget {
                return Err(limit!("lifting visited more than {} nodes", self.cfg.node_budget));
            }
            let vals = self.full.values(&a);
            match self.certify(self.full.jacobian(&a), vals.clone(), k) {
                Cert::Zero => continue,
                Cert::Pow(e) => {
                    total += self.q_pow(e);
                    continue;
                }
                Cert::Open => {}
            }
            let rhs: Vec<A::Elem> =
                vals.iter().map(|v| self.field.neg(&self.field.reduce(&self.ring.div_p_pow(v, k)))).collect();
            let Some(v0) = ech.particular(&rhs) else { continue };
            if k + 1 == n {
                total += self.q_pow(kernel.len() as u64);
                continue;
            }
            let branching = match branching {
                Some(b) if stack.len() as u64 + b <= self.cfg.live_node_cap as u64 => b,
                _ => return Err(limit!("more than {} live lifting nodes", self.cfg.live_node_cap)),
            };
            for idx in 0..branching {
                let mut v = v0.clone();
                let mut rest = idx;
                for basis in &kernel {
                    let lambda = self.field.element_at(rest % q);
                    rest /= q;
                    for (vi, bi) in v.iter_mut().zip(basis) {
                        *vi = self.field.add(vi, &self.field.mul(&lambda, bi));
                    }
                }
                let child = a.iter().zip(&v).map(|(ai, vi)| self.ring.add_p_pow(ai, vi, k)).collect();
                stack.push((child, k + 1));
            }
        }
        Ok(total)
    }

    /// Closed-form descendant count when the Jacobian at `a` has full row
    /// rank with elementary divisors `p^(e_i)`, `e_i < k`.
    fn certify(&self, mut jac: Vec<Vec<A::Elem>>, mut vals: Vec<A::Elem>, k: u32) -> Cert {
        let ring = &self.ring;
        let n = ring.level();
        let (m, c) = (vals.len(), self.nvars);
        if m > c {
            return Cert::Open;
        }
        let mut exps = Vec::with_capacity(m);
        for t in 0..m {
            let mut best = (n, t, t);
            for (i, row) in jac.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    let v = ring.valuation(x);
                    if v < best.0 {
                        best = (v, i, j);
                    }
                }
            }
            let (e, bi, bj) = best;
            if e >= k {
                return Cert::Open;
            }
            jac.swap(t, bi);
            vals.swap(t, bi);
            for row in jac.iter_mut() {
                row.swap(t, bj);
            }
            let inv = ring.inverse(&ring.div_p_pow(&jac[t][t], e)).expect("unit after removing p^e");
            for i in t + 1..m {
                if ring.is_zero(&jac[i][t]) {
                    continue;
                }
                let factor = ring.mul(&ring.div_p_pow(&jac[i][t], e), &inv);
                for j in t..c {
                    let s = ring.mul(&factor, &jac[t][j]);
                    jac[i][j] = ring.sub(&jac[i][j], &s);
                }
                let s = ring.mul(&factor, &vals[t]);
                vals[i] = ring.sub(&vals[i], &s);
            }
            exps.push(e);
        }
        let mut exp = c as u64 * (n - k) as u64;
        for (b, &e) in vals.iter().zip(&exps) {
            if ring.valuation(b) < n.min(k + e) {
                return Cert::Zero;
            }
            exp -= n.saturating_sub(k + e) as u64;
        }
        Cert::Pow(exp)
    }
}
