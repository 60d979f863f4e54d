//! Polynomials specialised to one ring for repeated evaluation.

use alloc::vec;
use alloc::vec::Vec;

use super::{IntPoly, PolyMap};
use crate::ring::LocalArith;

#[derive(Debug, Clone)]
pub struct CompiledPoly<A: LocalArith> {
    terms: Vec<(A::Elem, Vec<(usize, u32)>)>,
}

impl<A: LocalArith> CompiledPoly<A> {
    pub fn new(f: &IntPoly, ring: &A) -> Self {
        let terms = f
            .terms()
            .filter_map(|(m, c)| {
                let c = ring.from_bigint(c);
                if ring.is_zero(&c) {
                    return None;
                }
                let factors = m.exps().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                Some((c, factors))
            })
            .collect();
        CompiledPoly { terms }
    }

    /// Evaluate given `powers[i][e] = x_i^e`.
    pub fn eval(&self, ring: &A, powers: &[Vec<A::Elem>]) -> A::Elem {
        let mut acc = ring.zero();
        for (c, factors) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in factors {
                t = ring.mul(&t, &powers[i][e as usize]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Generators together with their Jacobian, compiled for one ring.
#[derive(Debug, Clone)]
pub struct CompiledSystem<A: LocalArith> {
    ring: A,
    max_exp: Vec<u32>,
    gens: Vec<CompiledPoly<A>>,
    jac: Vec<Vec<CompiledPoly<A>>>,
}

impl<A: LocalArith> CompiledSystem<A> {
    pub fn new(gens: &[IntPoly], nvars: usize, ring: &A) -> Self {
        let mut max_exp = vec![0u32; nvars];
        for g in gens {
            for (slot, e) in max_exp.iter_mut().zip(g.max_exponents()) {
                *slot = (*slot).max(e);
            }
        }
        let jac = match PolyMap::new(nvars, gens.to_vec()) {
            Ok(map) => map
                .jacobian()
                .iter()
                .map(|row| row.iter().map(|d| CompiledPoly::new(d, ring)).collect())
                .collect(),
            Err(_) => Vec::new(),
        };
        CompiledSystem {
            ring: ring.clone(),
            max_exp,
            gens: gens.iter().map(|g| CompiledPoly::new(g, ring)).collect(),
            jac,
        }
    }

    pub fn ring(&self) -> &A {
        &self.ring
    }

    pub fn powers(&self, point: &[A::Elem]) -> Vec<Vec<A::Elem>> {
        let r = &self.ring;
        point
            .iter()
            .zip(&self.max_exp)
            .map(|(x, &e)| {
                let mut row = Vec::with_capacity(e as usize + 1);
                row.push(r.one());
                for k in 0..e as usize {
                    row.push(r.mul(&row[k], x));
                }
                row
            })
            .collect()
    }

    pub fn values(&self, point: &[A::Elem]) -> Vec<A::Elem> {
        let pw = self.powers(point);
        self.gens.iter().map(|g| g.eval(&self.ring, &pw)).collect()
    }

    /// Whether every generator vanishes at `point`.
    pub fn vanishes(&self, point: &[A::Elem]) -> bool {
        let pw = self.powers(point);
        self.gens.iter().all(|g| self.ring.is_zero(&g.eval(&self.ring, &pw)))
    }

    pub fn jacobian(&self, point: &[A::Elem]) -> Vec<Vec<A::Elem>> {
        let pw = self.powers(point);
        self.jac.iter().map(|row| row.iter().map(|d| d.eval(&self.ring, &pw)).collect()).collect()
    }
}
