use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::CountConfig;
use crate::arith;
use crate::error::{limit, Result};
use crate::poly::CompiledSystem;
use crate::ring::{IntMod, LocalArith, RingSpec};
use crate::scheme::SchemePresentation;

/// Visit every point of `ring^c` in lexicographic order.
pub(crate) fn for_each_point<A: LocalArith>(
    ring: &A,
    c: usize,
    cap: u64,
    mut visit: impl FnMut(&[A::Elem]),
) -> Result<()> {
    let size = ring.size().ok_or_else(|| limit!("ring too large to enumerate"))?;
    match arith::checked_pow(size, c as u32) {
        Some(total) if total <= cap => {}
        _ => return Err(limit!("{size}^{c} points exceed the enumeration cap {cap}")),
    }
    let elems: Vec<A::Elem> = (0..size).map(|i| ring.element_at(i)).collect();
    let mut idx = vec![0usize; c];
    let mut point = vec![elems[0].clone(); c];
    loop {
        visit(&point);
        let mut i = c;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < elems.len() {
                point[i] = elems[idx[i]].clone();
                break;
            }
            idx[i] = 0;
            point[i] = elems[0].clone();
        }
    }
}

fn count_with<A: LocalArith>(x: &SchemePresentation, ring: &A, cap: u64) -> Result<u64> {
    let sys = CompiledSystem::new(&x.generators, x.nvars(), ring);
    let mut n = 0u64;
    for_each_point(ring, x.nvars(), cap, |a| {
        if sys.vanishes(a) {
            n += 1;
        }
    })?;
    Ok(n)
}

/// `|X(R)|` by full enumeration of `R^c`.
pub fn count_naive(x: &SchemePresentation, ring: &RingSpec, cfg: &CountConfig) -> Result<BigUint> {
    super::check_arity(x)?;
    let n = if ring.r() == 1 {
        count_with(x, &IntMod::new(ring.p(), ring.n())?, cfg.naive_cap)?
    } else {
        count_with(x, ring, cfg.naive_cap)?
    };
    Ok(BigUint::from(n))
}

/// Every point of `X(R)`, in enumeration order.
pub fn points_naive<A: LocalArith>(x: &SchemePresentation, ring: &A, cap: u64) -> Result<Vec<Vec<A::Elem>>> {
    super::check_arity(x)?;
    let sys = CompiledSystem::new(&x.generators, x.nvars(), ring);
    let mut out = Vec::new();
    for_each_point(ring, x.nvars(), cap, |a| {
        if sys.vanishes(a) {
            out.push(a.to_vec());
        }
    })?;
    Ok(out)
}
