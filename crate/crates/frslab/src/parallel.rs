//! Rayon scheduling of the per-root lifting subtrees.

use frslab_core::count::RootExecutor;
use frslab_core::Result;
use num_bigint::BigUint;
use rayon::prelude::*;

/// Sums root subtrees on the global rayon pool.
pub struct Rayon;

impl RootExecutor for Rayon {
    fn sum(&self, jobs: usize, job: &(dyn Fn(usize) -> Result<BigUint> + Sync)) -> Result<BigUint> {
        (0..jobs).into_par_iter().map(job).try_reduce(BigUint::default, |a, b| Ok(a + b))
    }
}
