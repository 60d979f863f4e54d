//! Exact point counts of affine schemes over finite local rings, the
//! normalized h-invariants built from them, and the p-adic measure tools
//! used to test their asymptotics.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod asymptotics;
pub mod constructions;
pub mod corpus;
pub mod count;
pub mod error;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod scheme;

pub use error::{Error, Result};
