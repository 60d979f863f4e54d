//! File formats, result cache, parallel scheduling, reports and the
//! command-line front end for `frslab-core`.

pub mod ballfile;
pub mod cache;
pub mod cli;
pub mod mapfile;
pub mod parallel;
pub mod report;
pub mod schemefile;

pub use frslab_core as core;
