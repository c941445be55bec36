//! File formats and the command line for `zipshift-core`.

pub mod cli;
pub mod spec;

pub use zipshift_core as core;
