//! Zip shift spaces: bi-infinite sequences over an alphabet pair (A, A′) where
//! the non-negative half lives in A′ and the negative half is the image of an
//! A′-history under a sliding transition map φₙ.
//!
//! The crate is `no_std` (it only needs `alloc`). File formats and the command
//! line live in the companion `zipshift` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codes;
mod error;
pub mod graph;
pub mod horseshoe;
pub mod orbits;
pub mod point;
pub mod preimage;
pub mod space;
pub mod symbols;

pub use error::{Error, Result};
pub use graph::{Edge, LabeledGraph, Presentation, VertexGraph};
pub use point::{EpPoint, Metrics};

pub use space::{Kind, MatrixSet, ZipShiftSpace};
pub use symbols::{Alphabet, Side, Sym, TransitionMap, Word};
