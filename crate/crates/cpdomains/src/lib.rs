//! Verification toolkit for completely positive maps on matrix algebras
//! and the module structures they induce.
//!
//! The crate computes multiplicative and ternary domains of a CP map
//! phi: M_n -> L(C^h) by two independent routes (directly from the
//! defining kernel conditions, and through a minimal Stinespring
//! dilation), builds the canonical phi-map on a Hilbert C*-module of
//! rectangular matrices, and checks the block structure of the induced
//! map on the linking algebra. Everything is deterministic: seeded
//! random ensembles, phase-normalized eigenvectors, and explicit
//! tolerances throughout.

pub mod cli;
pub mod cpmaps;
pub mod domains;
pub mod error;
pub mod fixtures;
pub mod hmodules;
pub mod linking;
pub mod numerics;
pub mod verify;
pub mod wire;
