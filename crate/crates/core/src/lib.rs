//! Exact-arithmetic engine for compatible structures of operads.
//!
//! The crate builds the linearly compatible, matching, leveled-matching and
//! totally compatible operads of a finitely presented locally homogeneous
//! operad, computes Koszul duals and Manin products of unary-binary quadratic
//! presentations, and checks confluence of quadratic rewriting systems on
//! shuffle trees. Everything runs over exact rationals; there is no floating
//! point anywhere.
//!
//! The crate is `no_std` (with `alloc`): the core is pure symbolic
//! computation. File formats, JSON output and the command-line front end live
//! in the companion `operads-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod compat;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod manin;
pub mod perm;
pub mod polarization;
pub mod presentations;
pub mod rewrite;
pub mod scalar;
pub mod trees;

pub use error::{Error, Result};
pub use scalar::Rational;
