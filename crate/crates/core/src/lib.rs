//! Numerical and exact-arithmetic building blocks for the GSp(4) Kuznetsov
//! trace formula: Whittaker functions, spectral transforms and their residue
//! expansions, Hecke coset combinatorics and Fourier-coefficient generating
//! series, local L-factors, Kloosterman sums, and the integral transforms on
//! the arithmetic side.
//!
//! The crate is `no_std` (with `alloc`); everything here is pure computation.
//! IO, the CLI, and file formats live in the companion `gsp4-cli` crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod geometry;
pub mod hecke;
pub mod kloosterman;
pub mod lfunctions;
pub mod quad;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod transform;
pub mod whittaker;

pub use num_complex::Complex64;

/// Shorthand used throughout the crate.
pub(crate) type C64 = num_complex::Complex64;
