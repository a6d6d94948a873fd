//! Error-correcting codes, the fractals they generate, a compression-based
//! complexity ordering of code words, the statistical mechanics of weighted
//! words, Ising criticality in two to four dimensions, and the correlation
//! bound `2Δ_ε = 2(d − 1/ν)` that follows from the critical exponent.
//!
//! The modules build on each other roughly in that order:
//!
//! - [`codes`]: alphabets, words, codes, linear codes over prime fields, rates.
//! - [`fractal`]: the digit-matrix fractal of a code and its box dimension.
//! - [`complexity`]: an LZ78-style complexity proxy and the ordering it induces.
//! - [`statmech`]: word weights, the Keane normalization and partition functions.
//! - [`ising`]: spin and word lattices, Metropolis/Wolff dynamics, Binder
//!   crossings, `ν` estimation and the energy correlator.
//! - [`bounds`]: `Δ_ε`, the bound `2Δ_ε` and comparisons with the classical,
//!   Tsirelson and PR-box values.
//! - [`cli`]: the reproduction driver behind the `codecrit` binary.

pub mod bounds;
pub mod cli;
pub mod codes;
pub mod complexity;
mod error;
pub mod fractal;
pub mod ising;
pub mod rng;
pub mod statmech;
pub mod stats;

pub use error::{Error, Result};

/// Crate version embedded in every report.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
