//! Exact and numeric tools for the shadow theory of modular lattices.
//!
//! The crate is organised by subject:
//!
//! - [`qseries`]: truncated series in q = e^{πiz} with rational coefficients.
//! - [`etafunc`]: eta quotients, the per-level generators g₁, g₂, s₁, s₂ and identity checks.
//! - [`lattice`]: Gram-matrix lattices, duals, shadows, genus invariants and modularities.
//! - [`extremal`]: bounds, extremal theta series and feasibility scans.
//! - [`constructions`]: Construction A, hexacodes and a small catalog of named lattices.
//! - [`analytic`]: floating-point theta evaluation and transformation-law checks.

pub mod arith;
pub mod qseries;
pub mod etafunc;
pub mod lattice;
pub mod constructions;
pub mod extremal;
pub mod analytic;

pub use arith::{PrimeSet, Q};
pub use qseries::{Exponent, QSeries, SeriesError};
