//! Exact-arithmetic construction of noncommutative symmetric algebras.
//!
//! The crate builds the graded algebra attached to a bimodule over a pair
//! of field extensions, the associated upper-triangular species ring and
//! its module category, and runs the structural verification battery
//! (Euler exactness, 2-periodicity, tilting recursion, the Beilinson
//! dimension grid, Serre duality, torsion-pair splitting and Hilbert
//! functions) on concrete instances.
//!
//! Everything is exact: coefficients live in a prime field `GF(p)` or in
//! the rationals with arbitrary-precision arithmetic. The crate is
//! `no_std` (with `alloc`); IO, configuration and caching live in the
//! companion `ncsym` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod scalar;
pub mod poly;
pub mod field;
pub mod matrix;
pub mod bimodule;
pub mod ncsa;
pub mod species;
pub mod tilting;
pub mod beilinson;
pub mod report;
pub mod error;

pub use error::{Error, Result};
pub use scalar::{PrimeField, Scalar};
pub use field::ExtensionField;
pub use matrix::Matrix;
