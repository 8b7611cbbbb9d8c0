//! Exact machinery for weighted Diophantine approximation over the rationals
//! and their completions.
//!
//! Everything in this crate is computed in exact arithmetic: rationals are
//! arbitrary-precision, values at finite places are exact rationals whose
//! valuations decide every p-adic inequality, and real-place values are
//! restricted to rationals and real quadratic irrationals so that strict
//! inequalities are decided exactly rather than by floating point.
//!
//! The crate is `no_std` (with `alloc`); all IO, configuration parsing and
//! experiment drivers live in the companion `dioph` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod exact;
pub mod weights;
pub mod lattice;
pub mod dirichlet;
pub mod twisted;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;
