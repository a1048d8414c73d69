//! Exact constructions, bounds and brute-force oracles for the cross-set
//! point sets that refute Borsuk's conjecture.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, JSON and the
//! command-line driver live in the `borsuk` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod bounds;
pub mod construction;
mod error;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
pub use report::VerificationReport;
