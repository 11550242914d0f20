//! Exact group cohomology for finite Galois modules, gerbes presented as
//! group extensions, and Brauer–Manin invariants over finite arithmetic
//! models.
//!
//! Everything is computed over `Z` and `Q/Z`; there is no floating point
//! anywhere in the crate.

pub mod arith;
pub mod cochain;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod gerbe;
pub mod group;
pub mod selftest;
pub mod zmodule;

pub use error::{Error, Result};
