//! Residue-field diversity for fibers of branched covers of the affine line
//! over Q.
//!
//! The crate classifies the number fields attached to the fibers of a cover
//! `X -> A^1` over the integer points `x = 1..N`, counts how many distinct
//! fields appear, tracks the degree of their compositum, and measures the
//! squarefree-value statistics that drive the lower bounds.

pub mod arith;
pub mod covers;
pub mod diversity;
pub mod error;
pub mod kummer;
pub mod polyring;
pub mod sieve;

pub use error::{Error, Result};
