//! Grassmann and twisted Grassmann graphs over small finite fields, Godsil-McKay
//! switching, and exact checks of everything needed to relate the two.
//!
//! Arithmetic is integer-only throughout: field elements are table lookups,
//! characteristic polynomials are computed modulo word-size primes and lifted.

pub mod bits;
pub mod certify;
pub mod construct;
pub mod error;
pub mod gf;
pub mod graph;
pub mod subspace;

pub use error::{Error, Result};
