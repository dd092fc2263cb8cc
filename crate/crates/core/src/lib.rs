//! Intermediate constacyclic codes over `F_q` realised as evaluation codes of
//! reduced polynomials on `F_q^m`, with explicit extremal words, closed-form
//! distances and brute-force oracles.

pub mod error;
pub mod gf;
pub mod linalg;
pub mod rpoly;
pub mod spaces;
pub mod evalcode;
pub mod witnesses;
pub mod distance;
pub mod cli;

pub use error::{Error, Result};
