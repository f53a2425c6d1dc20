//! Explicit constants of Bohnenblust–Hille type inequalities and desk-scale
//! numerical verification of the inequalities themselves.

pub mod cli;
pub mod combinatorics;
pub mod constants;
pub mod error;
pub mod norms;
pub mod polynomials;
pub mod spaces;
pub mod verification;

pub use error::{Error, Result};
