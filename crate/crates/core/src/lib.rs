//! Exact arithmetic for generalized beta-transformations: orbit classification,
//! characteristic polynomials, Galois conjugates, constructors and limit-set samples.

pub mod algebraic;
pub mod betamap;
pub mod chebyshev;
pub mod cli;
pub mod construct;
pub mod error;
pub mod highprec;
pub mod sets;
pub mod spectra;

pub use error::{Error, Result};
