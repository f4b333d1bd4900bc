//! Generalized B-spline (GB-spline) collocation: exact cardinal splines,
//! spectral symbols, collocation matrices and eigenvalue-distribution checks.

pub mod cardinal;
pub mod cli;
pub mod collocation;
pub mod config;
pub mod error;
pub mod expr;
pub mod multidim;
pub mod section;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
pub use nalgebra;
