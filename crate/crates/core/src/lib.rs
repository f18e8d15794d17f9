//! Non-Hermitian d-dimensional position-dependent-mass Hamiltonians built
//! from pseudo-Hermiticity generating functions, with numerical verification
//! of the operator identities the construction guarantees.
//!
//! The crate is organized around the construction pipeline:
//!
//! - [`funcspace`]: radial functions with exact derivatives and quadrature.
//! - [`generator`]: the (d, ell, m, f, beta) -> model pipeline.
//! - [`catalog`]: the worked examples as executable golden data.
//! - [`discrete`]: radial grids and finite-difference operator matrices.
//! - [`eigensolve`]: dense complex eigenvalues (Hessenberg + shifted QR).
//! - [`verifier`]: residual checks of the operator identities and reports.

pub mod error;
pub mod funcspace;
pub mod catalog;
pub mod discrete;
pub mod eigensolve;
pub mod generator;
pub mod verifier;

pub use error::{Error, Result};
