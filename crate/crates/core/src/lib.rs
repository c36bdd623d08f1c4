//! Exact evaluation of Krein-like functionals
//! `∫ ω(x)^β x^s p_{m1}(x)…p_{mr}(x) dx` of the classical Laguerre, Hermite
//! and Jacobi polynomials, by three independent closed-form routes plus an
//! expansion/quadrature oracle.

pub mod bench;
pub mod error;
pub mod jobs;
pub mod krein;
pub mod linearize;
pub mod moments;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod scalar;
pub mod series;
pub mod special;

pub use error::{Error, Result};
pub use scalar::{ExactValue, HalfInt, Scalar};
