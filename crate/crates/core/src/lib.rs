//! Extremal quasiconformal displacement of the unit disc.

pub mod affine;
pub mod cli;
pub mod error;
pub mod metrics;
pub mod modulus;
pub mod shift;
pub mod specfun;
pub mod verify;

pub use error::{QcdError, Result};

/// A point of the complex plane.
pub type ComplexPoint = num_complex::Complex64;
