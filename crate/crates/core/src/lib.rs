//! Measuring and repairing non-normality of dense complex matrices.
//!
//! The crate computes distances to the set of normal matrices, builds
//! finite-spectrum approximations from covers of the spectrum, performs
//! spectrum surgery on normal matrices through the functional calculus, and
//! runs the truncation, pseudospectrum and scatter experiments that go with
//! them. See the `examples/` directory for one runnable program per
//! capability.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod gallery;
pub mod linalg;
pub mod nearest;
pub mod partition;
pub mod surgery;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{CMatrix, SchattenP, SpectralDecomp};
pub use num_complex::Complex64;
