//! Distributions of a one-dimensional stable Lévy process and of its running
//! supremum, computed from Wiener–Hopf factors on conformally deformed contours.

pub mod charexp;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod laplace;
pub mod oracle;
pub mod quadrature;
pub mod whf;

pub use error::{Error, Result};
