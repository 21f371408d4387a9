//! Spectral analysis of two doubly infinite Jacobi operators built from
//! q-series: the operator A with off-diagonal weights q^{-n} and the
//! operator B with diagonal alpha q^{-n} and unit off-diagonal.

pub mod error;
pub mod operator_a;
pub mod operator_b;
pub mod oracle;
pub mod qkernel;
pub mod quad;
mod window;

pub use error::{QError, Result};
pub use num_complex::Complex64;
pub use window::SpectrumWindow;
