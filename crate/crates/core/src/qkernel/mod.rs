//! q-special functions: Pochhammer symbols, theta functions, confluent
//! basic hypergeometric series and their relatives.

mod base;
mod hyper;
mod jacobi;
mod pochhammer;
mod scaled;
mod theta;
mod xi;

pub use base::{finite, QBase, SeriesPolicy, SeriesSum};
pub use hyper::{jackson_qbessel3, phi01, phi11, phi11_general, phi11_reg, ramanujan_entire};
pub use jacobi::{jacobi_thetas, ThetaFour};
pub use pochhammer::{qpochhammer_finite, qpochhammer_inf};
pub use scaled::Scaled;
pub use theta::{theta, ThetaMethod};
pub use xi::{xi, XiMethod};

pub(crate) use hyper::{jackson_qbessel3_scaled, phi01_sum, phi11_general_sum, phi11_reg_sum, ramanujan_entire_sum};
pub(crate) use jacobi::jacobi_thetas_scaled;
pub(crate) use pochhammer::{euler, qpochhammer_inf_scaled};
pub(crate) use theta::theta_scaled;

/// Complex scalar used for every argument and value.
pub type ComplexValue = num_complex::Complex64;
