//! The operator B(alpha, q) with (B e)_n = e_{n-1} + alpha q^{-n} e_n + e_{n+1}.

mod asymptotics;
mod measure;
mod params;
mod solutions;
mod spectrum;

pub use asymptotics::{darboux_boundary, darboux_constants, darboux_residual, DarbouxConstants, EndpointGrowth};
pub use measure::{
    ac_density, atom_weight, bessel_trend, connection_coeffs, connection_residual, default_measure_quad,
    green_function, qbessel_orthogonality, qbessel_sum_form, spectral_measure, stieltjes_perron_density, Atom,
    BSpectralMeasure, SpectralSet, ENDPOINT_INSET,
};
pub use params::BParams;
pub use solutions::{f_n, g_n, recurrence_residual, wronskian_at, wronskian_fg, JoukowskiPoint, WronskianMethod};
pub use spectrum::{eigenvalue_b, eigenvector_b, eigenvector_norm, point_spectrum_b, BEigenvalue, NormMethod};
