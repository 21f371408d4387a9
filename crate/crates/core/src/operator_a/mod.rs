//! The operator A(q) with (A e)_n = q^{-n+1} e_{n-1} + q^{-n} e_{n+1}, its
//! self-adjoint extensions A_t and the Ramanujan entire function.

mod orthogonality;
mod solutions;
mod spectrum;

pub use orthogonality::{og_ramanujan, og_varphi, IdentityCheck, RamanujanRelation, VarphiRelation};
pub use solutions::{
    connection_residual, null_solution, psi_pm, recurrence_residual_a, varphi, varphi_norm_sq, wronskian_psi,
    wronskian_psi_scaled,
    NormSqMethod, NullSolution, PsiSign, VarphiMethod,
};
pub use spectrum::{
    boundary_residual, extension_for_eigenvalue, phi_inverse, phi_map, point_spectrum_a, secular, secular_residual,
    ASpectrum, ExtensionParam, PhiInverseMethod, SECULAR_TOLERANCE,
};
