//! Orthogonality relations for varphi and for the Ramanujan entire function.

use super::solutions::{norm_sq_scaled, varphi_eval, varphi_step_ratio, VarphiMethod};
use crate::error::{domain, Result};
use crate::oracle::{observed_tail_sum, tail_bounded_sum, SumRange, TailSum};
use crate::qkernel::{euler, ramanujan_entire_sum, theta_scaled, QBase, Scaled, SeriesPolicy};
use num_complex::Complex64;

/// Outcome of checking one identity: truncated LHS against closed-form RHS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// |lhs - rhs| / (1 + |rhs|)
    pub residual: f64,
    /// Sum of the moduli of the summed terms; a vanishing RHS is judged
    /// against this.
    pub scale: f64,
}

impl IdentityCheck {
    fn new(sum: TailSum, rhs: Complex64) -> Self {
        let residual = (sum.value - rhs).norm() / (1.0 + rhs.norm());
        IdentityCheck { lhs: sum.value, rhs, residual, scale: sum.abs_sum }
    }

    /// |lhs - rhs| relative to the term scale.
    pub fn relative_to_scale(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RamanujanRelation {
    /// sum_k z^k q^{k(k-1)/2} A(z q^{k+l}) A(z q^{k-l}) = (q; q)^2 theta_q(-z) delta_{l,0}
    First { z: Complex64, l: i64 },
    /// sum_k (-1)^k q^{k(k-1)/2} A(z q^{k+l}) A(q^{k-l} / z) = 0
    Second { z: Complex64, l: i64 },
    /// with B_j(z) = z^j A_{q^2}(z^2 q^{2j+1}):
    /// sum_n q^{n(n+k+l)} (B_{n+k}(z) B_{n+l}(z) + B_{n+k}(-1/z) B_{n+l}(-1/z))
    ///   = 2 q^{-k^2} (q^2; q^2)^2 theta_{q^2}(-q z^2) delta_{k,l}
    Third { z: Complex64, k: i64, l: i64 },
}

fn tight(policy: &SeriesPolicy) -> SeriesPolicy {
    SeriesPolicy { rel_tol: policy.rel_tol.min(1e-15), ..*policy }
}

fn check_z(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 || !(z.re.is_finite() && z.im.is_finite()) {
        return domain("the relation needs a finite z != 0");
    }
    Ok(())
}

pub fn og_ramanujan(relation: RamanujanRelation, q: QBase, policy: &SeriesPolicy) -> Result<IdentityCheck> {
    let a = |w: Scaled, nome: QBase| -> Result<Scaled> {
        Ok(ramanujan_entire_sum(w.try_complex("Ramanujan argument")?, nome, policy)?.value)
    };
    match relation {
        RamanujanRelation::First { z, l } => {
            check_z(z)?;
            let sum = observed_tail_sum(
                |k| {
                    let t = Scaled::powi(z, k) * q.triangular(k, -1)
                        * a(q.pow_scaled(k + l) * z, q)?
                        * a(q.pow_scaled(k - l) * z, q)?;
                    t.try_complex("first relation term")
                },
                SumRange::Bilateral,
                &tight(policy),
            )?;
            let rhs = if l == 0 {
                let e = euler(q, policy)?;
                (theta_scaled(-z, q, policy)?.scale(e * e)).try_complex("first relation")?
            } else {
                Complex64::new(0.0, 0.0)
            };
            Ok(IdentityCheck::new(sum, rhs))
        }
        RamanujanRelation::Second { z, l } => {
            check_z(z)?;
            let zi = Scaled::new(z.inv());
            let sum = observed_tail_sum(
                |k| {
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let t = q.triangular(k, -1).scale(sign)
                        * a(q.pow_scaled(k + l) * z, q)?
                        * a(q.pow_scaled(k - l) * zi, q)?;
                    t.try_complex("second relation term")
                },
                SumRange::Bilateral,
                &tight(policy),
            )?;
            Ok(IdentityCheck::new(sum, Complex64::new(0.0, 0.0)))
        }
        RamanujanRelation::Third { z, k, l } => {
            check_z(z)?;
            let q2 = q.power(2);
            let b = |j: i64, w: Complex64| -> Result<Scaled> {
                Ok(Scaled::powi(w, j) * a(q.pow_scaled(2 * j + 1) * (w * w), q2)?)
            };
            let zi = -z.inv();
            let sum = observed_tail_sum(
                |n| {
                    let t = q.pow_scaled(n * (n + k + l))
                        * (b(n + k, z)? * b(n + l, z)? + b(n + k, zi)? * b(n + l, zi)?);
                    t.try_complex("third relation term")
                },
                SumRange::Bilateral,
                &tight(policy),
            )?;
            let rhs = if k == l {
                let c = euler(q2, policy)?;
                (theta_scaled(-q.value() * z * z, q2, policy)? * q.pow_scaled(-k * k)).scale(2.0 * c * c)
                    .try_complex("third relation")?
            } else {
                Complex64::new(0.0, 0.0)
            };
            Ok(IdentityCheck::new(sum, rhs))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VarphiRelation {
    /// sum_k varphi_k(omega q^{2m}) varphi_k(omega q^{2n})
    ///   = omega^{-4n} q^{-2n(2n-1)} ||varphi(omega)||^2 delta_{m,n}
    First { omega: f64, m: i64, n: i64 },
    /// sum_k varphi_k(omega q^{2m}) varphi_k(-q^{2n} / omega) = 0
    Second { omega: f64, m: i64, n: i64 },
    /// sum_n omega^{2n} q^{n(n-1)} (varphi_k(omega q^n) varphi_l(omega q^n)
    ///   + varphi_k(-q^{1-n} / omega) varphi_l(-q^{1-n} / omega)) = 2 ||varphi(omega)||^2 delta_{k,l}
    Dual { omega: f64, k: i64, l: i64 },
}

fn phi_at(k: i64, x: f64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    Ok(varphi_eval(k, Complex64::new(x, 0.0), q, VarphiMethod::Auto, policy)?.value)
}

/// sum_k varphi_k(x) varphi_k(y)
fn phi_product_sum(x: f64, y: f64, q: QBase, policy: &SeriesPolicy) -> Result<TailSum> {
    tail_bounded_sum(
        |k| (phi_at(k, x, q, policy)? * phi_at(k, y, q, policy)?).try_complex("varphi product"),
        |k| varphi_step_ratio(k, x.abs(), q) * varphi_step_ratio(k, y.abs(), q),
        SumRange::Bilateral,
        &tight(policy),
    )
}

pub fn og_varphi(relation: VarphiRelation, q: QBase, policy: &SeriesPolicy) -> Result<IdentityCheck> {
    let omega = match relation {
        VarphiRelation::First { omega, .. } | VarphiRelation::Second { omega, .. } | VarphiRelation::Dual { omega, .. } => omega,
    };
    if omega == 0.0 || !omega.is_finite() {
        return domain("omega must be finite and nonzero");
    }
    let norm = || norm_sq_scaled(Complex64::new(omega, 0.0), q, policy);
    match relation {
        VarphiRelation::First { m, n, .. } => {
            let sum = phi_product_sum(omega * q.pow(2 * m), omega * q.pow(2 * n), q, policy)?;
            let rhs = if m == n {
                (norm()? * Scaled::powi_real(omega, -4 * n) * q.pow_scaled(-2 * n * (2 * n - 1))).try_complex("first varphi relation")?
            } else {
                Complex64::new(0.0, 0.0)
            };
            Ok(IdentityCheck::new(sum, rhs))
        }
        VarphiRelation::Second { m, n, .. } => {
            let sum = phi_product_sum(omega * q.pow(2 * m), -q.pow(2 * n) / omega, q, policy)?;
            Ok(IdentityCheck::new(sum, Complex64::new(0.0, 0.0)))
        }
        VarphiRelation::Dual { k, l, .. } => {
            let sum = observed_tail_sum(
                |n| {
                    let x = omega * q.pow(n);
                    let y = -q.pow(1 - n) / omega;
                    let t = Scaled::powi_real(omega, 2 * n)
                        * q.triangular(n, -1)
                        * q.triangular(n, -1)
                        * (phi_at(k, x, q, policy)? * phi_at(l, x, q, policy)?
                            + phi_at(k, y, q, policy)? * phi_at(l, y, q, policy)?);
                    t.try_complex("dual relation term")
                },
                SumRange::Bilateral,
                &tight(policy),
            )?;
            let rhs = if k == l { norm()?.scale(2.0).try_complex("dual relation")? } else { Complex64::new(0.0, 0.0) };
            Ok(IdentityCheck::new(sum, rhs))
        }
    }
}
