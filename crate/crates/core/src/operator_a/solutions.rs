//! Solutions of q^{-n+1} u_{n-1} + q^{-n} u_{n+1} = x u_n.

use crate::error::{domain, Result};
use crate::oracle::{tail_bounded_sum, SumRange};
use crate::qkernel::{
    finite, phi01_sum, phi11_general_sum, qpochhammer_inf_scaled, theta_scaled, QBase, Scaled, SeriesPolicy,
};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiSign {
    Plus,
    Minus,
}

fn i_pow(n: i64, sign: PsiSign) -> Complex64 {
    let k = n.rem_euclid(4);
    let v = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][k as usize];
    match sign {
        PsiSign::Plus => v,
        PsiSign::Minus => v.conj(),
    }
}

/// Value and the modulus sum of the series behind it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Evaluated {
    pub value: Scaled,
    pub magnitude: Scaled,
}

pub(crate) fn psi_eval(n: i64, x: Complex64, q: QBase, sign: PsiSign, policy: &SeriesPolicy) -> Result<Evaluated> {
    let i = Complex64::new(0.0, 1.0);
    let arg_sign = match sign {
        PsiSign::Plus => -i,
        PsiSign::Minus => i,
    };
    let qh = q.sqrt();
    let z = (qh.pow_scaled(2 * n + 1) * (arg_sign * x)).to_complex();
    let s = phi11_general_sum(Complex64::new(0.0, 0.0), Complex64::new(-q.value(), 0.0), q, z, policy)?;
    let pre = qh.pow_scaled(n) * i_pow(n, sign);
    Ok(Evaluated { value: pre * s.value, magnitude: pre.abs() * s.magnitude })
}

/// psi^{+-}_n(x) = (+-i)^n q^{n/2} 1phi1(0; -q; q, -+i x q^{n+1/2})
pub fn psi_pm(n: i64, x: Complex64, q: QBase, sign: PsiSign, policy: &SeriesPolicy) -> Result<Complex64> {
    finite(psi_eval(n, x, q, sign, policy)?.value.try_complex("psi")?, "psi")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullSolution {
    P,
    Q,
}

/// The solutions of A psi = 0 with p_0 = 1, p_1 = 0 and q_0 = 0, q_1 = 1:
/// p_{2n} = q_{2n+1} = (-q)^n, the other entries vanish.
pub fn null_solution(n: i64, which: NullSolution, q: QBase) -> f64 {
    let (even, half) = (n.rem_euclid(2) == 0, n.div_euclid(2));
    match (which, even) {
        (NullSolution::P, true) | (NullSolution::Q, false) => (-q.value()).powi(half as i32),
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarphiMethod {
    /// theta_q(-i q^{-1/2} x) psi^- + theta_q(i q^{-1/2} x) psi^+
    Combination,
    /// (-1; q)_inf x^n q^{n(n-1)/2} 0phi1(-; 0; q^2, -q^{-2n+4} x^{-2})
    Ramanujan,
    /// Combination while |x| q^{n-1/2} <= 1, Ramanujan beyond; the
    /// combination cancels badly once psi^{+-} grow.
    Auto,
}

pub(crate) fn varphi_eval(n: i64, x: Complex64, q: QBase, method: VarphiMethod, policy: &SeriesPolicy) -> Result<Evaluated> {
    if x.norm() == 0.0 {
        return domain("varphi needs x != 0");
    }
    if !(x.re.is_finite() && x.im.is_finite()) {
        return domain("non-finite x");
    }
    let method = match method {
        VarphiMethod::Auto => {
            if x.norm() * q.value().powf(n as f64 - 0.5) <= 1.0 {
                VarphiMethod::Combination
            } else {
                VarphiMethod::Ramanujan
            }
        }
        m => m,
    };
    let i = Complex64::new(0.0, 1.0);
    match method {
        VarphiMethod::Combination => {
            let y = x / q.value().sqrt();
            let t_minus = theta_scaled(-i * y, q, policy)?;
            let t_plus = theta_scaled(i * y, q, policy)?;
            let pm = psi_eval(n, x, q, PsiSign::Minus, policy)?;
            let pp = psi_eval(n, x, q, PsiSign::Plus, policy)?;
            Ok(Evaluated {
                value: t_minus * pm.value + t_plus * pp.value,
                magnitude: t_minus.abs() * pm.magnitude + t_plus.abs() * pp.magnitude,
            })
        }
        _ => {
            let c = qpochhammer_inf_scaled(Complex64::new(-1.0, 0.0), q, policy)?;
            let arg = -(q.pow_scaled(4 - 2 * n) / Scaled::powi(x, 2)).try_complex("0phi1 argument")?;
            let s = phi01_sum(q.power(2), arg, policy)?;
            let pre = c * Scaled::powi(x, n) * q.triangular(n, -1);
            Ok(Evaluated { value: pre * s.value, magnitude: pre.abs() * s.magnitude })
        }
    }
}

/// The solution of the eigenvalue equation that is square summable on Z.
pub fn varphi(n: i64, x: Complex64, q: QBase, method: VarphiMethod, policy: &SeriesPolicy) -> Result<Complex64> {
    finite(varphi_eval(n, x, q, method, policy)?.value.try_complex("varphi")?, "varphi")
}

/// Bound on |varphi_{n+s}(x) / varphi_n(x)| (s = sign of n, +1 at 0),
/// as a per-step rate; 1 where no bound is available.
///
/// At +inf varphi_{n+2} / varphi_n -> -q, at -inf
/// varphi_{n-1} / varphi_n -> q^{1-n} / x.
pub(crate) fn varphi_step_ratio(n: i64, x: f64, q: QBase) -> f64 {
    let qv = q.value();
    let damp = |eps: f64| if eps <= 0.2 { Some((1.0 + eps) / (1.0 - eps)) } else { None };
    let r = if n >= 0 {
        damp(2.0 * x * qv.powf(n as f64 + 0.5) / (1.0 - qv * qv)).map(|d| 1.1 * qv.sqrt() * d)
    } else {
        let w = qv.powi((2 - 2 * n) as i32) / (x * x);
        damp(2.0 * qv * qv * w / (1.0 - qv * qv)).map(|d| 1.1 * qv.powi((1 - n) as i32) / x * d)
    };
    r.unwrap_or(1.0).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormSqMethod {
    ClosedForm,
    DirectSum,
}

/// sum_n varphi_n(x)^2, which is ||varphi(x)||^2 for real x.
pub fn varphi_norm_sq(x: Complex64, q: QBase, method: NormSqMethod, policy: &SeriesPolicy) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return domain("the norm formula needs x != 0");
    }
    match method {
        NormSqMethod::ClosedForm => Ok(norm_sq_scaled(x, q, policy)?.try_complex("norm of varphi")?),
        NormSqMethod::DirectSum => {
            let ax = x.norm();
            let s = tail_bounded_sum(
                |n| {
                    let v = varphi_eval(n, x, q, VarphiMethod::Auto, policy)?.value;
                    (v * v).try_complex("varphi squared")
                },
                |n| varphi_step_ratio(n, ax, q).powi(2),
                SumRange::Bilateral,
                &SeriesPolicy { rel_tol: policy.rel_tol.min(1e-15), ..*policy },
            )?;
            Ok(s.value)
        }
    }
}

/// 4 (q^2; q^2)^2_inf / (q; q^2)^2_inf theta_{q^2}(-x^2)
pub(crate) fn norm_sq_scaled(x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Scaled> {
    let q2 = q.power(2);
    let a = qpochhammer_inf_scaled(Complex64::new(q2.value(), 0.0), q2, policy)?;
    let b = qpochhammer_inf_scaled(Complex64::new(q.value(), 0.0), q2, policy)?;
    Ok((a * a / (b * b)).scale(4.0) * theta_scaled(-x * x, q2, policy)?)
}

/// |q^{-n+1} u_{n-1} + q^{-n} u_{n+1} - x u_n| relative to the size of the
/// three terms.
pub fn recurrence_residual_a(u: [Complex64; 3], n: i64, x: Complex64, q: QBase) -> f64 {
    let a = q.pow(1 - n) * u[0];
    let b = q.pow(-n) * u[2];
    let c = x * u[1];
    let scale = a.norm() + b.norm() + c.norm();
    if scale == 0.0 {
        0.0
    } else {
        (a + b - c).norm() / scale
    }
}

/// q^{-n} (psi^+_{n+1} psi^-_n - psi^+_n psi^-_{n+1}); equal to 2 i q^{1/2}.
pub fn wronskian_psi(n: i64, x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    Ok(wronskian_psi_scaled(n, x, q, policy)?.0)
}

/// The Wronskian and the size its rounding error scales with: the products
/// of the series moduli. Once |x| q^{n+1/2} is large the psi series cancel
/// and the Wronskian keeps only ~16 - log10(scale / |W|) digits.
pub fn wronskian_psi_scaled(n: i64, x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<(Complex64, f64)> {
    let p0 = psi_eval(n, x, q, PsiSign::Plus, policy)?;
    let p1 = psi_eval(n + 1, x, q, PsiSign::Plus, policy)?;
    let m0 = psi_eval(n, x, q, PsiSign::Minus, policy)?;
    let m1 = psi_eval(n + 1, x, q, PsiSign::Minus, policy)?;
    let qn = q.pow_scaled(-n);
    let w = ((p1.value * m0.value - p0.value * m1.value) * qn).try_complex("psi Wronskian")?;
    let scale = ((p1.magnitude * m0.magnitude + p0.magnitude * m1.magnitude) * qn).abs_f64();
    Ok((w, scale))
}

/// Residual, relative to the summed term sizes, of
/// (-1; q)_inf 0phi1(-; 0; q^2, q^5 x^{-2})
///   = theta_q(-x / q) 1phi1(0; -q; q, x) + theta_q(x / q) 1phi1(0; -q; q, -x).
pub fn connection_residual(x: Complex64, q: QBase, policy: &SeriesPolicy) -> Result<f64> {
    if x.norm() == 0.0 {
        return domain("the connection formula needs x != 0");
    }
    let qv = q.value();
    let zero = Complex64::new(0.0, 0.0);
    let b = Complex64::new(-qv, 0.0);
    let lhs = qpochhammer_inf_scaled(Complex64::new(-1.0, 0.0), q, policy)?
        * phi01_sum(q.power(2), qv.powi(5) / (x * x), policy)?.value;
    let t1 = theta_scaled(-x / qv, q, policy)?;
    let t2 = theta_scaled(x / qv, q, policy)?;
    let s1 = phi11_general_sum(zero, b, q, x, policy)?;
    let s2 = phi11_general_sum(zero, b, q, -x, policy)?;
    let (r1, r2) = (t1 * s1.value, t2 * s2.value);
    // the 1phi1 series cancel for large |x|; rounding acts on their term sums
    let scale = lhs.abs_f64().max((t1.abs() * s1.magnitude + t2.abs() * s2.magnitude).abs_f64());
    Ok((lhs - r1 - r2).abs_f64() / scale)
}
