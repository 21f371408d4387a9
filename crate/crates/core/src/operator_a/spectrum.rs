//! Self-adjoint extensions A_t, their secular equation and explicit spectra.

use super::solutions::{varphi_eval, VarphiMethod};
use crate::error::{domain, QError, Result};
use crate::qkernel::{jacobi_thetas_scaled, theta_scaled, QBase, Scaled, SeriesPolicy};
use crate::quad::{integrate, QuadOptions};
use crate::window::SpectrumWindow;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// t in R or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtensionParam {
    Finite(f64),
    Infinity,
}

impl ExtensionParam {
    pub fn finite(t: f64) -> Result<Self> {
        if t.is_finite() {
            Ok(ExtensionParam::Finite(t))
        } else {
            Err(QError::InvalidParameter(format!("t = {t} is not finite; use ExtensionParam::Infinity")))
        }
    }
}

/// Secular value and its cancellation scale.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SecularEval {
    pub value: Scaled,
    pub scale: Scaled,
}

pub(crate) fn secular_eval(x: Complex64, t: ExtensionParam, q: QBase, policy: &SeriesPolicy) -> Result<SecularEval> {
    if x.norm() == 0.0 {
        return domain("the secular expression is not defined at x = 0");
    }
    let q4 = q.power(4);
    let x2 = x * x;
    let even = theta_scaled(x2, q4, policy)?;
    let odd = theta_scaled(q.value() * q.value() * x2, q4, policy)? * x;
    Ok(match t {
        ExtensionParam::Finite(t) => {
            let te = even.scale(t);
            SecularEval { value: odd + te, scale: odd.abs() + te.abs() }
        }
        // with no t to weigh against, both thetas set the scale
        ExtensionParam::Infinity => SecularEval { value: even, scale: odd.abs() + even.abs() },
    })
}

/// x theta_{q^4}(q^2 x^2) + t theta_{q^4}(x^2), or theta_{q^4}(x^2) at t = inf.
pub fn secular(x: Complex64, t: ExtensionParam, q: QBase, policy: &SeriesPolicy) -> Result<Complex64> {
    secular_eval(x, t, q, policy)?.value.try_complex("secular expression")
}

/// |secular| / (|x theta_{q^4}(q^2 x^2)| + |t| |theta_{q^4}(x^2)|); at t = inf
/// the scale is |x theta_{q^4}(q^2 x^2)| + |theta_{q^4}(x^2)|.
pub fn secular_residual(x: Complex64, t: ExtensionParam, q: QBase, policy: &SeriesPolicy) -> Result<f64> {
    let s = secular_eval(x, t, q, policy)?;
    if s.scale.is_zero() {
        return Ok(0.0);
    }
    Ok((s.value / s.scale).abs_f64())
}

/// Upper end -2 ln q of the s-range.
fn s_max(q: QBase) -> f64 {
    2.0 * q.log_inv()
}

/// Phi(s) = i q^{1/2} theta_4(i s | q^2) / theta_1(i s | q^2), Phi(0) = inf.
pub fn phi_map(s: f64, q: QBase, policy: &SeriesPolicy) -> Result<ExtensionParam> {
    if !(s >= 0.0 && s < s_max(q)) {
        return domain(format!("s = {s} is not in [0, {})", s_max(q)));
    }
    if s == 0.0 {
        return Ok(ExtensionParam::Infinity);
    }
    let th = jacobi_thetas_scaled(Complex64::new(0.0, s), q.power(2), policy)?;
    let v = (th.v4 / th.v1 * Complex64::new(0.0, q.value().sqrt())).try_complex("Phi")?;
    if v.im.abs() > 1e-13 * v.norm().max(1e-300) {
        return Err(QError::Inconsistent { what: "imaginary part of Phi", residual: v.im.abs() });
    }
    Ok(ExtensionParam::Finite(v.re))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiInverseMethod {
    /// Bisection on the decreasing map Phi.
    MonotoneInversion,
    /// Quadrature of the elliptic integral for Phi^{-1}.
    EllipticQuadrature,
}

const BISECTION_STEPS: usize = 50;
const BRACKET_INSET: f64 = 1e-12;

/// s in [0, -2 ln q) with Phi(s) = t.
pub fn phi_inverse(t: ExtensionParam, q: QBase, method: PhiInverseMethod, policy: &SeriesPolicy) -> Result<f64> {
    let t = match t {
        ExtensionParam::Infinity => return Ok(0.0),
        ExtensionParam::Finite(t) if t.is_finite() => t,
        ExtensionParam::Finite(t) => return domain(format!("t = {t} is not finite")),
    };
    match method {
        PhiInverseMethod::MonotoneInversion => {
            let value = |s: f64| -> Result<f64> {
                match phi_map(s, q, policy)? {
                    ExtensionParam::Finite(v) => Ok(v),
                    ExtensionParam::Infinity => Ok(f64::INFINITY),
                }
            };
            let (mut lo, mut hi) = (BRACKET_INSET, s_max(q) - BRACKET_INSET);
            if value(lo)? < t || value(hi)? > t {
                // outside the bracket only for |t| beyond ~1e12
                return Err(QError::NonConvergent { what: "Phi bracket", terms: 0 });
            }
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if value(mid)? > t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(0.5 * (lo + hi))
        }
        PhiInverseMethod::EllipticQuadrature => {
            let th = jacobi_thetas_scaled(Complex64::new(0.0, 0.0), q.power(2), policy)?;
            let t2 = th.v2.try_complex("theta_2(0)")?.re;
            let t3 = th.v3.try_complex("theta_3(0)")?.re;
            let qv = q.value();
            let c = qv.sqrt() / (t2 * t3);
            let k1 = qv * t3 * t3 / (t2 * t2);
            let k2 = qv * t2 * t2 / (t3 * t3);
            // x = tan u turns the improper integral over (t, inf) into a
            // bounded one
            let f = |u: f64| -> Result<f64> {
                let (s, co) = u.sin_cos();
                let (s2, c2) = (s * s, co * co);
                Ok(1.0 / ((k1 * c2 + s2) * (k2 * c2 + s2)).sqrt())
            };
            let opts = QuadOptions { rel_tol: 1e-9, ..Default::default() };
            Ok(c * integrate(&f, t.atan(), FRAC_PI_2, &opts)?)
        }
    }
}

/// Point spectrum of A_t: e^s q^{2n} and -e^{-s} q^{2m}, s = Phi^{-1}(t).
#[derive(Clone, Debug, PartialEq)]
pub struct ASpectrum {
    pub s: f64,
    pub positive_branch: Vec<(i64, f64)>,
    pub negative_branch: Vec<(i64, f64)>,
    pub t: ExtensionParam,
}

impl ASpectrum {
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        self.positive_branch.iter().chain(self.negative_branch.iter()).map(|p| p.1)
    }
}

/// Emitted points must satisfy |secular| <= this times the scale.
pub const SECULAR_TOLERANCE: f64 = 1e-9;

pub fn point_spectrum_a(t: ExtensionParam, q: QBase, window: SpectrumWindow, policy: &SeriesPolicy) -> Result<ASpectrum> {
    let s = phi_inverse(t, q, PhiInverseMethod::MonotoneInversion, policy)?;
    spectrum_from_s(s, t, q, window, policy)
}

fn spectrum_from_s(s: f64, t: ExtensionParam, q: QBase, window: SpectrumWindow, policy: &SeriesPolicy) -> Result<ASpectrum> {
    let es = s.exp();
    let positive_branch: Vec<(i64, f64)> = window.iter().map(|n| (n, es * q.pow(2 * n))).collect();
    let negative_branch: Vec<(i64, f64)> = window.iter().map(|m| (m, -q.pow(2 * m) / es)).collect();
    let worst = positive_branch
        .par_iter()
        .chain(negative_branch.par_iter())
        .map(|&(_, x)| secular_residual(Complex64::new(x, 0.0), t, q, policy))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if worst > SECULAR_TOLERANCE {
        return Err(QError::Inconsistent { what: "secular residual of an emitted eigenvalue", residual: worst });
    }
    Ok(ASpectrum { s, positive_branch, negative_branch, t })
}

/// The extension whose spectrum is -omega^{-1} q^{2Z} U omega q^{2Z},
/// together with its s. e^s is the representative of |omega| (or of
/// |omega|^{-1} when omega < 0) in [1, q^{-2}).
pub fn extension_for_eigenvalue(omega: f64, q: QBase, policy: &SeriesPolicy) -> Result<(ExtensionParam, f64)> {
    if omega == 0.0 || !omega.is_finite() {
        return domain("omega must be finite and nonzero");
    }
    let w = if omega > 0.0 { omega } else { 1.0 / omega.abs() };
    let ln_q2 = 2.0 * q.value().ln();
    let k = (w.ln() / ln_q2).ceil();
    let mut s = w.ln() - k * ln_q2;
    if s >= s_max(q) - 1e-12 || s.abs() < 1e-14 {
        // omega sits on q^{2Z} up to rounding
        s = 0.0;
    }
    let s = s.max(0.0);
    Ok((phi_map(s, q, policy)?, s))
}

/// Distance of varphi(x) from the domain of A_t at cut n:
/// max(|q^{-n}(varphi_{2n+1} + t varphi_{2n})|, |q^{-n}(q varphi_{2n-1} - t varphi_{2n})|),
/// or |q^{-n} varphi_{2n}| at t = inf.
pub fn boundary_residual(x: Complex64, t: ExtensionParam, q: QBase, n: i64, policy: &SeriesPolicy) -> Result<f64> {
    let phi = |k: i64| varphi_eval(k, x, q, VarphiMethod::Auto, policy).map(|e| e.value);
    let qn = q.pow_scaled(-n);
    let r = match t {
        ExtensionParam::Infinity => (phi(2 * n)? * qn).abs_f64(),
        ExtensionParam::Finite(t) => {
            let even = phi(2 * n)?.scale(t);
            let a = ((phi(2 * n + 1)? + even) * qn).abs_f64();
            let b = ((phi(2 * n - 1)?.scale(q.value()) - even) * qn).abs_f64();
            a.max(b)
        }
    };
    if !r.is_finite() {
        return Err(QError::Overflow("boundary residual"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> QBase {
        QBase::new(0.5).unwrap()
    }

    fn fin(t: f64) -> ExtensionParam {
        ExtensionParam::Finite(t)
    }

    #[test]
    fn secular_roots_at_t_zero_and_infinity() {
        let pol = SeriesPolicy::default();
        let q = q5();
        for n in -3..=3 {
            for sign in [1.0, -1.0] {
                let x0 = Complex64::new(sign * q.pow(2 * n + 1), 0.0);
                assert!(secular_residual(x0, fin(0.0), q, &pol).unwrap() < 1e-10);
                let xi = Complex64::new(sign * q.pow(2 * n), 0.0);
                assert!(secular_residual(xi, ExtensionParam::Infinity, q, &pol).unwrap() < 1e-10);
            }
        }
        assert!(secular(Complex64::new(0.0, 0.0), fin(1.0), q, &pol).is_err());
        assert!(secular_residual(Complex64::new(0.3, 0.0), fin(1.0), q, &pol).unwrap() > 1e-3);
    }

    #[test]
    fn phi_is_real_and_decreasing() {
        let pol = SeriesPolicy::default();
        let q = q5();
        assert_eq!(phi_map(0.0, q, &pol).unwrap(), ExtensionParam::Infinity);
        let top = -2.0 * 0.5f64.ln();
        let mut last = f64::INFINITY;
        for i in 0..100 {
            let s = 0.01 + (top - 0.02) * i as f64 / 99.0;
            let ExtensionParam::Finite(v) = phi_map(s, q, &pol).unwrap() else { panic!() };
            assert!(v < last);
            last = v;
        }
        assert!(phi_map(top, q, &pol).is_err());
        assert!(phi_map(-0.1, q, &pol).is_err());
    }

    #[test]
    fn phi_inverse_round_trip_and_methods() {
        let pol = SeriesPolicy::default();
        let q = q5();
        assert_eq!(phi_inverse(ExtensionParam::Infinity, q, PhiInverseMethod::MonotoneInversion, &pol).unwrap(), 0.0);
        for t in [-10.0, -1.0, 0.1, 1.0, 10.0] {
            let s = phi_inverse(fin(t), q, PhiInverseMethod::MonotoneInversion, &pol).unwrap();
            let ExtensionParam::Finite(back) = phi_map(s, q, &pol).unwrap() else { panic!() };
            assert!((back - t).abs() < 1e-8 * t.abs(), "t = {t}: {back}");
        }
        for t in [-2.0, 0.5, 3.0] {
            let a = phi_inverse(fin(t), q, PhiInverseMethod::MonotoneInversion, &pol).unwrap();
            let b = phi_inverse(fin(t), q, PhiInverseMethod::EllipticQuadrature, &pol).unwrap();
            assert!((a - b).abs() < 1e-7, "t = {t}: {a} vs {b}");
        }
    }

    #[test]
    fn explicit_spectra() {
        let pol = SeriesPolicy::default();
        let q = q5();
        let w = SpectrumWindow::new(-5, 5).unwrap();
        let a0 = point_spectrum_a(fin(0.0), q, w, &pol).unwrap();
        assert!((a0.s.exp() - 2.0).abs() < 1e-12);
        let ainf = point_spectrum_a(ExtensionParam::Infinity, q, w, &pol).unwrap();
        let has = |sp: &ASpectrum, x: f64| sp.points().any(|p| (p - x).abs() <= 1e-10 * x.abs());
        for n in -4..=4 {
            for sign in [1.0, -1.0] {
                assert!(has(&a0, sign * q.pow(2 * n + 1)), "t = 0, n = {n}");
                assert!(has(&ainf, sign * q.pow(2 * n)), "t = inf, n = {n}");
            }
        }
        for t in [-5.0, -1.0, 0.3, 2.0, 7.0] {
            let sp = point_spectrum_a(fin(t), q, w, &pol).unwrap();
            for x in sp.points() {
                assert!(secular_residual(Complex64::new(x, 0.0), fin(t), q, &pol).unwrap() <= 1e-9);
            }
            let pos: Vec<f64> = sp.positive_branch.iter().map(|p| p.1).collect();
            assert!(pos.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn root_symmetry_under_minus_reciprocal() {
        let pol = SeriesPolicy::default();
        let q = q5();
        let sp = point_spectrum_a(fin(0.3), q, SpectrumWindow::new(-2, 2).unwrap(), &pol).unwrap();
        for x in sp.points() {
            assert!(secular_residual(Complex64::new(-1.0 / x, 0.0), fin(0.3), q, &pol).unwrap() < 1e-9);
        }
    }

    #[test]
    fn every_omega_is_an_eigenvalue_of_some_extension() {
        let pol = SeriesPolicy::default();
        let q = q5();
        for omega in [0.73, -0.73, 3.1, 0.25] {
            let (t, s) = extension_for_eigenvalue(omega, q, &pol).unwrap();
            assert!(s.exp() >= 1.0 && s.exp() < 4.0);
            let sp = point_spectrum_a(t, q, SpectrumWindow::new(-3, 3).unwrap(), &pol).unwrap();
            assert!(sp.points().any(|x| (x - omega).abs() < 1e-9 * omega.abs()), "omega = {omega}");
            assert!(sp.points().any(|x| (x + 1.0 / omega).abs() < 1e-9 / omega.abs()), "omega = {omega}");
        }
        assert_eq!(extension_for_eigenvalue(0.25, q, &pol).unwrap().0, ExtensionParam::Infinity);
    }

    #[test]
    fn boundary_residual_decays_only_on_the_spectrum() {
        let pol = SeriesPolicy::default();
        let q = q5();
        for t in [fin(0.0), fin(2.0), ExtensionParam::Infinity] {
            let sp = point_spectrum_a(t, q, SpectrumWindow::new(-1, 1).unwrap(), &pol).unwrap();
            for x in sp.points() {
                let x = Complex64::new(x, 0.0);
                let r: Vec<f64> = [5, 10, 15].iter().map(|&n| boundary_residual(x, t, q, n, &pol).unwrap()).collect();
                assert!(r[1] * 10.0 <= r[0] && r[2] * 10.0 <= r[1], "t = {t:?}, x = {x}: {r:?}");
            }
        }
        let off = boundary_residual(Complex64::new(0.5 * 1.3, 0.0), fin(0.0), q, 15, &pol).unwrap();
        assert!(off > 1e-3);
        // t = 0 reduces to |q^{-n} varphi_{2n+1}| and |q^{1-n} varphi_{2n-1}|
        let x = Complex64::new(0.5, 0.0);
        let n = 4;
        let phi = |k: i64| super::super::solutions::varphi(k, x, q, VarphiMethod::Auto, &pol).unwrap().norm();
        let direct = (q.pow(-n) * phi(2 * n + 1)).max(q.pow(1 - n) * phi(2 * n - 1));
        assert!((boundary_residual(x, fin(0.0), q, n, &pol).unwrap() - direct).abs() <= 1e-15 * direct);
    }
}
