//! Behaviour of f_n on the unit circle as n -> -infinity.
//!
//! For 0 < phi < pi, f_n(e^{i phi}) = e^{-i n phi} A + e^{i n phi} B + o(1).
//! The constants are evaluated for q < beta <= 1 and transported to other
//! alpha: an index shift by Delta for alpha > 0, and the reflection
//! f_n(alpha; e^{i phi}) = (-1)^n f_n(-alpha; e^{i(pi - phi)}) for alpha < 0.

use super::params::BParams;
use crate::error::{domain, Result};
use crate::qkernel::{
    euler, finite, phi11_general_sum, qpochhammer_inf_scaled, theta_scaled, QBase, Scaled, SeriesPolicy,
};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarbouxConstants {
    pub a: Complex64,
    pub b: Complex64,
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// A and B for 0 < beta <= 1 (beta > q).
fn reduced(beta: f64, phi: f64, q: QBase, policy: &SeriesPolicy) -> Result<(Scaled, Scaled)> {
    let e = cis(phi);
    let i = Complex64::new(0.0, 1.0);
    let qv = q.value();
    let one = Complex64::new(1.0, 0.0);
    let lead = qpochhammer_inf_scaled(qv / (beta * e), q, policy)? / Scaled::real(euler(q, policy)?);
    let s1 = phi11_general_sum(Complex64::new(qv, 0.0), qv * e.conj() * e.conj(), q, beta * e.conj(), policy)?.value;
    let s2 = phi11_general_sum(Complex64::new(qv, 0.0), qv / (beta * e), q, qv * e / beta, policy)?.value;
    let coef = -(i * e) / (2.0 * phi.sin());
    let bracket = s1 * coef + s2 - Scaled::new(one);
    let a = lead * bracket;
    let b = theta_scaled(beta * e, q, policy)? / qpochhammer_inf_scaled(e * e, q, policy)?;
    Ok((a, b))
}

fn positive(alpha: f64, phi: f64, p: &BParams, policy: &SeriesPolicy) -> Result<(Scaled, Scaled)> {
    let q = p.q();
    let shifted = BParams::new(alpha, q)?;
    let delta = shifted.delta().expect("alpha != 0");
    let beta = shifted.beta().expect("alpha != 0");
    let (ab, bb) = reduced(beta, phi, q, policy)?;
    // f_j(alpha) = c f_{j - Delta}(beta)
    let c = Scaled::powi_real(-1.0 / alpha, delta) * q.triangular(delta, 1);
    let rot = cis(delta as f64 * phi);
    Ok((c * ab * rot, c * bb * rot.conj()))
}

/// The constants A and B of the expansion on the unit circle.
pub fn darboux_constants(phi: f64, p: &BParams, policy: &SeriesPolicy) -> Result<DarbouxConstants> {
    p.require_nonfree("Darboux constants")?;
    if !(phi > 0.0 && phi < PI) {
        return domain(format!("phi = {phi} is not in (0, pi); use darboux_boundary at the endpoints"));
    }
    let alpha = p.alpha();
    let (a, b) = if alpha > 0.0 {
        positive(alpha, phi, p, policy)?
    } else {
        let (a, b) = positive(-alpha, PI - phi, p, policy)?;
        (b, a)
    };
    Ok(DarbouxConstants {
        a: finite(a.try_complex("Darboux constant A")?, "Darboux constant A")?,
        b: finite(b.try_complex("Darboux constant B")?, "Darboux constant B")?,
    })
}

/// |f_n(e^{i phi}) - e^{-i n phi} A - e^{i n phi} B|
pub fn darboux_residual(n: i64, phi: f64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    let c = darboux_constants(phi, p, policy)?;
    let f = super::solutions::f_n(n, cis(phi), p, policy)?;
    let nf = n as f64;
    Ok((f - cis(-nf * phi) * c.a - cis(nf * phi) * c.b).norm())
}

/// Growth of f_n at z = eps in {1, -1}:
/// f_n(eps) = eps^n (slope |n| + O(1)) as n -> -infinity,
/// slope = theta_q(eps alpha) / (q; q)_inf. When eps alpha lies in q^Z the
/// slope vanishes and f_n(eps) -> eps^n limit instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndpointGrowth {
    pub endpoint: f64,
    pub slope: f64,
    pub limit: Option<f64>,
}

pub fn darboux_boundary(endpoint: f64, p: &BParams, policy: &SeriesPolicy) -> Result<EndpointGrowth> {
    p.require_nonfree("endpoint growth")?;
    if endpoint != 1.0 && endpoint != -1.0 {
        return domain("the endpoint must be 1 or -1");
    }
    let q = p.q();
    let euler = euler(q, policy)?;
    let th = theta_scaled(Complex64::new(endpoint * p.alpha(), 0.0), q, policy)?;
    let slope = th.try_complex("endpoint slope")?.re / euler;
    let limit = if th.is_zero() {
        // eps alpha = q^Delta: f_n(alpha) = c f_{n - Delta}(eps) with
        // f_m(1; 1) -> (q; q)_inf and f_m(-1; -1) = (-1)^m f_m(1; 1)
        let delta = p.delta().expect("alpha != 0");
        let c = Scaled::powi_real(-1.0 / p.alpha(), delta) * q.triangular(delta, 1);
        let sign = if endpoint < 0.0 && delta % 2 != 0 { -1.0 } else { 1.0 };
        Some(sign * c.try_complex("endpoint limit")?.re * euler)
    } else {
        None
    };
    Ok(EndpointGrowth { endpoint, slope, limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_b::solutions::f_n;

    fn params(alpha: f64) -> BParams {
        BParams::new(alpha, QBase::new(0.5).unwrap()).unwrap()
    }

    #[test]
    fn residual_decays_towards_minus_infinity() {
        let pol = SeriesPolicy::default();
        for alpha in [0.8, 2.5, -0.8, 0.3] {
            let p = params(alpha);
            for phi in [PI / 4.0, PI / 2.0, 2.0 * PI / 3.0] {
                let r20 = darboux_residual(-20, phi, &p, &pol).unwrap();
                let r40 = darboux_residual(-40, phi, &p, &pol).unwrap();
                assert!(r40 <= 0.1 * r20, "alpha {alpha}, phi {phi}: {r20} -> {r40}");
            }
        }
    }

    #[test]
    fn b_matches_its_formula() {
        let pol = SeriesPolicy::default();
        let p = params(0.8);
        let phi = PI / 3.0;
        let c = darboux_constants(phi, &p, &pol).unwrap();
        let e = cis(phi);
        let direct = crate::qkernel::theta(0.8 * e, p.q(), crate::qkernel::ThetaMethod::Product, &pol).unwrap()
            / crate::qkernel::qpochhammer_inf(e * e, p.q(), &pol).unwrap();
        assert!((c.b - direct).norm() < 1e-13 * direct.norm());
    }

    #[test]
    fn endpoint_slopes_match_finite_differences() {
        let pol = SeriesPolicy::default();
        for alpha in [0.8, 0.6, -0.8, 2.5] {
            let p = params(alpha);
            for eps in [1.0, -1.0] {
                let g = darboux_boundary(eps, &p, &pol).unwrap();
                let z = Complex64::new(eps, 0.0);
                let h = |n: i64| eps.powi(n as i32) * f_n(n, z, &p, &pol).unwrap().re;
                let fd = (h(-40) - h(-30)) / 10.0;
                assert!((fd - g.slope).abs() <= 0.05 * g.slope.abs(), "alpha {alpha}, eps {eps}: {fd} vs {}", g.slope);
            }
        }
    }

    #[test]
    fn endpoint_limit_when_the_slope_vanishes() {
        let pol = SeriesPolicy::default();
        for (alpha, eps) in [(1.0, 1.0), (0.25, 1.0), (-0.5, -1.0)] {
            let p = params(alpha);
            let g = darboux_boundary(eps, &p, &pol).unwrap();
            assert_eq!(g.slope, 0.0);
            let lim = g.limit.unwrap();
            let n = -40i64;
            let v = eps.powi(n as i32) * f_n(n, Complex64::new(eps, 0.0), &p, &pol).unwrap().re;
            assert!((v - lim).abs() < 1e-6 * lim.abs(), "alpha {alpha}: {v} vs {lim}");
        }
    }

    #[test]
    fn endpoints_are_rejected() {
        let pol = SeriesPolicy::default();
        assert!(darboux_constants(0.0, &params(0.8), &pol).is_err());
        assert!(darboux_constants(PI, &params(0.8), &pol).is_err());
    }
}
