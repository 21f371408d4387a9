//! Resolvent, spectral measure and the q-Bessel identities that follow.

use super::params::BParams;
use super::solutions::{f_eval, g_eval, wronskian_closed_scaled, JoukowskiPoint};
use super::spectrum::{eigen_parameter, eigenvalue_b};
use crate::error::{domain, QError, Result};
use crate::oracle::{tail_bounded_sum, SumRange};
use crate::qkernel::{euler, jackson_qbessel3_scaled, qpochhammer_inf_scaled, theta_scaled, QBase, Scaled, SeriesPolicy};
use crate::quad::{integrate, QuadOptions};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative radius around eigen-parameters and around q^{Z/2} treated as a
/// hit.
const EXCLUSION: f64 = 1e-8;

fn check_eigen_parameter(z: Complex64, p: &BParams) -> Result<()> {
    let Some(delta) = p.delta() else { return Ok(()) };
    let a = p.alpha();
    let m = ((z.norm() * a.abs()).ln() / p.q().value().ln()).round() as i64;
    for mm in [m - 1, m, m + 1] {
        if mm <= delta {
            continue;
        }
        let zm = eigen_parameter(mm, p);
        if (z - zm).norm() < EXCLUSION * zm.abs() {
            return Err(QError::Pole(format!("z = {z} is the eigen-parameter of m = {mm}")));
        }
    }
    Ok(())
}

/// G_{k,l}(z) = g_{min(k,l)}(z) f_{max(k,l)}(z) / W(f, g), the matrix element
/// of (B - mu(z))^{-1} for 0 < |z| < 1.
pub fn green_function(k: i64, l: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<Complex64> {
    if !(z.norm() > 0.0 && z.norm() < 1.0) {
        return domain(format!("|z| = {} is not in (0, 1)", z.norm()));
    }
    if p.is_free() {
        // free resolvent: z^{|k-l|} / (z - 1/z)
        return Ok(z.powi((k - l).abs() as i32) / (z - z.inv()));
    }
    check_eigen_parameter(z, p)?;
    let w = wronskian_closed_scaled(z, p, policy)?;
    if w.is_zero() {
        return Err(QError::Pole(format!("W(f, g) vanishes at z = {z}")));
    }
    let g = g_eval(k.min(l), z, p, policy)?.value;
    let f = f_eval(k.max(l), z, p, policy)?.value;
    (g * f / w).try_complex("Green function")
}

fn check_half_lattice(z: Complex64, q: QBase) -> Result<()> {
    if z.norm() == 0.0 || !(z.re.is_finite() && z.im.is_finite()) {
        return domain("connection coefficients need a finite z != 0");
    }
    let w = z.inv() * z.inv();
    let k = (w.norm().ln() / q.value().ln()).round();
    let qk = q.value().powf(k);
    if (w - qk).norm() < EXCLUSION * qk {
        return domain(format!("z = {z} lies on q^(Z/2)"));
    }
    Ok(())
}

fn connection_scaled(z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<(Scaled, Scaled)> {
    p.require_nonfree("connection formula")?;
    check_half_lattice(z, p.q())?;
    let q = p.q();
    let a = |x: Complex64| -> Result<Scaled> {
        Ok(theta_scaled(p.alpha() / x, q, policy)? / theta_scaled(x.inv() * x.inv(), q, policy)?)
    };
    Ok((a(z)?, a(z.inv())?))
}

/// (A(z), A(1/z)) with A(z) = theta_q(alpha / z) / theta_q(z^{-2}), so that
/// f_n(z) = A(z) g_n(z) + A(1/z) g_n(1/z).
pub fn connection_coeffs(z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<(Complex64, Complex64)> {
    let (a, b) = connection_scaled(z, p, policy)?;
    Ok((a.try_complex("connection coefficient")?, b.try_complex("connection coefficient")?))
}

/// |f_n - A(z) g_n(z) - A(1/z) g_n(1/z)| relative to the larger side.
pub fn connection_residual(n: i64, z: Complex64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    let (a, b) = connection_scaled(z, p, policy)?;
    let f = f_eval(n, z, p, policy)?;
    let g1 = g_eval(n, z, p, policy)?;
    let g2 = g_eval(n, z.inv(), p, policy)?;
    let t1 = a * g1.value;
    let t2 = b * g2.value;
    let r = f.value - t1 - t2;
    let scale = f.value.abs_f64().max(t1.abs_f64() + t2.abs_f64());
    Ok(r.abs_f64() / scale)
}

/// f_n(e^{i phi}) as a real number; the imaginary part is rounding noise
/// and is checked against the size of the series terms.
fn f_on_circle(n: i64, phi: f64, p: &BParams, policy: &SeriesPolicy) -> Result<Scaled> {
    let ev = f_eval(n, Complex64::from_polar(1.0, phi), p, policy)?;
    let im = ev.value.im_part();
    if !im.abs_le(1e-12, &ev.magnitude) {
        return Err(QError::Inconsistent { what: "real part of f on the unit circle", residual: im.abs_f64() });
    }
    Ok(ev.value.re_part())
}

/// Density of E_{k,l} with respect to d phi at x = 2 cos(phi):
/// (2 pi)^{-1} f_k f_l |(e^{2i phi}; q)_inf / (alpha e^{i phi}, q alpha^{-1} e^{-i phi}; q)_inf|^2.
pub fn ac_density(phi: f64, k: i64, l: i64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    if !(phi > 0.0 && phi < PI) {
        return domain(format!("phi = {phi} is not in (0, pi)"));
    }
    if p.is_free() {
        return Ok(((k - l) as f64 * phi).cos() / PI);
    }
    let q = p.q();
    let e = Complex64::from_polar(1.0, phi);
    let num = qpochhammer_inf_scaled(e * e, q, policy)?.abs();
    let den = qpochhammer_inf_scaled(p.alpha() * e, q, policy)?.abs()
        * qpochhammer_inf_scaled(q.value() / p.alpha() * e.conj(), q, policy)?.abs();
    let w = num / den;
    let fk = f_on_circle(k, phi, p, policy)?;
    let fl = if l == k { fk } else { f_on_circle(l, phi, p, policy)? };
    let v = fk * fl * w * w;
    Ok(v.try_complex("spectral density")?.re / (2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub m: i64,
    pub location: f64,
    pub weight: f64,
}

/// (1 - alpha^{-2} q^{2m}) alpha^{2m} q^{-m(m+1)} f_k(z_m) f_l(z_m) / (q; q)^2_inf
pub fn atom_weight(m: i64, k: i64, l: i64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    let delta = p.require_nonfree("atom weight")?;
    if m <= delta {
        return domain(format!("m = {m} does not exceed Delta = {delta}"));
    }
    let q = p.q();
    let z = eigen_parameter(m, p);
    let zc = Complex64::new(z, 0.0);
    let fk = f_eval(k, zc, p, policy)?.value;
    let fl = if l == k { fk } else { f_eval(l, zc, p, policy)?.value };
    let e = euler(q, policy)?;
    let w = Scaled::powi_real(p.alpha(), 2 * m) * q.pow_scaled(-m * (m + 1)) * fk * fl * Scaled::real((1.0 - z * z) / (e * e));
    Ok(w.try_complex("atom weight")?.re)
}

/// The matrix element E_{k,l} of the spectral measure of B.
#[derive(Clone, Debug)]
pub struct BSpectralMeasure {
    pub k: i64,
    pub l: i64,
    pub params: BParams,
    /// Every atom whose weight is not negligible, in increasing m.
    pub atoms: Vec<Atom>,
    policy: SeriesPolicy,
}

impl BSpectralMeasure {
    pub fn new(k: i64, l: i64, p: &BParams, policy: &SeriesPolicy) -> Result<Self> {
        let mut atoms = Vec::new();
        if let Some(delta) = p.delta() {
            // weights decay superexponentially once m passes max(k, l)
            let settle = k.max(l).max(delta) + 3;
            let mut abs_sum = 0.0f64;
            let mut run = 0;
            let mut m = delta + 1;
            loop {
                let weight = atom_weight(m, k, l, p, policy)?;
                abs_sum += weight.abs();
                atoms.push(Atom { m, location: eigenvalue_b(m, p), weight });
                run = if weight.abs() <= policy.rel_tol * abs_sum.max(policy.abs_floor) { run + 1 } else { 0 };
                if m >= settle && run >= policy.consecutive_small {
                    break;
                }
                if atoms.len() >= policy.max_terms {
                    return Err(QError::NonConvergent { what: "atom series", terms: atoms.len() });
                }
                m += 1;
            }
        }
        Ok(BSpectralMeasure { k, l, params: *p, atoms, policy: *policy })
    }

    pub fn density(&self, phi: f64) -> Result<f64> {
        ac_density(phi, self.k, self.l, &self.params, &self.policy)
    }

    /// E_{k,l}(set).
    pub fn measure(&self, set: &SpectralSet, quad: &QuadOptions) -> Result<f64> {
        let atoms: f64 = self.atoms.iter().filter(|a| set.contains(a.location)).map(|a| a.weight).sum();
        let mut ac = 0.0;
        for (lo, hi) in set.phi_ranges() {
            ac += integrate(&|phi: f64| self.density(phi), lo, hi, quad)?;
        }
        Ok(atoms + ac)
    }
}

/// A finite union of closed intervals of the real line, or all of it.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralSet {
    Real,
    Intervals(Vec<(f64, f64)>),
}

/// Distance kept from phi = 0 and phi = pi in the AC integral.
pub const ENDPOINT_INSET: f64 = 1e-9;

impl SpectralSet {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            SpectralSet::Real => true,
            SpectralSet::Intervals(v) => v.iter().any(|&(a, b)| x >= a && x <= b),
        }
    }

    /// phi-intervals of the part of the set inside [-2, 2].
    fn phi_ranges(&self) -> Vec<(f64, f64)> {
        let clip = |a: f64, b: f64| -> Option<(f64, f64)> {
            let (a, b) = (a.max(-2.0), b.min(2.0));
            if a >= b {
                return None;
            }
            let lo = if b >= 2.0 { ENDPOINT_INSET } else { (b / 2.0).acos() };
            let hi = if a <= -2.0 { PI - ENDPOINT_INSET } else { (a / 2.0).acos() };
            (lo < hi).then_some((lo, hi))
        };
        match self {
            SpectralSet::Real => vec![(ENDPOINT_INSET, PI - ENDPOINT_INSET)],
            SpectralSet::Intervals(v) => v.iter().filter_map(|&(a, b)| clip(a, b)).collect(),
        }
    }
}

/// Quadrature settings for the AC part: relative 1e-8.
pub fn default_measure_quad() -> QuadOptions {
    QuadOptions { rel_tol: 1e-8, abs_tol: 1e-12, ..Default::default() }
}

pub fn spectral_measure(k: i64, l: i64, set: &SpectralSet, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    BSpectralMeasure::new(k, l, p, policy)?.measure(set, &default_measure_quad())
}

/// (2 pi i)^{-1} (G(x + i eps) - G(x - i eps)): the smeared density of E_{k,l}
/// with respect to dx.
pub fn stieltjes_perron_density(x: f64, eps: f64, k: i64, l: i64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    let up = JoukowskiPoint::from_mu(Complex64::new(x, eps))?;
    let down = JoukowskiPoint::from_mu(Complex64::new(x, -eps))?;
    let gu = green_function(k, l, up.z, p, policy)?;
    let gd = green_function(k, l, down.z, p, policy)?;
    Ok(((gu - gd) / Complex64::new(0.0, 2.0 * PI)).re)
}

/// |sum_j J_{j+m}(x_m) J_{j+n}(x_n) - delta_{mn} / (1 - x_m^2)| with
/// x_m = alpha^{-1} q^m.
pub fn qbessel_orthogonality(m: i64, n: i64, p: &BParams, policy: &SeriesPolicy) -> Result<f64> {
    let delta = p.require_nonfree("q-Bessel orthogonality")?;
    if m <= delta || n <= delta {
        return domain(format!("m = {m}, n = {n} must exceed Delta = {delta}"));
    }
    let q = p.q();
    let (xm, xn) = (eigen_parameter(m, p), eigen_parameter(n, p));
    let s = bessel_product_sum(m, n, xm, xn, q, policy)?;
    let rhs = if m == n { 1.0 / (1.0 - xm * xm) } else { 0.0 };
    Ok((s - rhs).abs())
}

/// sum_j J_{j+m}(x) J_{j+n}(y).
fn bessel_product_sum(m: i64, n: i64, x: f64, y: f64, q: QBase, policy: &SeriesPolicy) -> Result<f64> {
    let qv = q.value();
    let xy = (x * y).abs();
    let top = m.max(n);
    // J_{nu+1}(x) / J_nu(x) -> x as nu -> inf; J_{-nu} ~ q^{nu(nu+1)/2} x^nu
    let ratio = |j: i64| {
        let nu = j + m.min(n);
        if j > 0 && nu >= 2 {
            (xy * (1.0 + 4.0 * qv.powi(nu as i32))).min(0.5 * (1.0 + xy))
        } else if j < 0 && j + top <= -2 {
            (2.0 * qv.powi((-j - top) as i32) * x.abs().max(y.abs()).max(1.0)).min(1.0)
        } else {
            1.0
        }
    };
    let s = tail_bounded_sum(
        |j| {
            let a = jackson_qbessel3_scaled(j + m, Complex64::new(x, 0.0), q, policy)?;
            let b = jackson_qbessel3_scaled(j + n, Complex64::new(y, 0.0), q, policy)?;
            (a * b).try_complex("q-Bessel product")
        },
        ratio,
        SumRange::Bilateral,
        &SeriesPolicy { rel_tol: policy.rel_tol.min(1e-15), ..*policy },
    )?;
    Ok(s.value.re)
}

/// Relative residual of sum_j J_j(x; q)^2 = 1 / (1 - x^2), |x| < 1.
pub fn qbessel_sum_form(x: f64, q: QBase, policy: &SeriesPolicy) -> Result<f64> {
    if x.abs() >= 1.0 || x.is_nan() {
        return domain(format!("|x| = {} is not below 1", x.abs()));
    }
    let s = bessel_product_sum(0, 0, x, x, q, policy)?;
    let rhs = 1.0 / (1.0 - x * x);
    Ok((s - rhs).abs() / rhs)
}

/// sum_j J_j((1 - q) z; q)^2 for each q; these approach 1 as q -> 1.
pub fn bessel_trend(z: f64, qs: &[f64], policy: &SeriesPolicy) -> Result<Vec<f64>> {
    qs.iter()
        .map(|&qv| {
            let q = QBase::new(qv)?;
            let x = (1.0 - qv) * z;
            bessel_product_sum(0, 0, x, x, q, policy)
        })
        .collect()
}
