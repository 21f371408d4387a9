//! The twelve acceptance criteria, run at their stated tolerances. Prints
//! one PASS/FAIL line per criterion and fails if any criterion fails.

use num_complex::Complex64;
use qspectra::operator_a::{
    og_ramanujan, og_varphi, phi_inverse, phi_map, point_spectrum_a, secular_residual, varphi_norm_sq, ExtensionParam,
    IdentityCheck, NormSqMethod, PhiInverseMethod, RamanujanRelation, VarphiRelation,
};
use qspectra::operator_b::{
    ac_density, darboux_boundary, darboux_residual, eigenvalue_b, eigenvector_norm, f_n, green_function,
    qbessel_orthogonality, qbessel_sum_form, spectral_measure, stieltjes_perron_density, BParams,
    NormMethod, SpectralSet,
};
use qspectra::oracle::{eigen_tridiag, truncate_b};
use qspectra::qkernel::{theta, xi, QBase, SeriesPolicy, ThetaMethod, XiMethod};
use qspectra::SpectrumWindow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

type Outcome = Result<String, String>;

const SEED: u64 = 20240611;

fn pol() -> SeriesPolicy {
    SeriesPolicy::default()
}

fn q(v: f64) -> QBase {
    QBase::new(v).unwrap()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// Ok with a summary if `worst <= tol`.
fn verdict(what: &str, worst: f64, tol: f64) -> Outcome {
    let line = format!("{what}: worst {worst:.2e} (tol {tol:.0e})");
    if worst <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn ac01_triple_product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..150 {
        let qv = rng.gen_range(0.1..0.9);
        let x = Complex64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI));
        let a = theta(x, q(qv), ThetaMethod::Product, &pol()).map_err(err)?;
        let b = theta(x, q(qv), ThetaMethod::BilateralSum, &pol()).map_err(err)?;
        worst = worst.max((a - b).norm() / a.norm());
    }
    verdict("product vs bilateral sum, 150 samples, relative", worst, 1e-12)
}

fn ac02_xi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm();
    for qv in [0.3, 0.5, 0.8] {
        let qb = q(qv);
        for _ in 0..10 {
            let z = Complex64::from_polar(qv.powf(rng.gen_range(-0.48..0.48)), rng.gen_range(-3.1..3.1));
            let ml = xi(z, qb, XiMethod::MittagLeffler, &pol()).map_err(err)?;
            let la = xi(z, qb, XiMethod::Laurent, &pol()).map_err(err)?;
            let cf = xi(z, qb, XiMethod::ClosedForm, &pol()).map_err(err)?;
            worst = worst.max(rel(ml, la)).max(rel(ml, cf));
        }
    }
    let qb = q(0.5);
    for i in 0..10 {
        let r = if i % 2 == 0 { rng.gen_range(1.5..20.0) } else { rng.gen_range(0.02..0.6) };
        let z = Complex64::from_polar(r, rng.gen_range(0.2..3.0));
        let ml = xi(z, qb, XiMethod::MittagLeffler, &pol()).map_err(err)?;
        let cf = xi(z, qb, XiMethod::ClosedForm, &pol()).map_err(err)?;
        worst = worst.max(rel(ml, cf));
    }
    verdict("Mittag-Leffler / Laurent / closed form, 30 inside + 10 outside", worst, 1e-11)
}

fn ac03_a_spectra() -> Outcome {
    let qb = q(0.5);
    let window = SpectrumWindow::new(-5, 5).unwrap();
    let mut worst_family = 0.0f64;
    for (t, odd) in [(ExtensionParam::Finite(0.0), 1), (ExtensionParam::Infinity, 0)] {
        let points: Vec<f64> = point_spectrum_a(t, qb, window, &pol()).map_err(err)?.points().collect();
        for n in -4..=4 {
            for sign in [1.0, -1.0] {
                let target = sign * qb.pow(2 * n + odd);
                let miss = points.iter().map(|x| (x - target).abs() / target.abs()).fold(f64::INFINITY, f64::min);
                worst_family = worst_family.max(miss);
            }
        }
    }
    let mut worst_secular = 0.0f64;
    for t in [-5.0, -1.0, 0.3, 2.0, 7.0] {
        let t = ExtensionParam::Finite(t);
        for x in point_spectrum_a(t, qb, window, &pol()).map_err(err)?.points() {
            worst_secular = worst_secular.max(secular_residual(Complex64::new(x, 0.0), t, qb, &pol()).map_err(err)?);
        }
    }
    let a = verdict("t = 0, inf families", worst_family, 1e-10);
    let b = verdict("secular residual for t in {-5, -1, 0.3, 2, 7}", worst_secular, 1e-9);
    join(a, b)
}

fn join(a: Outcome, b: Outcome) -> Outcome {
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(format!("{a}; {b}")),
        (Ok(a), Err(b)) | (Err(a), Ok(b)) | (Err(a), Err(b)) => Err(format!("{a}; {b}")),
    }
}

fn ac04_phi_round_trip() -> Outcome {
    let (mut round, mut methods) = (0.0f64, 0.0f64);
    for qv in [0.3, 0.5, 0.7] {
        let qb = q(qv);
        for t in [-20.0, -1.5, 0.0, 0.8, 12.0] {
            let tp = ExtensionParam::Finite(t);
            let s = phi_inverse(tp, qb, PhiInverseMethod::MonotoneInversion, &pol()).map_err(err)?;
            let s2 = phi_inverse(tp, qb, PhiInverseMethod::EllipticQuadrature, &pol()).map_err(err)?;
            let back = match phi_map(s, qb, &pol()).map_err(err)? {
                ExtensionParam::Finite(v) => v,
                ExtensionParam::Infinity => f64::INFINITY,
            };
            round = round.max((back - t).abs() / t.abs().max(1.0));
            methods = methods.max((s - s2).abs());
        }
    }
    join(verdict("Phi(Phi^-1(t)) = t", round, 1e-8), verdict("bisection vs elliptic quadrature", methods, 1e-7))
}

fn ac05_norm() -> Outcome {
    let mut worst = 0.0f64;
    for qv in [0.3, 0.5, 0.7] {
        for x in [0.4, 1.0, 2.3] {
            let x = Complex64::new(x, 0.0);
            let a = varphi_norm_sq(x, q(qv), NormSqMethod::ClosedForm, &pol()).map_err(err)?;
            let b = varphi_norm_sq(x, q(qv), NormSqMethod::DirectSum, &pol()).map_err(err)?;
            worst = worst.max((a - b).norm() / a.norm());
        }
    }
    verdict("closed form vs direct sum on a 3x3 (x, q) grid", worst, 1e-10)
}

/// Residual for a nonzero right-hand side, |LHS| / scale for a vanishing one.
type Criterion = (&'static str, fn() -> Outcome);

fn identity_residual(c: &IdentityCheck) -> f64 {
    if c.rhs.norm() == 0.0 {
        c.relative_to_scale()
    } else {
        c.residual
    }
}

fn ac06_orthogonality() -> Outcome {
    let qb = q(0.5);
    let z = Complex64::new(0.8, 0.0);
    let z6 = Complex64::new(0.6, 0.0);
    let ramanujan = [
        RamanujanRelation::First { z, l: 0 },
        RamanujanRelation::First { z, l: 2 },
        RamanujanRelation::Second { z, l: 1 },
        RamanujanRelation::Third { z: z6, k: 1, l: 1 },
        RamanujanRelation::Third { z: z6, k: 0, l: 1 },
    ];
    let varphi = [
        VarphiRelation::First { omega: 1.1, m: 0, n: 0 },
        VarphiRelation::First { omega: 1.1, m: 0, n: 1 },
        VarphiRelation::Second { omega: 1.1, m: 0, n: 1 },
        VarphiRelation::Dual { omega: 0.9, k: 2, l: 2 },
        VarphiRelation::Dual { omega: 0.9, k: 0, l: 1 },
    ];
    let mut worst = 0.0f64;
    for r in ramanujan {
        worst = worst.max(identity_residual(&og_ramanujan(r, qb, &pol()).map_err(err)?));
    }
    for r in varphi {
        worst = worst.max(identity_residual(&og_varphi(r, qb, &pol()).map_err(err)?));
    }
    verdict("Ramanujan and varphi relations, 10 sample points", worst, 1e-9)
}

fn ac07_b_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [0.8, 1.0] {
        let p = BParams::new(alpha, q(0.5)).map_err(err)?;
        let m = truncate_b(&p, SpectrumWindow::symmetric(80)).map_err(err)?;
        let values = eigen_tridiag(&m, false).map_err(err)?.values;
        for k in 1..=6 {
            let mu = eigenvalue_b(k, &p);
            worst = worst.max(values.iter().map(|v| (v - mu).abs()).fold(f64::INFINITY, f64::min));
        }
    }
    verdict("truncation [-80, 80], m = 1..6, absolute", worst, 1e-8)
}

fn ac08_eigenvector_norm() -> Outcome {
    let p = BParams::new(0.8, q(0.5)).map_err(err)?;
    let mut worst = 0.0f64;
    for m in 1..=4 {
        let a = eigenvector_norm(m, &p, NormMethod::ClosedForm, &pol()).map_err(err)?;
        let b = eigenvector_norm(m, &p, NormMethod::DirectSum, &pol()).map_err(err)?;
        worst = worst.max((a - b).abs() / a);
    }
    verdict("closed form vs direct sum, m = 1..4", worst, 1e-10)
}

fn ac09_completeness() -> Outcome {
    let p = BParams::new(0.8, q(0.5)).map_err(err)?;
    let mut worst = 0.0f64;
    for (k, l) in [(-2, -2), (0, 0), (3, 3), (0, 2)] {
        let e = spectral_measure(k, l, &SpectralSet::Real, &p, &pol()).map_err(err)?;
        let target = if k == l { 1.0 } else { 0.0 };
        worst = worst.max((e - target).abs());
    }
    verdict("E_kk(R) = 1 for k in {-2, 0, 3}, E_02(R) = 0", worst, 1e-6)
}

fn ac10_qbessel() -> Outcome {
    let p = BParams::new(0.8, q(0.5)).map_err(err)?;
    let mut og = 0.0f64;
    for m in 1..=3 {
        for n in 1..=3 {
            og = og.max(qbessel_orthogonality(m, n, &p, &pol()).map_err(err)?);
        }
    }
    let mut sf = 0.0f64;
    for qv in [0.3, 0.5] {
        for x in [0.2, 0.5, 0.8] {
            sf = sf.max(qbessel_sum_form(x, q(qv), &pol()).map_err(err)?);
        }
    }
    join(verdict("orthogonality, (m, n) in {1,2,3}^2", og, 1e-10), verdict("summation formula", sf, 1e-10))
}

fn ac11_asymptotics() -> Outcome {
    let p = BParams::new(0.8, q(0.5)).map_err(err)?;
    let mut ratio = 0.0f64;
    for phi in [PI / 4.0, PI / 2.0, 2.0 * PI / 3.0] {
        let r20 = darboux_residual(-20, phi, &p, &pol()).map_err(err)?;
        let r40 = darboux_residual(-40, phi, &p, &pol()).map_err(err)?;
        ratio = ratio.max(r40 / r20);
    }
    let mut slope = 0.0f64;
    for eps in [1.0, -1.0] {
        let g = darboux_boundary(eps, &p, &pol()).map_err(err)?;
        // eps^n f_n(eps) = slope |n| + O(1)
        let v = |n: i64| -> Result<f64, String> {
            let f = f_n(n, Complex64::new(eps, 0.0), &p, &pol()).map_err(err)?;
            Ok(eps.powi(n as i32) * f.re)
        };
        let fd = (v(-40)? - v(-30)?) / 10.0;
        slope = slope.max((fd - g.slope).abs() / g.slope.abs());
    }
    join(verdict("Darboux residual ratio n = -40 : -20", ratio, 0.1), verdict("endpoint slopes vs finite differences", slope, 0.05))
}

fn ac12_green() -> Outcome {
    let p = BParams::new(0.8, q(0.5)).map_err(err)?;
    let mut row = 0.0f64;
    for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.4)] {
        let mu = z + z.inv();
        for l in [0i64, 2] {
            let g = |k: i64| green_function(k, l, z, &p, &pol());
            for k in -5..=5 {
                let r = g(k - 1).map_err(err)? + p.alpha() * p.q().pow(-k) * g(k).map_err(err)? + g(k + 1).map_err(err)?
                    - mu * g(k).map_err(err)?;
                let target = if k == l { 1.0 } else { 0.0 };
                row = row.max((r - target).norm());
            }
        }
    }
    // the smeared density differs by eps d/dx Re G / pi, which is small in
    // absolute terms but not next to the density where the density is small
    let (mut sp, mut sp_rel) = (0.0f64, 0.0f64);
    for phi in [PI / 3.0, PI / 4.0, 2.0 * PI / 3.0] {
        let x = 2.0 * phi.cos();
        let smeared = stieltjes_perron_density(x, 1e-6, 0, 0, &p, &pol()).map_err(err)?;
        let exact = ac_density(phi, 0, 0, &p, &pol()).map_err(err)? / (2.0 * phi.sin());
        sp = sp.max((smeared - exact).abs());
        sp_rel = sp_rel.max((smeared - exact).abs() / exact);
    }
    let sp_line = format!("Stieltjes-Perron vs density at x in {{1, 1.41, -1}}, eps = 1e-6 (relative {sp_rel:.2e})");
    join(verdict("resolvent rows k in [-5, 5]", row, 1e-10), verdict(&sp_line, sp, 1e-4))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("AC-01 theta triple product", ac01_triple_product),
        ("AC-02 xi closed form", ac02_xi),
        ("AC-03 operator A explicit spectra", ac03_a_spectra),
        ("AC-04 Phi round trip", ac04_phi_round_trip),
        ("AC-05 varphi norm", ac05_norm),
        ("AC-06 orthogonality relations", ac06_orthogonality),
        ("AC-07 operator B eigenvalues vs oracle", ac07_b_oracle),
        ("AC-08 eigenvector norm", ac08_eigenvector_norm),
        ("AC-09 spectral-measure completeness", ac09_completeness),
        ("AC-10 q-Bessel identities", ac10_qbessel),
        ("AC-11 asymptotics", ac11_asymptotics),
        ("AC-12 Green-function consistency", ac12_green),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                println!("[FAIL] {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
