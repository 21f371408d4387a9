//! One function per command: each returns its results payload, the
//! residual families it checked, and optional CSV text.

use crate::config::{Command, RunConfig, Suite, TParam, Truncation};
use crate::report::Family;
use crate::CliError;
use qspectra::operator_a::{
    og_ramanujan, og_varphi, point_spectrum_a, secular_residual, wronskian_psi_scaled, ExtensionParam, IdentityCheck,
    RamanujanRelation, VarphiRelation, SECULAR_TOLERANCE,
};
use qspectra::operator_b::{
    ac_density, default_measure_quad, eigenvector_b, eigenvector_norm, f_n, point_spectrum_b, qbessel_orthogonality,
    qbessel_sum_form, wronskian_at, wronskian_fg, BParams, BSpectralMeasure, NormMethod, SpectralSet, WronskianMethod,
};
use qspectra::oracle::{eigen_tridiag_seeded, truncate_a, truncate_b, DEFAULT_SEED};
use qspectra::qkernel::{theta, xi, QBase, SeriesPolicy, ThetaMethod, XiMethod};
use qspectra::{Complex64, QError, SpectrumWindow};
use serde_json::{json, Value};
use std::f64::consts::PI;

pub struct Outcome {
    pub results: Value,
    pub families: Vec<Family>,
    pub csv: Option<String>,
}

/// Tags a library error with the identity or operation that raised it.
fn ctx(what: &'static str) -> impl Fn(QError) -> CliError {
    move |e| CliError::from_library(what, e)
}

struct Ctx {
    q: QBase,
    policy: SeriesPolicy,
    tol: Option<f64>,
}

impl Ctx {
    fn family(&self, name: &str, default: f64) -> Family {
        Family::new(name, self.tol.unwrap_or(default))
    }

    fn params(&self, alpha: f64) -> Result<BParams, CliError> {
        BParams::new(alpha, self.q).map_err(ctx("parameters"))
    }
}

fn window((lo, hi): (i64, i64)) -> Result<SpectrumWindow, CliError> {
    SpectrumWindow::new(lo, hi).map_err(ctx("window"))
}

pub fn dispatch(config: &RunConfig) -> Result<Outcome, CliError> {
    let c = Ctx { q: QBase::new(config.q).map_err(ctx("q"))?, policy: SeriesPolicy::default(), tol: config.tolerance };
    match &config.command {
        Command::SpecA { t, window: w } => spec_a(&c, *t, window(*w)?),
        Command::SpecB { alpha, m_max } => spec_b(&c, *alpha, *m_max),
        Command::EigvecB { alpha, m, window: w } => eigvec_b(&c, *alpha, *m, window(*w)?),
        Command::MeasureB { alpha, k, l, set } => measure_b(&c, *alpha, *k, *l, set.as_deref()),
        Command::DensityGrid { alpha, k, l, grid } => density_grid(&c, *alpha, *k, *l, *grid),
        Command::Verify { suite, alpha } => verify(&c, *suite, *alpha),
        Command::Oracle { operator, alpha, window: w, seed } => oracle(&c, *operator, *alpha, window(*w)?, *seed),
    }
}

fn spec_a(c: &Ctx, t: TParam, w: SpectrumWindow) -> Result<Outcome, CliError> {
    let tp = match t {
        TParam::Finite(v) => ExtensionParam::Finite(v),
        TParam::Infinity => ExtensionParam::Infinity,
    };
    let spec = point_spectrum_a(tp, c.q, w, &c.policy).map_err(ctx("point spectrum of A"))?;
    let mut fam = c.family("secular", SECULAR_TOLERANCE);
    let mut points = Vec::new();
    for (branch, list) in [("positive", &spec.positive_branch), ("negative", &spec.negative_branch)] {
        for &(n, x) in list {
            let r = secular_residual(Complex64::new(x, 0.0), tp, c.q, &c.policy).map_err(ctx("secular residual"))?;
            points.push(json!({ "branch": branch, "n": n, "x": x, "secular_residual": fam.push(r), "tolerance": fam.tolerance() }));
        }
    }
    points.sort_by(|a, b| a["x"].as_f64().unwrap().total_cmp(&b["x"].as_f64().unwrap()));
    Ok(Outcome { results: json!({ "s": spec.s, "points": points }), families: vec![fam], csv: None })
}

/// max_j |v_{j-1} + alpha q^{-j} v_j + v_{j+1} - mu v_j| / ||v|| over the
/// interior of the window.
fn eigen_row_residual(v: &[f64], w: SpectrumWindow, mu: f64, p: &BParams, norm: f64) -> f64 {
    (1..v.len().saturating_sub(1))
        .map(|i| {
            let j = w.n_min + i as i64;
            (v[i - 1] + p.alpha() * p.q().pow(-j) * v[i] + v[i + 1] - mu * v[i]).abs()
        })
        .fold(0.0, f64::max)
        / norm
}

fn spec_b(c: &Ctx, alpha: f64, m_max: i64) -> Result<Outcome, CliError> {
    let p = c.params(alpha)?;
    let list = point_spectrum_b(&p, m_max).map_err(ctx("point spectrum of B"))?;
    let mut fam = c.family("eigenvector-recurrence", 1e-10);
    let w = SpectrumWindow::symmetric(10);
    let mut out = Vec::new();
    for e in &list {
        let v = eigenvector_b(e.m, &p, w, &c.policy).map_err(ctx("eigenvector of B"))?;
        let norm = eigenvector_norm(e.m, &p, NormMethod::ClosedForm, &c.policy).map_err(ctx("eigenvector norm"))?;
        let r = fam.push(eigen_row_residual(&v, w, e.value, &p, norm));
        out.push(json!({ "m": e.m, "eigenvalue": e.value, "recurrence_residual": r, "tolerance": fam.tolerance() }));
    }
    let delta = p.delta();
    Ok(Outcome { results: json!({ "delta": delta, "eigenvalues": out }), families: vec![fam], csv: None })
}

fn eigvec_b(c: &Ctx, alpha: f64, m: i64, w: SpectrumWindow) -> Result<Outcome, CliError> {
    let p = c.params(alpha)?;
    let v = eigenvector_b(m, &p, w, &c.policy).map_err(ctx("eigenvector of B"))?;
    let closed = eigenvector_norm(m, &p, NormMethod::ClosedForm, &c.policy).map_err(ctx("eigenvector norm"))?;
    let direct = eigenvector_norm(m, &p, NormMethod::DirectSum, &c.policy).map_err(ctx("eigenvector norm"))?;
    let mu = qspectra::operator_b::eigenvalue_b(m, &p);
    let mut norm_fam = c.family("norm-closed-vs-direct", 1e-10);
    let mut rec_fam = c.family("eigenvector-recurrence", 1e-10);
    let rn = norm_fam.push((closed - direct).abs() / closed);
    let rr = rec_fam.push(eigen_row_residual(&v, w, mu, &p, closed));
    let comps: Vec<Value> = w.iter().zip(&v).map(|(j, x)| json!({ "j": j, "v": x })).collect();
    let results = json!({
        "m": m,
        "eigenvalue": mu,
        "norm": { "closed_form": closed, "direct_sum": direct, "residual": rn, "tolerance": norm_fam.tolerance() },
        "recurrence_residual": rr,
        "recurrence_tolerance": rec_fam.tolerance(),
        "components": comps,
    });
    Ok(Outcome { results, families: vec![norm_fam, rec_fam], csv: None })
}

fn measure_b(c: &Ctx, alpha: f64, k: i64, l: i64, set: Option<&[(f64, f64)]>) -> Result<Outcome, CliError> {
    let p = c.params(alpha)?;
    let spec = match set {
        None => SpectralSet::Real,
        Some(iv) => SpectralSet::Intervals(iv.to_vec()),
    };
    let quad = default_measure_quad();
    let meas = BSpectralMeasure::new(k, l, &p, &c.policy).map_err(ctx("spectral measure"))?;
    let value = meas.measure(&spec, &quad).map_err(ctx("spectral measure"))?;
    let atoms: Vec<Value> = meas
        .atoms
        .iter()
        .filter(|a| spec.contains(a.location))
        .map(|a| json!({ "m": a.m, "location": a.location, "weight": a.weight }))
        .collect();
    let mut families = Vec::new();
    let mut results = json!({ "k": k, "l": l, "value": value, "atoms": atoms, "quadrature_rel_tol": quad.rel_tol });
    if set.is_none() {
        let mut fam = c.family("measure-completeness", 1e-6);
        let target = if k == l { 1.0 } else { 0.0 };
        results["completeness_residual"] = json!(fam.push((value - target).abs()));
        results["tolerance"] = json!(fam.tolerance());
        families.push(fam);
    }
    Ok(Outcome { results, families, csv: None })
}

fn density_grid(c: &Ctx, alpha: f64, k: i64, l: i64, grid: usize) -> Result<Outcome, CliError> {
    let p = c.params(alpha)?;
    let mut csv = String::from("phi,density_kl,re_f_k,im_f_k,re_f_l,im_f_l\n");
    let mut rows = Vec::with_capacity(grid);
    let mut fam = c.family("diagonal-density-nonnegative", 0.0);
    for i in 0..grid {
        let phi = PI * (i as f64 + 0.5) / grid as f64;
        let d = ac_density(phi, k, l, &p, &c.policy).map_err(ctx("AC density"))?;
        let e = Complex64::from_polar(1.0, phi);
        let fk = f_n(k, e, &p, &c.policy).map_err(ctx("f_n on the unit circle"))?;
        let fl = f_n(l, e, &p, &c.policy).map_err(ctx("f_n on the unit circle"))?;
        if k == l {
            fam.push((-d).max(0.0));
        }
        csv.push_str(&format!("{phi:?},{d:?},{:?},{:?},{:?},{:?}\n", fk.re, fk.im, fl.re, fl.im));
        rows.push(json!({ "phi": phi, "density_kl": d, "f_k": [fk.re, fk.im], "f_l": [fl.re, fl.im] }));
    }
    let families = if k == l { vec![fam] } else { Vec::new() };
    Ok(Outcome { results: json!({ "k": k, "l": l, "nodes": grid, "rows": rows }), families, csv: Some(csv) })
}

fn identity_residual(check: &IdentityCheck) -> f64 {
    if check.rhs.norm() == 0.0 {
        check.relative_to_scale()
    } else {
        check.residual
    }
}

fn need_alpha(alpha: Option<f64>) -> Result<f64, CliError> {
    alpha.ok_or_else(|| CliError::Usage("this suite needs --alpha".into()))
}

fn verify(c: &Ctx, suite: Suite, alpha: Option<f64>) -> Result<Outcome, CliError> {
    let qv = c.q.value();
    let mut families = Vec::new();
    let mut cases = Vec::new();
    let mut record = |fam: &mut Family, label: String, r: f64| {
        let r = fam.push(r);
        cases.push(json!({ "family": fam.summary().family, "case": label, "residual": r, "tolerance": fam.tolerance() }));
    };
    match suite {
        Suite::TripleProduct => {
            let mut fam = c.family("theta-product-vs-sum", 1e-12);
            for r in [0.1, 0.37, 0.9, 1.7, 3.0] {
                for j in 0..10 {
                    let x = Complex64::from_polar(r, -PI + (j as f64 + 0.5) * PI / 5.0);
                    let a = theta(x, c.q, ThetaMethod::Product, &c.policy).map_err(ctx("theta product"))?;
                    let b = theta(x, c.q, ThetaMethod::BilateralSum, &c.policy).map_err(ctx("theta bilateral sum"))?;
                    record(&mut fam, format!("x = {x}"), (a - b).norm() / a.norm());
                }
            }
            families.push(fam);
        }
        Suite::Xi => {
            let mut inside = c.family("xi-three-methods", 1e-11);
            let mut outside = c.family("xi-closed-form-continuation", 1e-11);
            let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm();
            for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
                for j in 0..6 {
                    let z = Complex64::from_polar(qv.powf(s - 0.5), 0.3 + j as f64);
                    let ml = xi(z, c.q, XiMethod::MittagLeffler, &c.policy).map_err(ctx("xi Mittag-Leffler"))?;
                    let la = xi(z, c.q, XiMethod::Laurent, &c.policy).map_err(ctx("xi Laurent"))?;
                    let cf = xi(z, c.q, XiMethod::ClosedForm, &c.policy).map_err(ctx("xi closed form"))?;
                    record(&mut inside, format!("z = {z}"), rel(ml, la).max(rel(ml, cf)));
                }
            }
            for (i, r) in [3.0, 10.0, 40.0, 0.3, 0.05].iter().enumerate() {
                for a in [0.7, 2.2] {
                    let z = Complex64::from_polar(if i < 3 { r / qv.sqrt() } else { r * qv.sqrt() }, a);
                    let ml = xi(z, c.q, XiMethod::MittagLeffler, &c.policy).map_err(ctx("xi Mittag-Leffler"))?;
                    let cf = xi(z, c.q, XiMethod::ClosedForm, &c.policy).map_err(ctx("xi closed form"))?;
                    record(&mut outside, format!("z = {z}"), rel(ml, cf));
                }
            }
            families.push(inside);
            families.push(outside);
        }
        Suite::OgRamanujan => {
            let mut ram = c.family("og-ramanujan", 1e-9);
            let mut var = c.family("og-varphi", 1e-9);
            let z = Complex64::new(0.8, 0.0);
            let z6 = Complex64::new(0.6, 0.0);
            for r in [
                RamanujanRelation::First { z, l: 0 },
                RamanujanRelation::First { z, l: 2 },
                RamanujanRelation::Second { z, l: 1 },
                RamanujanRelation::Third { z: z6, k: 1, l: 1 },
                RamanujanRelation::Third { z: z6, k: 0, l: 1 },
            ] {
                let check = og_ramanujan(r, c.q, &c.policy).map_err(ctx("Ramanujan orthogonality"))?;
                record(&mut ram, format!("{r:?}"), identity_residual(&check));
            }
            for r in [
                VarphiRelation::First { omega: 1.1, m: 0, n: 0 },
                VarphiRelation::First { omega: 1.1, m: 0, n: 1 },
                VarphiRelation::Second { omega: 1.1, m: 0, n: 1 },
                VarphiRelation::Dual { omega: 0.9, k: 2, l: 2 },
                VarphiRelation::Dual { omega: 0.9, k: 0, l: 1 },
            ] {
                let check = og_varphi(r, c.q, &c.policy).map_err(ctx("varphi orthogonality"))?;
                record(&mut var, format!("{r:?}"), identity_residual(&check));
            }
            families.push(ram);
            families.push(var);
        }
        Suite::OgQbessel => {
            let p = c.params(need_alpha(alpha)?)?;
            let delta = p.delta().ok_or_else(|| CliError::Usage("the q-Bessel suite needs alpha != 0".into()))?;
            let mut og = c.family("qbessel-orthogonality", 1e-10);
            let mut sf = c.family("qbessel-summation", 1e-10);
            for m in delta + 1..=delta + 3 {
                for n in delta + 1..=delta + 3 {
                    let r = qbessel_orthogonality(m, n, &p, &c.policy).map_err(ctx("q-Bessel orthogonality"))?;
                    record(&mut og, format!("m = {m}, n = {n}"), r);
                }
            }
            for x in [0.2, 0.5, 0.8] {
                let r = qbessel_sum_form(x, c.q, &c.policy).map_err(ctx("q-Bessel summation formula"))?;
                record(&mut sf, format!("x = {x}"), r);
            }
            families.push(og);
            families.push(sf);
        }
        Suite::Wronskians => {
            let p = c.params(need_alpha(alpha)?)?;
            let mut psi = c.family("psi-wronskian", 1e-11);
            let mut fg = c.family("fg-wronskian-closed-form", 1e-11);
            let mut flat = c.family("fg-wronskian-constancy", 1e-11);
            let exact = Complex64::new(0.0, 2.0 * qv.sqrt());
            for x in [0.7, 1.3] {
                for n in [-2, 0, 3, 7] {
                    let (w, scale) =
                        wronskian_psi_scaled(n, Complex64::new(x, 0.0), c.q, &c.policy).map_err(ctx("psi Wronskian"))?;
                    record(&mut psi, format!("x = {x}, n = {n}"), (w - exact).norm() / exact.norm().max(scale));
                }
            }
            for z in [Complex64::new(0.3, 0.0), Complex64::new(0.4, 0.2)] {
                let closed = wronskian_fg(z, &p, WronskianMethod::ClosedForm, &c.policy).map_err(ctx("W(f, g) closed form"))?;
                // a product far larger than W means cancellation; judge against it
                let mut ws = Vec::new();
                for n in [-10, 0, 10] {
                    let (w, scale) = wronskian_at(n, z, &p, &c.policy).map_err(ctx("W(f, g)"))?;
                    ws.push((w, closed.norm().max(1e-3 * scale)));
                }
                record(&mut fg, format!("z = {z}"), (ws[1].0 - closed).norm() / ws[1].1);
                let spread = ws.iter().map(|(w, s)| (w - ws[1].0).norm() / s).fold(0.0, f64::max);
                record(&mut flat, format!("z = {z}, n in {{-10, 0, 10}}"), spread);
            }
            families.push(psi);
            families.push(fg);
            families.push(flat);
        }
        Suite::MeasureCompleteness => {
            let p = c.params(need_alpha(alpha)?)?;
            let mut fam = c.family("measure-completeness", 1e-6);
            for k in -1..=1 {
                for l in -1..=1 {
                    let meas = BSpectralMeasure::new(k, l, &p, &c.policy).map_err(ctx("spectral measure"))?;
                    let e = meas.measure(&SpectralSet::Real, &default_measure_quad()).map_err(ctx("spectral measure"))?;
                    let target = if k == l { 1.0 } else { 0.0 };
                    record(&mut fam, format!("E_{{{k},{l}}}(R)"), (e - target).abs());
                }
            }
            families.push(fam);
        }
    }
    Ok(Outcome { results: json!({ "suite": suite, "cases": cases }), families, csv: None })
}

fn oracle(c: &Ctx, operator: Truncation, alpha: Option<f64>, w: SpectrumWindow, seed: Option<u64>) -> Result<Outcome, CliError> {
    let m = match operator {
        Truncation::A => truncate_a(c.q, w).map_err(ctx("A truncation"))?,
        Truncation::B => truncate_b(&c.params(need_alpha(alpha)?)?, w).map_err(ctx("B truncation"))?,
    };
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let dec = eigen_tridiag_seeded(&m, true, seed).map_err(ctx("tridiagonal eigensolver"))?;
    let mut fam = Family::new("eigenpair-residual", c.tol.unwrap_or(dec.residual_bound));
    if let Some(vectors) = &dec.vectors {
        for (lambda, v) in dec.values.iter().zip(vectors) {
            let mv = m.apply(v);
            fam.push(mv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt());
        }
    }
    let results = json!({
        "operator": operator,
        "window": [w.n_min, w.n_max],
        "matrix_norm": m.norm(),
        "eigenvalues": dec.values,
        "residual_bound": dec.residual_bound,
        "seed": dec.seed,
    });
    Ok(Outcome { results, families: vec![fam], csv: None })
}
