//! Adaptive Simpson quadrature on a bounded interval.
//!
//! The interval is cut into equal panels that are refined independently (in
//! parallel); each panel gets an equal share of the global error target.

use crate::error::{QError, Result};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bound on integrand evaluations over the whole interval.
    pub max_evals: usize,
    pub panels: usize,
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-9, abs_tol: 1e-15, max_evals: 2_000_000, panels: 16, max_depth: 48 }
    }
}

struct Panel<'a, F> {
    f: &'a F,
    evals: usize,
    budget: usize,
    max_depth: u32,
}

impl<F: Fn(f64) -> Result<f64>> Panel<'_, F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(QError::Domain(format!("integrand is not finite at {x}")));
        }
        Ok(v)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let h = (b - a) / 12.0;
        let left = h * (fa + 4.0 * flm + fm);
        let right = h * (fm + 4.0 * frm + fb);
        let both = left + right;
        let diff = both - whole;
        if diff.abs() <= 15.0 * eps {
            return Ok(both + diff / 15.0);
        }
        if depth >= self.max_depth || self.evals >= self.budget || m <= a || m >= b {
            return Err(QError::QuadratureFailure { a, b });
        }
        let l = self.refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1)?;
        let r = self.refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1)?;
        Ok(l + r)
    }
}

/// Integral of `f` over [a, b] to within max(abs_tol, rel_tol * |I|), where
/// |I| is estimated from a coarse first pass.
pub fn integrate<F>(f: &F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(QError::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, opts).map(|v| -v);
    }
    let n = opts.panels.max(1);
    let h = (b - a) / n as f64;
    let edges: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + h * i as f64 }).collect();

    // coarse pass: three-point Simpson per panel, also reused as seeds
    let seeds: Vec<(f64, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (x0, x1) = (edges[i], edges[i + 1]);
            Ok((f(x0)?, f(0.5 * (x0 + x1))?, f(x1)?))
        })
        .collect::<Result<_>>()?;
    let coarse: f64 = (0..n).map(|i| (edges[i + 1] - edges[i]) / 6.0 * (seeds[i].0 + 4.0 * seeds[i].1 + seeds[i].2)).sum();
    let mass: f64 = (0..n)
        .map(|i| (edges[i + 1] - edges[i]) / 6.0 * (seeds[i].0.abs() + 4.0 * seeds[i].1.abs() + seeds[i].2.abs()))
        .sum();
    let target = opts.abs_tol.max(opts.rel_tol * coarse.abs().max(1e-3 * mass));
    let eps = target / n as f64;
    let budget = (opts.max_evals / n).max(16);

    let parts: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (x0, x1) = (edges[i], edges[i + 1]);
            let (fa, fm, fb) = seeds[i];
            let whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
            let mut p = Panel { f, evals: 0, budget, max_depth: opts.max_depth };
            p.refine(x0, x1, fa, fm, fb, whole, eps, 0)
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}
