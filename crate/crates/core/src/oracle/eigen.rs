//! Eigenvalues by Sturm-count bisection, eigenvectors by inverse iteration.

use super::tridiag::TridiagonalMatrix;
use crate::error::{QError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Seed used by `eigen_tridiag` for inverse-iteration start vectors.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

const MAX_BISECTIONS: usize = 200;
const MAX_INVERSE_STEPS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector of `values[i]`, indexed by
    /// storage row.
    pub vectors: Option<Vec<Vec<f64>>>,
    pub residual_bound: f64,
    pub seed: u64,
}

pub fn eigen_tridiag(m: &TridiagonalMatrix, want_vectors: bool) -> Result<EigenDecomposition> {
    eigen_tridiag_seeded(m, want_vectors, DEFAULT_SEED)
}

pub fn eigen_tridiag_seeded(m: &TridiagonalMatrix, want_vectors: bool, seed: u64) -> Result<EigenDecomposition> {
    let l = m.len();
    let norm = m.norm();
    let (lo, hi) = m.gershgorin();
    let values: Vec<f64> = (0..l).into_par_iter().map(|i| eigenvalue(m, i, lo, hi, norm)).collect::<Result<_>>()?;
    let residual_bound = 1e-10 * norm.max(f64::MIN_POSITIVE);
    let vectors = if want_vectors { Some(eigenvectors(m, &values, residual_bound, seed)?) } else { None };
    Ok(EigenDecomposition { values, vectors, residual_bound, seed })
}

/// The i-th smallest eigenvalue (0-based).
fn eigenvalue(m: &TridiagonalMatrix, i: usize, lo0: f64, hi0: f64, norm: f64) -> Result<f64> {
    let pad = 2.0 * f64::EPSILON * norm + f64::MIN_POSITIVE;
    let (mut lo, mut hi) = (lo0 - pad, hi0 + pad);
    let tiny = 4.0 * f64::MIN_POSITIVE;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= (2.0 * f64::EPSILON * mid.abs()).max(tiny) || mid <= lo || mid >= hi {
            break;
        }
        if m.count_below(mid) > i {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi - lo > 1e-13 * norm && hi - lo > 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
        return Err(QError::ConvergenceFailure { index: i, width: hi - lo });
    }
    Ok(secant_polish(m, lo, hi))
}

/// One secant step on det(M - x I) inside the final bracket; the midpoint is
/// kept if the step leaves it.
fn secant_polish(m: &TridiagonalMatrix, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    if lo == hi {
        return mid;
    }
    let (s0, l0) = m.log_det(lo);
    let (s1, l1) = m.log_det(hi);
    if s0 == s1 {
        return mid;
    }
    // det(hi)/det(lo) = -exp(l1 - l0)
    let ratio = s1 * s0 * (l1 - l0).exp();
    let x = lo + (hi - lo) / (1.0 - ratio);
    if x.is_finite() && x > lo && x < hi {
        x
    } else {
        mid
    }
}

/// Groups of consecutive eigenvalues closer than `gap` to a neighbour.
fn clusters(values: &[f64], gap: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i] - values[i - 1] > gap {
            out.push((start, i));
            start = i;
        }
    }
    out
}

fn eigenvectors(m: &TridiagonalMatrix, values: &[f64], bound: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    let norm = m.norm();
    let groups = clusters(values, 1e-8 * norm);
    let per_group: Vec<Vec<Vec<f64>>> = groups
        .par_iter()
        .map(|&(a, b)| {
            let mut vs: Vec<Vec<f64>> = Vec::with_capacity(b - a);
            for (i, &lambda) in values.iter().enumerate().take(b).skip(a) {
                let v = inverse_iteration(m, lambda, i, &vs, bound, seed)?;
                vs.push(v);
            }
            Ok(vs)
        })
        .collect::<Result<_>>()?;
    Ok(per_group.into_iter().flatten().collect())
}

fn inverse_iteration(
    m: &TridiagonalMatrix,
    lambda: f64,
    index: usize,
    previous: &[Vec<f64>],
    bound: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let l = m.len();
    let lu = TridiagLu::new(m, lambda);
    for attempt in 0..2u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64).wrapping_add(attempt * l as u64));
        let mut v: Vec<f64> = (0..l).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        for _ in 0..MAX_INVERSE_STEPS {
            v = lu.solve(&v);
            for u in previous {
                let c = dot(&v, u);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
            if !normalize(&mut v) {
                break;
            }
            if residual(m, lambda, &v) <= bound {
                return Ok(v);
            }
        }
    }
    Err(QError::Inconsistent { what: "inverse iteration", residual: f64::NAN })
}

pub(crate) fn residual(m: &TridiagonalMatrix, lambda: f64, v: &[f64]) -> f64 {
    let mv = m.apply(v);
    mv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> bool {
    let n = dot(v, v).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

/// LU factorisation of M - lambda I with partial pivoting. Row i of U has
/// entries u0 (diagonal), u1, u2 (the fill-in from a row swap).
struct TridiagLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn new(m: &TridiagonalMatrix, lambda: f64) -> Self {
        let l = m.len();
        let eps_norm = f64::EPSILON * m.norm().max(f64::MIN_POSITIVE);
        let mut u0 = vec![0.0; l];
        let mut u1 = vec![0.0; l];
        let mut u2 = vec![0.0; l];
        let mut mult = vec![0.0; l];
        let mut swapped = vec![false; l];
        // current row: (a, b, c) at columns (i, i+1, i+2)
        let mut a = m.diag[0] - lambda;
        let mut b = if l > 1 { m.offdiag[0] } else { 0.0 };
        for i in 0..l {
            if i + 1 == l {
                u0[i] = if a == 0.0 { eps_norm } else { a };
                break;
            }
            let sub = m.offdiag[i];
            let next_diag = m.diag[i + 1] - lambda;
            let next_sup = if i + 2 < l { m.offdiag[i + 1] } else { 0.0 };
            if sub.abs() > a.abs() {
                // swap rows i and i+1
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = next_diag;
                u2[i] = next_sup;
                let f = a / sub;
                mult[i] = f;
                a = b - f * next_diag;
                b = -f * next_sup;
            } else {
                let piv = if a == 0.0 { eps_norm } else { a };
                u0[i] = piv;
                u1[i] = b;
                u2[i] = 0.0;
                let f = sub / piv;
                mult[i] = f;
                a = next_diag - f * b;
                b = next_sup;
            }
        }
        TridiagLu { u0, u1, u2, mult, swapped }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let l = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..l.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; l];
        for i in (0..l).rev() {
            let mut s = y[i];
            if i + 1 < l {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < l {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn free(l: usize) -> TridiagonalMatrix {
        TridiagonalMatrix::new(vec![0.0; l], vec![1.0; l - 1], 0).unwrap()
    }

    #[test]
    fn free_laplacian_spectrum() {
        let m = free(10);
        let e = eigen_tridiag(&m, true).unwrap();
        let mut exact: Vec<f64> = (1..=10).map(|k| 2.0 * (k as f64 * PI / 11.0).cos()).collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in e.values.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
        let vs = e.vectors.unwrap();
        for (lam, v) in e.values.iter().zip(&vs) {
            assert!(residual(&m, *lam, v) <= e.residual_bound);
        }
        for i in 0..vs.len() {
            for j in 0..i {
                assert!(dot(&vs[i], &vs[j]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        let (a, d) = (0.3, -1.7);
        let m = TridiagonalMatrix::new(vec![a, d], vec![1.0], 0).unwrap();
        let e = eigen_tridiag(&m, false).unwrap();
        let r = (((a - d) / 2.0f64).powi(2) + 1.0).sqrt();
        assert!((e.values[0] - ((a + d) / 2.0 - r)).abs() < 1e-15);
        assert!((e.values[1] - ((a + d) / 2.0 + r)).abs() < 1e-15);
    }

    #[test]
    fn diagonal_shift_moves_every_eigenvalue() {
        let m = TridiagonalMatrix::new(vec![0.1, 2.0, -0.5, 1.2, 0.0], vec![0.3, 1.0, 0.7, 0.2], 0).unwrap();
        let a = eigen_tridiag(&m, false).unwrap();
        let b = eigen_tridiag(&m.shifted(0.37), false).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((y - x - 0.37).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_values_get_orthogonal_vectors() {
        // block diagonal: two copies of the same 2x2 block
        let m = TridiagonalMatrix::new(vec![1.0, 2.0, 1.0, 2.0], vec![0.5, 0.0, 0.5], 0).unwrap();
        let e = eigen_tridiag(&m, true).unwrap();
        let vs = e.vectors.unwrap();
        assert!((e.values[0] - e.values[1]).abs() < 1e-14);
        assert!(dot(&vs[0], &vs[1]).abs() < 1e-10);
    }

    #[test]
    fn seed_is_recorded_and_results_repeat() {
        let m = free(12);
        let a = eigen_tridiag_seeded(&m, true, 7).unwrap();
        let b = eigen_tridiag_seeded(&m, true, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, 7);
    }
}
