use crate::error::{QError, Result};
use crate::operator_b::BParams;
use crate::qkernel::QBase;
use crate::window::SpectrumWindow;

/// Real symmetric tridiagonal matrix; storage row 0 is lattice index
/// `index_offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub index_offset: i64,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, index_offset: i64) -> Result<Self> {
        let l = diag.len();
        if l < 2 {
            return Err(QError::WindowTooSmall { n_min: index_offset, n_max: index_offset + l as i64 - 1 });
        }
        if offdiag.len() != l - 1 {
            return Err(QError::InvalidParameter(format!("{} off-diagonal entries for {} rows", offdiag.len(), l)));
        }
        if diag.iter().chain(offdiag.iter()).any(|x| !x.is_finite()) {
            return Err(QError::InvalidParameter("non-finite matrix entry".into()));
        }
        Ok(TridiagonalMatrix { diag, offdiag, index_offset })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Lattice index of storage row i.
    pub fn lattice_index(&self, i: usize) -> i64 {
        self.index_offset + i as i64
    }

    /// Infinity norm (maximal absolute row sum).
    pub fn norm(&self) -> f64 {
        let l = self.len();
        (0..l)
            .map(|i| {
                let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < l { self.offdiag[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let l = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..l {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < l { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let l = self.len();
        (0..l)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < l {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// M + c I
    pub fn shifted(&self, c: f64) -> TridiagonalMatrix {
        TridiagonalMatrix {
            diag: self.diag.iter().map(|d| d + c).collect(),
            offdiag: self.offdiag.clone(),
            index_offset: self.index_offset,
        }
    }

    /// Smallest pivot magnitude allowed in the LDL^T recursion.
    fn pivmin(&self) -> f64 {
        let emax = self.offdiag.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `lambda`: the count of negative
    /// pivots of M - lambda I = L D L^T.
    pub fn count_below(&self, lambda: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut d = self.diag[0] - lambda;
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.offdiag[i - 1];
            d = (self.diag[i] - lambda) - e * e / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// (sign, ln|det(M - lambda I)|) from the same pivots.
    pub(crate) fn log_det(&self, lambda: f64) -> (f64, f64) {
        let pivmin = self.pivmin();
        let mut sign = 1.0;
        let mut log = 0.0;
        let mut d = self.diag[0] - lambda;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                d = (self.diag[i] - lambda) - e * e / d;
            }
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                sign = -sign;
            }
            log += d.abs().ln();
        }
        (sign, log)
    }
}

/// Truncation of A to the window with Dirichlet cut-off: zero diagonal and
/// entry (n, n+1) = q^{-n}.
pub fn truncate_a(q: QBase, window: SpectrumWindow) -> Result<TridiagonalMatrix> {
    if window.len() < 2 {
        return Err(QError::WindowTooSmall { n_min: window.n_min, n_max: window.n_max });
    }
    let off = (window.n_min..window.n_max).map(|n| q.pow(-n)).collect();
    TridiagonalMatrix::new(vec![0.0; window.len()], off, window.n_min)
}

/// Truncation of B to the window: diagonal alpha q^{-n}, unit off-diagonal.
pub fn truncate_b(p: &BParams, window: SpectrumWindow) -> Result<TridiagonalMatrix> {
    if window.len() < 2 {
        return Err(QError::WindowTooSmall { n_min: window.n_min, n_max: window.n_max });
    }
    let diag = window.iter().map(|n| p.alpha() * p.q().pow(-n)).collect();
    TridiagonalMatrix::new(diag, vec![1.0; window.len() - 1], window.n_min)
}
