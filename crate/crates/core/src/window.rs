use crate::error::{QError, Result};

/// Inclusive range of lattice indices n_min..=n_max.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumWindow {
    pub n_min: i64,
    pub n_max: i64,
}

impl SpectrumWindow {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(QError::InvalidParameter(format!("window {n_min}:{n_max} is empty")));
        }
        Ok(SpectrumWindow { n_min, n_max })
    }

    /// [-n, n]
    pub fn symmetric(n: i64) -> Self {
        SpectrumWindow { n_min: -n.abs(), n_max: n.abs() }
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n_max < self.n_min
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.n_min && n <= self.n_max
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_bookkeeping() {
        let w = SpectrumWindow::new(-2, 3).unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.contains(-2) && w.contains(3) && !w.contains(4));
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2, 3]);
        assert!(SpectrumWindow::new(1, 0).is_err());
        assert_eq!(SpectrumWindow::symmetric(-3), SpectrumWindow::new(-3, 3).unwrap());
    }
}
