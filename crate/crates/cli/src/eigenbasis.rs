//! The finite-difference Laplacian in its sine eigenbasis, where every resolvent
//! solve is a division and rounding no longer grows with the condition number.

use crate::references::dst1;
use fracprop::{FdLaplacian, Grid, GridFunction, OperatorError, SectorialOperator, SpectralParams};
use num_complex::Complex64;
use std::hash::{Hash, Hasher};

pub struct FdEigenbasis {
    grid: Grid,
    m: usize,
    eigenvalues: Vec<f64>,
}

impl FdEigenbasis {
    pub fn new(fd: &FdLaplacian) -> Self {
        let m = fd.m();
        Self {
            grid: Grid::Spectral((1..=m as u32).collect()),
            m,
            eigenvalues: (1..=m).map(|k| fd.eigenvalue(k)).collect(),
        }
    }

    /// Coefficients of grid values in the basis `sin(πjk/(m+1))`.
    pub fn to_coefficients(&self, values: &[f64]) -> Result<GridFunction, OperatorError> {
        let scale = 2.0 / (self.m as f64 + 1.0);
        let c: Vec<f64> = dst1(values).into_iter().map(|v| v * scale).collect();
        GridFunction::from_real(self.grid.clone(), &c)
    }

    /// Grid values of a coefficient vector.
    pub fn to_grid(&self, u: &GridFunction) -> GridFunction {
        let re: Vec<f64> = u.values().iter().map(|v| v.re).collect();
        let im: Vec<f64> = u.values().iter().map(|v| v.im).collect();
        let (re, im) = (dst1(&re), dst1(&im));
        let values = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
        GridFunction::new(Grid::Uniform(self.m), values).expect("lengths agree")
    }
}

impl SectorialOperator for FdEigenbasis {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn apply(&self, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        if x.grid() != &self.grid {
            return Err(OperatorError::GridMismatch);
        }
        let values = x.values().iter().zip(&self.eigenvalues).map(|(v, l)| v * l).collect();
        GridFunction::new(self.grid.clone(), values)
    }

    fn resolvent_shifted(&self, w: Complex64, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        if x.grid() != &self.grid {
            return Err(OperatorError::GridMismatch);
        }
        let mut values = Vec::with_capacity(self.m);
        for (v, &l) in x.values().iter().zip(&self.eigenvalues) {
            let d = w + l;
            if d.norm() <= 1e-14 * l.max(1.0) {
                return Err(OperatorError::SingularShift(w));
            }
            values.push(v / d);
        }
        GridFunction::new(self.grid.clone(), values)
    }

    fn spectral_hint(&self) -> SpectralParams {
        SpectralParams { rho_s: self.eigenvalues[0], varphi_s: 0.0, m: 1.0 }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        "fd-eigenbasis".hash(&mut h);
        self.m.hash(&mut h);
        h.finish()
    }
}
