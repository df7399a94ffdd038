//! Sectorial operators on (0, 1) with homogeneous Dirichlet conditions, and the
//! shifted resolvent `(wI + A)^{-1}` that every quadrature node needs.

use crate::contour::SpectralParams;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("invalid mode {0}: modes are positive integers")]
    InvalidMode(i64),
    #[error("empty mode list")]
    NoModes,
    #[error("grid needs at least two interior points, got {0}")]
    GridTooSmall(usize),
    #[error("shift {0} is (numerically) a negated eigenvalue")]
    SingularShift(Complex64),
    #[error("grid function does not live on the operator's grid")]
    GridMismatch,
    #[error("{len} values given for a grid of size {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("non-finite grid function entry")]
    NonFinite,
    #[error("operation not supported by the finite-difference backend")]
    UnsupportedBackend,
}

/// Discretization of functions on (0, 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Grid {
    /// Coefficients with respect to `sin(πkx)` for the listed k.
    Spectral(Vec<u32>),
    /// Values at the `m` interior nodes `j/(m+1)`.
    Uniform(usize),
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::Spectral(modes) => modes.len(),
            Grid::Uniform(m) => *m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interior nodes of a uniform grid (empty for a spectral basis).
    pub fn nodes(&self) -> Vec<f64> {
        match self {
            Grid::Spectral(_) => Vec::new(),
            Grid::Uniform(m) => {
                let dx = 1.0 / (*m as f64 + 1.0);
                (1..=*m).map(|j| j as f64 * dx).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self, OperatorError> {
        if values.len() != grid.len() {
            return Err(OperatorError::LengthMismatch { len: values.len(), expected: grid.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(OperatorError::NonFinite);
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self, OperatorError> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// Samples `f` at the interior nodes of a uniform grid.
    pub fn sample(m: usize, f: impl Fn(f64) -> f64) -> Self {
        let grid = Grid::Uniform(m);
        let values = grid.nodes().into_iter().map(|x| Complex64::new(f(x), 0.0)).collect();
        Self { grid, values }
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Elementwise `self + a·other` on the same grid.
    pub fn axpy(&self, a: Complex64, other: &GridFunction) -> Result<GridFunction, OperatorError> {
        if self.grid != other.grid {
            return Err(OperatorError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x + a * y).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn scale(&self, a: Complex64) -> GridFunction {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * a).collect() }
    }

    /// Point values at `x`: the sine series for a spectral basis, linear
    /// interpolation (with zero boundary values) on a uniform grid.
    pub fn eval_at(&self, x: f64) -> Complex64 {
        match &self.grid {
            Grid::Spectral(modes) => modes
                .iter()
                .zip(&self.values)
                .map(|(&k, c)| c * (PI * k as f64 * x).sin())
                .sum(),
            Grid::Uniform(m) => {
                let s = x * (*m as f64 + 1.0);
                let j = (s.floor() as usize).min(*m);
                let frac = s - j as f64;
                let at = |i: usize| if i == 0 || i > *m { Complex64::new(0.0, 0.0) } else { self.values[i - 1] };
                at(j) * (1.0 - frac) + at(j + 1) * frac
            }
        }
    }

    /// `(x, value)` pairs including the Dirichlet boundary points. A spectral
    /// function is sampled on `samples` interior points.
    pub fn with_boundary(&self, samples: usize) -> Vec<(f64, Complex64)> {
        let zero = Complex64::new(0.0, 0.0);
        match &self.grid {
            Grid::Uniform(m) => {
                let mut out = Vec::with_capacity(m + 2);
                out.push((0.0, zero));
                out.extend(self.grid.nodes().into_iter().zip(self.values.iter().copied()));
                out.push((1.0, zero));
                out
            }
            Grid::Spectral(_) => {
                let dx = 1.0 / (samples as f64 + 1.0);
                (0..=samples + 1)
                    .map(|j| {
                        let x = j as f64 * dx;
                        let v = if j == 0 || j == samples + 1 { zero } else { self.eval_at(x) };
                        (x, v)
                    })
                    .collect()
            }
        }
    }

    /// Hash of grid and exact bit patterns of the values.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.grid.hash(&mut h);
        for v in &self.values {
            v.re.to_bits().hash(&mut h);
            v.im.to_bits().hash(&mut h);
        }
        h.finish()
    }
}

/// A strongly positive operator A with its shifted resolvent.
pub trait SectorialOperator: Send + Sync {
    fn grid(&self) -> &Grid;

    fn apply(&self, x: &GridFunction) -> Result<GridFunction, OperatorError>;

    /// Solves `(wI + A) r = x`.
    fn resolvent_shifted(&self, w: Complex64, x: &GridFunction) -> Result<GridFunction, OperatorError>;

    fn spectral_hint(&self) -> SpectralParams;

    /// Identifies the operator in resolvent-cache keys.
    fn fingerprint(&self) -> u64;

    /// `A^κ x`; only available where the eigen-decomposition is explicit.
    fn fractional_power(&self, _kappa: f64, _x: &GridFunction) -> Result<GridFunction, OperatorError> {
        Err(OperatorError::UnsupportedBackend)
    }
}

fn check_grid(op_grid: &Grid, x: &GridFunction) -> Result<(), OperatorError> {
    if op_grid != x.grid() {
        Err(OperatorError::GridMismatch)
    } else {
        Ok(())
    }
}

/// `−d²/dx²` acting on sine coefficients: mode k is scaled by `π²k²`.
#[derive(Debug, Clone)]
pub struct DiagonalOperator {
    grid: Grid,
    eigenvalues: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(modes: &[i64]) -> Result<Self, OperatorError> {
        if modes.is_empty() {
            return Err(OperatorError::NoModes);
        }
        let mut ks = Vec::with_capacity(modes.len());
        for &k in modes {
            if k < 1 || k > u32::MAX as i64 {
                return Err(OperatorError::InvalidMode(k));
            }
            ks.push(k as u32);
        }
        let eigenvalues = ks.iter().map(|&k| PI * PI * (k as f64).powi(2)).collect();
        Ok(Self { grid: Grid::Spectral(ks), eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

pub fn diag_operator(modes: &[i64]) -> Result<DiagonalOperator, OperatorError> {
    DiagonalOperator::new(modes)
}

impl SectorialOperator for DiagonalOperator {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn apply(&self, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        check_grid(&self.grid, x)?;
        let values = x.values().iter().zip(&self.eigenvalues).map(|(v, l)| v * l).collect();
        Ok(GridFunction::from_parts(self.grid.clone(), values))
    }

    fn resolvent_shifted(&self, w: Complex64, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        check_grid(&self.grid, x)?;
        let mut values = Vec::with_capacity(x.len());
        for (v, &l) in x.values().iter().zip(&self.eigenvalues) {
            let d = w + l;
            if d.norm() <= 1e-14 * l.max(1.0) {
                return Err(OperatorError::SingularShift(w));
            }
            values.push(v / d);
        }
        Ok(GridFunction::from_parts(self.grid.clone(), values))
    }

    fn spectral_hint(&self) -> SpectralParams {
        let rho = self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        SpectralParams { rho_s: rho, varphi_s: 0.0, m: 1.0 }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        "diagonal".hash(&mut h);
        self.grid.hash(&mut h);
        h.finish()
    }

    fn fractional_power(&self, kappa: f64, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        check_grid(&self.grid, x)?;
        let values = x.values().iter().zip(&self.eigenvalues).map(|(v, l)| v * l.powf(kappa)).collect();
        Ok(GridFunction::from_parts(self.grid.clone(), values))
    }
}

/// Three-point Dirichlet Laplacian on `m` interior nodes, `Δx = 1/(m+1)`.
#[derive(Debug, Clone)]
pub struct FdLaplacian {
    grid: Grid,
    inv_dx2: f64,
}

impl FdLaplacian {
    pub fn new(m: usize) -> Result<Self, OperatorError> {
        if m < 2 {
            return Err(OperatorError::GridTooSmall(m));
        }
        let dx = 1.0 / (m as f64 + 1.0);
        Ok(Self { grid: Grid::Uniform(m), inv_dx2: 1.0 / (dx * dx) })
    }

    pub fn m(&self) -> usize {
        self.grid.len()
    }

    /// `λ_j = (4/Δx²) sin²(jπΔx/2)`, j = 1..m.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        let dx = 1.0 / (self.m() as f64 + 1.0);
        4.0 * self.inv_dx2 * (j as f64 * PI * dx / 2.0).sin().powi(2)
    }
}

pub fn fd_laplacian(m: usize) -> Result<FdLaplacian, OperatorError> {
    FdLaplacian::new(m)
}

impl SectorialOperator for FdLaplacian {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn apply(&self, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        check_grid(&self.grid, x)?;
        let u = x.values();
        let m = u.len();
        let zero = Complex64::new(0.0, 0.0);
        let values = (0..m)
            .map(|j| {
                let left = if j > 0 { u[j - 1] } else { zero };
                let right = if j + 1 < m { u[j + 1] } else { zero };
                (u[j] * 2.0 - left - right) * self.inv_dx2
            })
            .collect();
        Ok(GridFunction::from_parts(self.grid.clone(), values))
    }

    fn resolvent_shifted(&self, w: Complex64, x: &GridFunction) -> Result<GridFunction, OperatorError> {
        check_grid(&self.grid, x)?;
        let m = self.m();
        // the spectrum is known, so a shift sitting on −λ_j is caught up front
        if w.im.abs() <= 1e-14 * w.norm().max(1.0) && w.re < 0.0 {
            let lambda_max = self.eigenvalue(m);
            if -w.re <= lambda_max * (1.0 + 1e-14) {
                let dx = 1.0 / (m as f64 + 1.0);
                let s = ((-w.re) / (4.0 * self.inv_dx2)).sqrt().min(1.0);
                let j = (2.0 * s.asin() / (PI * dx)).round().clamp(1.0, m as f64) as usize;
                for jj in j.saturating_sub(1).max(1)..=(j + 1).min(m) {
                    if (w.re + self.eigenvalue(jj)).abs() <= 1e-14 * self.eigenvalue(jj).max(1.0) {
                        return Err(OperatorError::SingularShift(w));
                    }
                }
            }
        }
        // Thomas elimination for the symmetric tridiagonal (w + 2/Δx², −1/Δx²)
        let diag = w + 2.0 * self.inv_dx2;
        let off = -self.inv_dx2;
        let rhs = x.values();
        let mut c = vec![Complex64::new(0.0, 0.0); m];
        let mut d = vec![Complex64::new(0.0, 0.0); m];
        let mut pivot = diag;
        if pivot.norm() <= 1e-300 {
            return Err(OperatorError::SingularShift(w));
        }
        c[0] = Complex64::new(off, 0.0) / pivot;
        d[0] = rhs[0] / pivot;
        for j in 1..m {
            pivot = diag - c[j - 1] * off;
            if pivot.norm() <= 1e-300 {
                return Err(OperatorError::SingularShift(w));
            }
            c[j] = Complex64::new(off, 0.0) / pivot;
            d[j] = (rhs[j] - d[j - 1] * off) / pivot;
        }
        for j in (0..m - 1).rev() {
            let next = d[j + 1];
            d[j] -= c[j] * next;
        }
        Ok(GridFunction::from_parts(self.grid.clone(), d))
    }

    fn spectral_hint(&self) -> SpectralParams {
        SpectralParams { rho_s: self.eigenvalue(1), varphi_s: 0.0, m: 1.0 }
    }

    fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        "fd-laplacian".hash(&mut h);
        self.grid.hash(&mut h);
        h.finish()
    }
}

pub fn fractional_power_apply(
    op: &dyn SectorialOperator,
    kappa: f64,
    x: &GridFunction,
) -> Result<GridFunction, OperatorError> {
    op.fractional_power(kappa, x)
}
