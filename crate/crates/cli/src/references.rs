//! Exact and reference solutions used to measure errors.

use fracprop::quad::integrate;
use fracprop::{ml_real, FdLaplacian, MlError};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// DST-I, `c_k = Σ_j v_j sin(πjk/(m+1))`, through an FFT of the odd extension.
pub fn dst1(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let len = 2 * (m + 1);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (j, &x) in v.iter().enumerate() {
        buf[j + 1] = Complex64::new(x, 0.0);
        buf[len - j - 1] = Complex64::new(-x, 0.0);
    }
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    buf[1..=m].iter().map(|c| -0.5 * c.im).collect()
}

/// Exact solution of the semidiscrete problem `∂_t^α u + A_h u = 0` with the
/// finite-difference Laplacian, from the eigen-decomposition of `u₀`.
pub struct SemidiscreteReference {
    coeffs: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl SemidiscreteReference {
    pub fn new(fd: &FdLaplacian, u0: &[f64]) -> Self {
        assert_eq!(fd.m(), u0.len());
        let scale = 2.0 / (u0.len() as f64 + 1.0);
        let coeffs = dst1(u0).into_iter().map(|c| c * scale).collect();
        let eigenvalues = (1..=fd.m()).map(|k| fd.eigenvalue(k)).collect();
        Self { coeffs, eigenvalues }
    }

    /// Grid values of `Σ_k E_{α,1}(−λ_k t^α) c_k sin(πjk/(m+1))`.
    pub fn eval(&self, alpha: f64, t: f64) -> Result<Vec<f64>, MlError> {
        let ta = if t == 0.0 { 0.0 } else { t.powf(alpha) };
        let damped = self
            .coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&c, &l)| if c == 0.0 { Ok(0.0) } else { Ok(c * ml_real(alpha, 1.0, -l * ta)?) })
            .collect::<Result<Vec<_>, MlError>>()?;
        Ok(dst1(&damped))
    }
}

/// Initial data of the regularity sweep: `(x − x²)^{2δ} sin(πk₀x)`, scaled to unit
/// maximum on the grid.
pub fn rough_initial_data(m: usize, delta: f64, k0: u32) -> Vec<f64> {
    let dx = 1.0 / (m as f64 + 1.0);
    let raw: Vec<f64> = (1..=m)
        .map(|j| {
            let x = j as f64 * dx;
            (x - x * x).powf(2.0 * delta) * (PI * k0 as f64 * x).sin()
        })
        .collect();
    let norm = raw.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    raw.into_iter().map(|v| v / norm).collect()
}

/// Sine coefficients of the solution for `f = sin πx + t sin 4πx`, zero data:
/// `(1 − E_α(−π²t^α))/π²` and `∫₀ᵗ E_α(−16π²(t−s)^α) s^α/Γ(α+1) ds`, the latter by
/// adaptive Gauss–Kronrod quadrature.
pub fn source_example(alpha: f64, t: f64) -> Result<[f64; 2], MlError> {
    if t == 0.0 {
        return Ok([0.0, 0.0]);
    }
    let pi2 = PI * PI;
    let first = (1.0 - ml_real(alpha, 1.0, -pi2 * t.powf(alpha))?) / pi2;
    let ga = libm::tgamma(alpha + 1.0);
    let mut failure = None;
    let r = integrate(
        |s| match ml_real(alpha, 1.0, -16.0 * pi2 * (t - s).powf(alpha)) {
            Ok(e) => e * s.powf(alpha) / ga,
            Err(err) => {
                failure = Some(err);
                0.0
            }
        },
        0.0,
        t,
        1e-16,
        1e-15,
        4000,
    );
    match failure {
        Some(err) => Err(err),
        None => Ok([first, r.value]),
    }
}

/// `x²(x − 1)(x − t² + 1/2)`.
pub fn polynomial_solution(x: f64, t: f64) -> f64 {
    x * x * (x - 1.0) * (x - t * t + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracprop::MittagLeffler;

    #[test]
    fn dst_matches_direct_sum() {
        let v = [0.3, -1.0, 2.0, 0.5, 0.25];
        let m = v.len();
        let got = dst1(&v);
        for (k, g) in got.iter().enumerate() {
            let want: f64 =
                v.iter().enumerate().map(|(j, x)| x * (PI * ((j + 1) * (k + 1)) as f64 / (m as f64 + 1.0)).sin()).sum();
            assert!((g - want).abs() < 1e-13);
        }
    }

    #[test]
    fn semidiscrete_reference_at_zero_is_the_data() {
        let fd = FdLaplacian::new(50).unwrap();
        let u0 = rough_initial_data(50, 0.3, 3);
        let r = SemidiscreteReference::new(&fd, &u0);
        let back = r.eval(0.7, 0.0).unwrap();
        for (a, b) in back.iter().zip(&u0) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!((u0.iter().fold(0.0f64, |a, v| a.max(v.abs())) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvector_is_damped_by_its_eigenvalue() {
        let m = 40;
        let fd = FdLaplacian::new(m).unwrap();
        let u0: Vec<f64> = (1..=m).map(|j| (PI * (2 * j) as f64 / (m as f64 + 1.0)).sin()).collect();
        let r = SemidiscreteReference::new(&fd, &u0);
        let alpha = 0.6;
        let damp = ml_real(alpha, 1.0, -fd.eigenvalue(2) * 0.3f64.powf(alpha)).unwrap();
        for (a, b) in r.eval(alpha, 0.3).unwrap().iter().zip(&u0) {
            assert!((a - damp * b).abs() < 1e-13);
        }
    }

    #[test]
    fn source_bracket_matches_closed_form() {
        for alpha in [0.1, 0.5, 1.0] {
            let e = MittagLeffler::extended(alpha, alpha + 2.0).unwrap();
            for t in [0.05, 0.5, 1.0] {
                let got = source_example(alpha, t).unwrap()[1];
                let ta = t.powf(alpha);
                let want = t.powf(alpha + 1.0) * e.eval(Complex64::new(-16.0 * PI * PI * ta, 0.0)).unwrap().value.re;
                assert!((got - want).abs() < 1e-14, "alpha={alpha} t={t}: {got} vs {want}");
            }
        }
    }
}
