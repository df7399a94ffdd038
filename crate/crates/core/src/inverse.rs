//! Recovery of the order α from point measurements of a homogeneous solution.
//!
//! With a fixed β and ω = ω_⋆ the contour does not depend on α, so every trial
//! order reuses the same resolvent caches from the registry.

use crate::contour::{build_contour, validate_orders, OmegaChoice, OrderPair, SpectralParams};
use crate::operators::{GridFunction, SectorialOperator};
use crate::propagator::ResolventRegistry;
use crate::solution::{HomogeneousScheme, SchemeParams, SolutionError};
use std::f64::consts::PI;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error("minimizer did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("search interval [{lo}, {hi}] must lie in (0, {max}] and contain the initial guess")]
    BoundsViolation { lo: f64, hi: f64, max: f64 },
    #[error("invalid measurements: {0}")]
    InvalidMeasurements(&'static str),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    Point(f64),
    /// every grid value (real parts)
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurements {
    times: Vec<f64>,
    probe: Probe,
    data: Vec<Vec<f64>>,
}

impl Measurements {
    /// `data[i]` holds the probed values at `times[i]`.
    pub fn new(times: Vec<f64>, probe: Probe, data: Vec<Vec<f64>>) -> Result<Self, InverseError> {
        if times.is_empty() || times.len() != data.len() {
            return Err(InverseError::InvalidMeasurements("need one data row per time"));
        }
        if times.windows(2).any(|w| w[0] > w[1]) || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(InverseError::InvalidMeasurements("times must be sorted and non-negative"));
        }
        if data.iter().any(|row| row.is_empty() || row.iter().any(|v| !v.is_finite())) {
            return Err(InverseError::InvalidMeasurements("data rows must be nonempty and finite"));
        }
        Ok(Self { times, probe, data })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn probe(&self) -> &Probe {
        &self.probe
    }

    pub fn data(&self) -> &[Vec<f64>] {
        &self.data
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelMode {
    /// fixed β, one contour for every trial α
    Subordinated { beta: f64, omega: OmegaChoice },
    /// β = α with ω = ω_m, a new contour per trial
    Legacy,
}

#[derive(Clone)]
pub struct ForwardModel {
    pub a: Arc<dyn SectorialOperator>,
    pub sp: SpectralParams,
    pub u0: GridFunction,
    /// only used for trial orders above one
    pub u1: Option<GridFunction>,
    pub mode: ModelMode,
    pub n: usize,
    /// `None` picks `κ = 1/β`, so both caches use `N + 1` nodes
    pub kappa: Option<f64>,
    pub a0: f64,
}

impl ForwardModel {
    fn beta_for(&self, alpha: f64) -> f64 {
        match self.mode {
            ModelMode::Subordinated { beta, .. } => beta,
            ModelMode::Legacy => alpha,
        }
    }

    fn max_alpha(&self) -> f64 {
        let sector = 2.0 * (1.0 - self.sp.varphi_s / PI);
        match self.mode {
            ModelMode::Subordinated { beta, .. } => beta.min(sector),
            ModelMode::Legacy => sector.min(2.0),
        }
    }

    /// Model values at the measurement times and probe.
    pub fn predict(
        &self,
        registry: &ResolventRegistry,
        alpha: f64,
        meas: &Measurements,
    ) -> Result<Vec<Vec<f64>>, SolutionError> {
        let beta = self.beta_for(alpha);
        let op = OrderPair::new(alpha, beta)?;
        validate_orders(&op, &self.sp)?;
        let omega = match self.mode {
            ModelMode::Subordinated { omega, .. } => omega,
            ModelMode::Legacy => OmegaChoice::Max,
        };
        let contour = build_contour(&op, &self.sp, omega, self.a0)?;
        let params = SchemeParams::new(self.n, self.kappa.unwrap_or(1.0 / beta), 1.0)?;
        let u1 = if alpha > 1.0 { self.u1.as_ref() } else { None };
        let scheme = HomogeneousScheme::new(registry, self.a.as_ref(), op, &contour, &params, &self.u0, u1)?;
        let us = scheme.eval_many(meas.times())?;
        Ok(us
            .iter()
            .map(|u| match meas.probe() {
                Probe::Point(x) => vec![u.eval_at(*x).re],
                Probe::Grid => u.values().iter().map(|v| v.re).collect(),
            })
            .collect())
    }

    /// `Σ_t max_x |ũ(t, x) − d(t, x)|²`.
    pub fn objective(
        &self,
        registry: &ResolventRegistry,
        alpha: f64,
        meas: &Measurements,
    ) -> Result<f64, InverseError> {
        let pred = self.predict(registry, alpha, meas)?;
        let mut total = 0.0;
        for (p, d) in pred.iter().zip(meas.data()) {
            if p.len() != d.len() {
                return Err(InverseError::InvalidMeasurements("data row length does not match the probe"));
            }
            let sup = p.iter().zip(d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            total += sup * sup;
        }
        Ok(total)
    }
}

/// Best point after each minimizer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub alpha: f64,
    pub residual: f64,
    pub n_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub alpha_fit: f64,
    pub residual: f64,
    /// solves added to the registry by this fit
    pub n_resolvent_solves: usize,
    pub n_model_evals: usize,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

const XTOL: f64 = 1e-10;
const MAX_ITER: usize = 200;

/// Brent's bounded minimization (golden section with parabolic steps) of the
/// misfit over `bounds`, starting from `alpha0`.
pub fn fit_alpha(
    meas: &Measurements,
    model: &ForwardModel,
    bounds: (f64, f64),
    alpha0: f64,
    registry: &ResolventRegistry,
) -> Result<FitReport, InverseError> {
    let (lo, hi) = bounds;
    let max = model.max_alpha();
    if !(lo > 0.0 && lo < hi && hi <= max && (lo..=hi).contains(&alpha0)) {
        return Err(InverseError::BoundsViolation { lo, hi, max });
    }
    let solves_before = registry.unique_resolvent_solves();
    let mut evals = 0usize;
    let mut f = |x: f64| -> Result<f64, InverseError> {
        evals += 1;
        model.objective(registry, x, meas)
    };

    let golden = 0.5 * (3.0 - 5f64.sqrt());
    let (mut a, mut b) = (lo, hi);
    let mut x = alpha0;
    let (mut v, mut w) = (x, x);
    let mut fx = f(x)?;
    let (mut fv, mut fw) = (fx, fx);
    let (mut d, mut e) = (0.0f64, 0.0f64);
    let mut trace = vec![TraceRow { iter: 0, alpha: x, residual: fx, n_solves: registry.unique_resolvent_solves() }];
    let mut iter = 0;
    loop {
        let xm = 0.5 * (a + b);
        let tol1 = 4.0 * f64::EPSILON * x.abs() + XTOL / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        if iter >= MAX_ITER {
            return Err(InverseError::NoConvergence(iter));
        }
        iter += 1;
        let mut golden_step = true;
        if e.abs() > tol1 {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            let mut q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= xm { a - x } else { b - x };
            d = golden * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
        trace.push(TraceRow { iter, alpha: x, residual: fx, n_solves: registry.unique_resolvent_solves() });
    }
    Ok(FitReport {
        alpha_fit: x,
        residual: fx,
        n_resolvent_solves: registry.unique_resolvent_solves() - solves_before,
        n_model_evals: evals,
        iterations: iter,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{diag_operator, Grid};
    use crate::propagator::CacheKind;
    use crate::solution::eigenmode_exact;

    fn model(mode: ModelMode, kappa: Option<f64>) -> ForwardModel {
        let grid = Grid::Spectral(vec![2, 4]);
        ForwardModel {
            a: Arc::new(diag_operator(&[2, 4]).unwrap()),
            sp: SpectralParams::with_angle(0.0).unwrap(),
            u0: GridFunction::from_real(grid.clone(), &[1.0, 0.0]).unwrap(),
            u1: Some(GridFunction::from_real(grid, &[0.0, 1.0]).unwrap()),
            mode,
            n: 128,
            kappa,
            a0: crate::contour::DEFAULT_A0,
        }
    }

    fn data(alpha: f64) -> Measurements {
        let x = PI / 10.0;
        let times: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let d = times.iter().map(|&t| vec![eigenmode_exact(alpha, 2, 4, t, x).unwrap()]).collect();
        Measurements::new(times, Probe::Point(x), d).unwrap()
    }

    #[test]
    fn recovers_order_with_one_u0_cache() {
        let m = model(ModelMode::Subordinated { beta: 1.6, omega: OmegaChoice::Star }, Some(1.0));
        let reg = ResolventRegistry::new();
        let rep = fit_alpha(&data(0.75), &m, (0.05, 1.6), 0.85, &reg).unwrap();
        assert!((rep.alpha_fit - 0.75).abs() <= 1e-6, "{}", rep.alpha_fit);
        assert_eq!(reg.solves_for(CacheKind::Corrected, &m.u0), 129);
        assert!(rep.trace.windows(2).all(|w| w[1].residual <= w[0].residual));
    }

    #[test]
    fn default_kappa_keeps_both_caches_at_n_plus_one() {
        let m = model(ModelMode::Subordinated { beta: 1.6, omega: OmegaChoice::Star }, None);
        let reg = ResolventRegistry::new();
        for alpha in [0.4, 1.3] {
            let rep = fit_alpha(&data(alpha), &m, (0.05, 1.6), 0.85, &reg).unwrap();
            assert!((rep.alpha_fit - alpha).abs() <= 1e-4, "{}", rep.alpha_fit);
        }
        assert_eq!(reg.solves_for(CacheKind::Corrected, &m.u0), 129);
        assert_eq!(reg.solves_for(CacheKind::Plain, m.u1.as_ref().unwrap()), 129);
        assert_eq!(reg.unique_resolvent_solves(), 258);
    }

    #[test]
    fn rejects_bad_bounds() {
        let m = model(ModelMode::Subordinated { beta: 1.6, omega: OmegaChoice::Star }, None);
        let reg = ResolventRegistry::new();
        let err = fit_alpha(&data(0.75), &m, (0.05, 1.7), 0.85, &reg).unwrap_err();
        assert!(matches!(err, InverseError::BoundsViolation { .. }));
        let err = fit_alpha(&data(0.75), &m, (0.9, 1.2), 0.85, &reg).unwrap_err();
        assert!(matches!(err, InverseError::BoundsViolation { .. }));
    }
}
