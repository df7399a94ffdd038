//! Convergence sweeps, the regularity table, batch α identification and snapshots.

use crate::config::{Backend, ExperimentConfig, Problem};
use crate::eigenbasis::FdEigenbasis;
use crate::error::CliError;
use crate::output::{fmt_f64, Table};
use crate::references::{polynomial_solution, rough_initial_data, source_example, SemidiscreteReference};
use fracprop::{
    build_contour, diag_operator, eigenmode_exact, fd_laplacian, fit_alpha, mild_solution, validate_orders, CacheKind,
    FitReport, ForwardModel, Grid, GridFunction, Measurements, ModelMode, OrderPair, Probe, ResolventRegistry,
    SchemeParams, SectorialOperator, SourceTerm, SpectralParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Instant;

pub const CONVERGENCE_HEADER: &str = "alpha,beta,n,err_sup,wall_time_ms,n_resolvent_solves";
pub const TABLE1_HEADER: &str = "delta,kappa,n_e,err,status";
pub const INVERSE_HEADER: &str =
    "trial,alpha_true,mode,alpha_fit,err_alpha,residual,iterations,n_model_evals,n_resolvent_solves";
pub const TRACE_HEADER: &str = "iter,alpha,residual,n_solves";
pub const SOLUTION_HEADER: &str = "t,x,re,im";

type SourceBuilder = Box<dyn Fn(f64) -> Result<SourceTerm, CliError> + Send + Sync>;

enum Reference {
    Eigen { k0: u32, k1: u32 },
    Semidiscrete(SemidiscreteReference),
    SourceExample,
    Polynomial,
}

/// Operator, data and exact solution of one test problem.
struct Setup {
    a: Arc<dyn SectorialOperator>,
    u0: GridFunction,
    u1: Option<GridFunction>,
    source: Option<SourceBuilder>,
    /// where errors are measured; the grid nodes for a finite-difference backend
    points: Vec<f64>,
    reference: Reference,
    /// set when the unknowns are sine coefficients of grid values
    eigenbasis: Option<Arc<FdEigenbasis>>,
}

fn unit_vector(modes: &[i64], k: u32, name: &str) -> Result<GridFunction, CliError> {
    let i = modes
        .iter()
        .position(|&m| m == k as i64)
        .ok_or_else(|| CliError::config(format!("{name} = {k} is not among the modes {modes:?}")))?;
    let mut v = vec![0.0; modes.len()];
    v[i] = 1.0;
    Ok(GridFunction::from_real(spectral(modes)?, &v)?)
}

fn spectral(modes: &[i64]) -> Result<Grid, CliError> {
    let ks = modes.iter().map(|&k| u32::try_from(k)).collect::<Result<_, _>>();
    Ok(Grid::Spectral(ks.map_err(|_| CliError::config(format!("modes must be positive, got {modes:?}")))?))
}

fn interior_points(samples: usize) -> Vec<f64> {
    (1..=samples).map(|j| j as f64 / (samples as f64 + 1.0)).collect()
}

fn fd_size(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    match cfg.backend {
        Backend::Fd(m) => Ok(m),
        Backend::FdEigen(_) => Err(CliError::config("the fd-eigen backend only serves hom-fd")),
        Backend::Diag(_) => Err(CliError::config("this problem needs the fd backend")),
    }
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup, CliError> {
    match cfg.problem {
        Problem::HomEigen => {
            let modes = match &cfg.backend {
                Backend::Diag(m) if m.is_empty() => vec![cfg.k0 as i64, cfg.k1 as i64],
                Backend::Diag(m) => m.clone(),
                Backend::Fd(_) | Backend::FdEigen(_) => {
                    return Err(CliError::config("hom-eigen needs the diag backend"))
                }
            };
            Ok(Setup {
                a: Arc::new(diag_operator(&modes)?),
                u0: unit_vector(&modes, cfg.k0, "k0")?,
                u1: Some(unit_vector(&modes, cfg.k1, "k1")?),
                source: None,
                points: interior_points(cfg.samples),
                reference: Reference::Eigen { k0: cfg.k0, k1: cfg.k1 },
                eigenbasis: None,
            })
        }
        Problem::HomFd => {
            let (m, eigen) = match cfg.backend {
                Backend::Fd(m) => (m, false),
                Backend::FdEigen(m) => (m, true),
                Backend::Diag(_) => return Err(CliError::config("hom-fd needs an fd backend")),
            };
            let fd = fd_laplacian(m)?;
            let u0 = rough_initial_data(m, cfg.delta[0], cfg.k0);
            let reference = Reference::Semidiscrete(SemidiscreteReference::new(&fd, &u0));
            let points = Grid::Uniform(m).nodes();
            if eigen {
                let e = Arc::new(FdEigenbasis::new(&fd));
                return Ok(Setup {
                    a: e.clone(),
                    u0: e.to_coefficients(&u0)?,
                    u1: None,
                    source: None,
                    points,
                    reference,
                    eigenbasis: Some(e),
                });
            }
            Ok(Setup {
                a: Arc::new(fd),
                u0: GridFunction::from_real(Grid::Uniform(m), &u0)?,
                u1: None,
                source: None,
                points,
                reference,
                eigenbasis: None,
            })
        }
        Problem::Inhom => {
            if !matches!(cfg.backend, Backend::Diag(_)) {
                return Err(CliError::config("inhom needs the diag backend"));
            }
            let modes = [1i64, 4];
            let grid = spectral(&modes)?;
            let builder: SourceBuilder = Box::new(move |_alpha| {
                let f0 = GridFunction::from_real(grid.clone(), &[1.0, 0.0])?;
                let g = GridFunction::from_real(grid.clone(), &[0.0, 1.0])?;
                Ok(SourceTerm::separable(f0, vec![(Arc::new(|_| 1.0), g)], 0.0)?)
            });
            Ok(Setup {
                a: Arc::new(diag_operator(&modes)?),
                u0: GridFunction::zeros(spectral(&modes)?),
                u1: None,
                source: Some(builder),
                points: interior_points(cfg.samples),
                reference: Reference::SourceExample,
                eigenbasis: None,
            })
        }
        Problem::Full => {
            let m = fd_size(cfg)?;
            let builder: SourceBuilder = Box::new(move |alpha| {
                let g2a = libm::tgamma(2.0 - alpha);
                let f0 = GridFunction::sample(m, |x| 1.0 + 3.0 * x - 12.0 * x * x);
                let terms: Vec<(Arc<dyn Fn(f64) -> f64 + Send + Sync>, GridFunction)> = vec![
                    (Arc::new(|t| t), GridFunction::sample(m, |x| 12.0 * x - 4.0)),
                    (
                        Arc::new(move |t: f64| t.powf(1.0 - alpha) / g2a),
                        GridFunction::sample(m, |x| -2.0 * x * x * (x - 1.0)),
                    ),
                ];
                Ok(SourceTerm::separable(f0, terms, 0.0)?)
            });
            Ok(Setup {
                a: Arc::new(fd_laplacian(m)?),
                u0: GridFunction::sample(m, |x| x * x * (x - 1.0) * (x + 0.5)),
                u1: None,
                source: Some(builder),
                points: Grid::Uniform(m).nodes(),
                reference: Reference::Polynomial,
                eigenbasis: None,
            })
        }
        Problem::Inverse => Err(CliError::config("the inverse problem has no forward sweep")),
    }
}

impl Setup {
    fn exact(&self, alpha: f64, t: f64) -> Result<Vec<f64>, CliError> {
        Ok(match &self.reference {
            Reference::Eigen { k0, k1 } => {
                self.points.iter().map(|&x| eigenmode_exact(alpha, *k0, *k1, t, x)).collect::<Result<_, _>>()?
            }
            Reference::Semidiscrete(r) => r.eval(alpha, t)?,
            Reference::SourceExample => {
                let [c1, c4] = source_example(alpha, t)?;
                self.points.iter().map(|&x| c1 * (PI * x).sin() + c4 * (4.0 * PI * x).sin()).collect()
            }
            Reference::Polynomial => self.points.iter().map(|&x| polynomial_solution(x, t)).collect(),
        })
    }

    /// Grid values for finite-difference unknowns, else the series at `points`.
    fn on_grid(&self, u: GridFunction) -> GridFunction {
        match &self.eigenbasis {
            Some(e) => e.to_grid(&u),
            None => u,
        }
    }

    fn sampled(&self, u: &GridFunction) -> Vec<f64> {
        if let Some(e) = &self.eigenbasis {
            return e.to_grid(u).values().iter().map(|v| v.re).collect();
        }
        match u.grid() {
            Grid::Uniform(_) => u.values().iter().map(|v| v.re).collect(),
            Grid::Spectral(_) => self.points.iter().map(|&x| u.eval_at(x).re).collect(),
        }
    }

    /// Approximate solution at `ts` and the number of resolvent solves spent.
    fn solve(
        &self,
        cfg: &ExperimentConfig,
        alpha: f64,
        beta: f64,
        n: usize,
        kappa: f64,
        ts: &[f64],
    ) -> Result<(Vec<GridFunction>, usize), CliError> {
        let op = OrderPair::new(alpha, beta)?;
        let sp = SpectralParams::with_angle(cfg.varphi_s)?;
        validate_orders(&op, &sp)?;
        let contour = build_contour(&op, &sp, cfg.omega, cfg.a0)?;
        let params = SchemeParams::new(n, kappa, cfg.chi)?;
        let registry = ResolventRegistry::new();
        let src = self.source.as_ref().map(|b| b(alpha)).transpose()?;
        let u1 = if alpha > 1.0 { self.u1.as_ref() } else { None };
        let sol = mild_solution(&registry, &params, &contour, self.a.clone(), op, &self.u0, u1, src)?;
        let us = sol.eval_many(ts)?;
        let solves = registry.unique_resolvent_solves() + sol.inhomogeneous.as_ref().map_or(0, |s| s.term3_solves());
        Ok((us, solves))
    }
}

/// `max |a − b|`; a non-finite approximation counts as an infinite error.
fn sup_error(approx: &[f64], exact: &[f64]) -> f64 {
    approx
        .iter()
        .zip(exact)
        .map(|(a, b)| if a.is_finite() { (a - b).abs() } else { f64::INFINITY })
        .fold(0.0, f64::max)
}

/// One row of an error curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub err_sup: f64,
    pub wall_time_ms: f64,
    pub n_resolvent_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub points: Vec<CurvePoint>,
}

impl ErrorCurve {
    pub fn table(&self) -> Table {
        let mut t = Table::new(CONVERGENCE_HEADER);
        for p in &self.points {
            t.push(&[
                fmt_f64(p.alpha),
                fmt_f64(p.beta),
                p.n.to_string(),
                fmt_f64(p.err_sup),
                fmt_f64(p.wall_time_ms),
                p.n_resolvent_solves.to_string(),
            ]);
        }
        t
    }

    /// Errors of one `(α, β)` cell in sweep order.
    pub fn errors(&self, alpha: f64, beta: f64) -> Vec<(usize, f64)> {
        self.points.iter().filter(|p| p.alpha == alpha && p.beta == beta).map(|p| (p.n, p.err_sup)).collect()
    }
}

/// `max_{t ∈ 𝒯} ‖u(t) − ũ(t)‖∞` for every `(α, β, N)` of the sweep.
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<ErrorCurve, CliError> {
    let setup = setup(cfg)?;
    let cells = cfg.order_cells()?;
    if cfg.kappa.len() > 1 {
        log::warn!("converge uses only the first kappa");
    }
    let kappa = cfg.kappa[0].resolve(cfg.delta[0]);
    let ts = cfg.time_grid();

    let mut exact: HashMap<u64, Vec<Vec<f64>>> = HashMap::new();
    for &(alpha, _) in &cells {
        if let std::collections::hash_map::Entry::Vacant(e) = exact.entry(alpha.to_bits()) {
            e.insert(ts.par_iter().map(|&t| setup.exact(alpha, t)).collect::<Result<_, _>>()?);
        }
    }

    let jobs: Vec<(f64, f64, usize)> =
        cells.iter().flat_map(|&(a, b)| cfg.n.iter().map(move |&n| (a, b, n))).collect();
    let points = jobs
        .par_iter()
        .map(|&(alpha, beta, n)| {
            let start = Instant::now();
            let (us, solves) = setup.solve(cfg, alpha, beta, n, kappa, &ts)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let err = us
                .iter()
                .zip(&exact[&alpha.to_bits()])
                .map(|(u, e)| sup_error(&setup.sampled(u), e))
                .fold(0.0, f64::max);
            Ok(CurvePoint { alpha, beta, n, err_sup: err, wall_time_ms: wall, n_resolvent_solves: solves })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(ErrorCurve { points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Table1Status {
    Reached,
    /// no `N ≤ n_max` met the threshold; `err` is the plateau
    NotReached,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub delta: f64,
    pub kappa: f64,
    pub n_e: Option<usize>,
    pub err: f64,
    pub status: Table1Status,
}

pub fn table1_table(rows: &[Table1Row]) -> Table {
    let mut t = Table::new(TABLE1_HEADER);
    for r in rows {
        t.push(&[
            fmt_f64(r.delta),
            fmt_f64(r.kappa),
            r.n_e.map_or_else(String::new, |n| n.to_string()),
            fmt_f64(r.err),
            match r.status {
                Table1Status::Reached => "reached".into(),
                Table1Status::NotReached => "not_reached".into(),
            },
        ]);
    }
    t
}

/// Smallest `N ≤ n_max` with `err(N) ≤ threshold` for each `(δ, κ)`, by bisection
/// on the rough-data finite-difference problem.
pub fn run_table1(cfg: &ExperimentConfig) -> Result<Vec<Table1Row>, CliError> {
    if matches!(cfg.backend, Backend::Diag(_)) {
        return Err(CliError::config("table1 needs an fd backend"));
    }
    let alpha = cfg.alpha[0];
    let beta = cfg.beta[0];
    let ts = cfg.time_grid();
    let jobs: Vec<(f64, f64)> = cfg
        .delta
        .iter()
        .flat_map(|&d| cfg.kappa.iter().map(move |k| (d, k.resolve(d))))
        .collect();

    jobs.par_iter()
        .map(|&(delta, kappa)| {
            if !(kappa > 0.0) {
                return Err(CliError::config(format!("kappa must be positive, got {kappa}")));
            }
            let cell = ExperimentConfig { problem: Problem::HomFd, delta: vec![delta], ..cfg.clone() };
            let setup = setup(&cell)?;
            let exact: Vec<Vec<f64>> = ts.iter().map(|&t| setup.exact(alpha, t)).collect::<Result<_, _>>()?;
            let seen = Mutex::new(HashMap::new());
            let err = |n: usize| -> Result<f64, CliError> {
                if let Some(&e) = seen.lock().unwrap().get(&n) {
                    return Ok(e);
                }
                let (us, _) = setup.solve(&cell, alpha, beta, n, kappa, &ts)?;
                let e = us.iter().zip(&exact).map(|(u, x)| sup_error(&setup.sampled(u), x)).fold(0.0, f64::max);
                log::debug!("delta={delta} kappa={kappa} N={n}: {e:e}");
                seen.lock().unwrap().insert(n, e);
                Ok(e)
            };
            let top = err(cfg.n_max)?;
            if !(top <= cfg.threshold) {
                // the plateau: the smallest error seen over the upper half of the range
                let mut plateau = top;
                for q in [2, 3] {
                    plateau = plateau.min(err(cfg.n_max * q / 4)?);
                }
                return Ok(Table1Row { delta, kappa, n_e: None, err: plateau, status: Table1Status::NotReached });
            }
            let (mut lo, mut hi) = (0usize, cfg.n_max);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if err(mid)? <= cfg.threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(Table1Row { delta, kappa, n_e: Some(hi), err: err(hi)?, status: Table1Status::Reached })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseTrial {
    pub alpha_true: f64,
    pub subordinated: FitReport,
    pub legacy: FitReport,
    /// solves the legacy fit spent on the `u₀` caches alone
    pub legacy_u0_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseBatch {
    pub trials: Vec<InverseTrial>,
    /// unique solves of the shared subordination registry for `u₀` and `u₁`
    pub solves_per_vector: (usize, usize),
}

impl InverseBatch {
    pub fn table(&self) -> Table {
        let mut t = Table::new(INVERSE_HEADER);
        for (i, tr) in self.trials.iter().enumerate() {
            for (mode, r) in [("subordinated", &tr.subordinated), ("legacy", &tr.legacy)] {
                t.push(&[
                    i.to_string(),
                    fmt_f64(tr.alpha_true),
                    mode.into(),
                    fmt_f64(r.alpha_fit),
                    fmt_f64((r.alpha_fit - tr.alpha_true).abs()),
                    fmt_f64(r.residual),
                    r.iterations.to_string(),
                    r.n_model_evals.to_string(),
                    r.n_resolvent_solves.to_string(),
                ]);
            }
        }
        t
    }
}

fn write_trace(dir: &Path, trial: usize, mode: &str, r: &FitReport) -> Result<(), CliError> {
    let mut t = Table::new(TRACE_HEADER);
    for row in &r.trace {
        t.push(&[row.iter.to_string(), fmt_f64(row.alpha), fmt_f64(row.residual), row.n_solves.to_string()]);
    }
    t.emit(Some(&dir.join(format!("trial{trial}_{mode}.csv"))))?;
    Ok(())
}

/// Seeded batch of noiseless α identifications, each fitted with the shared
/// subordinated model and with the per-trial `β = α` model.
pub fn run_inverse(cfg: &ExperimentConfig) -> Result<InverseBatch, CliError> {
    if cfg.trials == 0 {
        return Err(CliError::config("trials must be positive"));
    }
    let modes = vec![cfg.k0 as i64, cfg.k1 as i64];
    let a: Arc<dyn SectorialOperator> = Arc::new(diag_operator(&modes)?);
    let beta = cfg.beta[0];
    let model = |mode| -> Result<ForwardModel, CliError> {
        Ok(ForwardModel {
            a: a.clone(),
            sp: SpectralParams::with_angle(cfg.varphi_s)?,
            u0: unit_vector(&modes, cfg.k0, "k0")?,
            u1: Some(unit_vector(&modes, cfg.k1, "k1")?),
            mode,
            n: cfg.n[0],
            kappa: None,
            a0: cfg.a0,
        })
    };
    let sub = model(ModelMode::Subordinated { beta, omega: cfg.omega })?;
    let legacy = model(ModelMode::Legacy)?;
    let bounds = cfg.alpha_bounds.unwrap_or((0.05, beta));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let alphas: Vec<f64> = (0..cfg.trials).map(|_| rng.gen_range(0.1..=1.6)).collect();
    let times = cfg.time_grid();
    let data = alphas
        .iter()
        .map(|&alpha| {
            let d = times
                .iter()
                .map(|&t| eigenmode_exact(alpha, cfg.k0, cfg.k1, t, cfg.probe_x).map(|v| vec![v]))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Measurements::new(times.clone(), Probe::Point(cfg.probe_x), d)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    // one registry for the whole subordinated batch, so later fits reuse earlier solves
    let registry = ResolventRegistry::new();
    let subordinated = data
        .iter()
        .map(|m| fit_alpha(m, &sub, bounds, cfg.alpha0, &registry))
        .collect::<Result<Vec<_>, _>>()?;
    let legacy_fits = data
        .par_iter()
        .map(|m| {
            let reg = ResolventRegistry::new();
            let r = fit_alpha(m, &legacy, bounds, cfg.alpha0, &reg)?;
            Ok((r, reg.solves_for(CacheKind::Corrected, &legacy.u0)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let solves_per_vector = (
        registry.solves_for(CacheKind::Corrected, &sub.u0),
        registry.solves_for(CacheKind::Plain, sub.u1.as_ref().expect("u1 is set")),
    );
    let trials: Vec<InverseTrial> = alphas
        .into_iter()
        .zip(subordinated)
        .zip(legacy_fits)
        .map(|((alpha_true, subordinated), (legacy, legacy_u0_solves))| InverseTrial {
            alpha_true,
            subordinated,
            legacy,
            legacy_u0_solves,
        })
        .collect();
    if let Some(dir) = &cfg.trace_dir {
        std::fs::create_dir_all(dir)?;
        for (i, tr) in trials.iter().enumerate() {
            write_trace(dir, i, "subordinated", &tr.subordinated)?;
            write_trace(dir, i, "legacy", &tr.legacy)?;
        }
    }
    Ok(InverseBatch { trials, solves_per_vector })
}

/// Snapshots `(t, x, re u, im u)` at `cfg.times`, boundary points included.
pub fn emit_solution(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let setup = setup(cfg)?;
    let mut table = Table::new(SOLUTION_HEADER);
    if cfg.times.is_empty() {
        return Ok(table);
    }
    let (alpha, beta) = (cfg.alpha[0], cfg.beta[0]);
    let kappa = cfg.kappa[0].resolve(cfg.delta[0]);
    let (us, _) = setup.solve(cfg, alpha, beta, cfg.n[0], kappa, &cfg.times)?;
    for (t, u) in cfg.times.iter().zip(us) {
        for (x, v) in setup.on_grid(u).with_boundary(cfg.samples) {
            table.push(&[fmt_f64(*t), fmt_f64(x), fmt_f64(v.re), fmt_f64(v.im)]);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_file;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_map(&parse_file(text).unwrap()).unwrap()
    }

    #[test]
    fn eigen_sweep_decays() {
        let c = cfg("problem=hom-eigen\nalpha=0.5\nn=8,32\ntime_grid_size=8\nsamples=9");
        let curve = run_convergence(&c).unwrap();
        let e = curve.errors(0.5, 1.01);
        assert_eq!(e.len(), 2);
        assert!(e[1].1 < e[0].1 * 1e-2, "{e:?}");
        assert!(curve.points.iter().all(|p| p.n_resolvent_solves > 0));
    }

    #[test]
    fn single_node_is_finite() {
        let c = cfg("problem=hom-eigen\nalpha=0.7\nn=1\ntime_grid_size=4\nsamples=5");
        let e = run_convergence(&c).unwrap().points[0].err_sup;
        assert!(e.is_finite() && e > 1e-3, "{e}");
    }

    #[test]
    fn snapshot_at_zero_is_the_data() {
        let c = cfg("problem=hom-eigen\nalpha=0.5\nn=128\ntimes=0\nsamples=9");
        let t = emit_solution(&c).unwrap();
        assert_eq!(t.rows().len(), 11);
        for row in t.rows() {
            let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
            assert!((f[2] - (PI * f[1]).sin()).abs() < 1e-9, "{row}");
        }
    }

    #[test]
    fn empty_times_give_a_header_only_table() {
        let c = cfg("problem=full\nm=20\ntimes=");
        assert_eq!(emit_solution(&c).unwrap().render(), format!("{SOLUTION_HEADER}\n"));
    }

    #[test]
    fn inverse_problem_has_no_forward_sweep() {
        let c = cfg("problem=inverse");
        assert!(matches!(run_convergence(&c), Err(CliError::Config(_))));
    }
}
