//! Mild solution of `∂_t^α u + A u = f`, `u(0) = u₀`, `u′(0) = u₁`:
//!
//! ```text
//! u(t) = S_α(t)u₀ + S_{α,2}(t)u₁ + J_α S_α(t) f(0) + ∫₀ᵗ S_α(t−s) J_α f′(s) ds
//! ```
//!
//! The last integral is split as `∫₀ᵗ J_α f′ + ∫₀ᵗ (S_α(t−s) − I) J_α f′(s) ds`, and
//! every time integral goes through the substitution `s = tψ(p)`,
//! `ψ(p) = 1/(1 + e^{−p})`, followed by the sinc rule.

use crate::contour::{contour_point, step_size, ContourError, HyperbolicContour, OrderPair};
use crate::mlf::{ml_real, recip_gamma, MittagLeffler, MlError};
use crate::operators::{GridFunction, OperatorError, SectorialOperator};
use crate::propagator::{
    apply_corrected, apply_plain, ml_first, ml_second, CacheKind, Kahan, PropagatorError, QuadratureGrid,
    ResolventCache, ResolventRegistry,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolutionError {
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Ml(#[from] MlError),
    #[error("u1 must vanish for alpha <= 1 (alpha = {0})")]
    U1NotAllowed(f64),
    #[error("invalid scheme parameters: {0}")]
    InvalidParams(&'static str),
}

/// `⌈x⌉`, ignoring floating-point noise within 1e-9 of an integer.
pub fn ceil_counter(x: f64) -> usize {
    let r = x.round();
    let n = if (x - r).abs() <= 1e-9 * x.abs().max(1.0) { r } else { x.ceil() };
    n.max(1.0) as usize
}

/// Node counts of the inhomogeneous scheme: `N₀` for the Riemann–Liouville
/// rule applied to `S̃_α f(0)`, and `N₁ᵃ … N₅ᵃ` for the double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InhomogeneousCounts {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub n4: usize,
    pub n5: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub n: usize,
    /// smoothness of the initial data
    pub kappa: f64,
    /// smoothness of the source term
    pub chi: f64,
}

impl SchemeParams {
    pub fn new(n: usize, kappa: f64, chi: f64) -> Result<Self, SolutionError> {
        if n == 0 {
            return Err(SolutionError::InvalidParams("N must be positive"));
        }
        if !(kappa > 0.0 && kappa.is_finite() && chi > 0.0 && chi.is_finite()) {
            return Err(SolutionError::InvalidParams("kappa and chi must be positive"));
        }
        Ok(Self { n, kappa, chi })
    }

    /// `(N₁, N₂) = (N, ⌈κβN⌉)` for `S̃_α u₀` and `S̃_{α,2} u₁`.
    pub fn homogeneous_counts(&self, beta: f64) -> (usize, usize) {
        (self.n, ceil_counter(self.kappa * beta * self.n as f64))
    }

    /// `h = √(πω/(κβN))`, shared by both homogeneous sums.
    pub fn homogeneous_step(&self, omega: f64, beta: f64) -> Result<f64, SolutionError> {
        Ok(step_size(omega, self.kappa, beta, self.n)?)
    }

    pub fn inhomogeneous_counts(&self, op: &OrderPair) -> InhomogeneousCounts {
        let bcn = op.beta() * self.chi * self.n as f64;
        let wide = ceil_counter(bcn / op.alpha().min(1.0));
        let narrow = ceil_counter(bcn);
        InhomogeneousCounts { n0: wide, n1: narrow, n2: wide, n3: self.n, n4: narrow, n5: wide }
    }

    /// `h = √(πω/(βχN))`, shared by every inhomogeneous sum.
    pub fn inhomogeneous_step(&self, omega: f64, beta: f64) -> Result<f64, SolutionError> {
        Ok(step_size(omega, self.chi, beta, self.n)?)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// One node of the logistic substitution.
#[derive(Debug, Clone, Copy)]
struct LogisticNode {
    /// ψ(p)
    psi: f64,
    /// ψ′(p) = ψ(1 − ψ)
    dpsi: f64,
    /// 1 − ψ(p)
    comp: f64,
}

fn logistic_nodes(n: usize, h: f64) -> Vec<LogisticNode> {
    let n = n as i64;
    (-n..=n)
        .map(|k| {
            let p = k as f64 * h;
            let ln_psi = -softplus(-p);
            let ln_comp = -softplus(p);
            LogisticNode { psi: ln_psi.exp(), dpsi: (ln_psi + ln_comp).exp(), comp: ln_comp.exp() }
        })
        .collect()
}

/// Sinc rule for `J_α g(t) = (t^α/Γ(α)) ∫ ψ(p)(1 − ψ(p))^α g(tψ(p)) dp` with
/// nodes `p_k = kh`, `|k| ≤ N`.
#[derive(Debug, Clone)]
pub struct RlRule {
    alpha: f64,
    /// (ψ_k, h ψ_k (1−ψ_k)^α / Γ(α))
    nodes: Vec<(f64, f64)>,
}

impl RlRule {
    pub fn new(alpha: f64, n: usize, h: f64) -> Result<Self, SolutionError> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(SolutionError::InvalidParams("RL order must lie in (0, 2)"));
        }
        if n == 0 || !(h > 0.0 && h.is_finite()) {
            return Err(SolutionError::InvalidParams("RL rule needs N >= 1 and h > 0"));
        }
        let scale = h * recip_gamma(alpha);
        let n = n as i64;
        let nodes = (-n..=n)
            .map(|k| {
                let p = k as f64 * h;
                let ln_psi = -softplus(-p);
                let ln_comp = -softplus(p);
                (ln_psi.exp(), scale * (ln_psi + alpha * ln_comp).exp())
            })
            .collect();
        Ok(Self { alpha, nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(s_k, w_k)` with `J̃g(t) = Σ w_k g(s_k)`; empty at `t = 0`.
    pub fn at(&self, t: f64) -> Vec<(f64, f64)> {
        if t == 0.0 {
            return Vec::new();
        }
        let ta = t.powf(self.alpha);
        self.nodes.iter().map(|&(psi, w)| (t * psi, ta * w)).collect()
    }

    pub fn apply<E>(&self, t: f64, mut g: impl FnMut(f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut acc = Kahan::default();
        for (s, w) in self.at(t) {
            acc.add(w * g(s)?);
        }
        Ok(acc.sum())
    }
}

/// Step balancing the tail `e^{−min(α,1)Nh}` of the logistic rule against its
/// discretization error `e^{−2πd/h}`, with `d = 0.8π` inside the strip `|Im p| < π`.
pub fn rl_step(alpha: f64, n: usize) -> f64 {
    PI * (1.6 / (alpha.min(1.0) * n as f64)).sqrt()
}

/// `J̃_α^N g(t)` for a scalar `g`; zero at `t = 0`.
pub fn rl_quadrature<E>(
    alpha: f64,
    g: impl FnMut(f64) -> Result<f64, E>,
    t: f64,
    n: usize,
    h: f64,
) -> Result<f64, SolutionError>
where
    SolutionError: From<E>,
{
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SolutionError::InvalidParams("time must be non-negative"));
    }
    let rule = RlRule::new(alpha, n, h)?;
    Ok(rule.apply(t, g)?)
}

impl From<std::convert::Infallible> for SolutionError {
    fn from(e: std::convert::Infallible) -> Self {
        match e {}
    }
}

/// `S̃_α^{N₁}(t)u₀ + S̃_{α,2}^{N₂}(t)u₁` on shared caches.
pub struct HomogeneousScheme {
    op: OrderPair,
    cache0: Arc<ResolventCache>,
    cache1: Option<Arc<ResolventCache>>,
    ml1: MittagLeffler,
    ml2: MittagLeffler,
}

impl HomogeneousScheme {
    pub fn new(
        registry: &ResolventRegistry,
        a: &dyn SectorialOperator,
        op: OrderPair,
        contour: &HyperbolicContour,
        params: &SchemeParams,
        u0: &GridFunction,
        u1: Option<&GridFunction>,
    ) -> Result<Self, SolutionError> {
        let beta = op.beta();
        let (n1, n2) = params.homogeneous_counts(beta);
        let h = params.homogeneous_step(contour.omega, beta)?;
        let u1 = u1.filter(|u| u.values().iter().any(|v| v.norm() != 0.0));
        if u1.is_some() && op.alpha() <= 1.0 {
            return Err(SolutionError::U1NotAllowed(op.alpha()));
        }
        let g1 = QuadratureGrid::new(n1, h)?;
        let cache0 = registry.get_or_build(CacheKind::Corrected, contour, &g1, a, beta, u0)?;
        let cache1 = match u1 {
            Some(u1) => {
                let g2 = QuadratureGrid::new(n2, h)?;
                Some(registry.get_or_build(CacheKind::Plain, contour, &g2, a, beta, u1)?)
            }
            None => None,
        };
        Ok(Self { op, cache0, cache1, ml1: ml_first(&op), ml2: ml_second(&op) })
    }

    pub fn order(&self) -> &OrderPair {
        &self.op
    }

    pub fn eval(&self, t: f64) -> Result<GridFunction, SolutionError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(PropagatorError::InvalidTime(t).into());
        }
        let mut v = apply_corrected(&self.cache0, &self.ml1, t)?;
        if let Some(c1) = &self.cache1 {
            for (o, w) in v.iter_mut().zip(apply_plain(c1, &self.ml2, t)?) {
                *o += w;
            }
        }
        Ok(GridFunction::from_parts(self.cache0.x().grid().clone(), v))
    }

    /// [`Self::eval`] at every time, in parallel; output order follows `ts`.
    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<GridFunction>, SolutionError> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn homogeneous_solution(
    registry: &ResolventRegistry,
    params: &SchemeParams,
    contour: &HyperbolicContour,
    a: &dyn SectorialOperator,
    op: OrderPair,
    u0: &GridFunction,
    u1: Option<&GridFunction>,
    t: f64,
) -> Result<GridFunction, SolutionError> {
    HomogeneousScheme::new(registry, a, op, contour, params, u0, u1)?.eval(t)
}

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Derivative {
    General(Arc<dyn Fn(f64) -> GridFunction + Send + Sync>),
    /// `f′(t) = Σ φ_i(t) g_i`
    Separable(Vec<(Scalar, GridFunction)>),
}

/// Source data `f(0)` and `t ↦ f′(t)`; `‖f′(t)‖ ≲ t^{−s}` near zero.
#[derive(Clone)]
pub struct SourceTerm {
    f0: GridFunction,
    fprime: Derivative,
    singularity: f64,
}

impl std::fmt::Debug for SourceTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SourceTerm").field("f0", &self.f0).field("singularity", &self.singularity).finish()
    }
}

fn check_singularity(s: f64) -> Result<(), SolutionError> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(SolutionError::InvalidParams("singularity exponent must lie in [0, 1)"))
    }
}

impl SourceTerm {
    pub fn new(
        f0: GridFunction,
        fprime: impl Fn(f64) -> GridFunction + Send + Sync + 'static,
        singularity: f64,
    ) -> Result<Self, SolutionError> {
        check_singularity(singularity)?;
        Ok(Self { f0, fprime: Derivative::General(Arc::new(fprime)), singularity })
    }

    /// `f′(t) = Σ φ_i(t) g_i`; the RL integrals are then taken on the scalars `φ_i`.
    pub fn separable(
        f0: GridFunction,
        terms: Vec<(Scalar, GridFunction)>,
        singularity: f64,
    ) -> Result<Self, SolutionError> {
        check_singularity(singularity)?;
        if terms.iter().any(|(_, g)| g.grid() != f0.grid()) {
            return Err(OperatorError::GridMismatch.into());
        }
        Ok(Self { f0, fprime: Derivative::Separable(terms), singularity })
    }

    pub fn zero(grid: crate::operators::Grid) -> Self {
        Self { f0: GridFunction::zeros(grid), fprime: Derivative::Separable(Vec::new()), singularity: 0.0 }
    }

    pub fn f0(&self) -> &GridFunction {
        &self.f0
    }

    pub fn fprime(&self, t: f64) -> GridFunction {
        match &self.fprime {
            Derivative::General(f) => f(t),
            Derivative::Separable(terms) => {
                let mut v = vec![Complex64::new(0.0, 0.0); self.f0.len()];
                for (phi, g) in terms {
                    let c = phi(t);
                    for (o, x) in v.iter_mut().zip(g.values()) {
                        *o += c * x;
                    }
                }
                GridFunction::from_parts(self.f0.grid().clone(), v)
            }
        }
    }

    pub fn singularity(&self) -> f64 {
        self.singularity
    }
}

/// The three-term approximation of the source contribution.
pub struct InhomogeneousScheme {
    op: OrderPair,
    a: Arc<dyn SectorialOperator>,
    contour: HyperbolicContour,
    cache_f0: Arc<ResolventCache>,
    src: SourceTerm,
    counts: InhomogeneousCounts,
    h: f64,
    rl_outer: RlRule,
    rl_inner: RlRule,
    time_nodes: Vec<LogisticNode>,
    ml: MittagLeffler,
    solves: AtomicUsize,
}

impl InhomogeneousScheme {
    pub fn new(
        registry: &ResolventRegistry,
        a: Arc<dyn SectorialOperator>,
        op: OrderPair,
        contour: &HyperbolicContour,
        params: &SchemeParams,
        src: SourceTerm,
    ) -> Result<Self, SolutionError> {
        if src.f0.grid() != a.grid() {
            return Err(OperatorError::GridMismatch.into());
        }
        if op.alpha() < 1.0 && src.singularity > 1.0 - op.alpha() {
            log::warn!(
                "declared singularity t^-{} of f' exceeds t^(alpha-1) = t^-{}",
                src.singularity,
                1.0 - op.alpha()
            );
        }
        let counts = params.inhomogeneous_counts(&op);
        let h = params.inhomogeneous_step(contour.omega, op.beta())?;
        let g3 = QuadratureGrid::new(counts.n3, h)?;
        let cache_f0 = registry.get_or_build(CacheKind::Corrected, contour, &g3, a.as_ref(), op.beta(), &src.f0)?;
        Ok(Self {
            op,
            contour: *contour,
            cache_f0,
            counts,
            h,
            rl_outer: RlRule::new(op.alpha(), counts.n0, h)?,
            rl_inner: RlRule::new(op.alpha(), counts.n2, h)?,
            time_nodes: logistic_nodes(counts.n1, h),
            ml: ml_first(&op),
            solves: AtomicUsize::new(0),
            a,
            src,
        })
    }

    pub fn counts(&self) -> InhomogeneousCounts {
        self.counts
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Resolvent solves spent in the third term so far (the f(0) cache is
    /// accounted for by the registry).
    pub fn term3_solves(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }

    /// `J̃_α f′(τ)` as a vector.
    fn rl_fprime(&self, tau: f64) -> Vec<Complex64> {
        let m = self.src.f0.len();
        let nodes = self.rl_inner.at(tau);
        match &self.src.fprime {
            Derivative::General(f) => {
                let mut acc = vec![(Kahan::default(), Kahan::default()); m];
                for (s, w) in nodes {
                    for (a, x) in acc.iter_mut().zip(f(s).values()) {
                        a.0.add(w * x.re);
                        a.1.add(w * x.im);
                    }
                }
                acc.into_iter().map(|(re, im)| Complex64::new(re.sum(), im.sum())).collect()
            }
            Derivative::Separable(terms) => {
                let mut v = vec![Complex64::new(0.0, 0.0); m];
                for (phi, g) in terms {
                    let mut acc = Kahan::default();
                    for &(s, w) in &nodes {
                        acc.add(w * phi(s));
                    }
                    let c = acc.sum();
                    for (o, x) in v.iter_mut().zip(g.values()) {
                        *o += c * x;
                    }
                }
                v
            }
        }
    }

    pub fn eval(&self, t: f64) -> Result<GridFunction, SolutionError> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(PropagatorError::InvalidTime(t).into());
        }
        let m = self.src.f0.len();
        let gamma = self.op.gamma();
        let pw = |x: f64| if x == 0.0 { 0.0 } else { x.powf(gamma) };
        let zero = Complex64::new(0.0, 0.0);

        // term 1: J̃ [s ↦ S̃(s) f(0)](t), only the time factors change across RL nodes
        let rl = self.rl_outer.at(t);
        let mut coeffs = Vec::with_capacity(self.cache_f0.points().len());
        for z in self.cache_f0.points() {
            let mut acc_re = Kahan::default();
            let mut acc_im = Kahan::default();
            for &(s, w) in &rl {
                let e = self.ml.eval(z * pw(s))?.value * w;
                acc_re.add(e.re);
                acc_im.add(e.im);
            }
            coeffs.push(Complex64::new(acc_re.sum(), acc_im.sum()));
        }
        let j_one: f64 = rl.iter().map(|&(_, w)| w).sum();
        let mut out = self.cache_f0.contract(&coeffs);
        for (o, f) in out.iter_mut().zip(self.src.f0.values()) {
            *o += f * j_one;
        }
        if t == 0.0 {
            return Ok(GridFunction::from_parts(self.src.f0.grid().clone(), out));
        }

        // v_k = J̃ f′(tψ_k) shared by terms 2 and 3
        let v: Vec<Vec<Complex64>> = self.time_nodes.iter().map(|nd| self.rl_fprime(t * nd.psi)).collect();

        // term 2: h Σ tψ′_k v_k
        for j in 0..m {
            let mut re = Kahan::default();
            let mut im = Kahan::default();
            for (nd, vk) in self.time_nodes.iter().zip(&v) {
                let c = self.h * t * nd.dpsi;
                re.add(c * vk[j].re);
                im.add(c * vk[j].im);
            }
            out[j] += Complex64::new(re.sum(), im.sum());
        }

        // term 3: (h/2πi) Σ_ℓ F(ℓh) [h Σ_k tψ′_k E(z_ℓ t^γ (1−ψ_k)^γ) v_k]
        let tg = pw(t);
        let scaled: Vec<f64> = self.time_nodes.iter().map(|nd| tg * pw(nd.comp)).collect();
        let real = self.src.f0.is_real() && v.iter().all(|vk| vk.iter().all(|x| x.im == 0.0));
        let n3 = self.counts.n3 as i64;
        let ls: Vec<i64> = if real { (0..=n3).collect() } else { (-n3..=n3).collect() };
        let grid = self.src.f0.grid().clone();
        let beta = self.op.beta();
        let q: Vec<Vec<Complex64>> = ls
            .par_iter()
            .map(|&l| -> Result<Vec<Complex64>, SolutionError> {
                let (z, dz) = contour_point(&self.contour, l as f64 * self.h);
                let mut w = vec![zero; m];
                for ((nd, vk), sc) in self.time_nodes.iter().zip(&v).zip(&scaled) {
                    let c = self.ml.eval(z * sc)?.value * (self.h * t * nd.dpsi);
                    for (wj, x) in w.iter_mut().zip(vk) {
                        *wj += c * x;
                    }
                }
                let wf = GridFunction::from_parts(grid.clone(), w);
                let lz = z.ln();
                let r = self.a.resolvent_shifted((lz * beta).exp(), &wf)?;
                self.solves.fetch_add(1, Ordering::Relaxed);
                let a = dz * (lz * (beta - 1.0)).exp();
                let b = dz / z;
                Ok(r.values().iter().zip(wf.values()).map(|(ri, wi)| a * ri - b * wi).collect())
            })
            .collect::<Result<_, _>>()?;
        let scale = self.h / (2.0 * PI);
        for j in 0..m {
            if real {
                let mut acc = Kahan::default();
                for (i, ql) in q.iter().enumerate() {
                    acc.add(if i == 0 { ql[j].im } else { 2.0 * ql[j].im });
                }
                out[j] += acc.sum() * scale;
            } else {
                let mut re = Kahan::default();
                let mut im = Kahan::default();
                for ql in &q {
                    re.add(ql[j].re);
                    im.add(ql[j].im);
                }
                out[j] += Complex64::new(im.sum(), -re.sum()) * scale;
            }
        }
        Ok(GridFunction::from_parts(grid, out))
    }

    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<GridFunction>, SolutionError> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }
}

pub fn inhomogeneous_solution(
    registry: &ResolventRegistry,
    params: &SchemeParams,
    contour: &HyperbolicContour,
    a: Arc<dyn SectorialOperator>,
    op: OrderPair,
    src: SourceTerm,
    t: f64,
) -> Result<GridFunction, SolutionError> {
    InhomogeneousScheme::new(registry, a, op, contour, params, src)?.eval(t)
}

/// Homogeneous plus inhomogeneous parts.
pub struct MildSolution {
    pub homogeneous: HomogeneousScheme,
    pub inhomogeneous: Option<InhomogeneousScheme>,
}

impl MildSolution {
    pub fn eval(&self, t: f64) -> Result<GridFunction, SolutionError> {
        let uh = self.homogeneous.eval(t)?;
        match &self.inhomogeneous {
            Some(ih) => Ok(uh.axpy(Complex64::new(1.0, 0.0), &ih.eval(t)?)?),
            None => Ok(uh),
        }
    }

    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<GridFunction>, SolutionError> {
        ts.par_iter().map(|&t| self.eval(t)).collect()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn mild_solution(
    registry: &ResolventRegistry,
    params: &SchemeParams,
    contour: &HyperbolicContour,
    a: Arc<dyn SectorialOperator>,
    op: OrderPair,
    u0: &GridFunction,
    u1: Option<&GridFunction>,
    src: Option<SourceTerm>,
) -> Result<MildSolution, SolutionError> {
    let homogeneous = HomogeneousScheme::new(registry, a.as_ref(), op, contour, params, u0, u1)?;
    let inhomogeneous = match src {
        Some(s) => Some(InhomogeneousScheme::new(registry, a, op, contour, params, s)?),
        None => None,
    };
    Ok(MildSolution { homogeneous, inhomogeneous })
}

/// Exact solution for `A = −d²/dx²`, `u₀ = sin πk₀x` and `u₁ = sin πk₁x` (the
/// latter only for `α > 1`): `E_{α,1}(−π²k₀²t^α) sin πk₀x + t E_{α,2}(−π²k₁²t^α) sin πk₁x`.
pub fn eigenmode_exact(alpha: f64, k0: u32, k1: u32, t: f64, x: f64) -> Result<f64, MlError> {
    let l0 = (PI * k0 as f64).powi(2);
    let ta = if t == 0.0 { 0.0 } else { t.powf(alpha) };
    let mut u = ml_real(alpha, 1.0, -l0 * ta)? * (PI * k0 as f64 * x).sin();
    if alpha > 1.0 {
        let l1 = (PI * k1 as f64).powi(2);
        u += t * ml_real(alpha, 2.0, -l1 * ta)? * (PI * k1 as f64 * x).sin();
    }
    Ok(u)
}
