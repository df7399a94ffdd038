//! Sinc quadrature for the propagators `S_α(t)` and `S_{α,2}(t) = ∫₀ᵗ S_α(s) ds`.
//!
//! With `z_k = z(kh)` on the hyperbolic contour,
//!
//! ```text
//! S̃_α(t)x     = x + (h/2πi) Σ_k E_{γ,1}(z_k t^γ) z'_k (z_k^{β−1} (z_k^β + A)^{-1} x − x/z_k)
//! S̃_{α,2}(t)x = (h/2πi) Σ_k t^{1−γ} E_{γ,2−γ}(z_k t^γ) z'_k z_k^{β−2} (z_k^β + A)^{-1} x
//! ```
//!
//! The vector samples depend on the contour, β and x but not on α or t, so they
//! are computed once per [`ResolventCache`]. Real operators and real data have
//! `z(−ξ) = conj z(ξ)`, and only `k = 0..N` is stored.

use crate::contour::{contour_point, HyperbolicContour, OrderPair};
use crate::mlf::{MittagLeffler, MlError};
use crate::operators::{GridFunction, OperatorError, SectorialOperator};
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagatorError {
    #[error("cache does not match the requested evaluation: {0}")]
    CacheMismatch(&'static str),
    #[error(transparent)]
    MlEvalFailure(#[from] MlError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("invalid quadrature grid: N = {n}, h = {h}")]
    InvalidGrid { n: usize, h: f64 },
    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    n: usize,
    h: f64,
}

impl QuadratureGrid {
    pub fn new(n: usize, h: f64) -> Result<Self, PropagatorError> {
        if n == 0 || !(h > 0.0 && h.is_finite()) {
            return Err(PropagatorError::InvalidGrid { n, h });
        }
        Ok(Self { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node(&self, k: i64) -> f64 {
        k as f64 * self.h
    }
}

/// Which integrand the cached samples belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CacheKind {
    /// `z' (z^{β−1} r − x/z)`, for `S_α`.
    Corrected,
    /// `z' z^{β−2} r`, for `S_{α,2}`.
    Plain,
}

#[derive(Debug, Clone)]
pub struct ResolventCache {
    id: u64,
    kind: CacheKind,
    contour: HyperbolicContour,
    beta: f64,
    grid: QuadratureGrid,
    /// true when only `k = 0..N` is stored
    symmetric: bool,
    /// contour points `z_k`, ascending k
    z: Vec<Complex64>,
    samples: Vec<Vec<Complex64>>,
    x: GridFunction,
    unique_resolvent_solves: usize,
}

fn cache_key(
    kind: CacheKind,
    c: &HyperbolicContour,
    g: &QuadratureGrid,
    op: &dyn SectorialOperator,
    beta: f64,
    x: &GridFunction,
) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    kind.hash(&mut h);
    for v in [c.a0, c.a_i, c.b_i, c.omega, beta, g.h] {
        v.to_bits().hash(&mut h);
    }
    g.n.hash(&mut h);
    op.fingerprint().hash(&mut h);
    x.fingerprint().hash(&mut h);
    h.finish()
}

impl ResolventCache {
    pub fn build(
        kind: CacheKind,
        c: &HyperbolicContour,
        g: &QuadratureGrid,
        op: &dyn SectorialOperator,
        beta: f64,
        x: &GridFunction,
    ) -> Result<Self, PropagatorError> {
        if op.grid() != x.grid() {
            return Err(OperatorError::GridMismatch.into());
        }
        let symmetric = x.is_real();
        let n = g.n as i64;
        let ks: Vec<i64> = if symmetric { (0..=n).collect() } else { (-n..=n).collect() };
        let rows: Vec<Option<(Complex64, Vec<Complex64>)>> = ks
            .par_iter()
            .map(|&k| {
                let (z, dz) = contour_point(c, g.node(k));
                // far out on the contour the integrand has underflowed; a node whose
                // arithmetic overflows there adds nothing
                if !(z.is_finite() && dz.is_finite()) {
                    return Ok(None);
                }
                let lz = z.ln();
                let zb = (lz * beta).exp();
                let r = op.resolvent_shifted(zb, x)?;
                let row = match kind {
                    CacheKind::Corrected => {
                        let a = dz * (lz * (beta - 1.0)).exp();
                        let b = dz / z;
                        r.values().iter().zip(x.values()).map(|(ri, xi)| a * ri - b * xi).collect()
                    }
                    CacheKind::Plain => {
                        let a = dz * (lz * (beta - 2.0)).exp();
                        r.values().iter().map(|ri| a * ri).collect()
                    }
                };
                let row: Vec<Complex64> = row;
                Ok(row.iter().all(|v| v.is_finite()).then_some((z, row)))
            })
            .collect::<Result<_, PropagatorError>>()?;
        let solved = rows.iter().flatten().count();
        let zero = Complex64::new(0.0, 0.0);
        let (z, samples): (Vec<_>, Vec<_>) =
            rows.into_iter().map(|r| r.unwrap_or_else(|| (zero, vec![zero; x.len()]))).unzip();
        Ok(Self {
            id: cache_key(kind, c, g, op, beta, x),
            kind,
            contour: *c,
            beta,
            grid: *g,
            symmetric,
            z,
            unique_resolvent_solves: solved,
            samples,
            x: x.clone(),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn kind(&self) -> CacheKind {
        self.kind
    }

    pub fn contour(&self) -> &HyperbolicContour {
        &self.contour
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn x(&self) -> &GridFunction {
        &self.x
    }

    pub fn unique_resolvent_solves(&self) -> usize {
        self.unique_resolvent_solves
    }

    /// Contour points in storage order.
    pub fn points(&self) -> &[Complex64] {
        &self.z
    }

    pub fn samples(&self) -> &[Vec<Complex64>] {
        &self.samples
    }

    /// `(h/2πi) Σ_k c_k s_k` for per-node scalars `c_k`, using the conjugate
    /// pairing when the cache is symmetric. Ascending k, compensated.
    pub(crate) fn contract(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(coeffs.len(), self.samples.len());
        let m = self.x.len();
        let h = self.grid.h;
        if self.symmetric {
            let mut out = vec![Complex64::new(0.0, 0.0); m];
            for (j, o) in out.iter_mut().enumerate() {
                let mut acc = Kahan::default();
                for (k, (c, s)) in coeffs.iter().zip(&self.samples).enumerate() {
                    let v = (c * s[j]).im;
                    acc.add(if k == 0 { v } else { 2.0 * v });
                }
                *o = Complex64::new(acc.sum() * h / (2.0 * PI), 0.0);
            }
            out
        } else {
            let mut out = vec![Complex64::new(0.0, 0.0); m];
            for (j, o) in out.iter_mut().enumerate() {
                let mut re = Kahan::default();
                let mut im = Kahan::default();
                for (c, s) in coeffs.iter().zip(&self.samples) {
                    let v = c * s[j];
                    re.add(v.re);
                    im.add(v.im);
                }
                // divide by i
                *o = Complex64::new(im.sum(), -re.sum()) * (h / (2.0 * PI));
            }
            out
        }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub(crate) fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn sum(&self) -> f64 {
        self.sum
    }
}

/// Caches keyed by contour, β, grid, operator and vector, with global and
/// per-vector solve accounting. Thread safe.
#[derive(Debug, Default)]
pub struct ResolventRegistry {
    caches: Mutex<HashMap<u64, Arc<ResolventCache>>>,
    per_vector: Mutex<HashMap<(CacheKind, u64), usize>>,
    solves: AtomicUsize,
}

impl ResolventRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(
        &self,
        kind: CacheKind,
        c: &HyperbolicContour,
        g: &QuadratureGrid,
        op: &dyn SectorialOperator,
        beta: f64,
        x: &GridFunction,
    ) -> Result<Arc<ResolventCache>, PropagatorError> {
        let key = cache_key(kind, c, g, op, beta, x);
        if let Some(hit) = self.caches.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let cache = Arc::new(ResolventCache::build(kind, c, g, op, beta, x)?);
        let mut map = self.caches.lock().unwrap();
        // a concurrent builder may have won the race; keep the first entry
        if let Some(hit) = map.get(&key) {
            return Ok(Arc::clone(hit));
        }
        self.solves.fetch_add(cache.unique_resolvent_solves, Ordering::Relaxed);
        *self.per_vector.lock().unwrap().entry((kind, x.fingerprint())).or_insert(0) += cache.unique_resolvent_solves;
        map.insert(key, Arc::clone(&cache));
        Ok(cache)
    }

    /// Resolvent solves performed by all cache misses so far.
    pub fn unique_resolvent_solves(&self) -> usize {
        self.solves.load(Ordering::Relaxed)
    }

    /// Solves spent on caches of the given kind for vector `x`.
    pub fn solves_for(&self, kind: CacheKind, x: &GridFunction) -> usize {
        self.per_vector.lock().unwrap().get(&(kind, x.fingerprint())).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.caches.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_cache(
    c: &HyperbolicContour,
    g: &QuadratureGrid,
    op: &dyn SectorialOperator,
    beta: f64,
    x: &GridFunction,
) -> Result<ResolventCache, PropagatorError> {
    ResolventCache::build(CacheKind::Corrected, c, g, op, beta, x)
}

pub fn build_cache2(
    c: &HyperbolicContour,
    g: &QuadratureGrid,
    op: &dyn SectorialOperator,
    beta: f64,
    u1: &GridFunction,
) -> Result<ResolventCache, PropagatorError> {
    ResolventCache::build(CacheKind::Plain, c, g, op, beta, u1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorResult {
    pub value: GridFunction,
    pub n_ml_evals: usize,
    pub n_resolvent_solves_new: usize,
}

fn check_time(t: f64) -> Result<(), PropagatorError> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(PropagatorError::InvalidTime(t))
    }
}

fn check_cache(cache: &ResolventCache, kind: CacheKind, op: &OrderPair) -> Result<(), PropagatorError> {
    if cache.kind != kind {
        return Err(PropagatorError::CacheMismatch("wrong integrand kind"));
    }
    if cache.beta.to_bits() != op.beta().to_bits() {
        return Err(PropagatorError::CacheMismatch("beta differs"));
    }
    Ok(())
}

/// `t^γ`, with `0^γ = 0` for γ > 0.
fn t_pow(t: f64, gamma: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if gamma == 1.0 {
        t
    } else {
        t.powf(gamma)
    }
}

/// `S̃_α(t)x` from a corrected cache and an evaluator for `E_{γ,1}`.
pub(crate) fn apply_corrected(
    cache: &ResolventCache,
    ml: &MittagLeffler,
    t: f64,
) -> Result<Vec<Complex64>, PropagatorError> {
    let tg = t_pow(t, ml.gamma());
    let coeffs = cache
        .z
        .iter()
        .map(|z| ml.eval(z * tg).map(|v| v.value))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = cache.contract(&coeffs);
    for (o, x) in out.iter_mut().zip(cache.x.values()) {
        *o += x;
    }
    Ok(out)
}

/// `S̃_{α,2}(t)u₁` from a plain cache and an evaluator for `E_{γ,2−γ}`.
pub(crate) fn apply_plain(cache: &ResolventCache, ml: &MittagLeffler, t: f64) -> Result<Vec<Complex64>, PropagatorError> {
    let gamma = ml.gamma();
    let tg = t_pow(t, gamma);
    // t^{1−γ}, with 0⁰ = 1 when γ = 1
    let pre = if gamma == 1.0 { 1.0 } else { t_pow(t, 1.0 - gamma) };
    if pre == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); cache.x.len()]);
    }
    let coeffs = cache
        .z
        .iter()
        .map(|z| ml.eval(z * tg).map(|v| v.value * pre))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cache.contract(&coeffs))
}

/// Evaluator for `E_{γ,1}`, γ = α/β.
pub fn ml_first(op: &OrderPair) -> MittagLeffler {
    MittagLeffler::extended(op.gamma(), 1.0).expect("γ ∈ (0, 1] with σ = 1 is always valid")
}

/// Evaluator for `E_{γ,2−γ}`.
pub fn ml_second(op: &OrderPair) -> MittagLeffler {
    let g = op.gamma();
    MittagLeffler::extended(g, 2.0 - g).expect("σ = 2 − γ lies in [1, 2)")
}

pub fn propagator_apply(
    cache: &ResolventCache,
    op: &OrderPair,
    t: f64,
    x: &GridFunction,
) -> Result<PropagatorResult, PropagatorError> {
    check_time(t)?;
    check_cache(cache, CacheKind::Corrected, op)?;
    if x != &cache.x {
        return Err(PropagatorError::CacheMismatch("cache was built for a different vector"));
    }
    let values = apply_corrected(cache, &ml_first(op), t)?;
    Ok(PropagatorResult {
        value: GridFunction::from_parts(x.grid().clone(), values),
        n_ml_evals: cache.z.len(),
        n_resolvent_solves_new: 0,
    })
}

/// `S̃_{α,2}(t)u₁`, building the plain cache through `registry`.
pub fn propagator2_apply(
    registry: &ResolventRegistry,
    c: &HyperbolicContour,
    g: &QuadratureGrid,
    a: &dyn SectorialOperator,
    op: &OrderPair,
    t: f64,
    u1: &GridFunction,
) -> Result<PropagatorResult, PropagatorError> {
    check_time(t)?;
    let before = registry.unique_resolvent_solves();
    let cache = registry.get_or_build(CacheKind::Plain, c, g, a, op.beta(), u1)?;
    let values = apply_plain(&cache, &ml_second(op), t)?;
    Ok(PropagatorResult {
        value: GridFunction::from_parts(u1.grid().clone(), values),
        n_ml_evals: cache.z.len(),
        n_resolvent_solves_new: registry.unique_resolvent_solves() - before,
    })
}
