//! Hyperbolic integration contour `z(ξ) = a0 − a_I cosh ξ + i b_I sinh ξ` and the
//! sinc step size.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Shift of the contour vertex, `π/6`.
pub const DEFAULT_A0: f64 = PI / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderConstraint {
    AlphaRange,
    BetaRange,
    AlphaExceedsBeta,
    SectorAngle,
}

impl std::fmt::Display for OrderConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OrderConstraint::AlphaRange => "alpha must lie in (0, 2)",
            OrderConstraint::BetaRange => "beta must lie in (0, 2)",
            OrderConstraint::AlphaExceedsBeta => "alpha must not exceed beta",
            OrderConstraint::SectorAngle => "alpha must not exceed 2(1 - varphi_s/pi)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("order constraint violated: {0}")]
    OrderConstraintViolated(OrderConstraint),
    #[error("invalid spectral parameters: {0}")]
    InvalidSpectralParams(&'static str),
    #[error("empty admissible region: {0}")]
    EmptyAdmissibleRegion(&'static str),
    #[error("invalid angular size {0}")]
    InvalidAngularSize(f64),
    #[error("step size inputs must be positive")]
    NonPositiveInput,
}

/// Fractional order α of the problem and the subordination order β ≥ α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderPair {
    alpha: f64,
    beta: f64,
}

impl OrderPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ContourError> {
        use OrderConstraint::*;
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(ContourError::OrderConstraintViolated(AlphaRange));
        }
        if !(beta > 0.0 && beta < 2.0) {
            return Err(ContourError::OrderConstraintViolated(BetaRange));
        }
        if alpha > beta {
            return Err(ContourError::OrderConstraintViolated(AlphaExceedsBeta));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `γ = α/β ∈ (0, 1]`.
    pub fn gamma(&self) -> f64 {
        if self.alpha == self.beta {
            1.0
        } else {
            self.alpha / self.beta
        }
    }
}

/// Sector `Σ(ρ_s, φ_s)` containing the spectrum of A, and the resolvent constant M.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub rho_s: f64,
    pub varphi_s: f64,
    pub m: f64,
}

impl SpectralParams {
    pub fn new(rho_s: f64, varphi_s: f64, m: f64) -> Result<Self, ContourError> {
        if !(rho_s > 0.0 && rho_s.is_finite()) {
            return Err(ContourError::InvalidSpectralParams("rho_s must be positive"));
        }
        if !(0.0..FRAC_PI_2).contains(&varphi_s) {
            return Err(ContourError::InvalidSpectralParams("varphi_s must lie in [0, pi/2)"));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(ContourError::InvalidSpectralParams("M must be positive"));
        }
        Ok(Self { rho_s, varphi_s, m })
    }

    /// Sector of half-angle `varphi_s` with unit vertex and constant.
    pub fn with_angle(varphi_s: f64) -> Result<Self, ContourError> {
        Self::new(1.0, varphi_s, 1.0)
    }
}

pub fn validate_orders(op: &OrderPair, sp: &SpectralParams) -> Result<(), ContourError> {
    OrderPair::new(op.alpha, op.beta)?;
    if op.alpha > 2.0 * (1.0 - sp.varphi_s / PI) {
        return Err(ContourError::OrderConstraintViolated(OrderConstraint::SectorAngle));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourAngles {
    pub phi_s_c: f64,
    pub phi_c: f64,
    pub omega_m: f64,
    pub omega_star: f64,
    pub omega_c: f64,
}

/// Angular sizes of the contour. Only `ω_m` is required to be positive here;
/// the choice actually used is checked by [`build_contour`].
pub fn contour_angles(op: &OrderPair, sp: &SpectralParams) -> Result<ContourAngles, ContourError> {
    validate_orders(op, sp)?;
    let beta = op.beta;
    let phi_s_c = PI.min((PI - sp.varphi_s) / beta);
    if phi_s_c <= FRAC_PI_2 {
        return Err(ContourError::EmptyAdmissibleRegion("contour sector angle does not exceed pi/2"));
    }
    let phi_c = PI * op.gamma() / 2.0;
    let omega_m = phi_s_c - phi_c;
    let omega_star = phi_s_c - FRAC_PI_2 * 1f64.max(1.0 / beta);
    let omega_c = phi_s_c - (PI * op.gamma() / 2.0).max(PI - (PI - sp.varphi_s) / beta);
    if omega_m <= 0.0 {
        return Err(ContourError::EmptyAdmissibleRegion("omega_m is not positive"));
    }
    Ok(ContourAngles { phi_s_c, phi_c, omega_m, omega_star, omega_c })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaChoice {
    /// `ω_m`, the largest admissible angle.
    Max,
    /// `ω_⋆`, independent of α so one contour serves every α ≤ β.
    Star,
    /// `ω_c`, which keeps the Mittag-Leffler arguments off the branch cut.
    Opc,
    Custom(f64),
}

impl OmegaChoice {
    pub fn select(&self, a: &ContourAngles) -> f64 {
        match *self {
            OmegaChoice::Max => a.omega_m,
            OmegaChoice::Star => a.omega_star,
            OmegaChoice::Opc => a.omega_c,
            OmegaChoice::Custom(w) => w,
        }
    }
}

impl std::str::FromStr for OmegaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(OmegaChoice::Max),
            "star" => Ok(OmegaChoice::Star),
            "opc" => Ok(OmegaChoice::Opc),
            other => other
                .parse::<f64>()
                .map(OmegaChoice::Custom)
                .map_err(|_| format!("omega must be max, star, opc or a number, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicContour {
    pub a0: f64,
    pub a_i: f64,
    pub b_i: f64,
    pub omega: f64,
    /// Strip half-width `ω/2`.
    pub d: f64,
    /// Growth exponent `(a0 − a0 cos φ_c / cos φ_s_c)^{β/α}`.
    pub a_m: f64,
    pub phi_s_c: f64,
}

pub fn build_contour(
    op: &OrderPair,
    sp: &SpectralParams,
    choice: OmegaChoice,
    a0: f64,
) -> Result<HyperbolicContour, ContourError> {
    let angles = contour_angles(op, sp)?;
    let omega = choice.select(&angles);
    if !(omega > 0.0 && omega <= angles.omega_m) {
        return Err(ContourError::InvalidAngularSize(omega));
    }
    if !(a0 > 0.0 && a0.is_finite()) {
        return Err(ContourError::NonPositiveInput);
    }
    let phi = angles.phi_s_c;
    let cos_phi = phi.cos();
    let a_i = a0 * (omega / 2.0 - phi).cos() / cos_phi;
    let b_i = a0 * (omega / 2.0 - phi).sin() / cos_phi;
    // aI > 0 needs ω < 2φ_s_c − π, which ω_m can exceed when γ < 1
    if !(a_i > 0.0 && b_i > 0.0) {
        return Err(ContourError::InvalidAngularSize(omega));
    }
    let a_m = (a0 - a0 * angles.phi_c.cos() / cos_phi).powf(op.beta / op.alpha);
    Ok(HyperbolicContour { a0, a_i, b_i, omega, d: omega / 2.0, a_m, phi_s_c: phi })
}

impl HyperbolicContour {
    /// `(z(ξ), z′(ξ))`.
    pub fn point(&self, xi: f64) -> (Complex64, Complex64) {
        contour_point(self, xi)
    }

    /// Coefficients `(a(ν), b(ν))` of the shifted curve `z(ξ + iν)`.
    pub fn shifted_coefficients(&self, nu: f64) -> (f64, f64) {
        let (s, c) = nu.sin_cos();
        (self.a_i * c + self.b_i * s, self.b_i * c - self.a_i * s)
    }
}

pub fn contour_point(c: &HyperbolicContour, xi: f64) -> (Complex64, Complex64) {
    let (sh, ch) = (xi.sinh(), xi.cosh());
    let z = Complex64::new(c.a0 - c.a_i * ch, c.b_i * sh);
    let dz = Complex64::new(-c.a_i * sh, c.b_i * ch);
    (z, dz)
}

/// Sinc step `h = √(πω / (κβN))`.
pub fn step_size(omega: f64, kappa: f64, beta: f64, n: usize) -> Result<f64, ContourError> {
    if !(omega > 0.0 && kappa > 0.0 && beta > 0.0 && n > 0) {
        return Err(ContourError::NonPositiveInput);
    }
    Ok((PI * omega / (kappa * beta * n as f64)).sqrt())
}
