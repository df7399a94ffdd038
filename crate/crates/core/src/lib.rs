//! Sinc quadrature for the propagators of Caputo fractional evolution equations
//! `∂_t^α u + A u = f`, with Mittag-Leffler subordination on a hyperbolic contour.

pub mod contour;
pub mod mlf;
pub mod operators;
pub mod propagator;
pub mod quad;
pub mod solution;
pub mod inverse;

pub use contour::{
    build_contour, contour_angles, contour_point, step_size, validate_orders, ContourAngles, ContourError,
    HyperbolicContour, OmegaChoice, OrderPair, SpectralParams, DEFAULT_A0,
};
pub use mlf::{ml_eval, ml_eval_batch, ml_real, BatchError, MittagLeffler, MlError, MlParams, MlValue};
pub use operators::{
    diag_operator, fd_laplacian, fractional_power_apply, DiagonalOperator, FdLaplacian, Grid, GridFunction,
    OperatorError, SectorialOperator,
};
pub use propagator::{
    build_cache, build_cache2, propagator2_apply, propagator_apply, CacheKind, PropagatorError, PropagatorResult,
    QuadratureGrid, ResolventCache, ResolventRegistry,
};
pub use solution::{
    ceil_counter, eigenmode_exact, homogeneous_solution, inhomogeneous_solution, mild_solution, rl_quadrature, rl_step, HomogeneousScheme,
    InhomogeneousCounts, InhomogeneousScheme, MildSolution, RlRule, SchemeParams, SolutionError, SourceTerm,
};
pub use inverse::{fit_alpha, FitReport, ForwardModel, InverseError, Measurements, ModelMode, Probe, TraceRow};
