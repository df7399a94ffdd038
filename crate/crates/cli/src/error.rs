use fracprop::{ContourError, InverseError, MlError, OperatorError, PropagatorError, SolutionError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<ContourError> for CliError {
    fn from(e: ContourError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<MlError> for CliError {
    fn from(e: MlError) -> Self {
        match e {
            MlError::InvalidOrder { .. } => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::SingularShift(_) | OperatorError::NonFinite => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<PropagatorError> for CliError {
    fn from(e: PropagatorError) -> Self {
        match e {
            PropagatorError::MlEvalFailure(m) => m.into(),
            PropagatorError::Operator(o) => o.into(),
            PropagatorError::InvalidTime(_) | PropagatorError::InvalidGrid { .. } => CliError::Config(e.to_string()),
            PropagatorError::CacheMismatch(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SolutionError> for CliError {
    fn from(e: SolutionError) -> Self {
        match e {
            SolutionError::Propagator(p) => p.into(),
            SolutionError::Operator(o) => o.into(),
            SolutionError::Contour(c) => c.into(),
            SolutionError::Ml(m) => m.into(),
            SolutionError::U1NotAllowed(_) | SolutionError::InvalidParams(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<InverseError> for CliError {
    fn from(e: InverseError) -> Self {
        match e {
            InverseError::Solution(s) => s.into(),
            InverseError::BoundsViolation { .. } | InverseError::InvalidMeasurements(_) => {
                CliError::Config(e.to_string())
            }
            InverseError::NoConvergence(_) => CliError::Numerical(e.to_string()),
        }
    }
}
