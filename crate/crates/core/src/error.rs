use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("step size {dt} exceeds the limit {limit} ({reason})")]
    StepSize { dt: f64, limit: f64, reason: &'static str },

    #[error("state became non-finite at t = {time}")]
    BlowUp { time: f64 },

    #[error("node {node} has norm {norm}, outside the unit-sphere tolerance {tolerance}")]
    ConstraintViolation { node: usize, norm: f64, tolerance: f64 },

    #[error("repeated eigenvalue (c^2 = 4k); the modal closed form does not apply")]
    RepeatedEigenvalue,

    #[error("state ({y}, {ydot}) is not an equilibrium")]
    NotEquilibrium { y: f64, ydot: f64 },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("trajectory covers {available} time units, need {required}")]
    InsufficientTrajectory { available: f64, required: f64 },

    #[error("degenerate input-output curve: {0}")]
    DegenerateCurve(&'static str),

    #[error("at omega = {omega}: {source}")]
    AtFrequency {
        omega: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_frequency(self, omega: f64) -> Self {
        Error::AtFrequency { omega, source: Box::new(self) }
    }
}
