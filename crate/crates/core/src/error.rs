use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Outcome of one initial-guess attempt inside the amplitude sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AttemptOutcome {
    /// Amplitude `c` of the initial guess `c * t^2 (1 - t)`.
    pub amplitude: f64,
    pub method: &'static str,
    pub outcome: String,
    pub norm: Option<f64>,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("integrand failed at node {at}: {source}")]
    Integrand { at: f64, source: Box<Error> },

    #[error("invalid integration interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },

    #[error("panel count must be positive")]
    PanelCount,

    #[error("grid needs at least {min} nodes, got {n}")]
    GridTooSmall { n: usize, min: usize },

    #[error("grid size must be odd for Simpson compatibility, got {n}")]
    GridEven { n: usize },

    #[error("non-finite grid value {value} at node {index}")]
    GridNonFinite { index: usize, value: f64 },

    #[error("theta = {theta} is outside (0, 1/2)")]
    ThetaRange { theta: f64 },

    #[error("sample count {samples} too small, need at least 4")]
    SamplesTooSmall { samples: usize },

    #[error("g({t}) = {value} is negative; (H2) requires g >= 0 on [0,1]")]
    NegativeWeight { t: f64, value: f64 },

    #[error("mu = {mu} >= 1; the linear representation requires mu < 1")]
    MuOutOfRange { mu: f64 },

    #[error("u({t}) = {value} is below the -1e-12 negativity tolerance")]
    NegativeSolution { t: f64, value: f64 },

    #[error("iteration budget of {max_iter} exhausted (last update norm {update_norm:.3e})")]
    Budget { max_iter: usize, update_norm: f64 },

    #[error("iteration diverged: sup-norm {norm:.3e} exceeds 1e8")]
    Diverged { norm: f64 },

    #[error("singular Jacobian in Newton step")]
    SingularJacobian,

    #[error("line search underflow: damping failed to reduce the residual (|F| = {residual:.3e})")]
    LineSearchFailed { residual: f64 },

    #[error("no positive solution found over {} sweep attempts", attempts.len())]
    NoPositiveSolution { attempts: Vec<AttemptOutcome> },

    #[error("invalid solver configuration: {0}")]
    BadConfig(String),
}

impl Error {
    /// Wrap an integrand failure with the quadrature node where it occurred.
    pub(crate) fn at_node(self, at: f64) -> Error {
        Error::Integrand {
            at,
            source: Box::new(self),
        }
    }
}
