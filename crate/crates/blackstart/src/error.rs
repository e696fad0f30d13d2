use thiserror::Error;

/// Errors produced by parameter validation, simulation, and metric extraction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Residual flux magnitude outside the plausibility bound of 1.5x rated.
    #[error("unphysical residual flux: |lambda| = {magnitude_wb:.4} Wb exceeds {limit_wb:.4} Wb")]
    UnphysicalResidual { magnitude_wb: f64, limit_wb: f64 },

    /// Trajectory shorter than one fundamental period.
    #[error("insufficient span: trajectory covers {span_s:.6} s, need {required_s:.6} s")]
    InsufficientSpan { span_s: f64, required_s: f64 },

    /// A state variable became non-finite during integration.
    #[error("numerical divergence at t = {t_s:.9} s")]
    NumericalDivergence { t_s: f64 },

    /// A demagnetization phase exceeded its timeout.
    #[error("demag failed to converge: phase {phase} still active after {elapsed_s:.3} s")]
    DemagTimeout { phase: &'static str, elapsed_s: f64 },
}
