use thiserror::Error;

/// Errors raised by the sequence algebra, the rational-function layer,
/// the transforms and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("sequence is not invertible under the Cauchy product: leading coefficient is zero")]
    NotInvertible,

    #[error("denominator vanishes at s = 0")]
    DenominatorVanishesAtZero,

    #[error("zero denominator polynomial")]
    ZeroDenominator,

    #[error("denominator could not be factored into (1 - r s) factors (relative residual {residual:e})")]
    NoFactorization { residual: f64 },

    #[error("no named inverse: {0}")]
    UnnamedInverse(String),

    #[error("limit of L^{order} f(t) as t -> 0 did not converge (spread {spread:e})")]
    LimitDidNotConverge { order: usize, spread: f64 },

    #[error("finite-difference step {h:e} too small at t = {t}")]
    StepUnderflow { h: f64, t: f64 },

    #[error("right-hand side is incompatible: {0}")]
    IncompatibleRhs(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    /// Stable identifier used in machine-readable output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::TruncationMismatch { .. } => "TruncationMismatch",
            Error::NotInvertible => "NotInvertible",
            Error::DenominatorVanishesAtZero => "DenominatorVanishesAtZero",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::NoFactorization { .. } => "NoFactorization",
            Error::UnnamedInverse(_) => "UnnamedInverse",
            Error::LimitDidNotConverge { .. } => "LimitDidNotConverge",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::IncompatibleRhs(_) => "IncompatibleRHS",
            Error::InvalidProblem(_) => "InvalidProblem",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
