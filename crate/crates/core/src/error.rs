use rug::Rational;
use thiserror::Error;

/// Failures raised by the exact and numeric engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lower Pochhammer parameter reached zero inside the requested range.
    #[error("lower parameter #{index} = {value} gives a zero Pochhammer symbol at step {step}")]
    ZeroLowerPochhammer {
        index: usize,
        value: Rational,
        step: u32,
    },

    #[error("lambda must be nonzero for the linear-factor formulae")]
    DegenerateLambda,

    #[error("parameter domain violated: {0}")]
    Domain(String),

    #[error("gamma pole at argument {0}")]
    Pole(String),

    #[error("series at unity does not converge with the required margin: {0}")]
    NonConvergent(String),

    #[error("acceleration did not reach tolerance within {max_terms} terms (estimate {estimate})")]
    TailBoundExceeded { max_terms: usize, estimate: String },

    #[error("quadrature rule construction failed: {0}")]
    RuleConstruction(String),
}

impl Error {
    /// True for failures of the floating-point machinery (as opposed to bad input).
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::TailBoundExceeded { .. } | Error::RuleConstruction(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
