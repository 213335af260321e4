use thiserror::Error;

use crate::opcircle::VerblunskySeq;
use crate::opline::RecurrenceLine;

/// Whatever was computed before a recurrence construction broke down.
#[derive(Debug, Clone)]
pub enum Partial {
    Line(RecurrenceLine),
    Circle(VerblunskySeq),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient decay: {0}")]
    InsufficientDecay(String),
    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),
    #[error("grid underresolved: {0}")]
    GridUnderresolved(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient moments: {0}")]
    InsufficientMoments(String),
    #[error("measure degenerate or underresolved: {0}")]
    MeasureDegenerate(String),
    #[error("precision exhausted at degree {degree}")]
    PrecisionExhausted { degree: usize, partial: Box<Partial> },
    #[error("dynamic range exceeded: {0}")]
    DynamicRange(String),
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("truncation window exceeded: {0}")]
    TruncationWindow(String),
    #[error("Schur parameter out of disk at step {step}: |f(0)| = {modulus}")]
    SchurParameterOutOfDisk { step: usize, modulus: f64 },
    #[error("use boundary mode: {0}")]
    UseBoundaryMode(String),
    #[error("increase M or precision: {0}")]
    IllConditioned(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InsufficientDecay(_) => "insufficient_decay",
            Error::DegenerateMeasure(_) => "degenerate_measure",
            Error::GridUnderresolved(_) => "grid_underresolved",
            Error::Domain(_) => "domain",
            Error::InsufficientMoments(_) => "insufficient_moments",
            Error::MeasureDegenerate(_) => "measure_degenerate",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::DynamicRange(_) => "dynamic_range",
            Error::StepRejected(_) => "step_rejected",
            Error::TruncationWindow(_) => "truncation_window",
            Error::SchurParameterOutOfDisk { .. } => "schur_out_of_disk",
            Error::UseBoundaryMode(_) => "use_boundary_mode",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// The module that raises this kind of error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InsufficientDecay(_)
            | Error::DegenerateMeasure(_)
            | Error::GridUnderresolved(_)
            | Error::Domain(_)
            | Error::InsufficientMoments(_)
            | Error::MeasureDegenerate(_) => "measures",
            Error::PrecisionExhausted { partial, .. } => match **partial {
                Partial::Line(_) => "opline",
                Partial::Circle(_) => "opcircle",
            },
            Error::DynamicRange(_) | Error::StepRejected(_) => "opline",
            Error::TruncationWindow(_) | Error::SchurParameterOutOfDisk { .. } => "opcircle",
            Error::UseBoundaryMode(_) | Error::IllConditioned(_) => "rhp",
            Error::InvalidInput(_) | Error::Parse(_) | Error::Io(_) => "cli",
        }
    }

    /// True for configuration problems as opposed to numerical failures.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Parse(_) | Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
