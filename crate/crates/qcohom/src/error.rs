use thiserror::Error;

/// Errors raised by constructors and checks across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vectors live on different rings ({0} vs {1})")]
    RingMismatch(String, String),
    #[error("precision {0} is below the supported minimum of 15 digits")]
    PrecisionTooLow(usize),
    #[error("constant table only covers zeta up to {have}, need {need}")]
    ZetaTableTooShort { have: usize, need: usize },
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("imaginary residue {residue:e} exceeds bound {bound:e}")]
    ImaginaryResidue { residue: f64, bound: f64 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("origin is not in the interior of the Newton polytope")]
    OriginNotInterior,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
