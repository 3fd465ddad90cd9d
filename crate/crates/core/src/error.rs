use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),
    #[error("argument {value} outside table range 1..={limit}")]
    Range { value: u64, limit: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series too short: {0}")]
    Length(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("ill-conditioned: {0}")]
    Conditioning(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("integration failed at t = {t}: {reason} (last {} steps kept)", trace.len())]
    Integration {
        t: f64,
        reason: String,
        /// Most recent accepted `(t, step size)` pairs.
        trace: Vec<(f64, f64)>,
    },
}

impl Error {
    /// True for failures of the numerics themselves rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singularity(_)
                | Error::Conditioning(_)
                | Error::Overflow(_)
                | Error::Integration { .. }
        )
    }
}
