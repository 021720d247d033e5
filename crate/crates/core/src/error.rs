use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or argument lies outside its legal interval.
    #[error("{name} = {value} is outside {interval}")]
    Domain {
        name: &'static str,
        value: f64,
        interval: &'static str,
    },

    /// Time index outside `1..=len`.
    #[error("time index {t} is outside 1..={len}")]
    Index { t: usize, len: usize },

    /// An observation is unusable (0-based index).
    #[error("observation {index}: {reason}")]
    Data { index: usize, reason: &'static str },

    #[error("length mismatch: {what} ({left} vs {right})")]
    Length {
        what: &'static str,
        left: usize,
        right: usize,
    },

    /// Simulated log-variance left the guard band.
    #[error("explosive path: |log h| = {value} at step {step}")]
    Explosive { step: usize, value: f64 },

    /// Moment bound requested for a matrix with spectral radius >= 1.
    #[error("spectral radius {rho} >= 1, the moment bound diverges")]
    Unstable { rho: f64 },

    #[error("{0}")]
    Precondition(&'static str),
}
