//! Error type shared across the crate.

use std::path::PathBuf;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for detector evaluation, attack analysis, simulation
/// and dataset handling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A quantity that must be a probability left `[0, 1]`.
    #[error("`{name}` must lie in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    /// A parameter violated its domain (negative pulse energy, zero trial
    /// count, non-integer photon number, ...).
    #[error("parameter `{name}` is outside its domain: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// Photon-number statistics were requested from a model that only
    /// carries measured coherent-state response data.
    #[error("{model} has no photon-number response law; only coherent-state queries are supported")]
    NoFockLaw { model: &'static str },

    /// A query fell outside the tabulated range. Measured response curves
    /// are never extrapolated.
    #[error("{axis} = {value} is outside the tabulated range [{min}, {max}]; extrapolation is refused")]
    OutOfRange {
        axis: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Efficiency extraction from a saturated point (p = 1) is impossible:
    /// the inferred efficiency diverges.
    #[error("detection probability is saturated (p = 1) at mu = {mu}; efficiency is undefined")]
    Saturated { mu: f64 },

    /// The inferred single-photon efficiency exceeded one, which no
    /// physical detector reaches.
    #[error("inferred efficiency {eta} > 1 at mu = {mu}; the data point is unphysical")]
    SuperunityEfficiency { eta: f64, mu: f64 },

    /// Every click probability is zero, so rates conditioned on a
    /// detection are undefined.
    #[error("no detection events are possible; conditional rates are undefined")]
    NoDetections,

    /// Transmittance of exactly zero maps to infinite loss.
    #[error("transmittance is zero; channel loss is infinite")]
    ZeroTransmittance,

    /// A time-resolved dataset was queried without a timing coordinate.
    #[error("detector response is time-resolved; a trigger arrival time is required")]
    TimeRequired,

    /// The reference point of a superlinearity ratio measured zero
    /// response, leaving no linear baseline to compare against.
    #[error("reference response at mu = {mu_ref} is zero; superlinearity ratio is undefined")]
    ZeroReference { mu_ref: f64 },

    /// An optimization or table-writing call received nothing to work on.
    #[error("{what} is empty")]
    Empty { what: &'static str },

    /// A data file failed to parse; `line` is 1-based.
    #[error("{path}:{line}: {reason}")]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    /// A data file parsed but its overall shape is unusable.
    #[error("{path}: {reason}")]
    InvalidDataset { path: PathBuf, reason: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for [`Error::InvalidParameter`].
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Validate that `value` is a probability, passing it through on success.
pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}
