use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    /// The electric field has a DC component, so no periodic vector potential exists.
    #[error("electric field has nonzero period average {mean:e}; cannot form a periodic vector potential")]
    Gauge { mean: f64 },

    #[error("phase integrand has nonzero period mean {mean:e}")]
    InconsistentIntegrand { mean: f64 },

    #[error("staircase refused: {0}")]
    Staircase(String),

    #[error("negative slab width {0}")]
    NegativeWidth(f64),

    #[error("invalid sample count {0}: must be a power of two >= 256")]
    SampleCount(usize),

    /// Matching matrix of a region is numerically singular. Usually means the
    /// channel truncation is too wide for the evanescent depth of that region.
    #[error("matching matrix of region {region} is singular (pivot ratio {ratio:e})")]
    SingularMatching { region: usize, ratio: f64 },

    #[error("transfer block T^-- is singular at interface {interface} (pivot ratio {ratio:e})")]
    SingularTransfer { interface: usize, ratio: f64 },

    /// `1 - S_out^{++} S_in^{--}` is singular: a perfectly trapped mode at this energy.
    #[error("star product singular at step {step} (pivot ratio {ratio:e}); perturb the energy")]
    ResonanceSingular { step: usize, ratio: f64 },

    #[error("incident energy below lead continuum (channel momentum {momentum})")]
    IncidentClosed { momentum: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("truncation did not converge up to n_max = {n_max} (deficit {deficit:e})")]
    Truncation { n_max: usize, deficit: f64 },

    #[error("config error at {pointer}: {message}")]
    Config { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
