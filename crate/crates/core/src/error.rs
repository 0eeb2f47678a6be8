use thiserror::Error;

use crate::params::Sideband;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A user-facing parameter failed validation; `key` names the offending field.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires the {expected:?} sideband case, got {found:?}")]
    CaseMismatch { expected: Sideband, found: Sideband },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("steady state is not unique: Liouvillian null space has dimension {dimension}")]
    NullSpace { dimension: usize },

    #[error("steady-state residual {residual:.3e} exceeds {tolerance:.1e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error(
        "Fock-cutoff leakage: population {population:.3e} at the top phonon level \
         (t = {time}) exceeds the 1e-3 guard; raise n_max or pass the override flag"
    )]
    Leakage { population: f64, time: f64 },

    #[error(
        "blue-sideband full-Lindblad steady state refused: the gain dissipator piles \
         population at the Fock cutoff (leakage guard; pass --allow-blue-full to override)"
    )]
    BlueGated,

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("state is not a physical density matrix: {0}")]
    NotPhysical(String),

    #[error("no local maxima in spectrum (flat spectrum)")]
    FlatSpectrum,

    #[error("at detuning {delta}: {source}")]
    AtDetuning {
        delta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidParameter { .. } => true,
            Error::AtDetuning { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}
